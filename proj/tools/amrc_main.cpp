#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "amrc/dataset_io.hpp"
#include "amrc/harness.hpp"
#include "amrc/metrics.hpp"
#include "amrc/synthetic.hpp"

namespace fs = std::filesystem;
using namespace amrc;

namespace {

CompressorConfig parse_config(const std::string& algorithm, double eb, const std::string& eb_mode,
                              const std::string& encoding, const std::string& arrangement,
                              int sz_block, int64_t chunk_elems, const std::string& codec) {
    CompressorConfig cfg;
    if (algorithm == "lr") cfg.algorithm = Algorithm::LR;
    else if (algorithm == "interp") cfg.algorithm = Algorithm::Interp;
    else if (algorithm == "baseline1d") cfg.algorithm = Algorithm::Baseline1D;
    else throw CLI::ValidationError("--algorithm", "must be lr|interp|baseline1d");

    cfg.eb_value = eb;
    if (eb_mode == "abs") cfg.eb_mode = EbMode::Absolute;
    else if (eb_mode == "rel") cfg.eb_mode = EbMode::RangeRelative;
    else throw CLI::ValidationError("--eb-mode", "must be abs|rel");

    if (encoding == "sle") cfg.encoding = Encoding::SLE;
    else if (encoding == "per-block") cfg.encoding = Encoding::PerBlock;
    else if (encoding == "lm") cfg.encoding = Encoding::LinearMerge;
    else throw CLI::ValidationError("--encoding", "must be sle|per-block|lm");

    if (arrangement == "auto") cfg.arrangement = ArrangementChoice::Auto;
    else if (arrangement == "linear") cfg.arrangement = ArrangementChoice::Linear;
    else if (arrangement == "cluster") cfg.arrangement = ArrangementChoice::Cluster;
    else throw CLI::ValidationError("--arrangement", "must be auto|linear|cluster");

    if (codec == "store") cfg.codec = Codec::Store;
    else if (codec == "lz") cfg.codec = Codec::Lz;
    else throw CLI::ValidationError("--codec", "must be store|lz");

    cfg.sz_block_size = sz_block;
    cfg.chunk_elems = chunk_elems;
    return cfg;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(std::stod(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AMR-aware error-bounded lossy compression toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic AMR dataset");
    std::string gen_preset = "smooth", gen_out;
    std::vector<int64_t> gen_dims{64, 64, 64};
    int gen_levels = 2, gen_unit = 8, gen_fields = 2;
    double gen_threshold = 0.98;
    uint64_t gen_seed = 1;
    gen->add_option("--preset", gen_preset, "smooth|rough");
    gen->add_option("--dims", gen_dims, "level-0 grid size")->expected(3);
    gen->add_option("--levels", gen_levels, "1..3");
    gen->add_option("--unit-block", gen_unit, "unit block size U (power of two)");
    gen->add_option("--refine-threshold", gen_threshold, "quantile of block maxima");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--fields", gen_fields, "number of fields");
    gen->add_option("--out", gen_out, "output dataset directory")->required();

    // compress
    auto* comp = app.add_subcommand("compress", "Compress a dataset into a container");
    std::string c_in, c_out, c_algorithm = "lr", c_eb_mode = "rel", c_encoding = "sle";
    std::string c_arrangement = "auto", c_codec = "lz";
    double c_eb = 1e-3, c_tstart = 0.03;
    int c_ranks = 1, c_szblock = 0;
    int64_t c_chunk = 1024;
    bool c_no_selfcheck = false;
    comp->add_option("input", c_in, "dataset directory")->required();
    comp->add_option("--out", c_out, "container file")->required();
    comp->add_option("--algorithm", c_algorithm, "lr|interp|baseline1d");
    comp->add_option("--eb", c_eb, "error bound value");
    comp->add_option("--eb-mode", c_eb_mode, "abs|rel");
    comp->add_option("--encoding", c_encoding, "sle|per-block|lm");
    comp->add_option("--arrangement", c_arrangement, "auto|linear|cluster");
    comp->add_option("--codec", c_codec, "store|lz");
    comp->add_option("--sz-block", c_szblock, "block size override (0 = adaptive)");
    comp->add_option("--ranks", c_ranks, "simulated rank count");
    comp->add_option("--chunk-elems", c_chunk, "baseline chunk size in elements");
    comp->add_option("--t-start", c_tstart, "modeled compressor startup seconds");
    comp->add_flag("--no-selfcheck", c_no_selfcheck, "skip the decompress-and-verify pass");

    // decompress
    auto* dec = app.add_subcommand("decompress", "Decompress a container into a dataset directory");
    std::string d_in, d_out;
    dec->add_option("input", d_in, "container file")->required();
    dec->add_option("--out", d_out, "output dataset directory")->required();

    // metrics
    auto* met = app.add_subcommand("metrics", "Quality report for a container against its original");
    std::string m_orig, m_container, m_csv;
    met->add_option("original", m_orig, "original dataset directory")->required();
    met->add_option("container", m_container, "container file")->required();
    met->add_option("--csv", m_csv, "also write the report as CSV");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Rate-distortion sweep to CSV");
    std::string s_in, s_out, s_algorithms = "lr,interp", s_arrangements = "auto";
    std::string s_ebs = "2e-2,1e-2,3e-3,1e-3,3e-4", s_eb_mode = "rel", s_encoding = "sle";
    int s_ranks = 1;
    sw->add_option("input", s_in, "dataset directory")->required();
    sw->add_option("--out", s_out, "CSV output path")->required();
    sw->add_option("--algorithms", s_algorithms, "comma list of lr|interp|baseline1d");
    sw->add_option("--arrangements", s_arrangements, "comma list of auto|linear|cluster");
    sw->add_option("--ebs", s_ebs, "comma list of error bounds");
    sw->add_option("--eb-mode", s_eb_mode, "abs|rel");
    sw->add_option("--encoding", s_encoding, "sle|per-block|lm");
    sw->add_option("--ranks", s_ranks);

    // errmap
    auto* em = app.add_subcommand("errmap", "Export an absolute-error slice");
    std::string e_orig, e_container, e_field, e_out;
    int e_level = 0, e_axis = 2;
    int64_t e_index = 0;
    em->add_option("original", e_orig, "original dataset directory")->required();
    em->add_option("container", e_container, "container file")->required();
    em->add_option("--level", e_level)->required();
    em->add_option("--field", e_field)->required();
    em->add_option("--axis", e_axis, "0=x 1=y 2=z");
    em->add_option("--index", e_index, "slice index")->required();
    em->add_option("--out", e_out, "output prefix (.f64 + .json)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            SyntheticSpec spec;
            spec.preset = gen_preset == "rough" ? Preset::Rough : Preset::Smooth;
            if (gen_preset != "rough" && gen_preset != "smooth") {
                std::cerr << "error: --preset must be smooth|rough\n";
                return 1;
            }
            spec.dims = {gen_dims[0], gen_dims[1], gen_dims[2]};
            spec.levels = gen_levels;
            spec.unit_block_size = gen_unit;
            spec.refine_threshold = gen_threshold;
            spec.seed = gen_seed;
            spec.field_count = gen_fields;
            AmrDataset ds = generate_synthetic(spec);
            export_dataset(ds, gen_out);
            auto masks = remove_redundancy(ds);
            std::cout << "wrote " << gen_out << ": levels=" << ds.levels.size();
            for (size_t l = 0; l < ds.levels.size(); ++l) {
                std::cout << " L" << l << "(boxes=" << ds.levels[l].boxes.size()
                          << ", density=" << density(ds, masks, static_cast<int>(l)) << ")";
            }
            std::cout << "\n";
        } else if (comp->parsed()) {
            CompressorConfig cfg = parse_config(c_algorithm, c_eb, c_eb_mode, c_encoding,
                                                c_arrangement, c_szblock, c_chunk, c_codec);
            AmrDataset ds = import_dataset(c_in);
            cfg.unit_block_size = ds.unit_block_size;
            WriteReport rep = run_simulated_write(ds, cfg, c_ranks, c_tstart, c_out);
            std::cout << "wrote " << c_out << ": file_bytes=" << rep.file_bytes
                      << " payload_bytes=" << rep.payload_bytes << " invocations=" << rep.invocations
                      << " modeled_startup_s=" << rep.modeled_startup_seconds << "\n";
            if (!c_no_selfcheck) {
                verify_container(c_out, ds);
                std::cout << "self-check passed: all points within bound\n";
            }
        } else if (dec->parsed()) {
            AmrDataset ds = container_read(d_in);
            export_dataset(ds, d_out);
            std::cout << "wrote " << d_out << "\n";
        } else if (met->parsed()) {
            AmrDataset orig = import_dataset(m_orig);
            QualityReport rep = evaluate_container(m_container, orig);
            std::string csv = rep.to_csv();
            std::cout << csv;
            if (!m_csv.empty()) {
                std::ofstream f(m_csv);
                f << csv;
            }
        } else if (sw->parsed()) {
            AmrDataset ds = import_dataset(s_in);
            std::vector<Algorithm> algos;
            for (const auto& name : {std::string("lr"), std::string("interp"),
                                     std::string("baseline1d")}) {
                if (s_algorithms.find(name) != std::string::npos) {
                    algos.push_back(name == "lr" ? Algorithm::LR
                                                 : name == "interp" ? Algorithm::Interp
                                                                    : Algorithm::Baseline1D);
                }
            }
            std::vector<ArrangementChoice> arrs;
            if (s_arrangements.find("auto") != std::string::npos) arrs.push_back(ArrangementChoice::Auto);
            if (s_arrangements.find("linear") != std::string::npos) arrs.push_back(ArrangementChoice::Linear);
            if (s_arrangements.find("cluster") != std::string::npos) arrs.push_back(ArrangementChoice::Cluster);
            auto ebs = parse_doubles(s_ebs);
            CompressorConfig base = parse_config("lr", 1e-3, s_eb_mode, s_encoding, "auto", 0, 1024, "lz");
            base.unit_block_size = ds.unit_block_size;
            auto rows = sweep(ds, algos, ebs, arrs, base, s_ranks,
                              fs::path(s_out).parent_path() / ".sweep_work");
            std::ofstream f(s_out);
            f << sweep_csv_header();
            for (const auto& r : rows) f << sweep_row_csv(r);
            std::cout << "wrote " << s_out << " (" << rows.size() << " rows)\n";
        } else if (em->parsed()) {
            AmrDataset orig = import_dataset(e_orig);
            AmrDataset dec_ds = container_read(e_container);
            ErrorMap map = error_map(orig, dec_ds, e_level, e_field, e_axis, e_index);
            save_error_map(map, e_out);
            std::cout << "wrote " << e_out << ".f64 (" << map.width << "x" << map.height << ")\n";
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const BoundViolation& e) {
        std::cerr << "bound violation: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
