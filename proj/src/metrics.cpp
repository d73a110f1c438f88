#include "amrc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "amrc/harness.hpp"

namespace amrc {

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* algo_name(Algorithm a) {
    switch (a) {
        case Algorithm::LR: return "lr";
        case Algorithm::Interp: return "interp";
        case Algorithm::Baseline1D: return "baseline1d";
    }
    return "?";
}

const char* arr_name(ArrangementChoice a) {
    switch (a) {
        case ArrangementChoice::Auto: return "auto";
        case ArrangementChoice::Linear: return "linear";
        case ArrangementChoice::Cluster: return "cluster";
    }
    return "?";
}

const char* enc_name(Encoding e) {
    switch (e) {
        case Encoding::SLE: return "sle";
        case Encoding::PerBlock: return "per-block";
        case Encoding::LinearMerge: return "lm";
    }
    return "?";
}

}  // namespace

double psnr_with_range(double range, std::span<const double> original,
                       std::span<const double> reconstructed) {
    if (original.size() != reconstructed.size() || original.empty()) {
        throw DataError("psnr: arrays must be nonempty and of equal length");
    }
    double sse = 0;
    for (size_t i = 0; i < original.size(); ++i) {
        double e = original[i] - reconstructed[i];
        sse += e * e;
    }
    if (sse == 0) return std::numeric_limits<double>::infinity();
    if (range == 0) return -std::numeric_limits<double>::infinity();
    double n = static_cast<double>(original.size());
    return 20.0 * std::log10(range) - 10.0 * std::log10(sse / n);
}

double psnr(std::span<const double> original, std::span<const double> reconstructed) {
    if (original.empty()) throw DataError("psnr: arrays must be nonempty and of equal length");
    auto [lo, hi] = std::minmax_element(original.begin(), original.end());
    return psnr_with_range(*hi - *lo, original, reconstructed);
}

std::vector<double> kept_values(const AmrDataset& ds, const std::vector<BlockMask>& masks,
                                int level, const std::string& field) {
    const int U = ds.unit_block_size;
    const AmrLevel& lvl = ds.levels.at(static_cast<size_t>(level));
    std::vector<double> out;
    for (const BlockRef& r : kept_block_refs(ds, masks, level)) {
        const AmrBox& box = lvl.boxes[static_cast<size_t>(r.box)];
        const auto& arr = lvl.box_field(field, static_cast<size_t>(r.box));
        Int3 sz = box.size();
        Int3 nb = block_grid(box, U);
        Int3 bc{r.block % nb.x, (r.block / nb.x) % nb.y, r.block / (nb.x * nb.y)};
        for (int64_t z = 0; z < U; ++z)
            for (int64_t y = 0; y < U; ++y)
                for (int64_t x = 0; x < U; ++x) {
                    out.push_back(arr[linear_index({bc.x * U + x, bc.y * U + y, bc.z * U + z}, sz)]);
                }
    }
    return out;
}

double density(const AmrDataset& ds, const std::vector<BlockMask>& masks, int level) {
    const int U = ds.unit_block_size;
    const int64_t bvol = int64_t{U} * U * U;
    int64_t kept = masks.at(static_cast<size_t>(level)).kept_count() * bvol;
    return static_cast<double>(kept) / static_cast<double>(ds.domain_at(level).volume());
}

QualityReport evaluate_quality(const AmrDataset& original, const AmrDataset& decompressed,
                               const std::vector<BlockMask>& masks,
                               const std::vector<ChunkRecord>& records, uint64_t file_bytes) {
    QualityReport rep;
    rep.file_bytes = file_bytes;

    std::vector<std::vector<uint64_t>> payload(original.levels.size(),
                                               std::vector<uint64_t>(original.field_names.size(), 0));
    for (const ChunkRecord& rec : records) payload[rec.level][rec.field] += rec.compressed_len;

    double psnr_sum = 0;
    for (size_t l = 0; l < original.levels.size(); ++l) {
        for (size_t f = 0; f < original.field_names.size(); ++f) {
            const std::string& field = original.field_names[f];
            auto a = kept_values(original, masks, static_cast<int>(l), field);
            auto b = kept_values(decompressed, masks, static_cast<int>(l), field);
            FieldQuality q;
            q.level = static_cast<int>(l);
            q.field = field;
            q.count = static_cast<int64_t>(a.size());
            if (!a.empty()) {
                auto [lo, hi] = std::minmax_element(a.begin(), a.end());
                q.range = *hi - *lo;
                for (size_t i = 0; i < a.size(); ++i)
                    q.max_abs_err = std::max(q.max_abs_err, std::abs(a[i] - b[i]));
                q.psnr_db = psnr(a, b);
            } else {
                q.psnr_db = std::numeric_limits<double>::infinity();
            }
            q.payload_bytes = payload[l][f];
            if (q.payload_bytes > 0) {
                q.ratio = static_cast<double>(q.count) * sizeof(double) /
                          static_cast<double>(q.payload_bytes);
                q.bitrate = static_cast<double>(q.payload_bytes) * 8.0 / static_cast<double>(q.count);
            }
            rep.kept_points += q.count;
            rep.max_abs_err = std::max(rep.max_abs_err, q.max_abs_err);
            psnr_sum += q.psnr_db;
            rep.rows.push_back(std::move(q));
        }
    }
    rep.mean_psnr_db = rep.rows.empty() ? 0 : psnr_sum / static_cast<double>(rep.rows.size());
    if (file_bytes > 0 && rep.kept_points > 0) {
        rep.total_ratio = static_cast<double>(rep.kept_points) * sizeof(double) /
                          static_cast<double>(file_bytes);
        rep.total_bitrate =
            static_cast<double>(file_bytes) * 8.0 / static_cast<double>(rep.kept_points);
    }
    return rep;
}

QualityReport evaluate_container(const std::filesystem::path& file, const AmrDataset& original) {
    ContainerInfo info = container_info(file);
    AmrDataset dec = container_read(file);
    auto masks = info.cfg.algorithm == Algorithm::Baseline1D ? all_kept_masks(info.skeleton)
                                                             : remove_redundancy(info.skeleton);
    uint64_t file_bytes = std::filesystem::file_size(file);
    return evaluate_quality(original, dec, masks, info.records, file_bytes);
}

std::string QualityReport::to_csv() const {
    std::string s = "level,field,count,range,max_abs_err,psnr_db,payload_bytes,ratio,bitrate_bits\n";
    for (const auto& q : rows) {
        s += std::to_string(q.level) + "," + q.field + "," + std::to_string(q.count) + "," +
             num(q.range) + "," + num(q.max_abs_err) + "," + num(q.psnr_db) + "," +
             std::to_string(q.payload_bytes) + "," + num(q.ratio) + "," + num(q.bitrate) + "\n";
    }
    s += "all,all," + std::to_string(kept_points) + ",," + num(max_abs_err) + "," +
         num(mean_psnr_db) + "," + std::to_string(file_bytes) + "," + num(total_ratio) + "," +
         num(total_bitrate) + "\n";
    return s;
}

std::string sweep_csv_header() {
    return "algorithm,arrangement,encoding,eb_mode,eb,bitrate_bits,psnr_db,ratio\n";
}

std::string sweep_row_csv(const SweepRow& r) {
    return std::string(algo_name(r.algorithm)) + "," + arr_name(r.arrangement) + "," +
           enc_name(r.encoding) + "," + (r.eb_mode == EbMode::Absolute ? "abs" : "rel") + "," +
           num(r.eb) + "," + num(r.bitrate) + "," + num(r.psnr_db) + "," + num(r.ratio) + "\n";
}

std::vector<SweepRow> sweep(const AmrDataset& ds, std::span<const Algorithm> algorithms,
                            std::span<const double> ebs,
                            std::span<const ArrangementChoice> arrangements,
                            const CompressorConfig& base, int ranks,
                            const std::filesystem::path& workdir) {
    std::filesystem::create_directories(workdir);
    std::vector<SweepRow> rows;
    int i = 0;
    for (Algorithm algo : algorithms) {
        for (ArrangementChoice arr : arrangements) {
            for (double eb : ebs) {
                CompressorConfig cfg = base;
                cfg.algorithm = algo;
                cfg.arrangement = arr;
                cfg.eb_value = eb;
                cfg.sz_block_size = 0;
                auto file = workdir / ("sweep_" + std::to_string(i++) + ".amrc");
                run_simulated_write(ds, cfg, ranks, 0.0, file);
                QualityReport q = evaluate_container(file, ds);
                SweepRow row;
                row.algorithm = algo;
                row.arrangement = arr;
                row.encoding = cfg.encoding;
                row.eb_mode = cfg.eb_mode;
                row.eb = eb;
                row.bitrate = q.total_bitrate;
                row.psnr_db = q.mean_psnr_db;
                row.ratio = q.total_ratio;
                rows.push_back(row);
                std::filesystem::remove(file);
                std::filesystem::remove(file.string() + ".report.json");
            }
        }
    }
    return rows;
}

ErrorMap error_map(const AmrDataset& original, const AmrDataset& reconstructed, int level,
                   const std::string& field, int axis, int64_t index) {
    if (axis < 0 || axis > 2) throw DataError("error_map: axis must be 0, 1 or 2");
    AmrBox dom = original.domain_at(level);
    if (index < dom.lo[axis] || index >= dom.hi[axis]) {
        throw DataError("error_map: slice index " + std::to_string(index) + " outside " + dom.str());
    }
    const int u = (axis + 1) % 3, v = (axis + 2) % 3;
    ErrorMap map;
    map.width = dom.hi[u] - dom.lo[u];
    map.height = dom.hi[v] - dom.lo[v];
    map.values.assign(static_cast<size_t>(map.width * map.height), 0.0);

    const AmrLevel& la = original.levels.at(static_cast<size_t>(level));
    for (size_t b = 0; b < la.boxes.size(); ++b) {
        const AmrBox& box = la.boxes[b];
        if (index < box.lo[axis] || index >= box.hi[axis]) continue;
        const auto& arr_a = la.box_field(field, b);
        const auto& arr_b = reconstructed.levels.at(static_cast<size_t>(level)).box_field(field, b);
        Int3 sz = box.size();
        for (int64_t j = box.lo[v]; j < box.hi[v]; ++j)
            for (int64_t i = box.lo[u]; i < box.hi[u]; ++i) {
                Int3 p;
                p[axis] = index - box.lo[axis];
                p[u] = i - box.lo[u];
                p[v] = j - box.lo[v];
                auto k = static_cast<size_t>(linear_index(p, sz));
                map.values[static_cast<size_t>((j - dom.lo[v]) * map.width + (i - dom.lo[u]))] =
                    std::abs(arr_a[k] - arr_b[k]);
            }
    }
    return map;
}

void save_error_map(const ErrorMap& map, const std::filesystem::path& prefix) {
    std::ofstream raw(prefix.string() + ".f64", std::ios::binary);
    raw.write(reinterpret_cast<const char*>(map.values.data()),
              static_cast<std::streamsize>(map.values.size() * sizeof(double)));
    if (!raw) throw DataError("error_map: cannot write " + prefix.string() + ".f64");
    nlohmann::json meta{{"width", map.width}, {"height", map.height}, {"dtype", "f64"}};
    std::ofstream js(prefix.string() + ".json");
    js << meta.dump(2) << "\n";
    if (!js) throw DataError("error_map: cannot write " + prefix.string() + ".json");
}

}  // namespace amrc
