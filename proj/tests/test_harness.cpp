#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "amrc/harness.hpp"
#include "amrc/synthetic.hpp"

using namespace amrc;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const char* name) {
    auto dir = fs::temp_directory_path() / "amrc_harness_tests";
    fs::create_directories(dir);
    return dir / name;
}

// a single-level dataset of `n` equal boxes along z
AmrDataset equal_boxes(int n, int edge = 8) {
    AmrDataset ds;
    ds.unit_block_size = edge;
    ds.domain = {{0, 0, 0}, {edge, edge, static_cast<int64_t>(n) * edge}};
    ds.field_names = {"f0"};
    AmrLevel l0;
    l0.index = 0;
    for (int i = 0; i < n; ++i) {
        l0.boxes.push_back({{0, 0, static_cast<int64_t>(i) * edge},
                            {edge, edge, static_cast<int64_t>(i + 1) * edge}});
    }
    auto& arrays = l0.fields["f0"];
    for (int i = 0; i < n; ++i) {
        std::vector<double> arr(static_cast<size_t>(edge) * edge * edge);
        for (size_t j = 0; j < arr.size(); ++j) {
            arr[j] = std::sin(0.05 * static_cast<double>(j)) + 0.3 * static_cast<double>(i);
        }
        arrays.push_back(std::move(arr));
    }
    ds.levels.push_back(std::move(l0));
    ds.validate();
    return ds;
}

}  // namespace

TEST_CASE("partition: round-robin examples") {
    SUBCASE("R=1 takes everything, imbalance 1") {
        AmrDataset ds = equal_boxes(5);
        RankPlan plan = partition(ds, all_kept_masks(ds), 1);
        for (int r : plan.box_rank[0]) CHECK(r == 0);
        CHECK(plan.imbalance == 1.0);
    }
    SUBCASE("4 equal boxes over 4 ranks: one each") {
        AmrDataset ds = equal_boxes(4);
        RankPlan plan = partition(ds, all_kept_masks(ds), 4);
        CHECK(plan.box_rank[0] == std::vector<int>{0, 1, 2, 3});
        CHECK(plan.imbalance == 1.0);
    }
    SUBCASE("5 equal boxes over 4 ranks: counts (2,1,1,1), imbalance 2") {
        AmrDataset ds = equal_boxes(5);
        RankPlan plan = partition(ds, all_kept_masks(ds), 4);
        CHECK(plan.rank_total(0) == 2 * 512);
        CHECK(plan.rank_total(1) == 512);
        CHECK(plan.imbalance == 2.0);
    }
    SUBCASE("more ranks than boxes: empty ranks allowed, imbalance inf") {
        AmrDataset ds = equal_boxes(2);
        RankPlan plan = partition(ds, all_kept_masks(ds), 4);
        CHECK(plan.rank_total(2) == 0);
        CHECK(std::isinf(plan.imbalance));
    }
}

TEST_CASE("baseline with 128^3 elements per rank and chunk 1024: exactly 2048 invocations per rank") {
    // two ranks, each holding one 128^3 box
    AmrDataset ds;
    ds.unit_block_size = 8;
    ds.domain = {{0, 0, 0}, {128, 128, 256}};
    ds.field_names = {"f0"};
    AmrLevel l0;
    l0.index = 0;
    l0.boxes = {{{0, 0, 0}, {128, 128, 128}}, {{0, 0, 128}, {128, 128, 256}}};
    for (int b = 0; b < 2; ++b) {
        std::vector<double> arr(128 * 128 * 128);
        for (size_t j = 0; j < arr.size(); ++j) arr[j] = std::sin(1e-4 * static_cast<double>(j));
        l0.fields["f0"].push_back(std::move(arr));
    }
    ds.levels.push_back(std::move(l0));
    ds.validate();

    CompressorConfig cfg;
    cfg.algorithm = Algorithm::Baseline1D;
    cfg.eb_value = 1e-3;
    cfg.chunk_elems = 1024;
    WriteReport rep = run_simulated_write(ds, cfg, 2, 0.03, tmp_file("calls.amrc"));
    REQUIRE(rep.rank_invocations.size() == 2);
    CHECK(rep.rank_invocations[0] == 2048);
    CHECK(rep.rank_invocations[1] == 2048);
    CHECK(rep.modeled_startup_seconds == doctest::Approx(2048 * 0.03));
}

TEST_CASE("grouped layout: one invocation per (level, field, rank)") {
    SyntheticSpec s;
    s.dims = {32, 32, 32};
    s.levels = 2;
    s.unit_block_size = 8;
    s.refine_threshold = 0.8;
    s.seed = 5;
    s.field_count = 6;
    AmrDataset ds = generate_synthetic(s);
    REQUIRE(ds.levels.size() == 2);

    CompressorConfig cfg;
    cfg.algorithm = Algorithm::LR;
    cfg.eb_value = 1e-3;
    WriteReport rep = run_simulated_write(ds, cfg, 3, 0.03, tmp_file("grouped.amrc"));
    for (int r = 0; r < 3; ++r) CHECK(rep.rank_invocations[static_cast<size_t>(r)] == 2 * 6);
    CHECK(rep.invocations == 3 * 2 * 6);

    SUBCASE("startup-cost arithmetic matches the documented delta") {
        double saving = (2048.0 - 128.0) * rep.t_start;
        CHECK(saving == doctest::Approx(57.6));
    }
}

TEST_CASE("report bytes reconcile with the file") {
    AmrDataset ds = equal_boxes(6);
    CompressorConfig cfg;
    cfg.algorithm = Algorithm::LR;
    cfg.eb_value = 1e-4;
    auto file = tmp_file("bytes.amrc");
    WriteReport rep = run_simulated_write(ds, cfg, 2, 0.0, file);
    int64_t sum = 0;
    for (int64_t b : rep.rank_compressed_bytes) sum += b;
    CHECK(static_cast<uint64_t>(sum) == rep.payload_bytes);
    CHECK(rep.file_bytes == fs::file_size(file));
    // report written alongside
    CHECK(fs::exists(file.string() + ".report.json"));
}

TEST_CASE("output file is bit-identical across repeated runs and rank-count independent in content") {
    SyntheticSpec s;
    s.dims = {32, 32, 32};
    s.levels = 2;
    s.unit_block_size = 8;
    s.refine_threshold = 0.85;
    s.seed = 9;
    s.field_count = 2;
    AmrDataset ds = generate_synthetic(s);

    CompressorConfig cfg;
    cfg.algorithm = Algorithm::LR;
    cfg.eb_value = 1e-3;

    auto f1 = tmp_file("det1.amrc");
    auto f2 = tmp_file("det2.amrc");
    run_simulated_write(ds, cfg, 4, 0.0, f1);
    run_simulated_write(ds, cfg, 4, 0.0, f2);
    std::ifstream a(f1, std::ios::binary), b(f2, std::ios::binary);
    std::vector<char> ba((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::vector<char> bb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(ba == bb);

    // absolute-eb mode: decompressed values within bound for any rank count
    for (int R : {1, 4}) {
        auto f = tmp_file(("ranks" + std::to_string(R) + ".amrc").c_str());
        run_simulated_write(ds, cfg, R, 0.0, f);
        verify_container(f, ds);
    }
}
