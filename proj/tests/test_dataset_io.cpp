#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>

#include "amrc/dataset_io.hpp"
#include "amrc/synthetic.hpp"

using namespace amrc;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const char* name) {
    auto p = fs::temp_directory_path() / "amrc_io_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

AmrDataset sample_ds() {
    SyntheticSpec s;
    s.dims = {32, 32, 32};
    s.levels = 2;
    s.unit_block_size = 4;
    s.refine_threshold = 0.8;
    s.seed = 11;
    s.field_count = 2;
    return generate_synthetic(s);
}

}  // namespace

TEST_CASE("export/import round trip is bit-identical") {
    auto dir = tmp_dir("roundtrip");
    AmrDataset ds = sample_ds();
    export_dataset(ds, dir);
    AmrDataset back = import_dataset(dir);

    CHECK(back.domain == ds.domain);
    CHECK(back.unit_block_size == ds.unit_block_size);
    CHECK(back.field_names == ds.field_names);
    REQUIRE(back.levels.size() == ds.levels.size());
    for (size_t l = 0; l < ds.levels.size(); ++l) {
        CHECK(back.levels[l].boxes == ds.levels[l].boxes);
        for (const auto& f : ds.field_names) {
            for (size_t b = 0; b < ds.levels[l].boxes.size(); ++b) {
                const auto& a = ds.levels[l].box_field(f, b);
                const auto& bb = back.levels[l].box_field(f, b);
                REQUIRE(a.size() == bb.size());
                CHECK(std::memcmp(a.data(), bb.data(), a.size() * sizeof(double)) == 0);
            }
        }
    }
}

TEST_CASE("size mismatch between header and raw file is rejected") {
    auto dir = tmp_dir("sizemismatch");
    AmrDataset ds = sample_ds();
    export_dataset(ds, dir);
    // truncate one raw file
    auto victim = dir / ("L0_B0_" + ds.field_names[0] + ".f64");
    fs::resize_file(victim, fs::file_size(victim) - 8);
    CHECK_THROWS_WITH_AS(import_dataset(dir), doctest::Contains("size mismatch"), DataError);
}

TEST_CASE("malformed header is rejected") {
    auto dir = tmp_dir("badheader");
    AmrDataset ds = sample_ds();
    export_dataset(ds, dir);
    std::ofstream(dir / "header.json") << "{not json";
    CHECK_THROWS_WITH_AS(import_dataset(dir), doctest::Contains("malformed"), DataError);
}

TEST_CASE("overlapping boxes are rejected naming both boxes") {
    auto dir = tmp_dir("overlap");
    AmrDataset ds = sample_ds();
    // force an overlap at level 0 by duplicating box 0 as box 1
    ds.levels[0].boxes[1] = ds.levels[0].boxes[0];
    for (auto& [f, arrays] : ds.levels[0].fields) arrays[1] = arrays[0];
    try {
        ds.validate();
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("level 0") != std::string::npos);
        CHECK(msg.find("boxes 0") != std::string::npos);
        CHECK(msg.find("overlap") != std::string::npos);
    }
}
