#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "amrc/harness.hpp"
#include "amrc/metrics.hpp"
#include "amrc/synthetic.hpp"

using namespace amrc;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    auto dir = fs::temp_directory_path() / "amrc_metrics_tests";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("psnr: identical arrays give +inf") {
    std::vector<double> a{1, 2, 3};
    CHECK(std::isinf(psnr(a, a)));
    CHECK(psnr(a, a) > 0);
}

TEST_CASE("psnr: R=1, N=1, e=0.1 is 20 dB") {
    std::vector<double> orig{0.0};
    std::vector<double> rec{0.1};
    CHECK(psnr_with_range(1.0, orig, rec) == doctest::Approx(20.0).epsilon(1e-12));
    // the derived range of a single sample is 0: nonzero error reports -inf
    CHECK(psnr(orig, rec) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("psnr matches a direct formula oracle to 1e-12 relative") {
    std::mt19937_64 rng(51);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int iter = 0; iter < 50; ++iter) {
        size_t n = 2 + static_cast<size_t>(rng() % 5000);
        std::vector<double> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = uniform() * 10.0 - 5.0;
            b[i] = a[i] + (uniform() - 0.5) * 0.01;
        }
        double lo = a[0], hi = a[0], sse = 0;
        for (size_t i = 0; i < n; ++i) {
            lo = std::min(lo, a[i]);
            hi = std::max(hi, a[i]);
            sse += (a[i] - b[i]) * (a[i] - b[i]);
        }
        double expect = 20.0 * std::log10(hi - lo) -
                        10.0 * std::log10(sse / static_cast<double>(n));
        CHECK(psnr(a, b) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("density") {
    SyntheticSpec s;
    s.dims = {32, 32, 32};
    s.levels = 2;
    s.unit_block_size = 8;
    s.refine_threshold = 0.8;
    s.seed = 3;
    s.field_count = 1;
    AmrDataset ds = generate_synthetic(s);
    auto masks = remove_redundancy(ds);

    // fine level: no removal -> covered volume over level-1 domain
    int64_t covered = 0;
    for (const auto& b : ds.levels[1].boxes) covered += b.volume();
    CHECK(density(ds, masks, 1) ==
          doctest::Approx(static_cast<double>(covered) / static_cast<double>(ds.domain_at(1).volume())));

    // coarse level: brute-force kept count
    int64_t kept_cells = masks[0].kept_count() * 512;
    CHECK(density(ds, masks, 0) ==
          doctest::Approx(static_cast<double>(kept_cells) / static_cast<double>(ds.domain.volume())));
}

TEST_CASE("error_map") {
    SyntheticSpec s;
    s.dims = {16, 16, 16};
    s.levels = 1;
    s.unit_block_size = 8;
    s.seed = 4;
    s.field_count = 1;
    AmrDataset a = generate_synthetic(s);
    AmrDataset b = a;

    SUBCASE("identical datasets give a zero map") {
        ErrorMap m = error_map(a, b, 0, "f0", 2, 7);
        CHECK(m.width == 16);
        CHECK(m.height == 16);
        for (double v : m.values) CHECK(v == 0.0);
    }
    SUBCASE("a single perturbed point lights a single cell") {
        auto& arr = b.levels[0].fields["f0"][0];
        arr[linear_index({3, 5, 7}, {16, 16, 16})] += 0.25;
        ErrorMap m = error_map(a, b, 0, "f0", 2, 7);
        int nonzero = 0;
        for (int64_t j = 0; j < m.height; ++j)
            for (int64_t i = 0; i < m.width; ++i)
                if (m.values[static_cast<size_t>(j * m.width + i)] != 0.0) {
                    ++nonzero;
                    CHECK(i == 3);
                    CHECK(j == 5);
                    CHECK(m.values[static_cast<size_t>(j * m.width + i)] == doctest::Approx(0.25));
                }
        CHECK(nonzero == 1);
    }
    SUBCASE("matches the |a-b| oracle everywhere") {
        std::mt19937_64 rng(5);
        auto& arr = b.levels[0].fields["f0"][0];
        for (auto& v : arr) v += static_cast<double>(rng() % 100) * 1e-4;
        ErrorMap m = error_map(a, b, 0, "f0", 0, 4);  // x slice
        const auto& oa = a.levels[0].fields["f0"][0];
        const auto& ob = b.levels[0].fields["f0"][0];
        for (int64_t z = 0; z < 16; ++z)
            for (int64_t y = 0; y < 16; ++y) {
                double expect = std::abs(oa[linear_index({4, y, z}, {16, 16, 16})] -
                                         ob[linear_index({4, y, z}, {16, 16, 16})]);
                CHECK(m.values[static_cast<size_t>(z * 16 + y)] == expect);
            }
    }
    SUBCASE("out-of-range slice is rejected") {
        CHECK_THROWS_AS(error_map(a, b, 0, "f0", 2, 99), DataError);
    }
}

TEST_CASE("sweep: deterministic rows, monotone ratio on smooth data") {
    SyntheticSpec s;
    s.preset = Preset::Smooth;
    s.dims = {32, 32, 32};
    s.levels = 2;
    s.unit_block_size = 8;
    s.refine_threshold = 0.9;
    s.seed = 6;
    s.field_count = 1;
    AmrDataset ds = generate_synthetic(s);

    CompressorConfig base;
    base.eb_mode = EbMode::RangeRelative;
    base.unit_block_size = 8;

    std::vector<Algorithm> algos{Algorithm::LR};
    std::vector<double> ebs{1e-2, 1e-3, 1e-4};
    std::vector<ArrangementChoice> arrs{ArrangementChoice::Auto};
    auto rows = sweep(ds, algos, ebs, arrs, base, 1, tmp_dir() / "sweep");
    REQUIRE(rows.size() == 3);

    // one row per configuration, input order preserved
    CHECK(rows[0].eb == 1e-2);
    CHECK(rows[2].eb == 1e-4);
    // larger eb -> ratio not smaller
    CHECK(rows[0].ratio >= rows[1].ratio);
    CHECK(rows[1].ratio >= rows[2].ratio);
    // and PSNR drops as eb grows
    CHECK(rows[0].psnr_db <= rows[1].psnr_db);

    // CSV schema
    auto csv = sweep_csv_header();
    for (const auto& r : rows) csv += sweep_row_csv(r);
    CHECK(csv.find("algorithm,arrangement,encoding,eb_mode,eb,bitrate_bits,psnr_db,ratio") == 0);
    CHECK(csv.find("lr,auto,sle,rel,0.01") != std::string::npos);
}

TEST_CASE("quality report is a pure function and encodes inf literally") {
    SyntheticSpec s;
    s.dims = {16, 16, 16};
    s.levels = 1;
    s.unit_block_size = 8;
    s.seed = 8;
    s.field_count = 1;
    AmrDataset ds = generate_synthetic(s);
    auto masks = remove_redundancy(ds);
    QualityReport rep = evaluate_quality(ds, ds, masks, {}, 0);
    REQUIRE(rep.rows.size() == 1);
    CHECK(std::isinf(rep.rows[0].psnr_db));
    auto csv = rep.to_csv();
    CHECK(csv.find(",inf,") != std::string::npos);

    QualityReport rep2 = evaluate_quality(ds, ds, masks, {}, 0);
    CHECK(rep.to_csv() == rep2.to_csv());
}
