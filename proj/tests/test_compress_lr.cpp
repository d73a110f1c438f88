#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "amrc/compressor.hpp"

using namespace amrc;

namespace {

std::vector<double> smooth_volume(Int3 n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    double p1 = static_cast<double>(rng() % 628) * 0.01;
    double p2 = static_cast<double>(rng() % 628) * 0.01;
    std::vector<double> g(static_cast<size_t>(n.product()));
    for (int64_t z = 0; z < n.z; ++z)
        for (int64_t y = 0; y < n.y; ++y)
            for (int64_t x = 0; x < n.x; ++x) {
                double fx = static_cast<double>(x) / static_cast<double>(n.x);
                double fy = static_cast<double>(y) / static_cast<double>(n.y);
                double fz = static_cast<double>(z) / static_cast<double>(n.z);
                g[static_cast<size_t>((z * n.y + y) * n.x + x)] =
                    std::sin(6.0 * fx + p1) * std::cos(5.0 * fy + p2) + std::sin(4.0 * fz);
            }
    return g;
}

double max_abs_err(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

CompressorConfig lr_cfg(int U, double eb, Encoding enc = Encoding::SLE,
                        EbMode mode = EbMode::Absolute) {
    CompressorConfig cfg;
    cfg.algorithm = Algorithm::LR;
    cfg.unit_block_size = U;
    cfg.eb_value = eb;
    cfg.eb_mode = mode;
    cfg.encoding = enc;
    return cfg;
}

}  // namespace

TEST_CASE("constant volume: exact reconstruction, tiny stream") {
    Int3 n{32, 32, 32};
    std::vector<double> g(static_cast<size_t>(n.product()), 1.5);
    for (Encoding enc : {Encoding::SLE, Encoding::PerBlock, Encoding::LinearMerge}) {
        auto bytes = compress_volume(g, n, lr_cfg(8, 1e-3, enc));
        auto dv = decompress_volume(bytes);
        CHECK(dv.data == g);
        CHECK(bytes.size() * 100 < g.size() * sizeof(double));  // << 1% of raw
    }
}

TEST_CASE("tree count: 1 shared vs one per unit block") {
    Int3 n{16, 16, 32};
    auto g = smooth_volume(n, 1);
    auto sle = compress_volume(g, n, lr_cfg(8, 1e-3, Encoding::SLE));
    auto per = compress_volume(g, n, lr_cfg(8, 1e-3, Encoding::PerBlock));
    CHECK(stream_table_count(sle) == 1);
    CHECK(stream_table_count(per) == 16);  // (16/8)*(16/8)*(32/8)
    auto lm = compress_volume(g, n, lr_cfg(8, 1e-3, Encoding::LinearMerge));
    CHECK(stream_table_count(lm) == 1);
}

TEST_CASE("error bound holds point-by-point on a random smooth 64^3 volume") {
    Int3 n{64, 64, 64};
    auto g = smooth_volume(n, 2);
    const double eb = 1e-3;
    for (Encoding enc : {Encoding::SLE, Encoding::PerBlock, Encoding::LinearMerge}) {
        auto bytes = compress_volume(g, n, lr_cfg(8, eb, enc));
        auto dv = decompress_volume(bytes);
        REQUIRE(dv.data.size() == g.size());
        CHECK(max_abs_err(g, dv.data) <= eb);
    }
}

TEST_CASE("range-relative bound uses the volume range") {
    Int3 n{32, 32, 32};
    auto g = smooth_volume(n, 3);
    auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    double range = *hi - *lo;
    auto bytes = compress_volume(g, n, lr_cfg(8, 1e-3, Encoding::SLE, EbMode::RangeRelative));
    auto dv = decompress_volume(bytes);
    CHECK(dv.effective_eb == doctest::Approx(1e-3 * range).epsilon(1e-12));
    CHECK(max_abs_err(g, dv.data) <= dv.effective_eb);
}

TEST_CASE("streams are deterministic") {
    Int3 n{24, 24, 24};
    auto g = smooth_volume(n, 4);
    auto a = compress_volume(g, n, lr_cfg(8, 1e-4));
    auto b = compress_volume(g, n, lr_cfg(8, 1e-4));
    CHECK(a == b);
}

TEST_CASE("store codec round trips and carries the codec id") {
    Int3 n{16, 16, 16};
    auto g = smooth_volume(n, 44);
    auto cfg = lr_cfg(8, 1e-3);
    cfg.codec = Codec::Store;
    auto bytes = compress_volume(g, n, cfg);
    auto dv = decompress_volume(bytes);
    CHECK(max_abs_err(g, dv.data) <= 1e-3);
    // same stream through the default codec decodes identically
    auto lz = compress_volume(g, n, lr_cfg(8, 1e-3));
    CHECK(decompress_volume(lz).data == dv.data);
    CHECK(lz.size() < bytes.size());
}

TEST_CASE("B=6 on U=8 unit blocks exercises residue slivers and still meets the bound") {
    Int3 n{32, 32, 32};
    auto g = smooth_volume(n, 5);
    auto cfg = lr_cfg(8, 1e-3);
    cfg.sz_block_size = 6;
    auto dv = decompress_volume(compress_volume(g, n, cfg));
    CHECK(max_abs_err(g, dv.data) <= 1e-3);
}

TEST_CASE("shared encoding beats per-block trees for 64+ blocks") {
    std::mt19937_64 rng(6);
    Int3 n{8, 8, 8 * 64};  // 64 unit blocks
    std::vector<double> g(static_cast<size_t>(n.product()));
    for (auto& v : g) v = static_cast<double>(rng() % 1000) * 0.01;
    auto sle = compress_volume(g, n, lr_cfg(8, 1e-2));
    auto per = compress_volume(g, n, lr_cfg(8, 1e-2, Encoding::PerBlock));
    CHECK(sle.size() < per.size());
}

TEST_CASE("outlier path: spikes beyond capacity are preserved exactly") {
    Int3 n{16, 16, 16};
    auto g = smooth_volume(n, 7);
    g[1234] = 1e9;  // far outside any quantizable residual at eb=1e-9
    auto cfg = lr_cfg(8, 1e-9);
    auto dv = decompress_volume(compress_volume(g, n, cfg));
    CHECK(dv.data[1234] == 1e9);
    CHECK(max_abs_err(g, dv.data) <= 1e-9);
}

TEST_CASE("non-finite and extreme values survive bit-exactly as outliers") {
    Int3 n{8, 8, 8};
    auto g = smooth_volume(n, 9);
    g[17] = std::numeric_limits<double>::infinity();
    g[99] = -std::numeric_limits<double>::infinity();
    g[250] = 1e300;
    g[301] = std::numeric_limits<double>::quiet_NaN();
    auto dv = decompress_volume(compress_volume(g, n, lr_cfg(8, 1e-3, Encoding::SLE,
                                                             EbMode::Absolute)));
    CHECK(dv.data[17] == g[17]);
    CHECK(dv.data[99] == g[99]);
    CHECK(dv.data[250] == 1e300);
    CHECK(std::isnan(dv.data[301]));
}

TEST_CASE("truncated or bit-flipped streams fail loudly") {
    Int3 n{16, 16, 16};
    auto g = smooth_volume(n, 8);
    auto bytes = compress_volume(g, n, lr_cfg(8, 1e-3));

    std::mt19937_64 rng(9);
    for (int i = 0; i < 48; ++i) {
        auto bad = bytes;
        bad[rng() % bad.size()] ^= static_cast<uint8_t>(1u << (rng() % 8));
        CHECK_THROWS_AS(decompress_volume(bad), DataError);
    }
    for (size_t cut : {size_t{1}, bytes.size() / 2, bytes.size() - 1}) {
        auto bad = bytes;
        bad.resize(cut);
        CHECK_THROWS_AS(decompress_volume(bad), DataError);
    }
}

TEST_CASE("shape mismatch is rejected") {
    Int3 n{16, 16, 16};
    auto g = smooth_volume(n, 10);
    CHECK_THROWS_AS(compress_volume(g, {16, 16, 8}, lr_cfg(8, 1e-3)), DataError);
}
