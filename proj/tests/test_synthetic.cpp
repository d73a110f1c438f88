#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amrc/metrics.hpp"
#include "amrc/preprocess.hpp"
#include "amrc/synthetic.hpp"

using namespace amrc;

namespace {

SyntheticSpec small_spec() {
    SyntheticSpec s;
    s.dims = {32, 32, 32};
    s.levels = 2;
    s.unit_block_size = 8;
    s.refine_threshold = 0.9;
    s.seed = 3;
    s.field_count = 2;
    return s;
}

}  // namespace

TEST_CASE("threshold 1.0 gives a single-level dataset") {
    auto s = small_spec();
    s.refine_threshold = 1.0;
    AmrDataset ds = generate_synthetic(s);
    CHECK(ds.levels.size() == 1);
}

TEST_CASE("threshold 0.0 refines everything; coarse density drops to zero") {
    auto s = small_spec();
    s.refine_threshold = 0.0;
    AmrDataset ds = generate_synthetic(s);
    REQUIRE(ds.levels.size() == 2);
    // fine level covers the whole domain
    int64_t fine_vol = 0;
    for (const auto& b : ds.levels[1].boxes) fine_vol += b.volume();
    CHECK(fine_vol == ds.domain_at(1).volume());
    auto masks = remove_redundancy(ds);
    CHECK(density(ds, masks, 0) == 0.0);
}

TEST_CASE("generator is deterministic") {
    auto s = small_spec();
    s.preset = Preset::Rough;
    AmrDataset a = generate_synthetic(s);
    AmrDataset b = generate_synthetic(s);
    REQUIRE(a.levels.size() == b.levels.size());
    for (size_t l = 0; l < a.levels.size(); ++l) {
        REQUIRE(a.levels[l].boxes == b.levels[l].boxes);
        for (const auto& f : a.field_names) {
            for (size_t bx = 0; bx < a.levels[l].boxes.size(); ++bx) {
                const auto& va = a.levels[l].box_field(f, bx);
                const auto& vb = b.levels[l].box_field(f, bx);
                REQUIRE(va.size() == vb.size());
                CHECK(std::memcmp(va.data(), vb.data(), va.size() * sizeof(double)) == 0);
            }
        }
    }
}

TEST_CASE("rough 64^3 U=8 threshold 0.98: fine density ~ 2% +- 1%") {
    SyntheticSpec s;
    s.preset = Preset::Rough;
    s.dims = {64, 64, 64};
    s.levels = 2;
    s.unit_block_size = 8;
    s.refine_threshold = 0.98;
    s.seed = 7;
    s.field_count = 1;
    AmrDataset ds = generate_synthetic(s);
    REQUIRE(ds.levels.size() == 2);

    // brute-force oracle: refined fraction = refined blocks / total blocks,
    // counted directly from the generated level-0 field
    const int U = 8;
    std::vector<double> maxima;
    for (size_t b = 0; b < ds.levels[0].boxes.size(); ++b) {
        const auto& arr = ds.levels[0].box_field("f0", b);
        Int3 sz = ds.levels[0].boxes[b].size();
        Int3 nb{sz.x / U, sz.y / U, sz.z / U};
        for (int64_t bz = 0; bz < nb.z; ++bz)
            for (int64_t by = 0; by < nb.y; ++by)
                for (int64_t bx = 0; bx < nb.x; ++bx) {
                    double mx = -1e300;
                    for (int64_t z = bz * U; z < (bz + 1) * U; ++z)
                        for (int64_t y = by * U; y < (by + 1) * U; ++y)
                            for (int64_t x = bx * U; x < (bx + 1) * U; ++x)
                                mx = std::max(mx, arr[linear_index({x, y, z}, sz)]);
                    maxima.push_back(mx);
                }
    }
    int64_t fine_vol = 0;
    for (const auto& b : ds.levels[1].boxes) fine_vol += b.volume();
    double fine_density = static_cast<double>(fine_vol) / static_cast<double>(ds.domain_at(1).volume());
    CHECK(fine_density >= 0.01);
    CHECK(fine_density <= 0.03);

    double refined_blocks = fine_density * static_cast<double>(maxima.size());
    CHECK(refined_blocks == doctest::Approx(static_cast<double>(ds.levels[1].boxes.size())));
}

TEST_CASE("every fine box coarsens to whole unit blocks of the parent") {
    auto s = small_spec();
    s.levels = 3;
    s.refine_threshold = 0.7;
    AmrDataset ds = generate_synthetic(s);
    for (size_t l = 1; l < ds.levels.size(); ++l) {
        int ratio = ds.levels[l - 1].refinement_ratio;
        for (const auto& fb : ds.levels[l].boxes) {
            AmrBox cb = coarsen(fb, ratio);
            for (int d = 0; d < 3; ++d) {
                CHECK(cb.lo[d] % ds.unit_block_size == 0);
                CHECK(cb.hi[d] % ds.unit_block_size == 0);
            }
        }
    }
}

TEST_CASE("misaligned dims are rejected") {
    auto s = small_spec();
    s.dims = {30, 32, 32};
    CHECK_THROWS_AS(generate_synthetic(s), DataError);
}
