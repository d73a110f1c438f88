#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "amrc/box.hpp"

using namespace amrc;

TEST_CASE("intersect: coordinate-wise max/min") {
    AmrBox a{{0, 0, 0}, {8, 8, 8}};
    AmrBox b{{4, 4, 4}, {12, 12, 12}};
    auto iv = intersect(a, b);
    REQUIRE(iv.has_value());
    CHECK(*iv == AmrBox{{4, 4, 4}, {8, 8, 8}});
}

TEST_CASE("intersect: touching faces have empty interior") {
    AmrBox a{{0, 0, 0}, {4, 4, 4}};
    AmrBox b{{4, 0, 0}, {8, 4, 4}};
    CHECK(!intersect(a, b).has_value());
}

TEST_CASE("intersect: identity") {
    AmrBox a{{-3, 2, 5}, {9, 6, 11}};
    auto iv = intersect(a, a);
    REQUIRE(iv.has_value());
    CHECK(*iv == a);
}

TEST_CASE("intersect properties: commutative, contained in both") {
    std::mt19937_64 rng(42);
    auto rand_box = [&] {
        AmrBox b;
        for (int d = 0; d < 3; ++d) {
            auto lo = static_cast<int64_t>(rng() % 16);
            b.lo[d] = lo;
            b.hi[d] = lo + 1 + static_cast<int64_t>(rng() % 12);
        }
        return b;
    };
    for (int i = 0; i < 500; ++i) {
        AmrBox a = rand_box(), b = rand_box();
        auto ab = intersect(a, b), ba = intersect(b, a);
        CHECK(ab == ba);
        if (ab) {
            CHECK(a.contains(*ab));
            CHECK(b.contains(*ab));
            // associativity under non-emptiness
            AmrBox c = rand_box();
            auto left = intersect(*ab, c);
            auto bc = intersect(b, c);
            std::optional<AmrBox> right = bc ? intersect(a, *bc) : std::optional<AmrBox>{};
            CHECK(left == right);
        }
    }
}

TEST_CASE("coarsen") {
    CHECK(coarsen(AmrBox{{8, 8, 8}, {16, 16, 16}}, 2) == AmrBox{{4, 4, 4}, {8, 8, 8}});
    CHECK(coarsen(AmrBox{{0, 0, 0}, {2, 2, 2}}, 2) == AmrBox{{0, 0, 0}, {1, 1, 1}});
    CHECK_THROWS_AS(coarsen(AmrBox{{0, 0, 0}, {3, 2, 2}}, 2), DataError);
}

TEST_CASE("coarsen(refine(b)) round trip") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        AmrBox b;
        for (int d = 0; d < 3; ++d) {
            b.lo[d] = static_cast<int64_t>(rng() % 32);
            b.hi[d] = b.lo[d] + 1 + static_cast<int64_t>(rng() % 8);
        }
        CHECK(coarsen(refine(b, 2), 2) == b);
        CHECK(coarsen(refine(b, 4), 4) == b);
    }
}

TEST_CASE("full_coarse_cover excludes partial cells") {
    // half of a coarse cell covered -> excluded
    auto cov = full_coarse_cover(AmrBox{{0, 0, 0}, {3, 4, 4}}, 2);
    REQUIRE(cov.has_value());
    CHECK(*cov == AmrBox{{0, 0, 0}, {1, 2, 2}});
    CHECK(!full_coarse_cover(AmrBox{{1, 0, 0}, {2, 4, 4}}, 2).has_value());
}
