#include "ridehail/geometry.hpp"

#include <algorithm>
#include <cstdint>

#include "doctest.h"
#include "oracles.hpp"
#include "ridehail/rng.hpp"

using namespace ridehail;
using geometry::LatticeOffset;
using geometry::LatticeSolutionSet;

namespace {

std::vector<LatticeOffset> sorted(std::vector<LatticeOffset> v) {
    std::sort(v.begin(), v.end());
    return v;
}

bool closed_under_symmetries(const LatticeSolutionSet& s) {
    for (const auto& o : s.offsets) {
        for (const LatticeOffset img : {LatticeOffset{-o.dx, o.dy}, LatticeOffset{o.dx, -o.dy},
                                        LatticeOffset{-o.dx, -o.dy}, LatticeOffset{o.dy, o.dx},
                                        LatticeOffset{-o.dy, o.dx}, LatticeOffset{o.dy, -o.dx},
                                        LatticeOffset{-o.dy, -o.dx}}) {
            if (!s.contains(img)) return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("isqrt is exact at and around squares") {
    CHECK(geometry::isqrt_u64(0) == 0);
    CHECK(geometry::isqrt_u64(1) == 1);
    CHECK(geometry::isqrt_u64(2) == 1);
    CHECK(geometry::isqrt_u64(3) == 1);
    CHECK(geometry::isqrt_u64(4) == 2);
    for (std::uint64_t r : {3ull, 1000ull, 123456ull, 4294967295ull}) {
        CHECK(geometry::isqrt_u64(r * r) == r);
        CHECK(geometry::isqrt_u64(r * r - 1) == r - 1);
        CHECK(geometry::isqrt_u64(r * r + 1) == r);
    }
    CHECK(geometry::isqrt_u64(~std::uint64_t{0}) == 4294967295ull);
}

TEST_CASE("worked example: n = 25 has the twelve known offsets") {
    const auto s = geometry::enumerate_circle(25);
    const std::vector<LatticeOffset> expected = sorted({{3, 4},
                                                        {3, -4},
                                                        {-3, 4},
                                                        {-3, -4},
                                                        {4, 3},
                                                        {4, -3},
                                                        {-4, 3},
                                                        {-4, -3},
                                                        {5, 0},
                                                        {-5, 0},
                                                        {0, 5},
                                                        {0, -5}});
    CHECK(s.offsets == expected);
    CHECK(s.offsets.size() == 12);
}

TEST_CASE("small circles") {
    CHECK(geometry::enumerate_circle(0).offsets == std::vector<LatticeOffset>{{0, 0}});
    CHECK(geometry::enumerate_circle(3).offsets.empty());
    CHECK(geometry::enumerate_circle(2).offsets ==
          sorted({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}));
}

TEST_CASE("rejects n beyond the bound") {
    CHECK_THROWS_AS(geometry::enumerate_circle(geometry::kDefaultMaxCircleN + 1),
                    geometry::ParameterTooLarge);
    CHECK_THROWS_AS(geometry::enumerate_circle(100, 99), geometry::ParameterTooLarge);
    CHECK_NOTHROW(geometry::enumerate_circle(geometry::kDefaultMaxCircleN));
}

TEST_CASE("matches square-scan oracle exhaustively for n <= 2000") {
    for (std::uint64_t n = 0; n <= 2000; ++n) {
        CAPTURE(n);
        REQUIRE(geometry::enumerate_circle(n).offsets == oracle::circle_square_scan(n));
    }
}

TEST_CASE("matches column-scan oracle and r2 count for random n <= 1e9") {
    Rng rng(derive_seed(20240229, "geometry-oracle"));
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t n = rng.next_below(1'000'000'000ull);
        CAPTURE(n);
        const auto s = geometry::enumerate_circle(n);
        REQUIRE(s.offsets == oracle::circle_column_scan(n));
        REQUIRE(s.offsets.size() == oracle::r2_from_factorization(n));
    }
}

TEST_CASE("symmetry closure and mod-4 cardinality") {
    Rng rng(derive_seed(20240229, "geometry-symmetry"));
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t n = 1 + rng.next_below(500'000ull);
        const auto s = geometry::enumerate_circle(n);
        CAPTURE(n);
        CHECK(closed_under_symmetries(s));
        CHECK(s.offsets.size() % 4 == 0);
        for (const auto& o : s.offsets) {
            REQUIRE(static_cast<std::uint64_t>(o.dx * o.dx + o.dy * o.dy) == n);
        }
        // sorted + unique by construction
        REQUIRE(std::adjacent_find(s.offsets.begin(), s.offsets.end()) == s.offsets.end());
    }
}

TEST_CASE("p-norm examples") {
    const auto s17 = geometry::enumerate_pnorm(4, 17);
    CHECK(s17.offsets ==
          sorted({{1, 2}, {1, -2}, {-1, 2}, {-1, -2}, {2, 1}, {2, -1}, {-2, 1}, {-2, -1}}));
    CHECK(s17.offsets.size() == 8);

    CHECK(geometry::enumerate_pnorm(2, 25).offsets == geometry::enumerate_circle(25).offsets);
    CHECK(geometry::enumerate_pnorm(4, 5).offsets.empty());
}

TEST_CASE("p-norm rejects invalid exponents") {
    CHECK_THROWS_AS(geometry::enumerate_pnorm(3, 10), geometry::InvalidExponent);
    CHECK_THROWS_AS(geometry::enumerate_pnorm(0, 10), geometry::InvalidExponent);
    CHECK_THROWS_AS(geometry::enumerate_pnorm(-2, 10), geometry::InvalidExponent);
}

TEST_CASE("p-norm matches square-scan oracle for p in {2,4,6}") {
    Rng rng(derive_seed(20240229, "pnorm-oracle"));
    for (int p : {2, 4, 6}) {
        for (int i = 0; i < 40; ++i) {
            const std::uint64_t n = rng.next_below(1'000'000ull);
            CAPTURE(p);
            CAPTURE(n);
            REQUIRE(geometry::enumerate_pnorm(p, n).offsets == oracle::pnorm_square_scan(p, n));
        }
    }
}

TEST_CASE("embedding maps p-norm solutions onto the circle") {
    CHECK(geometry::embed_pnorm_into_circle(4, {1, 2}) == LatticeOffset{1, 4});
    CHECK(geometry::embed_pnorm_into_circle(2, {3, 4}) == LatticeOffset{3, 4});
    CHECK(geometry::embed_pnorm_into_circle(6, {0, 2}) == LatticeOffset{0, 8});

    Rng rng(derive_seed(20240229, "pnorm-embed"));
    for (int p : {4, 6}) {
        for (int i = 0; i < 30; ++i) {
            const std::uint64_t n = rng.next_below(1'000'000ull);
            const auto curve = geometry::enumerate_pnorm(p, n);
            if (curve.offsets.empty()) continue;
            const auto circle = geometry::enumerate_circle(n);
            CAPTURE(p);
            CAPTURE(n);
            CHECK(curve.offsets.size() <= circle.offsets.size());
            for (const auto& o : curve.offsets) {
                REQUIRE(circle.contains(geometry::embed_pnorm_into_circle(p, o)));
            }
        }
    }
}

}  // TEST_SUITE
