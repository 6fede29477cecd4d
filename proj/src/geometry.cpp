#include "ridehail/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace ridehail::geometry {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

// |base|^exp in 128 bits, saturating at the uint64 ceiling. Saturation is
// enough for bound checks: any saturated value already exceeds every n we
// accept.
std::uint64_t pow_saturated(std::uint64_t base, int exp) {
    u128 acc = 1;
    for (int i = 0; i < exp; ++i) {
        acc *= base;
        if (acc > kU64Max) return kU64Max;
    }
    return static_cast<std::uint64_t>(acc);
}

// Exact floor of the p-th root of v for p >= 2.
std::uint64_t iroot(std::uint64_t v, int p) {
    if (v == 0) return 0;
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(v), 1.0 / p));
    while (r > 0 && pow_saturated(r, p) > v) --r;
    while (pow_saturated(r + 1, p) <= v) ++r;
    return r;
}

// Insert the full dihedral orbit of a canonical solution (0 <= x <= y).
// The set absorbs the degenerate orbits at x == 0, y == 0 and x == y.
void expand_orbit(std::int64_t x, std::int64_t y, std::set<LatticeOffset>& out) {
    out.insert({x, y});
    out.insert({-x, y});
    out.insert({x, -y});
    out.insert({-x, -y});
    out.insert({y, x});
    out.insert({-y, x});
    out.insert({y, -x});
    out.insert({-y, -x});
}

LatticeSolutionSet finish(std::uint64_t n, int p, const std::set<LatticeOffset>& found) {
    LatticeSolutionSet result;
    result.parameter_n = n;
    result.norm_exponent = p;
    result.offsets.assign(found.begin(), found.end());
    return result;
}

}  // namespace

bool LatticeSolutionSet::contains(const LatticeOffset& o) const {
    return std::binary_search(offsets.begin(), offsets.end(), o);
}

std::uint64_t isqrt_u64(std::uint64_t v) {
    if (v == 0) return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
    // The double estimate can be off by a couple of ulps near 2^64; settle
    // with exact integer steps. r stays below 2^32 so r*r cannot overflow.
    if (r > 0xffffffffull) r = 0xffffffffull;
    while (r > 0 && r * r > v) --r;
    while (r < 0xffffffffull && (r + 1) * (r + 1) <= v) ++r;
    return r;
}

LatticeSolutionSet enumerate_circle(std::uint64_t n, std::uint64_t max_n) {
    if (n > max_n) {
        throw ParameterTooLarge("enumerate_circle: n=" + std::to_string(n) +
                                " exceeds bound " + std::to_string(max_n));
    }
    std::set<LatticeOffset> found;
    // Canonical generation: x in [0, sqrt(n/2)] keeps x <= y, so each orbit
    // is produced exactly once and the symmetry expansion cannot duplicate
    // entries at x=0 or x=y.
    const std::uint64_t x_max = isqrt_u64(n / 2);
    for (std::uint64_t x = 0; x <= x_max; ++x) {
        const std::uint64_t rem = n - x * x;
        const std::uint64_t y = isqrt_u64(rem);
        if (y * y == rem) {
            expand_orbit(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y), found);
        }
    }
    return finish(n, 2, found);
}

std::uint64_t default_max_pnorm_n(int p) {
    const std::uint64_t edge = pow_saturated(60000, p);
    return edge > kU64Max / 2 ? kU64Max : 2 * edge;
}

LatticeSolutionSet enumerate_pnorm(int p, std::uint64_t n, std::uint64_t max_n) {
    if (p <= 0 || p % 2 != 0) {
        throw InvalidExponent("enumerate_pnorm: p must be a positive even integer, got " +
                              std::to_string(p));
    }
    if (max_n == 0) max_n = default_max_pnorm_n(p);
    if (n > max_n) {
        throw ParameterTooLarge("enumerate_pnorm: n=" + std::to_string(n) +
                                " exceeds bound " + std::to_string(max_n));
    }
    if (p == 2) return enumerate_circle(n, max_n);

    std::set<LatticeOffset> found;
    const std::uint64_t x_max = iroot(n / 2, p);  // x <= y canonical range
    for (std::uint64_t x = 0; x <= x_max; ++x) {
        const std::uint64_t xp = pow_saturated(x, p);
        const std::uint64_t rem = n - xp;
        const std::uint64_t y = iroot(rem, p);
        if (pow_saturated(y, p) == rem && y >= x) {
            expand_orbit(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y), found);
        }
    }
    return finish(n, p, found);
}

LatticeOffset embed_pnorm_into_circle(int p, const LatticeOffset& solution) {
    if (p <= 0 || p % 2 != 0) {
        throw InvalidExponent("embed_pnorm_into_circle: p must be a positive even integer, got " +
                              std::to_string(p));
    }
    const int q = p / 2;
    auto signed_pow = [](std::int64_t base, int exp) {
        __int128 acc = 1;
        for (int i = 0; i < exp; ++i) {
            acc *= base;
            if (acc > std::numeric_limits<std::int64_t>::max() ||
                acc < std::numeric_limits<std::int64_t>::min()) {
                throw ParameterTooLarge("embed_pnorm_into_circle: power exceeds 64-bit range");
            }
        }
        return static_cast<std::int64_t>(acc);
    };
    return {signed_pow(solution.dx, q), signed_pow(solution.dy, q)};
}

}  // namespace ridehail::geometry
