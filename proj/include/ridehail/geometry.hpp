#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ridehail::geometry {

// Thrown when the disclosed distance exceeds the configured enumeration
// bound; enumeration cost grows with sqrt(n), so oversized inputs are
// rejected instead of silently running long.
struct ParameterTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown for odd or non-positive p-norm exponents. Odd exponents cannot
// occur in the disclosed values (absolute values are too expensive to
// evaluate homomorphically), so they indicate a caller bug.
struct InvalidExponent : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One integer solution offset. For a circle with parameter n,
// dx*dx + dy*dy == n holds exactly; for a p-norm curve, |dx|^p + |dy|^p == n.
struct LatticeOffset {
    std::int64_t dx = 0;
    std::int64_t dy = 0;

    friend constexpr auto operator<=>(const LatticeOffset&, const LatticeOffset&) = default;
};

// The complete, deduplicated set of integer points on one curve. Offsets are
// sorted; the set is closed under the eight dihedral symmetries
// (x,y) -> (+-x,+-y), (+-y,+-x).
struct LatticeSolutionSet {
    std::uint64_t parameter_n = 0;
    int norm_exponent = 2;
    std::vector<LatticeOffset> offsets;

    bool contains(const LatticeOffset& o) const;
};

// Largest n accepted by default: twice the square of a 60 km zone edge,
// double the biggest zone this tool targets.
inline constexpr std::uint64_t kDefaultMaxCircleN = 2ull * 60000ull * 60000ull;

// Exact floor(sqrt(v)) using integer-only comparisons for the final answer;
// a floating-point estimate is only a starting guess.
std::uint64_t isqrt_u64(std::uint64_t v);

// All integer (x, y) with x^2 + y^2 == n. O(sqrt(n)).
LatticeSolutionSet enumerate_circle(std::uint64_t n, std::uint64_t max_n = kDefaultMaxCircleN);

// All integer (x, y) with |x|^p + |y|^p == n for even p >= 2. For p == 2 the
// result is identical to enumerate_circle. max_n of 0 means "use the default
// bound for this p" (2 * 60000^p, saturated to the uint64 range).
LatticeSolutionSet enumerate_pnorm(int p, std::uint64_t n, std::uint64_t max_n = 0);

std::uint64_t default_max_pnorm_n(int p);

// Maps a p-norm solution (x, y) to (x^q, y^q) with q = p/2, which lies on
// the circle with the same parameter. Demonstrates that the p-norm solution
// set embeds into the circle solution set.
LatticeOffset embed_pnorm_into_circle(int p, const LatticeOffset& solution);

}  // namespace ridehail::geometry
