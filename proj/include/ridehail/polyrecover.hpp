#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ridehail/rng.hpp"

namespace ridehail::polyrecover {

// 128-bit values: polynomial outputs overflow 64 bits at quite modest
// parameters (degree 2 with 28-bit inputs already passes 2^60).
using u128 = unsigned __int128;

std::string to_string_u128(u128 v);

// No model-compatible polynomial explains the outputs.
struct Inconsistent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// More distinct consistent input lists than the caller's cap.
struct AmbiguityLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The publicly known shape of the server's masking polynomial: degree d,
// coefficients uniform in [1, 2^alpha - 1], inputs in [0, 2^beta - 1]. All
// coefficients positive makes the polynomial strictly increasing on the
// input range, which is what keeps the disclosed ordering intact and what
// the recovery search leans on.
struct NoiseModel {
    int degree_d = 1;
    int coeff_bits_alpha = 2;
    int input_bits_beta = 3;

    std::uint64_t coeff_max() const { return (std::uint64_t{1} << coeff_bits_alpha) - 1; }
    std::uint64_t input_max() const { return (std::uint64_t{1} << input_bits_beta) - 1; }

    // Desk-scale guard: the full coefficient-space search must stay within
    // ~1e9 polynomial evaluations and all values within 128 bits. Throws
    // std::invalid_argument otherwise.
    void validate(std::size_t output_count = 1) const;
};

using Poly = std::vector<std::uint64_t>;  // coefficients, constant term first

u128 eval_poly(const Poly& coeffs, std::uint64_t x);

// d+1 coefficients, each uniform in [1, 2^alpha - 1].
Poly sample_monotone_poly(const NoiseModel& model, Rng& rng);

struct RecoveryResult {
    // The input list of the unique consistent explanation, or the first one
    // (in lexicographic order) when several survive; aligned with the given
    // outputs.
    std::vector<std::uint64_t> recovered_inputs;
    std::size_t candidate_polynomials = 0;
    // Every distinct consistent input list, sorted; size 1 means the inputs
    // are pinned down uniquely.
    std::vector<std::vector<std::uint64_t>> all_input_lists;

    bool unique() const { return all_input_lists.size() == 1; }
};

// Searches every model-compatible polynomial, inverting each output by
// binary search over the monotone range. Sorted outputs map to sorted
// inputs, so each (polynomial, outputs) pair admits at most one input list.
RecoveryResult recover_inputs(const std::vector<u128>& outputs, const NoiseModel& model,
                              std::size_t ambiguity_cap = 4096);

}  // namespace ridehail::polyrecover
