#include "ridehail/polyrecover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace ridehail::polyrecover {

std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

void NoiseModel::validate(std::size_t output_count) const {
    if (degree_d < 1) throw std::invalid_argument("noise model: degree must be >= 1");
    if (coeff_bits_alpha < 1 || input_bits_beta < 1) {
        throw std::invalid_argument("noise model: alpha and beta must be >= 1");
    }
    // Output magnitude bound: (d+1) * 2^alpha * 2^(beta*d) must fit 128 bits
    // with headroom.
    const double output_bits = coeff_bits_alpha + static_cast<double>(input_bits_beta) * degree_d +
                               std::log2(degree_d + 1.0);
    if (output_bits > 120.0) {
        throw std::invalid_argument("noise model: outputs exceed 128-bit arithmetic");
    }
    // Search cost: coefficient vectors times binary-search evaluations.
    const double polys = std::pow(static_cast<double>(coeff_max()), degree_d + 1);
    const double evals = polys * static_cast<double>(std::max<std::size_t>(output_count, 1)) *
                         (input_bits_beta + 1);
    if (evals > 1e9) {
        throw std::invalid_argument(
            "noise model: coefficient search needs ~" + std::to_string(evals) +
            " evaluations, beyond the desk-scale budget of 1e9");
    }
}

u128 eval_poly(const Poly& coeffs, std::uint64_t x) {
    u128 acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * x + *it;  // Horner
    }
    return acc;
}

Poly sample_monotone_poly(const NoiseModel& model, Rng& rng) {
    model.validate();
    Poly coeffs(static_cast<std::size_t>(model.degree_d) + 1);
    for (auto& c : coeffs) c = 1 + rng.next_below(model.coeff_max());
    return coeffs;
}

namespace {

// Preimage of `target` under a strictly increasing polynomial, if any.
bool invert(const Poly& coeffs, std::uint64_t input_max, u128 target, std::uint64_t& out) {
    std::uint64_t lo = 0, hi = input_max;
    if (eval_poly(coeffs, lo) > target || eval_poly(coeffs, hi) < target) return false;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (eval_poly(coeffs, mid) < target) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (eval_poly(coeffs, lo) != target) return false;
    out = lo;
    return true;
}

}  // namespace

RecoveryResult recover_inputs(const std::vector<u128>& outputs, const NoiseModel& model,
                              std::size_t ambiguity_cap) {
    if (outputs.empty()) throw std::invalid_argument("recover_inputs: no outputs");
    model.validate(outputs.size());

    const std::uint64_t cmax = model.coeff_max();
    const std::size_t ncoeff = static_cast<std::size_t>(model.degree_d) + 1;

    const u128 out_min = *std::min_element(outputs.begin(), outputs.end());
    const u128 out_max = *std::max_element(outputs.begin(), outputs.end());

    RecoveryResult result;
    std::set<std::vector<std::uint64_t>> distinct_lists;

    // Odometer over the full coefficient space; the range checks against the
    // smallest and largest output reject most candidates after one or two
    // evaluations.
    Poly coeffs(ncoeff, 1);
    std::vector<std::uint64_t> inputs(outputs.size());
    for (;;) {
        // F(0) = c0 <= min output and F(input_max) >= max output, or no
        // input list can possibly fit.
        bool feasible = coeffs[0] <= out_min && eval_poly(coeffs, model.input_max()) >= out_max;
        if (feasible) {
            bool all = true;
            for (std::size_t i = 0; i < outputs.size() && all; ++i) {
                all = invert(coeffs, model.input_max(), outputs[i], inputs[i]);
            }
            if (all) {
                ++result.candidate_polynomials;
                if (distinct_lists.insert(inputs).second &&
                    distinct_lists.size() > ambiguity_cap) {
                    throw AmbiguityLimitExceeded(
                        "recover_inputs: more than " + std::to_string(ambiguity_cap) +
                        " distinct consistent input lists");
                }
            }
        }
        // Advance the odometer.
        std::size_t pos = 0;
        while (pos < ncoeff && coeffs[pos] == cmax) {
            coeffs[pos] = 1;
            ++pos;
        }
        if (pos == ncoeff) break;
        ++coeffs[pos];
    }

    if (distinct_lists.empty()) {
        throw Inconsistent("recover_inputs: no model-compatible polynomial explains the outputs");
    }
    result.all_input_lists.assign(distinct_lists.begin(), distinct_lists.end());
    result.recovered_inputs = result.all_input_lists.front();
    return result;
}

}  // namespace ridehail::polyrecover
