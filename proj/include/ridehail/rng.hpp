#pragma once

#include <cstdint>
#include <string_view>

namespace ridehail {

// splitmix64 step; also used as the mixing function for seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derive the seed of a named substream. Identical (master, label, a, b)
// always yields the same seed, so trial k of cell "attack/1000" is the same
// random stream no matter which worker runs it or which cells exist around
// it. Reports are byte-identical across reruns and thread counts because
// every random decision descends from one of these derived seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the label
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    std::uint64_t s = master;
    std::uint64_t out = splitmix64(s);
    s ^= h;
    out ^= splitmix64(s);
    s ^= a + 0x9e3779b97f4a7c15ull;
    out ^= splitmix64(s);
    s ^= b + 0x7f4a7c159e3779b9ull;
    out ^= splitmix64(s);
    return out;
}

// xoshiro256** — small, fast, and fully specified here so streams are
// reproducible across platforms and standard-library versions (std::
// distributions are not pinned by the standard).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_real(double lo, double hi) { return lo + next_double() * (hi - lo); }

    // Unbiased uniform in [0, n) via rejection from the top of the range.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t v = next_u64();
        while (v > limit) v = next_u64();
        return v % n;
    }

    // Uniform integer in [lo, hi], both ends included. Wraparound arithmetic
    // keeps the span well-defined for any lo <= hi.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) +
                                         (span == 0 ? next_u64() : next_below(span)));
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

}  // namespace ridehail
