#pragma once
// Deterministic 64-bit PRNG used by every randomized component.
//
// The generator is SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter
// advanced by the golden-gamma constant, passed through a fixed avalanche
// finalizer. One seed -> one stream, identical on every platform.
//
// Derived streams (per trial, per m-value) are obtained by remixing the
// master seed with the derivation keys, so workers never share state.
//
// Bounded draws use the multiply-high mapping floor(x * n / 2^64), which is
// branch-free and has bias below n / 2^64 (irrelevant at the population
// sizes used here, and identical everywhere).

#include <cstdint>
#include <vector>

namespace qgt {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 avalanche finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform index in [0, n) via the multiply-high mapping.
    std::uint32_t next_index(std::uint32_t n) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

  private:
    std::uint64_t state_;
};

// Stream derivation: fold each key into the seed through the finalizer.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
    return mix64(master + kGoldenGamma) ^ mix64(key + 2 * kGoldenGamma);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key1,
                                    std::uint64_t key2) {
    return derive_seed(derive_seed(master, key1), key2);
}

// Uniform weight-k subset of {0,...,n-1} by partial Fisher-Yates shuffle.
// Returned indices are sorted.
std::vector<std::uint32_t> sample_subset(std::uint32_t n, std::uint32_t k,
                                         SplitMix64& rng);

} // namespace qgt
