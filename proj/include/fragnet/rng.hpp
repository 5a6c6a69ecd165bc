#pragma once

#include <cstdint>
#include <random>

namespace fragnet {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used both as a seed
// scrambler and as the replica stream derivation below.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic per-replica seed: replica r always gets the same stream
/// for a given master seed, no matter how replicas are scheduled.
inline std::uint64_t derived_seed(std::uint64_t master_seed, std::uint64_t replica) {
    return splitmix64(master_seed + (replica + 1) * 0x9e3779b97f4a7c15ull);
}

/// mt19937_64 wrapper with hand-rolled draws so the byte stream of results
/// depends only on the seed, not on the standard library's distribution
/// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// uniform double in [0, 1), 53 random bits
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// unbiased uniform integer in [0, n), n >= 1 (rejection sampling)
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t threshold = (0ull - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = eng_();
            if (r >= threshold)
                return r % n;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 eng_;
};

}  // namespace fragnet
