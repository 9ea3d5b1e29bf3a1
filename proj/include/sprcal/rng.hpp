#pragma once

#include <cstdint>
#include <random>

namespace sprcal {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used only to derive
// independent 64-bit seeds from (seed, stream) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// All randomness goes through this class. The engine is std::mt19937_64,
// whose output sequence is fixed by the C++ standard; the integer and real
// draws below are written out by hand because the standard distributions
// are implementation-defined and would break cross-platform replays.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_seed(seed, stream));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    int rademacher() { return (next() >> 63) ? 1 : -1; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace sprcal
