#pragma once

#include <cstdint>

namespace rtplan {

// SplitMix64: tiny fully-specified generator, so generated scenarios are
// byte-identical across platforms and standard-library versions (the
// std::uniform_* distributions are not portable). Streams derived with
// derive_seed are independent of the draw order in other streams.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi]. Modulo bias is irrelevant at these range sizes.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double probability) { return uniform_unit() < probability; }

  private:
    std::uint64_t state_;
};

// Deterministic child seed for an independent stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mixer(seed ^ (0xA3EC647659359ACDULL * (stream + 1)));
    return mixer.next();
}

}  // namespace rtplan
