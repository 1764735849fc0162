#pragma once

#include <cstdint>

namespace lcv {

/// Counter-based deterministic generator. Every draw is a pure function of
/// (seed, stream, counter), so results are reproducible bit-for-bit across
/// platforms and independent of call interleaving between streams.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() { return at(counter_++); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double next_symm() { return 2.0 * next_double() - 1.0; }

    /// Stateless access: value at an explicit counter.
    std::uint64_t at(std::uint64_t counter) const {
        return mix(seed_ ^ mix(stream_ ^ 0x9e3779b97f4a7c15ull) ^ mix(counter));
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace lcv
