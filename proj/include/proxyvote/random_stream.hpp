#pragma once

#include <cstdint>
#include <random>

namespace proxyvote {

/// Seeded pseudo-random stream with platform-independent output.
///
/// The standard distributions are implementation-defined, so the uniform
/// helpers here are written directly against the 64-bit engine output. Given
/// the same seed material every platform sees the same sequence.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed);

    /// Independent stream keyed by (seed, tag, a, b). Used to give every
    /// Monte Carlo trial its own stream regardless of scheduling.
    static RandomStream derive(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                               std::uint64_t b);

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1), 53 bits of resolution.
    double uniform01();

    /// Uniform in [0, bound). bound must be > 0.
    std::uint64_t uniform_index(std::uint64_t bound);

  private:
    explicit RandomStream(std::seed_seq& seq) : engine_(seq) {}

    std::mt19937_64 engine_;
};

}  // namespace proxyvote
