#pragma once

#include <cstdint>
#include <random>

namespace awgnbandit {

/// Deterministic seeded random source.
///
/// A (seed, stream) pair fully determines the sample sequence on every
/// platform: the engine is std::mt19937_64, whose output sequence is fixed
/// by the standard, and every variate transform below is a fixed algorithm.
/// std::normal_distribution and friends are never used because their output
/// is implementation-defined.
///
/// Distinct stream ids are decorrelated from the same seed via splitmix64
/// mixing, so parallel replications can each own stream r without sharing
/// state.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    /// Standard normal via the basic Box-Muller transform. Normals are
    /// produced in pairs from two uniforms; the second of each pair is
    /// cached and returned by the next call.
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace awgnbandit
