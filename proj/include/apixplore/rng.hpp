#pragma once

/// @file rng.hpp
/// Deterministic, splittable random number generator.
///
/// All randomness in the engine flows through this type so that a 64-bit seed
/// reproduces identical candidate sequences, reports, and benchmark samples on
/// every platform.  Standard-library distributions are avoided on purpose:
/// their output is implementation-defined.

#include <cstdint>

namespace apix {

/// SplitMix64 stream.  split() derives an independent child stream, which lets
/// the explorer hand each property / iteration / trial its own generator
/// without the draws of one influencing another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Next raw 64-bit draw.
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, n).  n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    // Lemire multiply-shift; deterministic given fixed 128-bit arithmetic.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform draw in [lo, hi] inclusive.  Requires lo <= hi.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    // span == 0 means the full 64-bit range.
    const std::uint64_t draw = span == 0 ? next() : below(span);
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + draw);
  }

  /// Bernoulli draw with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  /// Independent child stream; advancing the child never touches the parent
  /// beyond this one draw.
  Rng split() { return Rng(next() ^ 0x5851f42d4c957f2dULL); }

 private:
  std::uint64_t state_;
};

}  // namespace apix
