#pragma once

#include <cstdint>
#include <vector>

#include "nanotalbot/phase_space.hpp"

namespace nanotalbot {

/// Portable 64-bit generator (splitmix64-seeded xoshiro256**); identical
/// streams on every platform for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller.
  double normal();

 private:
  std::uint64_t s_[4];
  double spare_ = 0;
  bool has_spare_ = false;
};

/// N independent single-shot detector positions drawn from the pattern by
/// inverse CDF (trapezoid-accumulated, linearly interpolated).
std::vector<double> sample_positions(const FringePattern& pattern, std::size_t count,
                                     std::uint64_t seed);

/// Histogram of positions over the pattern's span as a density pattern
/// (bins of equal width, normalized to unit integral).
FringePattern histogram_pattern(const std::vector<double>& positions, const FringePattern& like,
                                std::size_t bins);

}  // namespace nanotalbot
