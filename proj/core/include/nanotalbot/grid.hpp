#pragma once

#include <cstddef>
#include <vector>

namespace nanotalbot {

/// Uniform sample grid x_i = start + i * spacing, i in [0, count).
struct SampleGrid {
  double start = 0;
  double spacing = 0;
  std::size_t count = 0;

  static SampleGrid centered(double center, double half_width, std::size_t count);

  double at(std::size_t i) const { return start + static_cast<double>(i) * spacing; }
  double back() const { return at(count - 1); }
  std::vector<double> points() const;
  /// Every stride-th point, starting at offset.
  SampleGrid strided(std::size_t stride, std::size_t offset = 0) const;
};

}  // namespace nanotalbot
