#include "nanotalbot/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "nanotalbot/error.hpp"

namespace nanotalbot {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * constants::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * constants::pi * u2);
}

std::vector<double> sample_positions(const FringePattern& pattern, std::size_t count,
                                     std::uint64_t seed) {
  const auto n = pattern.density.size();
  detail::require(n >= 2 && n == pattern.grid.count, "sample_positions: malformed pattern");

  std::vector<double> cdf(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = std::max(0.0, pattern.density[i - 1]);
    const double b = std::max(0.0, pattern.density[i]);
    cdf[i] = cdf[i - 1] + 0.5 * (a + b) * pattern.grid.spacing;
  }
  const double total = cdf.back();
  if (!(total > 0) || !std::isfinite(total))
    throw InvalidArgument("sample_positions: pattern is not normalizable");

  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) {
    const double target = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), n - 1);
    std::size_t lo = hi == 0 ? 0 : hi - 1;
    while (lo > 0 && cdf[hi] == cdf[lo]) --lo;  // step over empty cells
    const double span = cdf[hi] - cdf[lo];
    const double frac = span > 0 ? (target - cdf[lo]) / span : 0.0;
    x = pattern.grid.at(lo) + frac * (pattern.grid.at(hi) - pattern.grid.at(lo));
  }
  return out;
}

FringePattern histogram_pattern(const std::vector<double>& positions, const FringePattern& like,
                                std::size_t bins) {
  detail::require(bins >= 2, "histogram_pattern: need >= 2 bins");
  const double lo = like.grid.start;
  const double hi = like.grid.back();
  const double width = (hi - lo) / static_cast<double>(bins);

  FringePattern out;
  out.grid = {lo + 0.5 * width, width, bins};
  out.density.assign(bins, 0.0);
  out.nominal_period = like.nominal_period;
  out.meta = like.meta;
  out.meta.source = "histogram";

  std::size_t kept = 0;
  for (double x : positions) {
    if (x < lo || x > hi) continue;
    auto b = static_cast<std::size_t>((x - lo) / width);
    out.density[std::min(b, bins - 1)] += 1.0;
    ++kept;
  }
  if (kept > 0)
    for (auto& v : out.density) v /= static_cast<double>(kept) * width;
  return out;
}

}  // namespace nanotalbot
