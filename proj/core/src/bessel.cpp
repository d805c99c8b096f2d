#include "nanotalbot/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "nanotalbot/error.hpp"

namespace nanotalbot {

std::vector<double> bessel_j_sequence(double x, int max_order) {
  detail::require(max_order >= 0, "bessel_j_sequence: negative max_order");
  detail::require(std::isfinite(x) && x >= 0, "bessel_j_sequence: x must be finite and >= 0");

  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }

  const double top = std::max<double>(max_order, x);
  int start = static_cast<int>(top + 30.0 + std::sqrt(60.0 * top));
  start += start % 2;  // even start keeps the normalization sum aligned

  constexpr double big = 1e250;
  std::vector<double> work(static_cast<std::size_t>(start) + 2, 0.0);
  work[start + 1] = 0.0;
  work[start] = 1e-300;
  double even_sum = 0.0;

  for (int k = start; k >= 1; --k) {
    work[k - 1] = (2.0 * k / x) * work[k] - work[k + 1];
    if (std::abs(work[k - 1]) > big) {
      for (int i = k - 1; i <= start; ++i) work[i] /= big;
      even_sum /= big;
    }
    if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += work[k - 1];
  }

  const double norm = work[0] + 2.0 * even_sum;
  for (int n = 0; n <= max_order; ++n) out[n] = work[n] / norm;
  return out;
}

double bessel_j(int order, double x) {
  const double sign_x = x < 0 && (order % 2 != 0) ? -1.0 : 1.0;
  const int n = std::abs(order);
  const double value = bessel_j_sequence(std::abs(x), n)[n];
  const double sign_n = order < 0 && (n % 2 != 0) ? -1.0 : 1.0;
  return sign_x * sign_n * value;
}

}  // namespace nanotalbot
