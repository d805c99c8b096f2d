#include "nanotalbot/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "nanotalbot/error.hpp"

namespace nanotalbot {

namespace {

// Kronrod 15-point nodes (positive half) and weights; Gauss 7-point weights
// on the odd-indexed nodes.
constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b, long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = wk[7] * fc;
  double gauss = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * xk[i];
    const double pair = f(c - dx) + f(c + dx);
    kron += wk[i] * pair;
    if (i % 2 == 1) gauss += wg[i / 2] * pair;
  }
  evals += 15;
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options,
                                    const std::vector<double>& breakpoints) {
  detail::require(std::isfinite(a) && std::isfinite(b), "integrate_adaptive: infinite bounds");
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);

  std::vector<double> cuts{lo};
  for (double p : breakpoints)
    if (p > lo && p < hi) cuts.push_back(p);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Segment> heap;
  double total = 0, err = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = gauss_kronrod(f, cuts[i], cuts[i + 1], res.evaluations);
    total += s.value;
    err += s.error;
    heap.push(s);
  }

  int intervals = static_cast<int>(heap.size());
  while (err > std::max(options.abs_tol, options.rel_tol * std::abs(total)) &&
         intervals < options.max_intervals) {
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at machine precision
      heap.push({worst.a, worst.b, worst.value, 0.0});
      err -= worst.error;
      continue;
    }
    const Segment left = gauss_kronrod(f, worst.a, mid, res.evaluations);
    const Segment right = gauss_kronrod(f, mid, worst.b, res.evaluations);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // re-sum to shed accumulated rounding from the running updates
  total = 0;
  err = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = sign * total;
  res.abs_error = err;
  res.converged = err <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  return res;
}

QuadratureResult integrate_adaptive_2d(const std::function<double(double, double)>& f, double y0,
                                       double y1, double z0, double z1,
                                       const QuadratureOptions& options,
                                       const std::vector<double>& y_breaks,
                                       const std::vector<double>& z_breaks) {
  QuadratureOptions inner = options;
  inner.rel_tol = options.rel_tol * 1e-2;
  inner.abs_tol = 0.0;

  long evals = 0;
  bool inner_ok = true;
  const auto outer_fn = [&](double z) {
    const auto r = integrate_adaptive([&](double y) { return f(y, z); }, y0, y1, inner, y_breaks);
    evals += r.evaluations;
    inner_ok = inner_ok && r.converged;
    return r.value;
  };
  QuadratureResult res = integrate_adaptive(outer_fn, z0, z1, options, z_breaks);
  res.evaluations = evals;
  res.converged = res.converged && inner_ok;
  return res;
}

}  // namespace nanotalbot
