#pragma once

#include <vector>

namespace nanotalbot {

/// J_0(x) ... J_n(x) for x >= 0, by Miller's backward recurrence
/// J_{k-1} = (2k/x) J_k - J_{k+1}, normalized with J_0 + 2 sum_k J_{2k} = 1.
/// The recurrence is started far enough above max(n, x) that the returned
/// values carry a relative error below 1e-13 wherever |J_k| > 1e-290.
std::vector<double> bessel_j_sequence(double x, int max_order);

/// Single integer-order value, any sign of order (J_{-n} = (-1)^n J_n).
double bessel_j(int order, double x);

}  // namespace nanotalbot
