#pragma once

#include <functional>

namespace bispec {

/// Outcome of an adaptive integration.
struct QuadResult {
  double value = 0.0;
  double error = 0.0;       // achieved error estimate
  long evaluations = 0;
  bool converged = false;   // tolerance met within the interval budget
};

/// Adaptive Gauss-Kronrod (G7, K15) on [a, b]. Worst-interval-first
/// bisection with a deterministic tie order; endpoint values are never
/// requested, so integrable endpoint singularities are legal input.
QuadResult adaptive_integrate(const std::function<double(double)>& f, double a,
                              double b, double abs_tol, double rel_tol,
                              int max_intervals = 4000);

}  // namespace bispec
