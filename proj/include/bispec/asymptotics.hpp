#pragma once

#include <vector>

namespace bispec {

/// Quartic triangle polynomial
/// (x1+x2+x3)(x1+x2-x3)(x1-x2+x3)(-x1+x2+x3); homogeneous of degree 4,
/// positive exactly on non-degenerate triangles.
double delta(double x1, double x2, double x3);

/// Q(u, v) = delta(u, v, 1).
double q_shape(double u, double v);

/// Scale kernel of the reduced form: (1 - (r/u)^lambda)/lambda for
/// lambda != 0, ln(u/r) at lambda = 0 (its continuity limit).
double dr_scale_kernel(double lambda, double u, double r);

struct DrOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double eps0 = 1e-3;   // first exclusion band width (d >= 1/2 only)
  int levels = 6;       // band sequence eps0 / 4^k
  int max_intervals = 4000;
};

struct DrResult {
  double value = 0.0;
  double error = 0.0;        // quadrature + extrapolation residual
  bool divergent = false;    // edge contribution did not stabilize
  std::vector<double> eps_values;  // I(eps_k) diagnostics when exclusion ran
};

/// Reduced 2-D form of the triangle-power integral:
///   D_r(a,b,c,d) = int_{Omega_r} u^a v^b Q^{-d}(u,v) K_lambda(u) du dv,
/// lambda = a+b+c-4d+3, K_lambda(u) = (1 - (r/u)^lambda)/lambda for
/// lambda != 0 and ln(u/r) at lambda = 0 (continuity limit). For d >= 1/2
/// the degenerate-triangle edge u+v = 1 is handled by an epsilon-exclusion
/// band with Richardson extrapolation; when the band contribution fails to
/// stabilize the result carries the divergence flag instead of a value claim.
DrResult d_r_reduced(double a, double b, double c, double d, double r,
                     const DrOptions& opts = {});

/// Direct 3-D quadrature over A_r = {r <= x1 < x2 < x3 <= 1, triangle} of
/// x1^a x2^b x3^c Delta^{-d}. The same epsilon-exclusion (mapped through the
/// scaling change of variables) applies for d >= 1/2.
DrResult d_r_bruteforce(double a, double b, double c, double d, double r,
                        const DrOptions& opts = {});

/// Volume of the ordered simplex {r <= x1 < x2 < x3 <= 1} without the
/// triangle constraint (companion check; equals (1-r)^3/6 analytically).
DrResult ordered_simplex_volume(double r, const DrOptions& opts = {});

/// Closed-form asymptotic constants of the narrow-band estimator.
struct AsymptoticReport {
  double alpha = 0.0;
  double r = 0.0;
  double amplitude = 1.0;
  double i_eta2 = 0.0;          // D_r(1-a, 1-a, 1+a, 1/2)
  double i_eta2_error = 0.0;
  double i_kappa = 0.0;         // D_r(1-2a, 2(1-a), 2(1+a), 1)
  double i_kappa_error = 0.0;
  bool i_kappa_divergent = false;
  double c_eta2 = 0.0;          // A / pi^4
  double c_kappa = 0.0;         // 6 A^2 / pi^8
  double sigma2_fnl = 0.0;      // 1 / (C_eta2 I_eta2)
  double k_fnl = 0.0;           // C_kappa I_kappa / (C_eta2 I_eta2)^4
  double c_tv = 0.0;            // (4/sqrt(3)) sqrt(I_kappa) / I_eta2
};

AsymptoticReport asymptotic_report(double alpha, double r, double amplitude,
                                   const DrOptions& opts = {});

}  // namespace bispec
