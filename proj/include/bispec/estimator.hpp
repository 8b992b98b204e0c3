#pragma once

#include <cstddef>

#include "bispec/bispectrum.hpp"

namespace bispec {

/// OLS/KSW fit of the non-Gaussianity amplitude over a bispectrum table.
struct EstimatorReport {
  double f_hat = 0.0;
  double s_eta2 = 0.0;           // sum eta^2
  double var_theory = 0.0;       // 1 / s_eta2
  double cum4_bound = 0.0;       // sum eta^4 12/(2 l1 + 1) / s_eta2^4
  double tv_bound_finite = 0.0;  // (2 sqrt2 / 3) sqrt(cum4_bound / var^2)
  std::size_t n_triples_effective = 0;  // even-parity triples
};

/// f^ = sum eta B^ / sum eta^2. Throws std::domain_error when every eta
/// vanishes (degenerate design). Reductions are compensated and run in table
/// order, so the result is independent of any upstream parallel schedule.
EstimatorReport fit_fnl(const BispectrumTable& table);

double variance_theory(const BispectrumTable& table);

/// Prop.-5-style fourth-cumulant bound S_kappa / S_eta2^4 with
/// S_kappa = sum eta^4 12/(2 l1 + 1).
double cum4_bound(const BispectrumTable& table);

/// Tighter desk-scale variant with the exact per-triple cumulant
/// 6(6j + sum 1/(2 l_i + 1)) in place of the 12/(2 l1 + 1) factor.
double cum4_exact(const BispectrumTable& table);

double tv_bound_finite(const BispectrumTable& table);

}  // namespace bispec
