#pragma once

#include <stdexcept>
#include <vector>

namespace bispec {

/// Power-law angular power spectrum C_{l;G} = A (1+l)^(-alpha) together with
/// the quadratic-perturbation amplitude and the simulation band limit used to
/// truncate the (formally infinite) second-chaos sums.
struct PowerSpectrumModel {
  double amplitude = 1.0;   // A > 0
  double alpha = 5.0;       // spectral index, > 2 (> 4 for the asymptotics)
  double f_nl = 0.0;        // quadratic perturbation amplitude
  int band_limit = 32;      // Lambda_sim, truncation of l1,l2 sums

  void validate() const {
    if (amplitude <= 0.0) throw std::invalid_argument("model: amplitude must be > 0");
    if (alpha <= 2.0) throw std::invalid_argument("model: alpha must be > 2");
    if (band_limit < 1) throw std::invalid_argument("model: band_limit must be >= 1");
  }
};

/// C_{l;G} = A (1+l)^(-alpha).
double c_gaussian(int l, const PowerSpectrumModel& model);

/// Result of the truncated C_{l;2} double sum plus an analytic tail bound for
/// the part cut off at band_limit.
struct CTwoValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// C_{l;2} via the Clebsch-Gordan form of the double sum over l1,l2 <= Lambda_sim.
CTwoValue c_two_cg_form(int l, const PowerSpectrumModel& model);

/// Same quantity evaluated through zero-m 3j symbols; agrees with the CG form
/// up to floating error (the identity linking the two representations).
CTwoValue c_two_wigner_form(int l, const PowerSpectrumModel& model);

/// Cached C_{l;2} (CG form). Cache is keyed on (A, alpha, band_limit) and is
/// fill-once, read-only afterwards.
double c_two(int l, const PowerSpectrumModel& model);

/// Tail bound reported alongside the cached value.
double c_two_tail_bound(int l, const PowerSpectrumModel& model);

/// C_l = C_{l;G} + f_nl^2 C_{l;2}.
double c_total(int l, const PowerSpectrumModel& model);

}  // namespace bispec
