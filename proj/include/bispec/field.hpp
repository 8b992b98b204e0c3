#pragma once

#include <complex>
#include <vector>

#include "bispec/grid.hpp"
#include "bispec/rng.hpp"
#include "bispec/spectrum.hpp"

namespace bispec {

/// Harmonic coefficients of a real centered field: l in [1, band], m in
/// [0, l] stored explicitly, m < 0 served through the reality constraint
/// a_{l,-m} = (-1)^m conj(a_{l,m}). The l = 0 slot exists but stays zero.
class HarmonicCoefficientSet {
 public:
  HarmonicCoefficientSet() = default;
  explicit HarmonicCoefficientSet(int band_limit);

  int band_limit() const { return band_; }

  std::complex<double> get(int l, int m) const;
  void set(int l, int m, std::complex<double> v);  // m >= 0 only

  /// Packed m >= 0 payload, plm_index layout. Mutable access for transforms.
  const std::vector<std::complex<double>>& packed() const { return coeffs_; }
  std::vector<std::complex<double>>& packed() { return coeffs_; }

  /// Max |a_{l,0}.imag()| over l; the reality constraint requires 0.
  double reality_residual() const;

 private:
  int band_ = 0;
  std::vector<std::complex<double>> coeffs_;
};

/// Independent Gaussian coefficients: a_{l,0} ~ N(0, C_l) real, and for m > 0
/// independent real/imaginary parts N(0, C_l/2). Draw order is fixed, so a
/// given (seed, stream) reproduces bit-identical output.
HarmonicCoefficientSet sample_gaussian_alm(const PowerSpectrumModel& model,
                                           int band_limit, RngStream& rng);

/// Pointwise field values on the grid, row-major (theta, phi).
std::vector<double> synthesize(const HarmonicCoefficientSet& alms,
                               const SphereGrid& grid);

/// Quadrature evaluation of the analysis integrals up to band_limit; exact
/// for inputs band-limited within the grid capacity.
HarmonicCoefficientSet analyze(const std::vector<double>& values,
                               const SphereGrid& grid, int band_limit);

/// Field value at an arbitrary point (ct = cos theta).
double synthesize_point(const HarmonicCoefficientSet& alms, double ct, double phi);

/// Coefficients of H2(T_G) = T_G^2 - E[T_G^2] through the pixel route:
/// synthesize, square, subtract the truncated variance, analyze. The output
/// band defaults to twice the input band; the grid must afford exact
/// analysis at that band (use SphereGrid::for_band(input band)).
HarmonicCoefficientSet alm_two_pixel(const HarmonicCoefficientSet& gaussian_alms,
                                     const PowerSpectrumModel& model,
                                     const SphereGrid& grid, int out_band = -1);

/// Same object through the explicit Gaunt-coefficient double sum. O(band^6):
/// a truth oracle for small bands, guarded by max_band.
HarmonicCoefficientSet alm_two_harmonic(const HarmonicCoefficientSet& gaussian_alms,
                                        int out_band = -1, int max_band = 16);

/// a~_{l,m} = (a_{l,m;G} + f_nl a_{l,m;2}) / sqrt(C_{l;G}), restricted to
/// l <= analysis_band.
HarmonicCoefficientSet perturb_and_normalize(const HarmonicCoefficientSet& gaussian_alms,
                                             const HarmonicCoefficientSet& alm2,
                                             const PowerSpectrumModel& model,
                                             int analysis_band);

/// Truncated spatial variance sum_{l<=band} (2l+1) C_{l;G} / (4 pi): the
/// constant subtracted inside H2 so that the simulated band-limited field has
/// exactly zero-mean square.
double truncated_field_variance(const PowerSpectrumModel& model, int band);

/// Rotation by ZYZ Euler angles applied to grid nodes; returns the values of
/// the synthesized field at the rotated nodes (used for isotropy checks).
std::vector<double> synthesize_rotated(const HarmonicCoefficientSet& alms,
                                       const SphereGrid& grid, double alpha,
                                       double beta, double gamma);

}  // namespace bispec
