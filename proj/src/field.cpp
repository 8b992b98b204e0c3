#include "bispec/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bispec/util.hpp"
#include "bispec/wigner.hpp"

namespace bispec {

HarmonicCoefficientSet::HarmonicCoefficientSet(int band_limit) : band_(band_limit) {
  if (band_limit < 1)
    throw std::invalid_argument("HarmonicCoefficientSet: band_limit must be >= 1");
  coeffs_.assign(plm_index(band_limit, band_limit) + 1, {0.0, 0.0});
}

std::complex<double> HarmonicCoefficientSet::get(int l, int m) const {
  if (l < 0 || l > band_ || std::abs(m) > l)
    throw std::out_of_range("HarmonicCoefficientSet::get: bad index");
  if (m >= 0) return coeffs_[plm_index(l, m)];
  std::complex<double> v = std::conj(coeffs_[plm_index(l, -m)]);
  return ((-m) & 1) ? -v : v;
}

void HarmonicCoefficientSet::set(int l, int m, std::complex<double> v) {
  if (l < 1 || l > band_ || m < 0 || m > l)
    throw std::out_of_range("HarmonicCoefficientSet::set: bad index");
  if (m == 0) v = {v.real(), 0.0};  // a_{l,0} is real for a real field
  coeffs_[plm_index(l, m)] = v;
}

double HarmonicCoefficientSet::reality_residual() const {
  double r = 0.0;
  for (int l = 1; l <= band_; ++l)
    r = std::max(r, std::abs(coeffs_[plm_index(l, 0)].imag()));
  return r;
}

HarmonicCoefficientSet sample_gaussian_alm(const PowerSpectrumModel& model,
                                           int band_limit, RngStream& rng) {
  if (band_limit < 1)
    throw std::invalid_argument("sample_gaussian_alm: band_limit must be >= 1");
  HarmonicCoefficientSet alms(band_limit);
  for (int l = 1; l <= band_limit; ++l) {
    double cl = c_gaussian(l, model);
    double sd = std::sqrt(cl);
    double sd_half = std::sqrt(0.5 * cl);
    alms.set(l, 0, {sd * rng.next_gaussian(), 0.0});
    for (int m = 1; m <= l; ++m)
      alms.set(l, m, {sd_half * rng.next_gaussian(), sd_half * rng.next_gaussian()});
  }
  return alms;
}

namespace {

// per-row longitude coefficients g_m = sum_l a_{l,m} P~_{l,m}(x)
void row_fourier(const HarmonicCoefficientSet& alms, const std::vector<double>& plm,
                 std::vector<std::complex<double>>& gm) {
  int band = alms.band_limit();
  gm.assign(static_cast<std::size_t>(band) + 1, {0.0, 0.0});
  const auto& packed = alms.packed();
  for (int m = 0; m <= band; ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (int l = std::max(1, m); l <= band; ++l)
      acc += packed[plm_index(l, m)] * plm[plm_index(l, m)];
    gm[static_cast<std::size_t>(m)] = acc;
  }
}

// cos(m phi_j) / sin(m phi_j) tables, m-major
struct PhiTables {
  std::vector<double> c, s;
  int n_phi;
  PhiTables(const SphereGrid& grid, int mmax) : n_phi(grid.n_phi()) {
    c.resize(static_cast<std::size_t>(mmax + 1) * n_phi);
    s.resize(c.size());
    for (int m = 0; m <= mmax; ++m)
      for (int j = 0; j < n_phi; ++j) {
        double mp = m * grid.phi(j);
        c[static_cast<std::size_t>(m) * n_phi + j] = std::cos(mp);
        s[static_cast<std::size_t>(m) * n_phi + j] = std::sin(mp);
      }
  }
  double cos_m(int m, int j) const { return c[static_cast<std::size_t>(m) * n_phi + j]; }
  double sin_m(int m, int j) const { return s[static_cast<std::size_t>(m) * n_phi + j]; }
};

}  // namespace

std::vector<double> synthesize(const HarmonicCoefficientSet& alms, const SphereGrid& grid) {
  int band = alms.band_limit();
  if (grid.capacity() < band)
    throw std::invalid_argument("synthesize: grid too small for the band limit");
  std::vector<double> values(grid.n_nodes(), 0.0);
  PhiTables tab(grid, band);
  std::vector<double> plm;
  std::vector<std::complex<double>> gm;
  for (int i = 0; i < grid.n_theta(); ++i) {
    normalized_plm(band, grid.node_x(i), plm);
    row_fourier(alms, plm, gm);
    for (int j = 0; j < grid.n_phi(); ++j) {
      double v = gm[0].real();
      for (int m = 1; m <= band; ++m) {
        v += 2.0 * (gm[static_cast<std::size_t>(m)].real() * tab.cos_m(m, j) -
                    gm[static_cast<std::size_t>(m)].imag() * tab.sin_m(m, j));
      }
      values[static_cast<std::size_t>(i) * grid.n_phi() + j] = v;
    }
  }
  return values;
}

double synthesize_point(const HarmonicCoefficientSet& alms, double ct, double phi) {
  int band = alms.band_limit();
  std::vector<double> plm;
  normalized_plm(band, ct, plm);
  std::vector<std::complex<double>> gm;
  row_fourier(alms, plm, gm);
  double v = gm[0].real();
  for (int m = 1; m <= band; ++m) {
    double c = std::cos(m * phi), s = std::sin(m * phi);
    v += 2.0 * (gm[static_cast<std::size_t>(m)].real() * c -
                gm[static_cast<std::size_t>(m)].imag() * s);
  }
  return v;
}

HarmonicCoefficientSet analyze(const std::vector<double>& values,
                               const SphereGrid& grid, int band_limit) {
  if (band_limit < 1) throw std::invalid_argument("analyze: band_limit must be >= 1");
  if (grid.capacity() < band_limit)
    throw std::invalid_argument("analyze: band_limit above grid capacity");
  if (values.size() != grid.n_nodes())
    throw std::invalid_argument("analyze: value array does not match grid");
  HarmonicCoefficientSet alms(band_limit);
  auto& packed = alms.packed();
  PhiTables tab(grid, band_limit);
  std::vector<double> plm;
  std::vector<std::complex<double>> gm(static_cast<std::size_t>(band_limit) + 1);
  const double dphi = 2.0 * M_PI / grid.n_phi();
  for (int i = 0; i < grid.n_theta(); ++i) {
    // longitude transform of this row
    for (int m = 0; m <= band_limit; ++m) gm[static_cast<std::size_t>(m)] = {0.0, 0.0};
    for (int j = 0; j < grid.n_phi(); ++j) {
      double v = values[static_cast<std::size_t>(i) * grid.n_phi() + j];
      for (int m = 0; m <= band_limit; ++m)
        gm[static_cast<std::size_t>(m)] +=
            v * std::complex<double>(tab.cos_m(m, j), -tab.sin_m(m, j));
    }
    normalized_plm(band_limit, grid.node_x(i), plm);
    double w = grid.weight(i) * dphi;
    for (int l = 1; l <= band_limit; ++l)
      for (int m = 0; m <= l; ++m)
        packed[plm_index(l, m)] += w * plm[plm_index(l, m)] * gm[static_cast<std::size_t>(m)];
  }
  // enforce exact reality of the m = 0 coefficients
  for (int l = 1; l <= band_limit; ++l) {
    auto v = packed[plm_index(l, 0)];
    packed[plm_index(l, 0)] = {v.real(), 0.0};
  }
  return alms;
}

double truncated_field_variance(const PowerSpectrumModel& model, int band) {
  CompensatedSum s;
  for (int l = 1; l <= band; ++l)
    s.add((2.0 * l + 1.0) * c_gaussian(l, model) / (4.0 * M_PI));
  return s.value();
}

HarmonicCoefficientSet alm_two_pixel(const HarmonicCoefficientSet& gaussian_alms,
                                     const PowerSpectrumModel& model,
                                     const SphereGrid& grid, int out_band) {
  int band = gaussian_alms.band_limit();
  if (out_band < 0) out_band = 2 * band;
  // exactness: T^2 has degree 2*band, the analysis harmonic adds out_band
  if (2 * grid.n_theta() - 1 < 2 * band + out_band || grid.n_phi() < 2 * band + out_band + 1)
    throw std::invalid_argument("alm_two_pixel: grid too small for band 2*band_limit");
  std::vector<double> values = synthesize(gaussian_alms, grid);
  double mean2 = truncated_field_variance(model, band);
  for (double& v : values) v = v * v - mean2;
  return analyze(values, grid, out_band);
}

HarmonicCoefficientSet alm_two_harmonic(const HarmonicCoefficientSet& gaussian_alms,
                                        int out_band, int max_band) {
  int band = gaussian_alms.band_limit();
  if (band > max_band)
    throw std::length_error("alm_two_harmonic: band limit above the cost guard");
  if (out_band < 0) out_band = 2 * band;
  HarmonicCoefficientSet out(out_band);
  for (int l = 1; l <= out_band; ++l) {
    for (int m = 0; m <= l; ++m) {
      std::complex<double> acc{0.0, 0.0};
      for (int l1 = 1; l1 <= band; ++l1) {
        int lo = std::max(1, std::abs(l - l1));
        int hi = std::min(band, l + l1);
        for (int l2 = lo; l2 <= hi; ++l2) {
          if (!is_even(static_cast<long>(l1) + l2 + l)) continue;
          for (int m1 = -l1; m1 <= l1; ++m1) {
            int m2 = m - m1;
            if (std::abs(m2) > l2) continue;
            double g = gaunt(l1, m1, l2, m2, l, m);
            if (g == 0.0) continue;
            acc += gaussian_alms.get(l1, m1) * gaussian_alms.get(l2, m2) * g;
          }
        }
      }
      out.set(l, m, acc);
    }
  }
  return out;
}

HarmonicCoefficientSet perturb_and_normalize(const HarmonicCoefficientSet& gaussian_alms,
                                             const HarmonicCoefficientSet& alm2,
                                             const PowerSpectrumModel& model,
                                             int analysis_band) {
  if (analysis_band < 1 || analysis_band > gaussian_alms.band_limit())
    throw std::invalid_argument("perturb_and_normalize: bad analysis band");
  if (model.f_nl != 0.0 && alm2.band_limit() < analysis_band)
    throw std::invalid_argument("perturb_and_normalize: alm2 band too small");
  HarmonicCoefficientSet out(analysis_band);
  for (int l = 1; l <= analysis_band; ++l) {
    double norm = 1.0 / std::sqrt(c_gaussian(l, model));
    for (int m = 0; m <= l; ++m) {
      std::complex<double> v = gaussian_alms.get(l, m);
      if (model.f_nl != 0.0) v += model.f_nl * alm2.get(l, m);
      out.set(l, m, v * norm);
    }
  }
  return out;
}

std::vector<double> synthesize_rotated(const HarmonicCoefficientSet& alms,
                                       const SphereGrid& grid, double alpha,
                                       double beta, double gamma) {
  // R = Rz(alpha) Ry(beta) Rz(gamma); field value at R * node
  double ca = std::cos(alpha), sa = std::sin(alpha);
  double cb = std::cos(beta), sb = std::sin(beta);
  double cg = std::cos(gamma), sg = std::sin(gamma);
  double R[3][3] = {
      {ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb},
      {sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb},
      {-sb * cg, sb * sg, cb}};
  std::vector<double> values(grid.n_nodes());
  for (int i = 0; i < grid.n_theta(); ++i) {
    double ct = grid.node_x(i);
    double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < grid.n_phi(); ++j) {
      double phi = grid.phi(j);
      double p[3] = {st * std::cos(phi), st * std::sin(phi), ct};
      double q[3];
      for (int r = 0; r < 3; ++r)
        q[r] = R[r][0] * p[0] + R[r][1] * p[1] + R[r][2] * p[2];
      double ct2 = std::clamp(q[2], -1.0, 1.0);
      double phi2 = std::atan2(q[1], q[0]);
      values[static_cast<std::size_t>(i) * grid.n_phi() + j] =
          synthesize_point(alms, ct2, phi2);
    }
  }
  return values;
}

}  // namespace bispec
