#include "bispec/bispectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "bispec/parallel.hpp"
#include "bispec/stats.hpp"
#include "bispec/util.hpp"

namespace bispec {

int band_floor(double r, int L) {
  return static_cast<int>(std::ceil(r * static_cast<double>(L)));
}

std::vector<MultipoleTriple> admissible_triples(int L, int L0) {
  if (L0 < 1 || L0 >= L)
    throw std::invalid_argument("admissible_triples: need 1 <= L0 < L");
  std::vector<MultipoleTriple> out;
  for (int l1 = L0; l1 <= L; ++l1) {
    for (int l2 = l1 + 1; l2 <= L; ++l2) {
      int hi = std::min(L, l1 + l2);
      for (int l3 = l2 + 1; l3 <= hi; ++l3) {
        MultipoleTriple t;
        t.l1 = l1;
        t.l2 = l2;
        t.l3 = l3;
        t.parity_even = is_even(static_cast<long>(l1) + l2 + l3);
        double a = static_cast<double>(l1), b = l2, c = l3;
        t.delta = (a + b + c) * (a + b - c) * (a - b + c) * (-a + b + c);
        out.push_back(t);
      }
    }
  }
  return out;
}

double eta_weight(const MultipoleTriple& t, const PowerSpectrumModel& model) {
  if (!t.parity_even) return 0.0;
  double w0 = wigner3j_zero(t.l1, t.l2, t.l3);
  if (w0 == 0.0) return 0.0;
  double c1 = c_gaussian(t.l1, model);
  double c2 = c_gaussian(t.l2, model);
  double c3 = c_gaussian(t.l3, model);
  // Normalized so that E[B^] = f_nl * eta + O(f_nl^3) for the quadratically
  // perturbed field: a Wick contraction of the three Gaussian-Gaussian-
  // quadratic terms gives 2 C_i C_j sqrt(X/4pi) w3j(m) w3j(0) per pairing,
  // X = (2l1+1)(2l2+1)(2l3+1). Cross-checked by Monte Carlo (the fitted
  // E[f^]/f_nl equals 1 within MC error under this normalization).
  double h = std::sqrt((2.0 * t.l1 + 1.0) * (2.0 * t.l2 + 1.0) * (2.0 * t.l3 + 1.0) /
                       (4.0 * M_PI));
  double zeta = 1.0;  // strict ordering kills every Kronecker delta
  if (t.l1 == t.l2) zeta += 1.0;
  if (t.l2 == t.l3) zeta += 1.0;
  if (t.l1 == t.l3) zeta += 3.0;
  double ratio = (c1 * c2 + c1 * c3 + c2 * c3) / std::sqrt(c1 * c2 * c3);
  return 2.0 * zeta * w0 * h * ratio;
}

BispectrumTable make_table(const std::vector<MultipoleTriple>& triples,
                           const PowerSpectrumModel& model) {
  BispectrumTable tab;
  tab.triples = triples;
  tab.eta.resize(triples.size());
  tab.b_hat.assign(triples.size(), 0.0);
  for (std::size_t i = 0; i < triples.size(); ++i)
    tab.eta[i] = eta_weight(triples[i], model);
  return tab;
}

namespace {

BhatValue contract(const HarmonicCoefficientSet& alm, const MultipoleTriple& t,
                   const std::vector<ThreeJRow>& rows) {
  CompensatedSum re, im;
  for (int m1 = -t.l1; m1 <= t.l1; ++m1) {
    const ThreeJRow& row = rows[static_cast<std::size_t>(m1 + t.l1)];
    if (row.empty()) continue;
    std::complex<double> a1 = alm.get(t.l1, m1);
    int lo = row.m2_min();
    int hi = row.m2_max();
    const auto& w = row.values();
    for (int m2 = lo; m2 <= hi; ++m2) {
      double wj = w[static_cast<std::size_t>(m2 - lo)];
      if (wj == 0.0) continue;
      std::complex<double> term =
          a1 * alm.get(t.l2, m2) * alm.get(t.l3, -m1 - m2) * wj;
      re.add(term.real());
      im.add(term.imag());
    }
  }
  BhatValue out;
  if (t.parity_even) {
    out.value = re.value();
    out.residual = im.value();
  } else {
    // odd parity: the reality constraint makes the contraction purely
    // imaginary, and the estimator never consumes it (eta = 0 there)
    out.value = re.value();
    out.residual = re.value();
  }
  return out;
}

}  // namespace

BhatValue sample_bispectrum(const HarmonicCoefficientSet& alm,
                            const MultipoleTriple& t,
                            const std::vector<ThreeJRow>& rows) {
  if (t.l3 > alm.band_limit())
    throw std::invalid_argument("sample_bispectrum: triple outside coefficient band");
  return contract(alm, t, rows);
}

BhatValue sample_bispectrum(const HarmonicCoefficientSet& alm, const MultipoleTriple& t) {
  std::vector<ThreeJRow> rows;
  rows.reserve(static_cast<std::size_t>(2 * t.l1 + 1));
  for (int m1 = -t.l1; m1 <= t.l1; ++m1) rows.emplace_back(t.l1, t.l2, t.l3, m1);
  return sample_bispectrum(alm, t, rows);
}

TripleRowCache::TripleRowCache(const std::vector<MultipoleTriple>& triples,
                               std::size_t max_bytes) {
  std::size_t bytes = 0;
  for (const auto& t : triples)
    bytes += static_cast<std::size_t>(2 * t.l1 + 1) *
             static_cast<std::size_t>(2 * t.l2 + 1) * sizeof(double);
  if (bytes > max_bytes)
    throw std::length_error("TripleRowCache: estimated size exceeds budget");
  rows_.resize(triples.size());
  parallel_for(triples.size(), [&](std::size_t i) {
    const auto& t = triples[i];
    auto& rs = rows_[i];
    rs.reserve(static_cast<std::size_t>(2 * t.l1 + 1));
    for (int m1 = -t.l1; m1 <= t.l1; ++m1) rs.emplace_back(t.l1, t.l2, t.l3, m1);
  });
}

double cum4_bhat_theory(const MultipoleTriple& t) {
  double sj = wigner6j(t.l1, t.l2, t.l3, t.l1, t.l2, t.l3);
  return 6.0 * (sj + 1.0 / (2.0 * t.l1 + 1.0) + 1.0 / (2.0 * t.l2 + 1.0) +
                1.0 / (2.0 * t.l3 + 1.0));
}

Cum4Estimate empirical_cum4_bhat(const std::vector<double>& samples,
                                 const MultipoleTriple& t) {
  if (samples.size() < 1000)
    throw std::invalid_argument("empirical_cum4_bhat: need at least 1e3 replications");
  Cumulants c = empirical_cumulants(samples);
  Cum4Estimate e;
  e.empirical = c.k4;
  e.jackknife_se = c.k4_se;
  e.theory = cum4_bhat_theory(t);
  return e;
}

double reduced_bispectrum(const MultipoleTriple& t, double b_value) {
  if (!t.parity_even)
    throw std::domain_error("reduced_bispectrum: odd parity, zero-m 3j vanishes");
  double w0 = wigner3j_zero(t.l1, t.l2, t.l3);
  if (w0 == 0.0)
    throw std::domain_error("reduced_bispectrum: vanishing zero-m 3j");
  return b_value / w0;
}

}  // namespace bispec
