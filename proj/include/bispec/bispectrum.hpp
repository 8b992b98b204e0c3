#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bispec/field.hpp"
#include "bispec/spectrum.hpp"
#include "bispec/wigner.hpp"

namespace bispec {

/// Strictly ordered multipole triple of the narrow-band set Lambda_{L,L0}.
struct MultipoleTriple {
  int l1 = 0, l2 = 0, l3 = 0;
  bool parity_even = false;
  double delta = 0.0;  // (l1+l2+l3)(l1+l2-l3)(l1-l2+l3)(-l1+l2+l3)
};

/// All triples L0 <= l1 < l2 < l3 <= L with l2-l1 <= l3 <= l1+l2, in
/// lexicographic order. Throws on L0 < 1 or L0 >= L; an empty result for
/// L - L0 < 2 is legal (the caller may warn).
std::vector<MultipoleTriple> admissible_triples(int L, int L0);

/// ceil(r*L) band floor used throughout the narrow-band construction.
int band_floor(double r, int L);

/// Theoretical bispectrum weight (the OLS design template):
///   eta = 2 zeta w3j0(l1,l2,l3) h (C1C2+C1C3+C2C3)/sqrt(C1C2C3)
/// with h = sqrt((2l1+1)(2l2+1)(2l3+1)/(4pi)), C = C_{l;G}, and
/// zeta = 1 + d12 + d23 + 3 d13 (identically 1 on strictly ordered triples).
/// The normalization makes eta the leading-order expected sample bispectrum
/// per unit f_nl, so the OLS fit is unbiased: E[B^] = f_nl eta + O(f_nl^3).
/// Zero on odd-parity triples.
double eta_weight(const MultipoleTriple& t, const PowerSpectrumModel& model);

/// Result of one sample-bispectrum evaluation. For even parity the m-sum is
/// real and `residual` is the leftover imaginary part; for odd parity the
/// reality constraint makes the sum purely imaginary instead, so `residual`
/// is the leftover real part and `value` vanishes identically.
struct BhatValue {
  double value = 0.0;
  double residual = 0.0;
};

/// B^ = sum_{m1,m2} 3j(m1,m2,m3) a~_{l1 m1} a~_{l2 m2} a~_{l3 m3}, m3 = -m1-m2.
BhatValue sample_bispectrum(const HarmonicCoefficientSet& alm,
                            const MultipoleTriple& t);

/// Same contraction with the per-row 3j values supplied by the caller
/// (rows[k] is the ThreeJRow at m1 = k - l1).
BhatValue sample_bispectrum(const HarmonicCoefficientSet& alm,
                            const MultipoleTriple& t,
                            const std::vector<ThreeJRow>& rows);

/// Precomputed 3j rows for every triple; shared, read-only across threads.
class TripleRowCache {
 public:
  TripleRowCache(const std::vector<MultipoleTriple>& triples,
                 std::size_t max_bytes = 512ull << 20);
  const std::vector<ThreeJRow>& rows(std::size_t triple_index) const {
    return rows_[triple_index];
  }

 private:
  std::vector<std::vector<ThreeJRow>> rows_;
};

/// Fourth cumulant of B^ for a Gaussian field, Wigner-6j closed form:
/// 6 ( {l1 l2 l3; l1 l2 l3} + sum_i 1/(2 l_i + 1) ).
double cum4_bhat_theory(const MultipoleTriple& t);

/// Empirical fourth cumulant (unbiased k-statistic) of replicated B^ samples
/// paired with the theoretical value.
struct Cum4Estimate {
  double empirical = 0.0;
  double jackknife_se = 0.0;
  double theory = 0.0;
};
Cum4Estimate empirical_cum4_bhat(const std::vector<double>& samples,
                                 const MultipoleTriple& t);

/// Reduced bispectrum b = B / w3j0(l1,l2,l3); rejects odd parity.
double reduced_bispectrum(const MultipoleTriple& t, double b_value);

/// Per-triple table feeding the estimator.
struct BispectrumTable {
  std::vector<MultipoleTriple> triples;
  std::vector<double> eta;
  std::vector<double> b_hat;
  std::size_t n_triples() const { return triples.size(); }
};

/// Assembles eta for a triple list (B^ left at zero).
BispectrumTable make_table(const std::vector<MultipoleTriple>& triples,
                           const PowerSpectrumModel& model);

}  // namespace bispec
