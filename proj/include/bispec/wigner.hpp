#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bispec {

/// A single (degree, order) index pair.
struct AngularMomentumIndex {
  int ell = 0;
  int m = 0;
  bool valid() const { return ell >= 0 && m >= -ell && m <= ell; }
};

/// Selection rules derived from the six indices of a 3j symbol.
struct TripleSelection {
  bool triangle_ok = false;
  bool m_sum_zero = false;
  bool parity_even = false;
};

TripleSelection selection_rules(int l1, int l2, int l3, int m1, int m2, int m3);

/// Wigner 3j symbol for integer angular momenta. Zero whenever a selection
/// rule fails; throws std::invalid_argument on negative ell or |m| > ell.
///
/// General-m values come from the normalized three-term m-recursion (see
/// ThreeJRow); the textbook single-sum evaluation in double precision loses
/// up to ~8 digits to cancellation already around ell ~ 50, which is not
/// enough for the 1e-12 identity suite this library has to satisfy.
double wigner3j(int l1, int l2, int l3, int m1, int m2, int m3);

/// Closed-form 3j symbol with m1 = m2 = m3 = 0 (log-factorial evaluation,
/// no cancellation). Zero for odd l1+l2+l3 or a broken triangle.
double wigner3j_zero(int l1, int l2, int l3);

/// Large-l approximation (-1)^{(l1+l2+l3)/2} sqrt(2/pi) Delta^{-1/4}.
/// Requires even parity and a strictly non-degenerate triangle; throws
/// std::domain_error otherwise (the approximation is undefined at Delta = 0).
double wigner3j_zero_asymptotic(int l1, int l2, int l3);

/// Clebsch-Gordan coefficient C^{l,m}_{l1,m1;l2,m2}.
double clebsch_gordan(int l1, int m1, int l2, int m2, int l, int m);

/// Integral of Y_{l1,m1} Y_{l2,m2} conj(Y_{l,m}) over the sphere.
double gaunt(int l1, int m1, int l2, int m2, int l, int m);

/// Wigner 6j symbol via the Racah single-sum formula with log factorials.
/// Zero when any of the four embedded triads violates the triangle rule.
double wigner6j(int l1, int l2, int l3, int l4, int l5, int l6);

/// One row of 3j symbols: fixed (l1, m1), m2 sweeping its admissible range,
/// m3 = -m1-m2. Values satisfy sum_m2 f(m2)^2 = 1/(2*l1+1) by construction.
class ThreeJRow {
 public:
  ThreeJRow() = default;
  ThreeJRow(int l1, int l2, int l3, int m1);

  int m2_min() const { return m2_min_; }
  int m2_max() const { return m2_min_ + static_cast<int>(values_.size()) - 1; }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }

  /// Value at the given m2; zero outside the admissible range.
  double at(int m2) const {
    int k = m2 - m2_min_;
    if (k < 0 || k >= static_cast<int>(values_.size())) return 0.0;
    return values_[static_cast<std::size_t>(k)];
  }

 private:
  int m2_min_ = 0;
  std::vector<double> values_;
};

/// Dense table of zero-m 3j symbols over all triangles with l1<=l2<=l3<=L.
/// Odd-parity entries are stored as exact zeros. Construction is parallel
/// over (l1,l2) pairs into preallocated slots, so the result is independent
/// of the schedule and bit-identical across runs.
class ZeroMTable {
 public:
  explicit ZeroMTable(int lmax, std::size_t max_bytes = kDefaultBudget);

  int lmax() const { return lmax_; }
  std::size_t entry_count() const { return values_.size(); }

  /// Lookup for any index order; returns 0 for broken triangles, odd parity,
  /// and degrees above lmax (the symbol is genuinely zero in the first two
  /// cases; out-of-range degrees throw).
  double value(int l1, int l2, int l3) const;

  /// Versioned little-endian cache file (magic, version, L, count, checksum).
  void save(const std::string& path) const;
  static ZeroMTable load(const std::string& path);

  static constexpr std::size_t kDefaultBudget = 256ull << 20;

 private:
  ZeroMTable() = default;
  std::size_t index_of(int l1, int l2, int l3) const;

  int lmax_ = -1;
  std::vector<std::size_t> pair_offset_;  // (l1,l2) -> base slot
  std::vector<double> values_;
};

}  // namespace bispec
