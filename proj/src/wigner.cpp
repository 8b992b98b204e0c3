#include "bispec/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "bispec/parallel.hpp"
#include "bispec/util.hpp"

namespace bispec {

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  static std::vector<double> table;
  static std::mutex mu;
  // fast path: table only ever grows
  if (static_cast<std::size_t>(n) < table.size()) return table[static_cast<std::size_t>(n)];
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<std::size_t>(n) >= table.size()) {
    std::size_t upto = std::max<std::size_t>(static_cast<std::size_t>(n) + 1, 1024);
    std::vector<double> bigger(upto);
    for (std::size_t k = 0; k < upto; ++k)
      bigger[k] = std::lgamma(static_cast<double>(k) + 1.0);
    table.swap(bigger);
  }
  return table[static_cast<std::size_t>(n)];
}

namespace {

void check_indices(int l1, int l2, int l3, int m1, int m2, int m3) {
  if (l1 < 0 || l2 < 0 || l3 < 0)
    throw std::invalid_argument("wigner3j: negative degree");
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3)
    throw std::invalid_argument("wigner3j: |m| exceeds degree");
}

}  // namespace

TripleSelection selection_rules(int l1, int l2, int l3, int m1, int m2, int m3) {
  TripleSelection s;
  s.triangle_ok = triangle_ok(l1, l2, l3);
  s.m_sum_zero = (m1 + m2 + m3) == 0;
  s.parity_even = is_even(static_cast<long>(l1) + l2 + l3);
  return s;
}

double wigner3j_zero(int l1, int l2, int l3) {
  if (l1 < 0 || l2 < 0 || l3 < 0)
    throw std::invalid_argument("wigner3j_zero: negative degree");
  long J = static_cast<long>(l1) + l2 + l3;
  if (!is_even(J) || !triangle_ok(l1, l2, l3)) return 0.0;
  int g = static_cast<int>(J / 2);
  double lognum = log_factorial(g) - log_factorial(g - l1) -
                  log_factorial(g - l2) - log_factorial(g - l3);
  double logsqrt = 0.5 * (log_factorial(l1 + l2 - l3) + log_factorial(l1 - l2 + l3) +
                          log_factorial(-l1 + l2 + l3) - log_factorial(static_cast<int>(J) + 1));
  return parity_sign(g) * std::exp(lognum + logsqrt);
}

double wigner3j_zero_asymptotic(int l1, int l2, int l3) {
  if (l1 < 0 || l2 < 0 || l3 < 0)
    throw std::invalid_argument("wigner3j_zero_asymptotic: negative degree");
  long J = static_cast<long>(l1) + l2 + l3;
  if (!is_even(J))
    throw std::domain_error("wigner3j_zero_asymptotic: odd parity");
  double d = (static_cast<double>(l1) + l2 + l3) * (static_cast<double>(l1) + l2 - l3) *
             (static_cast<double>(l1) - l2 + l3) * (-static_cast<double>(l1) + l2 + l3);
  if (d <= 0.0)
    throw std::domain_error("wigner3j_zero_asymptotic: degenerate or broken triangle");
  return parity_sign(J / 2) * std::sqrt(2.0 / M_PI) * std::pow(d, -0.25);
}

ThreeJRow::ThreeJRow(int l1, int l2, int l3, int m1) {
  if (l1 < 0 || l2 < 0 || l3 < 0 || std::abs(m1) > l1)
    throw std::invalid_argument("ThreeJRow: bad indices");
  if (!triangle_ok(l1, l2, l3)) return;  // empty row, all symbols vanish
  int lo = std::max(-l2, -l3 - m1);
  int hi = std::min(l2, l3 - m1);
  if (hi < lo) return;
  m2_min_ = lo;
  int n = hi - lo + 1;
  values_.assign(static_cast<std::size_t>(n), 0.0);

  const double L1 = static_cast<double>(l1), L2 = static_cast<double>(l2),
               L3 = static_cast<double>(l3);
  auto coef_x = [&](int m2) {
    int m3 = -m1 - m2;
    return std::sqrt((L2 - m2 + 1) * (L2 + m2)) * std::sqrt((L3 + m3 + 1) * (L3 - m3));
  };
  auto coef_z = [&](int m2) {
    int m3 = -m1 - m2;
    return std::sqrt((L2 + m2 + 1) * (L2 - m2)) * std::sqrt((L3 - m3 + 1) * (L3 + m3));
  };
  auto coef_y = [&](int m2) {
    double m3 = static_cast<double>(-m1 - m2);
    return L2 * (L2 + 1) + L3 * (L3 + 1) + 2.0 * m2 * m3 - L1 * (L1 + 1);
  };

  constexpr double kRescale = 1e250;
  // Sign of the true solution at m2_max relative to the stored values; the
  // backward seed is +1 so only the splice ratio can flip it.
  double top_sign = 1.0;
  if (n == 1) {
    values_[0] = 1.0;
  } else {
    // Backward pass from the top edge down to its turning point tb.
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);
    g[static_cast<std::size_t>(n - 1)] = 1.0;
    int tb = n - 1;
    for (int k = n - 1; k > 0; --k) {
      int m2 = lo + k;
      double znext = (k + 1 <= n - 1) ? coef_z(m2) * g[static_cast<std::size_t>(k + 1)] : 0.0;
      double val = -(coef_y(m2) * g[static_cast<std::size_t>(k)] + znext) / coef_x(m2);
      g[static_cast<std::size_t>(k - 1)] = val;
      if (std::abs(val) > kRescale) {
        for (int j = k - 1; j < n; ++j) g[static_cast<std::size_t>(j)] /= kRescale;
      }
      if (std::abs(g[static_cast<std::size_t>(k - 1)]) <
          std::abs(g[static_cast<std::size_t>(k)])) {
        tb = k - 1;
        break;
      }
      tb = k - 1;
    }

    if (tb == 0) {
      values_ = std::move(g);
    } else {
      // Forward pass up to a matching index near tb, then splice.
      int cmax = std::min(tb + 4, n - 1);
      std::vector<double> f(static_cast<std::size_t>(cmax) + 1, 0.0);
      f[0] = 1.0;
      for (int k = 0; k < cmax; ++k) {
        int m2 = lo + k;
        double xprev = (k > 0) ? coef_x(m2) * f[static_cast<std::size_t>(k - 1)] : 0.0;
        f[static_cast<std::size_t>(k + 1)] =
            -(coef_y(m2) * f[static_cast<std::size_t>(k)] + xprev) / coef_z(m2);
        if (std::abs(f[static_cast<std::size_t>(k + 1)]) > kRescale) {
          for (int j = 0; j <= k + 1; ++j) f[static_cast<std::size_t>(j)] /= kRescale;
        }
      }
      int c = tb;
      for (int k = tb; k <= cmax; ++k)
        if (std::abs(g[static_cast<std::size_t>(k)]) >
            std::abs(g[static_cast<std::size_t>(c)]))
          c = k;
      double ratio = f[static_cast<std::size_t>(c)] / g[static_cast<std::size_t>(c)];
      top_sign = (ratio < 0.0) ? -1.0 : 1.0;
      for (int k = 0; k < c; ++k) values_[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k)];
      for (int k = c; k < n; ++k)
        values_[static_cast<std::size_t>(k)] = ratio * g[static_cast<std::size_t>(k)];
    }
  }

  // Normalize with sum_m2 f^2 = 1/(2*l1+1) and pin the edge sign to the
  // (-1)^(l2-l3-m1) convention.
  CompensatedSum ss;
  double amax = 0.0;
  for (double v : values_) {
    amax = std::max(amax, std::abs(v));
  }
  if (amax == 0.0) return;  // cannot happen for a valid triangle; keep zeros
  for (double v : values_) ss.add((v / amax) * (v / amax));
  double lambda = 1.0 / (amax * std::sqrt((2.0 * l1 + 1.0) * ss.value()));
  double want = parity_sign(static_cast<long>(l2) - l3 - m1);
  if (top_sign * want < 0.0) lambda = -lambda;
  for (double& v : values_) v *= lambda;
}

double wigner3j(int l1, int l2, int l3, int m1, int m2, int m3) {
  check_indices(l1, l2, l3, m1, m2, m3);
  if (m1 + m2 + m3 != 0 || !triangle_ok(l1, l2, l3)) return 0.0;
  if (m1 == 0 && m2 == 0 && m3 == 0) return wigner3j_zero(l1, l2, l3);
  return ThreeJRow(l1, l2, l3, m1).at(m2);
}

double clebsch_gordan(int l1, int m1, int l2, int m2, int l, int m) {
  check_indices(l1, l2, l, m1, m2, m);
  return parity_sign(static_cast<long>(l1) - l2 + m) * std::sqrt(2.0 * l + 1.0) *
         wigner3j(l1, l2, l, m1, m2, -m);
}

double gaunt(int l1, int m1, int l2, int m2, int l, int m) {
  check_indices(l1, l2, l, m1, m2, m);
  if (m1 + m2 != m) return 0.0;
  double w0 = wigner3j_zero(l1, l2, l);
  if (w0 == 0.0) return 0.0;
  double norm = std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) * (2.0 * l + 1.0) /
                          (4.0 * M_PI));
  return parity_sign(m) * norm * wigner3j(l1, l2, l, m1, m2, -m) * w0;
}

namespace {

// log of the Racah triangle coefficient sqrt(...) for a valid triad
double log_triangle_coef(int a, int b, int c) {
  return 0.5 * (log_factorial(a + b - c) + log_factorial(a - b + c) +
                log_factorial(-a + b + c) - log_factorial(a + b + c + 1));
}

}  // namespace

double wigner6j(int l1, int l2, int l3, int l4, int l5, int l6) {
  if (l1 < 0 || l2 < 0 || l3 < 0 || l4 < 0 || l5 < 0 || l6 < 0)
    throw std::invalid_argument("wigner6j: negative degree");
  if (!triangle_ok(l1, l2, l3) || !triangle_ok(l1, l5, l6) ||
      !triangle_ok(l4, l2, l6) || !triangle_ok(l4, l5, l3))
    return 0.0;
  long a1 = static_cast<long>(l1) + l2 + l3;
  long a2 = static_cast<long>(l1) + l5 + l6;
  long a3 = static_cast<long>(l4) + l2 + l6;
  long a4 = static_cast<long>(l4) + l5 + l3;
  long b1 = static_cast<long>(l1) + l2 + l4 + l5;
  long b2 = static_cast<long>(l2) + l3 + l5 + l6;
  long b3 = static_cast<long>(l3) + l1 + l6 + l4;
  long tmin = std::max({a1, a2, a3, a4});
  long tmax = std::min({b1, b2, b3});
  if (tmax < tmin) return 0.0;
  double pre = log_triangle_coef(l1, l2, l3) + log_triangle_coef(l1, l5, l6) +
               log_triangle_coef(l4, l2, l6) + log_triangle_coef(l4, l5, l3);
  std::vector<double> exps;
  exps.reserve(static_cast<std::size_t>(tmax - tmin + 1));
  for (long t = tmin; t <= tmax; ++t) {
    double e = log_factorial(static_cast<int>(t + 1)) -
               log_factorial(static_cast<int>(t - a1)) -
               log_factorial(static_cast<int>(t - a2)) -
               log_factorial(static_cast<int>(t - a3)) -
               log_factorial(static_cast<int>(t - a4)) -
               log_factorial(static_cast<int>(b1 - t)) -
               log_factorial(static_cast<int>(b2 - t)) -
               log_factorial(static_cast<int>(b3 - t));
    exps.push_back(e);
  }
  double emax = *std::max_element(exps.begin(), exps.end());
  CompensatedSum sum;
  for (long t = tmin; t <= tmax; ++t)
    sum.add(parity_sign(t) * std::exp(exps[static_cast<std::size_t>(t - tmin)] - emax));
  return sum.value() * std::exp(pre + emax);
}

ZeroMTable::ZeroMTable(int lmax, std::size_t max_bytes) : lmax_(lmax) {
  if (lmax < 2) throw std::invalid_argument("ZeroMTable: lmax must be >= 2");
  const std::size_t npairs = static_cast<std::size_t>(lmax + 1) * (lmax + 2) / 2;
  pair_offset_.assign(npairs + 1, 0);
  std::size_t total = 0;
  std::size_t pair = 0;
  for (int l1 = 0; l1 <= lmax; ++l1) {
    for (int l2 = l1; l2 <= lmax; ++l2, ++pair) {
      pair_offset_[pair] = total;
      int hi = std::min(lmax, l1 + l2);
      if (hi >= l2) total += static_cast<std::size_t>(hi - l2 + 1);
    }
  }
  pair_offset_[npairs] = total;
  if (total * sizeof(double) > max_bytes)
    throw std::length_error("ZeroMTable: table exceeds the memory budget");
  values_.assign(total, 0.0);

  parallel_for(npairs, [&](std::size_t p) {
    // invert p -> (l1, l2)
    std::size_t q = p;
    int l1 = 0;
    while (q >= static_cast<std::size_t>(lmax_ - l1 + 1)) {
      q -= static_cast<std::size_t>(lmax_ - l1 + 1);
      ++l1;
    }
    int l2 = l1 + static_cast<int>(q);
    int hi = std::min(lmax_, l1 + l2);
    std::size_t base = pair_offset_[p];
    for (int l3 = l2; l3 <= hi; ++l3)
      values_[base + static_cast<std::size_t>(l3 - l2)] = wigner3j_zero(l1, l2, l3);
  });
}

std::size_t ZeroMTable::index_of(int l1, int l2, int l3) const {
  // caller guarantees l1 <= l2 <= l3 <= min(lmax, l1+l2)
  std::size_t pair = static_cast<std::size_t>(l1) * (2 * lmax_ - l1 + 3) / 2 +
                     static_cast<std::size_t>(l2 - l1);
  return pair_offset_[pair] + static_cast<std::size_t>(l3 - l2);
}

double ZeroMTable::value(int a, int b, int c) const {
  int l1 = a, l2 = b, l3 = c;
  if (l1 > l2) std::swap(l1, l2);
  if (l2 > l3) std::swap(l2, l3);
  if (l1 > l2) std::swap(l1, l2);
  if (l1 < 0 || l3 > lmax_)
    throw std::out_of_range("ZeroMTable::value: degree outside table");
  if (!triangle_ok(l1, l2, l3) || !is_even(static_cast<long>(l1) + l2 + l3)) return 0.0;
  return values_[index_of(l1, l2, l3)];
}

namespace {
constexpr char kMagic[8] = {'B', 'S', 'P', 'W', '3', 'J', '0', '\0'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void ZeroMTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("ZeroMTable::save: cannot open " + path);
  out.write(kMagic, 8);
  std::uint32_t ver = kVersion;
  std::uint32_t l = static_cast<std::uint32_t>(lmax_);
  std::uint64_t count = values_.size();
  std::uint64_t checksum = fnv1a64(values_.data(), values_.size() * sizeof(double));
  out.write(reinterpret_cast<const char*>(&ver), sizeof ver);
  out.write(reinterpret_cast<const char*>(&l), sizeof l);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(&checksum), sizeof checksum);
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!out) throw std::runtime_error("ZeroMTable::save: write failed");
}

ZeroMTable ZeroMTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("ZeroMTable::load: cannot open " + path);
  char magic[8];
  std::uint32_t ver = 0, l = 0;
  std::uint64_t count = 0, checksum = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&ver), sizeof ver);
  in.read(reinterpret_cast<char*>(&l), sizeof l);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  in.read(reinterpret_cast<char*>(&checksum), sizeof checksum);
  if (!in || std::memcmp(magic, kMagic, 8) != 0 || ver != kVersion)
    throw std::runtime_error("ZeroMTable::load: bad header in " + path);
  ZeroMTable t(static_cast<int>(l));
  if (t.values_.size() != count ||
      fnv1a64(t.values_.data(), t.values_.size() * sizeof(double)) != checksum) {
    // fall back to reading the payload so a cache from another build still loads
    std::vector<double> payload(count);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in || fnv1a64(payload.data(), payload.size() * sizeof(double)) != checksum)
      throw std::runtime_error("ZeroMTable::load: checksum mismatch in " + path);
    t.values_ = std::move(payload);
  }
  return t;
}

}  // namespace bispec
