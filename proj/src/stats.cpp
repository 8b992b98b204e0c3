#include "bispec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bispec/rng.hpp"
#include "bispec/util.hpp"

namespace bispec {

namespace {

// k-statistics from centered power sums (S1 = 0 by construction):
//   k2 = S2/(n-1)
//   k3 = n S3 / ((n-1)(n-2))
//   k4 = [ n^2 (n+1) S4 - 3 n (n-1) S2^2 ] / ( n (n-1)(n-2)(n-3) )
struct KStats {
  double k2, k3, k4;
};

KStats kstats_from_sums(double s2, double s3, double s4, double n) {
  KStats k;
  k.k2 = s2 / (n - 1.0);
  k.k3 = n * s3 / ((n - 1.0) * (n - 2.0));
  k.k4 = (n * n * (n + 1.0) * s4 - 3.0 * n * (n - 1.0) * s2 * s2) /
         (n * (n - 1.0) * (n - 2.0) * (n - 3.0));
  return k;
}

}  // namespace

Cumulants empirical_cumulants(const std::vector<double>& samples) {
  std::size_t n = samples.size();
  if (n < 5) throw std::invalid_argument("empirical_cumulants: need at least 5 samples");
  double nn = static_cast<double>(n);

  CompensatedSum s1;
  for (double x : samples) s1.add(x);
  double mean = s1.value() / nn;

  CompensatedSum c2, c3, c4;
  for (double x : samples) {
    double d = x - mean;
    double d2 = d * d;
    c2.add(d2);
    c3.add(d2 * d);
    c4.add(d2 * d2);
  }
  double S2 = c2.value(), S3 = c3.value(), S4 = c4.value();
  KStats k = kstats_from_sums(S2, S3, S4, nn);

  Cumulants out;
  out.n = n;
  out.mean = mean;
  out.variance = k.k2;
  out.skewness = k.k3;
  out.k4 = k.k4;
  out.mean_se = std::sqrt(std::max(0.0, k.k2) / nn);

  // delete-one jackknife on the centered power sums (shift invariance of
  // k2..k4 lets us keep the global centering)
  double m = nn - 1.0;
  CompensatedSum v2, v3, v4;
  double mean2 = 0, mean3 = 0, mean4 = 0;
  std::vector<double> j2(n), j3(n), j4(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = samples[i] - mean;
    double d2 = d * d;
    // leave-one-out sums still centered at the global mean; the residual
    // recentering shift is O(1/n) and cancels in k >= 2 to the accuracy the
    // jackknife needs, but we apply it exactly anyway:
    double mu_i = -d / m;  // leave-one-out mean in globally centered coordinates
    double s1i = -d;       // sum of (x - mean) without sample i
    double s2i = S2 - d2;
    double s3i = S3 - d2 * d;
    double s4i = S4 - d2 * d2;
    // recenter the sums around the leave-one-out mean
    double t2 = s2i - 2.0 * mu_i * s1i + m * mu_i * mu_i;
    double t3 = s3i - 3.0 * mu_i * s2i + 3.0 * mu_i * mu_i * s1i - m * mu_i * mu_i * mu_i;
    double t4 = s4i - 4.0 * mu_i * s3i + 6.0 * mu_i * mu_i * s2i -
                4.0 * mu_i * mu_i * mu_i * s1i + m * mu_i * mu_i * mu_i * mu_i;
    KStats ki = kstats_from_sums(t2, t3, t4, m);
    j2[i] = ki.k2;
    j3[i] = ki.k3;
    j4[i] = ki.k4;
    mean2 += ki.k2;
    mean3 += ki.k3;
    mean4 += ki.k4;
  }
  mean2 /= nn;
  mean3 /= nn;
  mean4 /= nn;
  for (std::size_t i = 0; i < n; ++i) {
    v2.add((j2[i] - mean2) * (j2[i] - mean2));
    v3.add((j3[i] - mean3) * (j3[i] - mean3));
    v4.add((j4[i] - mean4) * (j4[i] - mean4));
  }
  double factor = m / nn;
  out.variance_se = std::sqrt(std::max(0.0, factor * v2.value()));
  out.skewness_se = std::sqrt(std::max(0.0, factor * v3.value()));
  out.k4_se = std::sqrt(std::max(0.0, factor * v4.value()));
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// asymptotic Kolmogorov survival function Q(t) = 2 sum (-1)^{k-1} e^{-2k^2t^2}
double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 101; ++k) {
    double term = 2.0 * std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-14) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_normality(const std::vector<double>& samples, double center, double scale) {
  if (samples.size() < 5) throw std::invalid_argument("ks_normality: too few samples");
  if (scale <= 0.0) throw std::invalid_argument("ks_normality: scale must be > 0");
  std::vector<double> z(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    z[i] = (samples[i] - center) / scale;
  std::sort(z.begin(), z.end());
  double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double f = normal_cdf(z[i]);
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                             f - static_cast<double>(i) / n));
  }
  return {d, kolmogorov_q(std::sqrt(n) * d)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q(ne * d)};
}

double ks_statistic_bootstrap_se(const std::vector<double>& samples, double center,
                                 double scale, int n_boot, std::uint64_t seed) {
  if (n_boot < 2) throw std::invalid_argument("ks_statistic_bootstrap_se: n_boot >= 2");
  RngStream rng(seed, 0xB007ULL);
  std::vector<double> stats(static_cast<std::size_t>(n_boot));
  std::vector<double> resampled(samples.size());
  for (int b = 0; b < n_boot; ++b) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      std::uint64_t k = rng.next_u64() % samples.size();
      resampled[i] = samples[k];
    }
    stats[static_cast<std::size_t>(b)] = ks_normality(resampled, center, scale).statistic;
  }
  double mean = 0.0;
  for (double s : stats) mean += s;
  mean /= static_cast<double>(n_boot);
  double var = 0.0;
  for (double s : stats) var += (s - mean) * (s - mean);
  var /= static_cast<double>(n_boot - 1);
  return std::sqrt(var);
}

ScalingFit fit_loglog(const std::string& quantity, const std::vector<double>& L,
                      const std::vector<double>& value) {
  if (L.size() != value.size() || L.size() < 3)
    throw std::invalid_argument("fit_loglog: need >= 3 matching points");
  ScalingFit fit;
  fit.quantity = quantity;
  fit.L = L;
  fit.value = value;
  std::size_t n = L.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (L[i] <= 0.0 || value[i] <= 0.0)
      throw std::domain_error("fit_loglog: nonpositive point");
    lx[i] = std::log(L[i]);
    ly[i] = std::log(value[i]);
    sx += lx[i];
    sy += ly[i];
  }
  double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ly[i] - my - fit.slope * (lx[i] - mx);
    rss += r * r;
  }
  if (n > 2) fit.slope_se = std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
  return fit;
}

}  // namespace bispec
