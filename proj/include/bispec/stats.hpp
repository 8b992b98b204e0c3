#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bispec {

/// Unbiased cumulant estimates (k-statistics) with delete-one jackknife
/// standard errors.
struct Cumulants {
  double mean = 0.0, mean_se = 0.0;
  double variance = 0.0, variance_se = 0.0;
  double skewness = 0.0, skewness_se = 0.0;  // k3, not standardized
  double k4 = 0.0, k4_se = 0.0;
  std::size_t n = 0;
};

Cumulants empirical_cumulants(const std::vector<double>& samples);

/// One-sample Kolmogorov-Smirnov against N(0,1) after (center, scale)
/// standardization; exact statistic, asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

KsResult ks_normality(const std::vector<double>& samples, double center, double scale);

/// Two-sample Kolmogorov-Smirnov with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Bootstrap standard error of the one-sample KS statistic.
double ks_statistic_bootstrap_se(const std::vector<double>& samples, double center,
                                 double scale, int n_boot, std::uint64_t seed);

/// Least-squares slope of log(value) against log(L).
struct ScalingFit {
  std::string quantity;
  std::vector<double> L;
  std::vector<double> value;
  double slope = 0.0;
  double slope_se = 0.0;
};

ScalingFit fit_loglog(const std::string& quantity, const std::vector<double>& L,
                      const std::vector<double>& value);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace bispec
