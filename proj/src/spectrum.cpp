#include "bispec/spectrum.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "bispec/util.hpp"
#include "bispec/wigner.hpp"

namespace bispec {

double c_gaussian(int l, const PowerSpectrumModel& model) {
  if (l < 0) throw std::invalid_argument("c_gaussian: negative degree");
  model.validate();
  return model.amplitude * std::pow(1.0 + l, -model.alpha);
}

namespace {

// Tail of the truncated double sum. Uses sum_{l1} (2l1+1) 3j^2 = 1 and
// 3j^2 <= 1/(2l2+1) to reduce the cut-off part to a 1-D power-law tail,
// then bounds that tail by an integral. Deliberately conservative.
double tail_bound_impl(int l, const PowerSpectrumModel& m) {
  double lam = static_cast<double>(m.band_limit);
  double a = m.alpha;
  double A = m.amplitude;
  double floor_l1 = lam - l;  // smallest partner degree coupling past the cut
  if (floor_l1 < 1.0) floor_l1 = 1.0;
  double tail = 2.0 * A * A * std::pow(floor_l1, -a) * std::pow(lam, 2.0 - a) / (a - 2.0);
  // both l1 > Lambda and l2 > Lambda halves, and the 2/(4pi) prefactor
  return 2.0 * tail * 2.0 / (4.0 * M_PI);
}

}  // namespace

CTwoValue c_two_cg_form(int l, const PowerSpectrumModel& model) {
  model.validate();
  if (l < 1) throw std::invalid_argument("c_two: degree must be >= 1");
  CompensatedSum sum;
  for (int l1 = 1; l1 <= model.band_limit; ++l1) {
    double c1 = c_gaussian(l1, model);
    int lo = std::max(1, std::abs(l - l1));
    int hi = std::min(model.band_limit, l + l1);
    for (int l2 = lo; l2 <= hi; ++l2) {
      if (!is_even(static_cast<long>(l1) + l2 + l)) continue;
      double cgz = clebsch_gordan(l1, 0, l2, 0, l, 0);
      if (cgz == 0.0) continue;
      double w = (2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) /
                 (4.0 * M_PI * (2.0 * l + 1.0));
      sum.add(2.0 * w * cgz * cgz * c1 * c_gaussian(l2, model));
    }
  }
  return {sum.value(), tail_bound_impl(l, model)};
}

CTwoValue c_two_wigner_form(int l, const PowerSpectrumModel& model) {
  model.validate();
  if (l < 1) throw std::invalid_argument("c_two: degree must be >= 1");
  CompensatedSum sum;
  for (int l1 = 1; l1 <= model.band_limit; ++l1) {
    double c1 = c_gaussian(l1, model);
    int lo = std::max(1, std::abs(l - l1));
    int hi = std::min(model.band_limit, l + l1);
    for (int l2 = lo; l2 <= hi; ++l2) {
      double w3 = wigner3j_zero(l1, l2, l);
      if (w3 == 0.0) continue;
      double w = (2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) / (4.0 * M_PI);
      sum.add(2.0 * w * w3 * w3 * c1 * c_gaussian(l2, model));
    }
  }
  return {sum.value(), tail_bound_impl(l, model)};
}

namespace {

struct CTwoCache {
  std::mutex mu;
  std::map<std::tuple<double, double, int>, std::vector<double>> by_model;

  double get(int l, const PowerSpectrumModel& model) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(model.amplitude, model.alpha, model.band_limit);
    auto& entry = by_model[key];
    if (static_cast<std::size_t>(l) >= entry.size())
      entry.resize(static_cast<std::size_t>(l) + 1,
                   std::numeric_limits<double>::quiet_NaN());
    double& slot = entry[static_cast<std::size_t>(l)];
    if (std::isnan(slot)) slot = c_two_cg_form(l, model).value;
    return slot;
  }
};

CTwoCache& cache() {
  static CTwoCache c;
  return c;
}

}  // namespace

double c_two(int l, const PowerSpectrumModel& model) {
  model.validate();
  if (l < 1) throw std::invalid_argument("c_two: degree must be >= 1");
  return cache().get(l, model);
}

double c_two_tail_bound(int l, const PowerSpectrumModel& model) {
  return tail_bound_impl(l, model);
}

double c_total(int l, const PowerSpectrumModel& model) {
  if (l < 1) throw std::invalid_argument("c_total: degree must be >= 1");
  return c_gaussian(l, model) + model.f_nl * model.f_nl * c_two(l, model);
}

}  // namespace bispec
