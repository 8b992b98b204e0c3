#include "bispec/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "bispec/util.hpp"

namespace bispec {

namespace {

double sum_eta2(const BispectrumTable& t) {
  CompensatedSum s;
  for (double e : t.eta) s.add(e * e);
  return s.value();
}

}  // namespace

double variance_theory(const BispectrumTable& table) {
  double s = sum_eta2(table);
  if (s <= 0.0) throw std::domain_error("variance_theory: all eta vanish");
  return 1.0 / s;
}

double cum4_bound(const BispectrumTable& table) {
  double s = sum_eta2(table);
  if (s <= 0.0) throw std::domain_error("cum4_bound: all eta vanish");
  CompensatedSum kappa;
  for (std::size_t i = 0; i < table.n_triples(); ++i) {
    double e2 = table.eta[i] * table.eta[i];
    kappa.add(e2 * e2 * 12.0 / (2.0 * table.triples[i].l1 + 1.0));
  }
  return kappa.value() / (s * s * s * s);
}

double cum4_exact(const BispectrumTable& table) {
  double s = sum_eta2(table);
  if (s <= 0.0) throw std::domain_error("cum4_exact: all eta vanish");
  CompensatedSum kappa;
  for (std::size_t i = 0; i < table.n_triples(); ++i) {
    double e2 = table.eta[i] * table.eta[i];
    if (e2 == 0.0) continue;
    kappa.add(e2 * e2 * cum4_bhat_theory(table.triples[i]));
  }
  return kappa.value() / (s * s * s * s);
}

double tv_bound_finite(const BispectrumTable& table) {
  double v = variance_theory(table);
  double c = cum4_bound(table);
  return (2.0 * std::sqrt(2.0) / 3.0) * std::sqrt(c / (v * v));
}

EstimatorReport fit_fnl(const BispectrumTable& table) {
  if (table.eta.size() != table.n_triples() || table.b_hat.size() != table.n_triples())
    throw std::invalid_argument("fit_fnl: ragged table");
  EstimatorReport r;
  CompensatedSum num;
  CompensatedSum den;
  for (std::size_t i = 0; i < table.n_triples(); ++i) {
    num.add(table.eta[i] * table.b_hat[i]);
    den.add(table.eta[i] * table.eta[i]);
    if (table.triples[i].parity_even) ++r.n_triples_effective;
  }
  r.s_eta2 = den.value();
  if (r.s_eta2 <= 0.0) throw std::domain_error("fit_fnl: degenerate design, all eta vanish");
  r.f_hat = num.value() / r.s_eta2;
  r.var_theory = 1.0 / r.s_eta2;
  r.cum4_bound = cum4_bound(table);
  r.tv_bound_finite = (2.0 * std::sqrt(2.0) / 3.0) *
                      std::sqrt(r.cum4_bound / (r.var_theory * r.var_theory));
  return r;
}

}  // namespace bispec
