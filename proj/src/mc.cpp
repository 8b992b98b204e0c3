#include "bispec/mc.hpp"

#include <cmath>
#include <stdexcept>

#include "bispec/field.hpp"
#include "bispec/parallel.hpp"
#include "bispec/util.hpp"

namespace bispec {

void ExperimentConfig::validate() const {
  if (amplitude <= 0.0) throw std::invalid_argument("config: amplitude must be > 0");
  if (alpha <= 4.0) throw std::invalid_argument("config: alpha must be > 4");
  if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("config: r must lie in (0, 1/2)");
  if (replications < 100) throw std::invalid_argument("config: need R >= 100");
  if (L_list.empty()) throw std::invalid_argument("config: empty L list");
  if (lambda_sim_factor < 2)
    throw std::invalid_argument("config: lambda_sim_factor must be >= 2");
  for (int L : L_list)
    if (L < band_floor(r, L) + 2)
      throw std::invalid_argument("config: L too small for the band floor");
}

ReplicationSet run_replications(const ExperimentConfig& config, int L,
                                bool collect_bhat) {
  config.validate();
  ReplicationSet out;
  out.L = L;
  out.L0 = band_floor(config.r, L);

  PowerSpectrumModel model;
  model.amplitude = config.amplitude;
  model.alpha = config.alpha;
  model.f_nl = config.f_nl_at(L);
  model.band_limit = config.lambda_sim_factor * L;

  out.triples = admissible_triples(L, out.L0);
  const std::size_t T = out.triples.size();
  out.eta.resize(T);
  for (std::size_t i = 0; i < T; ++i) out.eta[i] = eta_weight(out.triples[i], model);
  {
    CompensatedSum s;
    for (double e : out.eta) s.add(e * e);
    out.s_eta2 = s.value();
  }

  TripleRowCache rows(out.triples);
  const bool quadratic = model.f_nl != 0.0;
  const int sample_band = quadratic ? model.band_limit : L;
  // one grid shared read-only across replications (pixel route only)
  SphereGrid grid = quadratic && config.route == ExperimentConfig::Route::pixel
                        ? SphereGrid::for_band(model.band_limit)
                        : SphereGrid(1, 1);

  const std::size_t R = static_cast<std::size_t>(config.replications);
  std::vector<double> fhat_slots(R, 0.0);
  std::vector<double> bhat_slots(collect_bhat ? R * T : 0, 0.0);
  std::vector<double> resid_slots(R, 0.0);
  std::vector<char> failed(R, 0);

  parallel_for(R, [&](std::size_t rep) {
    try {
      RngStream rng(config.base_seed, rep);
      HarmonicCoefficientSet alms = sample_gaussian_alm(model, sample_band, rng);
      HarmonicCoefficientSet alm2;
      if (quadratic) {
        if (config.route == ExperimentConfig::Route::pixel)
          alm2 = alm_two_pixel(alms, model, grid, L);
        else
          alm2 = alm_two_harmonic(alms, L);
      }
      HarmonicCoefficientSet norm = perturb_and_normalize(alms, alm2, model, L);
      CompensatedSum num;
      double worst = 0.0;
      for (std::size_t i = 0; i < T; ++i) {
        BhatValue bv = sample_bispectrum(norm, out.triples[i], rows.rows(i));
        if (collect_bhat) bhat_slots[rep * T + i] = bv.value;
        num.add(out.eta[i] * bv.value);
        worst = std::max(worst, std::abs(bv.residual));
      }
      fhat_slots[rep] = num.value() / out.s_eta2;
      resid_slots[rep] = worst;
    } catch (...) {
      failed[rep] = 1;
    }
  });

  for (std::size_t rep = 0; rep < R; ++rep) {
    if (failed[rep]) {
      ++out.n_failures;
      continue;
    }
    out.fhat.push_back(fhat_slots[rep]);
    out.max_residual = std::max(out.max_residual, resid_slots[rep]);
    if (collect_bhat)
      out.bhat.insert(out.bhat.end(), bhat_slots.begin() + static_cast<long>(rep * T),
                      bhat_slots.begin() + static_cast<long>((rep + 1) * T));
  }
  if (out.n_failures * 100 > R)
    throw std::runtime_error("run_replications: failure budget exceeded (>1%)");
  return out;
}

ScalingStudy scaling_study(const ExperimentConfig& config) {
  config.validate();
  if (config.L_list.size() < 3)
    throw std::invalid_argument("scaling_study: need at least 3 band limits");
  ScalingStudy study;
  int lmin = config.L_list.front(), lmax = config.L_list.front();
  for (int L : config.L_list) {
    lmin = std::min(lmin, L);
    lmax = std::max(lmax, L);
  }
  if (lmax < 2 * lmin)
    study.warnings.push_back("insufficient spread: max(L)/min(L) < 2");

  std::vector<double> Ls, var_th, var_emp, ratio, tv;
  for (int L : config.L_list) {
    ReplicationSet batch = run_replications(config, L);
    BispectrumTable table;
    table.triples = batch.triples;
    table.eta = batch.eta;
    table.b_hat.assign(batch.triples.size(), 0.0);
    double vt = variance_theory(table);
    double cb = cum4_bound(table);
    Cumulants c = empirical_cumulants(batch.fhat);
    Ls.push_back(static_cast<double>(L));
    var_th.push_back(vt);
    var_emp.push_back(c.variance);
    ratio.push_back(cb / (vt * vt));
    tv.push_back(tv_bound_finite(table));
    study.batches.push_back(std::move(batch));
  }
  study.fits.push_back(fit_loglog("variance_theory", Ls, var_th));
  study.fits.push_back(fit_loglog("variance_empirical", Ls, var_emp));
  study.fits.push_back(fit_loglog("cum4_over_var2", Ls, ratio));
  study.fits.push_back(fit_loglog("tv_bound_finite", Ls, tv));
  return study;
}

}  // namespace bispec
