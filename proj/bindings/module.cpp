#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bispec/asymptotics.hpp"
#include "bispec/bispectrum.hpp"
#include "bispec/estimator.hpp"
#include "bispec/field.hpp"
#include "bispec/mc.hpp"
#include "bispec/spectrum.hpp"
#include "bispec/stats.hpp"
#include "bispec/wigner.hpp"

namespace py = pybind11;
using namespace bispec;

namespace {

MultipoleTriple make_triple(int l1, int l2, int l3) {
  MultipoleTriple t;
  t.l1 = l1;
  t.l2 = l2;
  t.l3 = l3;
  t.parity_even = ((l1 + l2 + l3) % 2) == 0;
  t.delta = delta(l1, l2, l3);
  return t;
}

BispectrumTable table_from_lists(const std::vector<std::array<int, 3>>& triples,
                                 const std::vector<double>& eta,
                                 const std::vector<double>& b_hat) {
  if (triples.size() != eta.size() || eta.size() != b_hat.size())
    throw std::invalid_argument("table arrays must have matching lengths");
  BispectrumTable t;
  for (const auto& a : triples) t.triples.push_back(make_triple(a[0], a[1], a[2]));
  t.eta = eta;
  t.b_hat = b_hat;
  return t;
}

py::dict dr_to_dict(const DrResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["error"] = r.error;
  d["divergent"] = r.divergent;
  d["eps_values"] = r.eps_values;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "narrow-band spherical bispectrum toolkit";

  py::class_<PowerSpectrumModel>(m, "PowerSpectrumModel")
      .def(py::init([](double amplitude, double alpha, double f_nl, int band_limit) {
             PowerSpectrumModel p;
             p.amplitude = amplitude;
             p.alpha = alpha;
             p.f_nl = f_nl;
             p.band_limit = band_limit;
             p.validate();
             return p;
           }),
           py::arg("amplitude") = 1.0, py::arg("alpha") = 5.0, py::arg("f_nl") = 0.0,
           py::arg("band_limit") = 32)
      .def_readwrite("amplitude", &PowerSpectrumModel::amplitude)
      .def_readwrite("alpha", &PowerSpectrumModel::alpha)
      .def_readwrite("f_nl", &PowerSpectrumModel::f_nl)
      .def_readwrite("band_limit", &PowerSpectrumModel::band_limit);

  m.def("wigner3j", &wigner3j, py::arg("l1"), py::arg("l2"), py::arg("l3"),
        py::arg("m1"), py::arg("m2"), py::arg("m3"));
  m.def("wigner3j_zero", &wigner3j_zero);
  m.def("wigner3j_zero_asymptotic", &wigner3j_zero_asymptotic);
  m.def("clebsch_gordan", &clebsch_gordan, py::arg("l1"), py::arg("m1"), py::arg("l2"),
        py::arg("m2"), py::arg("l"), py::arg("m"));
  m.def("gaunt", &gaunt, py::arg("l1"), py::arg("m1"), py::arg("l2"), py::arg("m2"),
        py::arg("l"), py::arg("m"));
  m.def("wigner6j", &wigner6j);

  m.def("c_gaussian", &c_gaussian);
  m.def("c_two", &c_two);
  m.def("c_total", &c_total);

  m.def("admissible_triples", [](int L, int L0) {
    std::vector<std::tuple<int, int, int, bool>> out;
    for (const auto& t : admissible_triples(L, L0))
      out.emplace_back(t.l1, t.l2, t.l3, t.parity_even);
    return out;
  });
  m.def("band_floor", &band_floor);
  m.def("eta_weight", [](int l1, int l2, int l3, const PowerSpectrumModel& model) {
    return eta_weight(make_triple(l1, l2, l3), model);
  });
  m.def("cum4_bhat_theory",
        [](int l1, int l2, int l3) { return cum4_bhat_theory(make_triple(l1, l2, l3)); });

  m.def("fit_fnl",
        [](const std::vector<std::array<int, 3>>& triples, const std::vector<double>& eta,
           const std::vector<double>& b_hat) {
          EstimatorReport r = fit_fnl(table_from_lists(triples, eta, b_hat));
          py::dict d;
          d["f_hat"] = r.f_hat;
          d["s_eta2"] = r.s_eta2;
          d["var_theory"] = r.var_theory;
          d["cum4_bound"] = r.cum4_bound;
          d["tv_bound_finite"] = r.tv_bound_finite;
          d["n_triples_effective"] = r.n_triples_effective;
          return d;
        });

  m.def("delta", &delta);
  m.def("q_shape", &q_shape);
  m.def("d_r_reduced", [](double a, double b, double c, double d, double r) {
    return dr_to_dict(d_r_reduced(a, b, c, d, r));
  });
  m.def("d_r_bruteforce", [](double a, double b, double c, double d, double r) {
    return dr_to_dict(d_r_bruteforce(a, b, c, d, r));
  });
  m.def("asymptotic_report", [](double alpha, double r, double amplitude) {
    AsymptoticReport rep = asymptotic_report(alpha, r, amplitude);
    py::dict d;
    d["alpha"] = rep.alpha;
    d["r"] = rep.r;
    d["i_eta2"] = rep.i_eta2;
    d["i_kappa"] = rep.i_kappa;
    d["i_kappa_divergent"] = rep.i_kappa_divergent;
    d["c_eta2"] = rep.c_eta2;
    d["c_kappa"] = rep.c_kappa;
    d["sigma2_fnl"] = rep.sigma2_fnl;
    d["k_fnl"] = rep.k_fnl;
    d["c_tv"] = rep.c_tv;
    return d;
  });

  m.def(
      "run_replications",
      [](double amplitude, double alpha, double f_nl, double r, int L, int replications,
         std::uint64_t base_seed, const std::string& route) {
        ExperimentConfig cfg;
        cfg.amplitude = amplitude;
        cfg.alpha = alpha;
        cfg.f_nl = f_nl;
        cfg.r = r;
        cfg.L_list = {L};
        cfg.replications = replications;
        cfg.base_seed = base_seed;
        cfg.route = route == "harmonic" ? ExperimentConfig::Route::harmonic
                                        : ExperimentConfig::Route::pixel;
        ReplicationSet out = run_replications(cfg, L);
        py::dict d;
        d["L"] = out.L;
        d["L0"] = out.L0;
        d["s_eta2"] = out.s_eta2;
        d["fhat"] = out.fhat;
        d["n_failures"] = out.n_failures;
        return d;
      },
      py::arg("amplitude") = 1.0, py::arg("alpha") = 5.0, py::arg("f_nl") = 0.0,
      py::arg("r") = 0.25, py::arg("L") = 12, py::arg("replications") = 200,
      py::arg("base_seed") = 1, py::arg("route") = "pixel");

  m.def("empirical_cumulants", [](const std::vector<double>& samples) {
    Cumulants c = empirical_cumulants(samples);
    py::dict d;
    d["mean"] = c.mean;
    d["mean_se"] = c.mean_se;
    d["variance"] = c.variance;
    d["variance_se"] = c.variance_se;
    d["k3"] = c.skewness;
    d["k3_se"] = c.skewness_se;
    d["k4"] = c.k4;
    d["k4_se"] = c.k4_se;
    return d;
  });
  m.def("ks_normality", [](const std::vector<double>& samples, double center, double scale) {
    KsResult k = ks_normality(samples, center, scale);
    return py::make_tuple(k.statistic, k.p_value);
  });

  m.attr("__version__") = "0.1.0";
}
