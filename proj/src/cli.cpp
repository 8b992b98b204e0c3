#include "bispec/cli.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bispec/io.hpp"
#include "bispec/util.hpp"

namespace bispec {

namespace {

namespace fs = std::filesystem;

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
}

ConfigFile load_config(const std::string& path) {
  return path.empty() ? ConfigFile{} : ConfigFile::parse_file(path);
}

void apply_override(ConfigFile& cfg, const std::string& key, const std::string& value,
                    bool present) {
  if (present) cfg.set(key, value);
}

int cmd_triples(int L, int L0, double r, const std::string& out) {
  if (L0 <= 0 && r > 0.0) L0 = band_floor(r, L);
  auto triples = admissible_triples(L, L0);
  if (triples.empty())
    std::cerr << "warning: empty triple set (L - L0 < 2)\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : triples)
    rows.push_back({std::to_string(t.l1), std::to_string(t.l2), std::to_string(t.l3),
                    t.parity_even ? "1" : "0", format_double(t.delta)});
  std::ostringstream ss;
  ss << "l1,l2,l3,parity,delta\n";
  for (auto& rrow : rows) {
    for (std::size_t i = 0; i < rrow.size(); ++i) ss << (i ? "," : "") << rrow[i];
    ss << "\n";
  }
  emit(ss.str(), out);
  return 0;
}

int cmd_wigner(int l1, int l2, int l3, int m1, int m2, int m3, int table_l,
               const std::string& table_out, const std::string& out) {
  if (table_l > 0) {
    ZeroMTable table(table_l);
    if (!table_out.empty()) table.save(table_out);
    std::ostringstream ss;
    ss << "l1,l2,l3,m1,m2,m3,value\n";
    for (int a = 0; a <= table_l; ++a)
      for (int b = a; b <= table_l; ++b)
        for (int c = b; c <= std::min(table_l, a + b); ++c)
          ss << a << ',' << b << ',' << c << ",0,0,0," << format_double(table.value(a, b, c))
             << "\n";
    emit(ss.str(), out);
    return 0;
  }
  double v = wigner3j(l1, l2, l3, m1, m2, m3);
  std::ostringstream ss;
  ss << "l1,l2,l3,m1,m2,m3,value\n"
     << l1 << ',' << l2 << ',' << l3 << ',' << m1 << ',' << m2 << ',' << m3 << ','
     << format_double(v) << "\n";
  emit(ss.str(), out);
  return 0;
}

int cmd_spectrum(const ConfigFile& cfg, int lmax, const std::string& out) {
  PowerSpectrumModel model = model_from_config(cfg, lmax);
  double tail_rel_tol = cfg.get_double("c_two_tail_rel_tol", 1e-6);
  std::ostringstream ss;
  ss << "l,c_gauss,c_two,c_total\n";
  for (int l = 1; l <= lmax; ++l) {
    double c2 = c_two(l, model);
    if (c_two_tail_bound(l, model) > tail_rel_tol * c2)
      std::cerr << "warning: C_{l;2} truncation tail at l=" << l
                << " exceeds the relative tolerance; raise lambda_sim\n";
    ss << l << ',' << format_double(c_gaussian(l, model)) << ',' << format_double(c2)
       << ',' << format_double(c_total(l, model)) << "\n";
  }
  emit(ss.str(), out);
  return 0;
}

int cmd_simulate(const ConfigFile& cfg, int L, std::uint64_t stream,
                 const std::string& out) {
  if (out.empty()) throw CLI::ValidationError("simulate", "--out is required");
  PowerSpectrumModel model = model_from_config(cfg, L);
  std::uint64_t seed =
      static_cast<std::uint64_t>(cfg.get_int("base_seed", 20240901));
  RngStream rng(seed, stream);
  HarmonicCoefficientSet alms = sample_gaussian_alm(model, model.band_limit, rng);
  HarmonicCoefficientSet stored(L);
  if (model.f_nl != 0.0) {
    SphereGrid grid = SphereGrid::for_band(model.band_limit);
    HarmonicCoefficientSet alm2 = alm_two_pixel(alms, model, grid, L);
    for (int l = 1; l <= L; ++l)
      for (int m = 0; m <= l; ++m)
        stored.set(l, m, alms.get(l, m) + model.f_nl * alm2.get(l, m));
  } else {
    for (int l = 1; l <= L; ++l)
      for (int m = 0; m <= l; ++m) stored.set(l, m, alms.get(l, m));
  }
  AlmFileHeader header;
  header.band = L;
  header.seed = seed;
  header.stream = stream;
  header.f_nl = model.f_nl;
  write_alm_file(out, header, stored);
  return 0;
}

int cmd_bispectrum(const ConfigFile& cfg, const std::string& alm_path, int L, int L0,
                   double r, bool even_only, const std::string& out) {
  auto [header, coeffs] = read_alm_file(alm_path);
  if (L <= 0) L = header.band;
  if (L0 <= 0) L0 = band_floor(r > 0 ? r : 0.25, L);
  PowerSpectrumModel model = model_from_config(cfg, L);
  // normalize the stored perturbed coefficients by sqrt(C_{l;G})
  HarmonicCoefficientSet norm(L);
  for (int l = 1; l <= L; ++l) {
    double s = 1.0 / std::sqrt(c_gaussian(l, model));
    for (int m = 0; m <= l; ++m) norm.set(l, m, coeffs.get(l, m) * s);
  }
  auto triples = admissible_triples(L, L0);
  BispectrumTable table = make_table(triples, model);
  TripleRowCache rows(triples);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (even_only && !triples[i].parity_even) continue;
    table.b_hat[i] = sample_bispectrum(norm, triples[i], rows.rows(i)).value;
  }
  std::ostringstream ss;
  ss << "l1,l2,l3,parity,eta,b_hat\n";
  for (std::size_t i = 0; i < table.n_triples(); ++i) {
    const auto& t = table.triples[i];
    ss << t.l1 << ',' << t.l2 << ',' << t.l3 << ',' << (t.parity_even ? 1 : 0) << ','
       << format_double(table.eta[i]) << ',' << format_double(table.b_hat[i]) << "\n";
  }
  emit(ss.str(), out);
  return 0;
}

int cmd_estimate(const std::string& input, bool exact, const std::string& out,
                 std::uint64_t config_hash) {
  BispectrumTable table = read_bispectrum_csv(input);
  EstimatorReport report = fit_fnl(table);
  if (exact) report.cum4_bound = cum4_exact(table);
  emit(estimator_report_json(report, config_hash), out);
  return 0;
}

int cmd_asymptotics(double alpha, double r, double amplitude, const std::string& out) {
  AsymptoticReport rep = asymptotic_report(alpha, r, amplitude);
  ConfigFile pseudo;
  pseudo.set("alpha", format_double(alpha));
  pseudo.set("r", format_double(r));
  pseudo.set("amplitude", format_double(amplitude));
  emit(asymptotic_report_json(rep, pseudo.digest()), out);
  return rep.i_kappa_divergent ? 2 : 0;
}

int cmd_mc_clt(const ConfigFile& cfg, const std::string& out_dir) {
  ExperimentConfig config = experiment_from_config(cfg);
  ScalingStudy study = scaling_study(config);
  for (const auto& w : study.warnings) std::cerr << "warning: " << w << "\n";

  RunManifest manifest;
  manifest.config_hash = cfg.digest();
  manifest.timestamp = now_utc();
  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "plot-data");
  std::string tag = manifest.tag();

  // per-L sample CSVs
  for (const auto& batch : study.batches) {
    std::string name = "samples-L" + std::to_string(batch.L) + "-" + tag + ".csv";
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < batch.fhat.size(); ++i)
      rows.push_back({std::to_string(i), format_double(batch.fhat[i])});
    write_csv((fs::path(out_dir) / name).string(), {"replication", "f_hat"}, rows);
    manifest.output_paths.push_back(name);
  }

  // cumulant JSON per L
  nlohmann::ordered_json jc;
  jc["tool_version"] = kToolVersion;
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(manifest.config_hash));
  jc["config_hash"] = hex;
  for (const auto& batch : study.batches) {
    Cumulants c = empirical_cumulants(batch.fhat);
    nlohmann::ordered_json j;
    j["L"] = batch.L;
    j["L0"] = batch.L0;
    j["n"] = c.n;
    j["n_failures"] = batch.n_failures;
    j["mean"] = c.mean;
    j["mean_se"] = c.mean_se;
    j["variance"] = c.variance;
    j["variance_se"] = c.variance_se;
    j["k3"] = c.skewness;
    j["k3_se"] = c.skewness_se;
    j["k4"] = c.k4;
    j["k4_se"] = c.k4_se;
    j["s_eta2"] = batch.s_eta2;
    jc["batches"].push_back(j);
  }
  {
    std::string name = "cumulants-" + tag + ".json";
    std::ofstream out(fs::path(out_dir) / name);
    out << jc.dump(2) << "\n";
    manifest.output_paths.push_back(name);
  }

  // scaling fits CSV
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& fit : study.fits)
      rows.push_back({fit.quantity, format_double(fit.slope), format_double(fit.slope_se)});
    std::string name = "scaling-" + tag + ".csv";
    write_csv((fs::path(out_dir) / name).string(), {"quantity", "slope", "slope_se"}, rows);
    manifest.output_paths.push_back(name);
  }

  // plot data: x/y columns per figure
  for (const auto& fit : study.fits) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < fit.L.size(); ++i)
      rows.push_back({format_double(fit.L[i]), format_double(fit.value[i])});
    std::string name = "plot-data/" + fit.quantity + "-" + tag + ".csv";
    write_csv((fs::path(out_dir) / name).string(), {"L", fit.quantity}, rows);
    manifest.output_paths.push_back(name);
  }

  std::ofstream mout(fs::path(out_dir) / ("manifest-" + tag + ".json"));
  mout << manifest.to_json();
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"narrow-band spherical bispectrum toolkit"};
  app.require_subcommand(1);

  // shared options
  std::string config_path, out_path;

  auto* triples_cmd = app.add_subcommand("triples", "enumerate admissible multipole triples");
  int t_L = 0, t_L0 = 0;
  double t_r = 0.0;
  triples_cmd->add_option("--L", t_L, "maximum multipole")->required();
  triples_cmd->add_option("--L0", t_L0, "minimum multipole");
  triples_cmd->add_option("--r", t_r, "band ratio, L0 = ceil(r L)")
      ->check(CLI::Range(1e-9, 0.5 - 1e-9));
  triples_cmd->add_option("-o,--output", out_path, "output CSV (default stdout)");

  auto* wigner_cmd = app.add_subcommand("wigner", "evaluate Wigner 3j symbols");
  int w_l1 = 0, w_l2 = 0, w_l3 = 0, w_m1 = 0, w_m2 = 0, w_m3 = 0, w_table = 0;
  std::string w_table_out;
  wigner_cmd->add_option("--l1", w_l1, "degree 1");
  wigner_cmd->add_option("--l2", w_l2, "degree 2");
  wigner_cmd->add_option("--l3", w_l3, "degree 3");
  wigner_cmd->add_option("--m1", w_m1, "order 1");
  wigner_cmd->add_option("--m2", w_m2, "order 2");
  wigner_cmd->add_option("--m3", w_m3, "order 3");
  wigner_cmd->add_option("--zero-table", w_table, "emit the zero-m table up to L");
  wigner_cmd->add_option("--table-out", w_table_out, "binary cache path for the table");
  wigner_cmd->add_option("-o,--output", out_path, "output CSV (default stdout)");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "power spectrum components");
  int s_lmax = 16;
  spectrum_cmd->add_option("--config", config_path, "experiment config file");
  spectrum_cmd->add_option("--lmax", s_lmax, "largest degree to emit");
  spectrum_cmd->add_option("-o,--output", out_path, "output CSV (default stdout)");

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate one coefficient set");
  int sim_L = 16;
  std::uint64_t sim_stream = 0;
  simulate_cmd->add_option("--config", config_path, "experiment config file");
  simulate_cmd->add_option("--L", sim_L, "analysis band limit");
  simulate_cmd->add_option("--stream", sim_stream, "replication stream id");
  simulate_cmd->add_option("--out", out_path, "output binary path")->required();

  auto* bisp_cmd = app.add_subcommand("bispectrum", "per-triple eta and sample bispectrum");
  std::string b_alm;
  int b_L = 0, b_L0 = 0;
  double b_r = 0.0;
  bool b_even_only = false;
  bisp_cmd->add_option("--config", config_path, "experiment config file");
  bisp_cmd->add_option("--alm", b_alm, "coefficient file from `simulate`")->required();
  bisp_cmd->add_option("--L", b_L, "maximum multipole (default: file band)");
  bisp_cmd->add_option("--L0", b_L0, "minimum multipole");
  bisp_cmd->add_option("--r", b_r, "band ratio")->check(CLI::Range(1e-9, 0.5 - 1e-9));
  bisp_cmd->add_flag("--even-only", b_even_only, "skip odd-parity triples");
  bisp_cmd->add_option("-o,--output", out_path, "output CSV (default stdout)");

  auto* est_cmd = app.add_subcommand("estimate", "OLS fit of f_NL from a bispectrum CSV");
  std::string e_input;
  bool e_exact = false;
  est_cmd->add_option("--input", e_input, "bispectrum CSV")->required();
  est_cmd->add_flag("--exact-cum4", e_exact, "exact 6j fourth cumulant instead of the bound");
  est_cmd->add_option("-o,--output", out_path, "output JSON (default stdout)");

  auto* asym_cmd = app.add_subcommand("asymptotics", "closed-form asymptotic constants");
  double a_alpha = 5.0, a_r = 0.25, a_amp = 1.0;
  asym_cmd->add_option("--alpha", a_alpha, "spectral index (> 4)")->required();
  asym_cmd->add_option("--r", a_r, "band ratio in (0, 1/2)")->required();
  asym_cmd->add_option("--amplitude", a_amp, "spectrum amplitude A")->required();
  asym_cmd->add_option("-o,--output", out_path, "output JSON (default stdout)");

  auto* mc_cmd = app.add_subcommand("mc-clt", "replicated CLT verification study");
  std::string mc_out = "mc-out";
  mc_cmd->add_option("--config", config_path, "experiment config file")->required();
  mc_cmd->add_option("--out-dir", mc_out, "output directory");

  // config overrides shared by config-consuming subcommands
  std::string ov_seed, ov_fnl, ov_alpha, ov_amplitude, ov_r, ov_reps;
  for (auto* cmd : {spectrum_cmd, simulate_cmd, bisp_cmd, mc_cmd}) {
    cmd->add_option("--seed", ov_seed, "override base_seed");
    cmd->add_option("--f-nl", ov_fnl, "override f_nl");
    cmd->add_option("--alpha-override", ov_alpha, "override alpha");
    cmd->add_option("--amplitude-override", ov_amplitude, "override amplitude");
    cmd->add_option("--r-override", ov_r, "override r");
    cmd->add_option("--replications", ov_reps, "override replication count");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    ConfigFile cfg = load_config(config_path);
    apply_override(cfg, "base_seed", ov_seed, !ov_seed.empty());
    apply_override(cfg, "f_nl", ov_fnl, !ov_fnl.empty());
    apply_override(cfg, "alpha", ov_alpha, !ov_alpha.empty());
    apply_override(cfg, "amplitude", ov_amplitude, !ov_amplitude.empty());
    apply_override(cfg, "r", ov_r, !ov_r.empty());
    apply_override(cfg, "replications", ov_reps, !ov_reps.empty());

    if (triples_cmd->parsed()) return cmd_triples(t_L, t_L0, t_r, out_path);
    if (wigner_cmd->parsed())
      return cmd_wigner(w_l1, w_l2, w_l3, w_m1, w_m2, w_m3, w_table, w_table_out, out_path);
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, s_lmax, out_path);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, sim_L, sim_stream, out_path);
    if (bisp_cmd->parsed())
      return cmd_bispectrum(cfg, b_alm, b_L, b_L0, b_r, b_even_only, out_path);
    if (est_cmd->parsed()) return cmd_estimate(e_input, e_exact, out_path, cfg.digest());
    if (asym_cmd->parsed()) return cmd_asymptotics(a_alpha, a_r, a_amp, out_path);
    if (mc_cmd->parsed()) return cmd_mc_clt(cfg, mc_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace bispec
