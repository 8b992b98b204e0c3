#include "bispec/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bispec/util.hpp"

namespace bispec {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_field(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << csv_field(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  char c;
  auto end_field = [&]() {
    row.push_back(field);
    field.clear();
  };
  auto end_row = [&]() {
    end_field();
    rows.push_back(row);
    row.clear();
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value, got: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw std::invalid_argument("config: empty key");
    cfg.values_[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

std::optional<std::string> ConfigFile::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  auto v = raw(key);
  if (!v) return fallback;
  std::size_t pos = 0;
  double x = std::stod(*v, &pos);
  if (pos != v->size()) throw std::invalid_argument("config: bad number for " + key);
  return x;
}

std::int64_t ConfigFile::get_int(const std::string& key, std::int64_t fallback) const {
  auto v = raw(key);
  if (!v) return fallback;
  std::size_t pos = 0;
  long long x = std::stoll(*v, &pos);
  if (pos != v->size()) throw std::invalid_argument("config: bad integer for " + key);
  return x;
}

std::string ConfigFile::get_string(const std::string& key,
                                   const std::string& fallback) const {
  auto v = raw(key);
  return v ? *v : fallback;
}

std::vector<int> ConfigFile::get_int_list(const std::string& key) const {
  auto v = raw(key);
  if (!v) return {};
  std::string s = *v;
  if (!s.empty() && s.front() == '[') s = s.substr(1);
  if (!s.empty() && s.back() == ']') s.pop_back();
  std::vector<int> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

std::string ConfigFile::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::uint64_t ConfigFile::digest() const {
  std::string t = canonical_text();
  return fnv1a64(t.data(), t.size());
}

ExperimentConfig experiment_from_config(const ConfigFile& cfg) {
  ExperimentConfig e;
  e.amplitude = cfg.get_double("amplitude", e.amplitude);
  e.alpha = cfg.get_double("alpha", e.alpha);
  e.f_nl = cfg.get_double("f_nl", e.f_nl);
  e.r = cfg.get_double("r", e.r);
  e.L_list = cfg.get_int_list("L_list");
  e.replications = static_cast<int>(cfg.get_int("replications", e.replications));
  e.base_seed = static_cast<std::uint64_t>(cfg.get_int("base_seed",
                                                       static_cast<std::int64_t>(e.base_seed)));
  e.lambda_sim_factor = static_cast<int>(cfg.get_int("lambda_sim_factor", e.lambda_sim_factor));
  e.fnl_decay = cfg.get_double("fnl_decay", e.fnl_decay);
  std::string route = cfg.get_string("route", "pixel");
  if (route == "pixel") e.route = ExperimentConfig::Route::pixel;
  else if (route == "harmonic") e.route = ExperimentConfig::Route::harmonic;
  else throw std::invalid_argument("config: route must be pixel or harmonic");
  return e;
}

PowerSpectrumModel model_from_config(const ConfigFile& cfg, int analysis_band) {
  PowerSpectrumModel m;
  m.amplitude = cfg.get_double("amplitude", m.amplitude);
  m.alpha = cfg.get_double("alpha", m.alpha);
  m.f_nl = cfg.get_double("f_nl", m.f_nl);
  int factor = static_cast<int>(cfg.get_int("lambda_sim_factor", 2));
  m.band_limit = static_cast<int>(cfg.get_int("lambda_sim", factor * analysis_band));
  m.validate();
  return m;
}

namespace {
constexpr char kAlmMagic[8] = {'B', 'S', 'P', 'A', 'L', 'M', '1', '\0'};
constexpr std::uint32_t kAlmVersion = 1;
}  // namespace

void write_alm_file(const std::string& path, const AlmFileHeader& header,
                    const HarmonicCoefficientSet& alms) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_alm_file: cannot open " + path);
  const auto& packed = alms.packed();
  std::uint32_t band = static_cast<std::uint32_t>(header.band);
  std::uint64_t count = packed.size();
  std::uint64_t checksum =
      fnv1a64(packed.data(), packed.size() * sizeof(std::complex<double>));
  out.write(kAlmMagic, 8);
  out.write(reinterpret_cast<const char*>(&kAlmVersion), sizeof kAlmVersion);
  out.write(reinterpret_cast<const char*>(&band), sizeof band);
  out.write(reinterpret_cast<const char*>(&header.seed), sizeof header.seed);
  out.write(reinterpret_cast<const char*>(&header.stream), sizeof header.stream);
  out.write(reinterpret_cast<const char*>(&header.f_nl), sizeof header.f_nl);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(&checksum), sizeof checksum);
  out.write(reinterpret_cast<const char*>(packed.data()),
            static_cast<std::streamsize>(packed.size() * sizeof(std::complex<double>)));
  if (!out) throw std::runtime_error("write_alm_file: write failed");
}

std::pair<AlmFileHeader, HarmonicCoefficientSet> read_alm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_alm_file: cannot open " + path);
  char magic[8];
  std::uint32_t version = 0, band = 0;
  AlmFileHeader h;
  std::uint64_t count = 0, checksum = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&band), sizeof band);
  in.read(reinterpret_cast<char*>(&h.seed), sizeof h.seed);
  in.read(reinterpret_cast<char*>(&h.stream), sizeof h.stream);
  in.read(reinterpret_cast<char*>(&h.f_nl), sizeof h.f_nl);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  in.read(reinterpret_cast<char*>(&checksum), sizeof checksum);
  if (!in || std::memcmp(magic, kAlmMagic, 8) != 0 || version != kAlmVersion)
    throw std::runtime_error("read_alm_file: bad header in " + path);
  h.band = static_cast<int>(band);
  HarmonicCoefficientSet alms(h.band);
  if (alms.packed().size() != count)
    throw std::runtime_error("read_alm_file: payload size mismatch");
  in.read(reinterpret_cast<char*>(alms.packed().data()),
          static_cast<std::streamsize>(count * sizeof(std::complex<double>)));
  if (!in || fnv1a64(alms.packed().data(), count * sizeof(std::complex<double>)) != checksum)
    throw std::runtime_error("read_alm_file: checksum mismatch");
  return {h, std::move(alms)};
}

void write_bispectrum_csv(const std::string& path, const BispectrumTable& table) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.n_triples());
  for (std::size_t i = 0; i < table.n_triples(); ++i) {
    const auto& t = table.triples[i];
    rows.push_back({std::to_string(t.l1), std::to_string(t.l2), std::to_string(t.l3),
                    t.parity_even ? "1" : "0", format_double(table.eta[i]),
                    format_double(table.b_hat[i])});
  }
  write_csv(path, {"l1", "l2", "l3", "parity", "eta", "b_hat"}, rows);
}

BispectrumTable read_bispectrum_csv(const std::string& path) {
  auto rows = read_csv(path);
  if (rows.empty() || rows[0].size() != 6 || rows[0][0] != "l1")
    throw std::runtime_error("read_bispectrum_csv: bad header in " + path);
  BispectrumTable table;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 6) throw std::runtime_error("read_bispectrum_csv: ragged row");
    MultipoleTriple t;
    t.l1 = std::stoi(r[0]);
    t.l2 = std::stoi(r[1]);
    t.l3 = std::stoi(r[2]);
    t.parity_even = r[3] == "1";
    double a = t.l1, b = t.l2, c = t.l3;
    t.delta = (a + b + c) * (a + b - c) * (a - b + c) * (-a + b + c);
    table.triples.push_back(t);
    table.eta.push_back(std::stod(r[4]));
    table.b_hat.push_back(std::stod(r[5]));
  }
  return table;
}

std::string estimator_report_json(const EstimatorReport& report,
                                  std::uint64_t config_hash) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
  j["config_hash"] = hex;
  j["f_hat"] = report.f_hat;
  j["s_eta2"] = report.s_eta2;
  j["var_theory"] = report.var_theory;
  j["cum4_bound"] = report.cum4_bound;
  j["tv_bound_finite"] = report.tv_bound_finite;
  j["n_triples_effective"] = report.n_triples_effective;
  return j.dump(2) + "\n";
}

std::string asymptotic_report_json(const AsymptoticReport& r, std::uint64_t config_hash) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
  j["config_hash"] = hex;
  j["alpha"] = r.alpha;
  j["r"] = r.r;
  j["amplitude"] = r.amplitude;
  j["i_eta2"] = r.i_eta2;
  j["i_eta2_error"] = r.i_eta2_error;
  j["i_kappa"] = r.i_kappa;
  j["i_kappa_error"] = r.i_kappa_error;
  j["i_kappa_divergent"] = r.i_kappa_divergent;
  j["c_eta2"] = r.c_eta2;
  j["c_kappa"] = r.c_kappa;
  j["sigma2_fnl"] = r.sigma2_fnl;
  j["k_fnl"] = r.k_fnl;
  j["c_tv"] = r.c_tv;
  return j.dump(2) + "\n";
}

std::string RunManifest::tag() const {
  char hex[20];
  std::snprintf(hex, sizeof hex, "%08llx",
                static_cast<unsigned long long>(config_hash >> 32));
  return hex;
}

std::string RunManifest::to_json() const {
  ordered_json j;
  j["tool_version"] = tool_version;
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
  j["config_hash"] = hex;
  j["timestamp"] = timestamp;
  j["output_paths"] = output_paths;
  return j.dump(2) + "\n";
}

}  // namespace bispec
