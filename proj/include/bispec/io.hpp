#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bispec/asymptotics.hpp"
#include "bispec/bispectrum.hpp"
#include "bispec/estimator.hpp"
#include "bispec/field.hpp"
#include "bispec/mc.hpp"

namespace bispec {

inline constexpr const char* kToolVersion = "0.1.0";

/// 17-significant-digit decimal rendering (round-trips a double exactly).
std::string format_double(double x);

/// RFC-4180 CSV: dot decimal, CRLF-free LF lines, quoting only when needed.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> read_csv(const std::string& path);

/// Flat key = value config document (TOML-shaped: # comments, quoted strings,
/// [a, b, c] integer lists). Later keys win; unknown keys are kept verbatim.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> raw(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<int> get_int_list(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  /// Canonical text (sorted keys) and its FNV-1a digest.
  std::string canonical_text() const;
  std::uint64_t digest() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Experiment config assembled from a config file (CLI overrides applied by
/// the frontend before this call).
ExperimentConfig experiment_from_config(const ConfigFile& cfg);
PowerSpectrumModel model_from_config(const ConfigFile& cfg, int analysis_band);

/// Versioned little-endian coefficient file: magic, version, band, seed,
/// stream, f_nl, payload of packed complex values for m >= 0.
struct AlmFileHeader {
  int band = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double f_nl = 0.0;
};
void write_alm_file(const std::string& path, const AlmFileHeader& header,
                    const HarmonicCoefficientSet& alms);
std::pair<AlmFileHeader, HarmonicCoefficientSet> read_alm_file(const std::string& path);

/// Bispectrum table CSV (l1,l2,l3,parity,eta,b_hat).
void write_bispectrum_csv(const std::string& path, const BispectrumTable& table);
BispectrumTable read_bispectrum_csv(const std::string& path);

/// JSON renderings with stable key order.
std::string estimator_report_json(const EstimatorReport& report,
                                  std::uint64_t config_hash);
std::string asymptotic_report_json(const AsymptoticReport& report,
                                   std::uint64_t config_hash);

/// Run manifest for multi-file outputs; every file written by the run embeds
/// the 8-hex-digit manifest tag in its name.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::uint64_t config_hash = 0;
  std::string timestamp;
  std::vector<std::string> output_paths;

  std::string tag() const;  // first 8 hex digits of config_hash
  std::string to_json() const;
};

}  // namespace bispec
