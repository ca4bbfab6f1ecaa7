// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmt/analysis.hpp"
#include "hmt/montecarlo.hpp"

namespace hmt {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Plain-text key=value configuration with [section] headers, '#' comments.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

struct Config {
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(const std::string& section, const std::string& key) const;
};

// Strict parse: entries before any section, duplicate keys, or malformed
// lines raise ConfigError with "<source>:<line>".
Config parse_config(const std::string& text, const std::string& source = "<config>");
Config load_config_file(const std::string& path);

// Experiment parameters with the baked-in defaults (40 subcarriers, 600-tap
// pulse, 1 us sampling, F = 25 kHz, T = 100 us, sigma = T/(sqrt(3) F)).
struct ExperimentConfig {
  // [system]
  double T = 1e-4;
  double F = 25e3;
  double sigma = 0.0;  // 0 -> T / (sqrt(3) F)
  double sample_interval = 1e-6;
  int pulse_length = 600;
  int n_subcarriers = 40;   // recorded for provenance
  double carrier_hz = 5e9;  // recorded for provenance; baseband math ignores it
  double symbol_power = 1.0;
  // [channel]
  double vartheta = 0.2;
  double delay_split = 1.45;
  double tau_max_over_rms = 10.0;
  double tau_rms = 0.0;  // explicit override when > 0 (requires f_d too)
  double f_d = 0.0;
  int path_count = 64;
  // [mc]
  long trials = 10000;
  std::uint64_t seed = 20260810;
  int workers = 1;
  int window_m = 4;
  int window_n = 4;
  // [sweep]
  std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30};
  std::vector<double> vartheta_grid = {0.04, 0.07, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35};
  std::vector<double> rms_ratio = {0.5, 0.75, 1.0, 1.25, 1.5};
  std::vector<double> fig3_vartheta = {0.07, 0.2};
  double fig4_vartheta = 0.07;
  double fig5_snr_db = 20.0;
  // [modes]
  NoiseMode noise_mode = NoiseMode::kPaper;
  bool exclude_coset2_origin = false;
  DelayFormula eq26 = DelayFormula::kDerived;

  double effective_sigma() const;
  LatticeParams lattice() const;
  // Channel for the given spread factor, honoring explicit tau_rms/f_d
  // overrides when vartheta matches this config's own value.
  ExpUScattering scattering_for(double vt) const;
  VarthetaSplit split() const { return {delay_split, tau_max_over_rms}; }
  TrialConfig trial_config(double vt, double snr_db) const;
};

// Applies entries onto defaults; unknown sections/keys are rejected with
// their location.
ExperimentConfig parse_experiment_config(const Config& cfg);

// Canonical serialization; parse(serialize(c)) reproduces c exactly.
std::string serialize_experiment_config(const ExperimentConfig& c);

}  // namespace hmt
