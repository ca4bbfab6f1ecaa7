// SPDX-License-Identifier: Apache-2.0
#include "hmt/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hmt {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& msg) {
  std::ostringstream os;
  os << source << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

double parse_double(const ConfigEntry& e) {
  try {
    size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_at("config", e.line, "key '" + e.key + "': not a number: '" + e.value + "'");
  }
}

long parse_long(const ConfigEntry& e) {
  const double v = parse_double(e);
  if (v != std::floor(v)) fail_at("config", e.line, "key '" + e.key + "': not an integer");
  return static_cast<long>(v);
}

std::uint64_t parse_u64(const ConfigEntry& e) {
  try {
    size_t pos = 0;
    const std::uint64_t v = std::stoull(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_at("config", e.line, "key '" + e.key + "': not an unsigned integer");
  }
}

bool parse_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  fail_at("config", e.line, "key '" + e.key + "': expected true/false");
}

std::vector<double> parse_list(const ConfigEntry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail_at("config", e.line, "key '" + e.key + "': empty list item");
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail_at("config", e.line, "key '" + e.key + "': bad list item '" + item + "'");
    }
  }
  if (out.empty()) fail_at("config", e.line, "key '" + e.key + "': empty list");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt(v[i]);
  }
  return s;
}

}  // namespace

const ConfigEntry* Config::find(const std::string& section, const std::string& key) const {
  for (const auto& e : entries)
    if (e.section == section && e.key == key) return &e;
  return nullptr;
}

Config parse_config(const std::string& text, const std::string& source) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    // strip comments
    const size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_at(source, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail_at(source, line, "empty section name");
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos) fail_at(source, line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail_at(source, line, "empty key");
    if (section.empty()) fail_at(source, line, "key '" + key + "' outside any [section]");
    for (const auto& e : cfg.entries)
      if (e.section == section && e.key == key)
        fail_at(source, line, "duplicate key '" + key + "' in [" + section + "]");
    cfg.entries.push_back({section, key, value, line});
  }
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

double ExperimentConfig::effective_sigma() const {
  return (sigma > 0.0) ? sigma : T / (std::sqrt(3.0) * F);
}

LatticeParams ExperimentConfig::lattice() const {
  return LatticeParams::from_tf(T, F, effective_sigma());
}

ExpUScattering ExperimentConfig::scattering_for(double vt) const {
  if (tau_rms > 0.0 && f_d > 0.0 && vt == vartheta) {
    ExpUScattering s{tau_rms, f_d, tau_max_over_rms * tau_rms};
    if (!csf(s).underspread())
      throw ConfigError("channel: explicit tau_rms/f_d give an overspread channel");
    return s;
  }
  return scattering_from_vartheta(effective_sigma(), vt, split());
}

TrialConfig ExperimentConfig::trial_config(double vt, double snr) const {
  TrialConfig t;
  t.params = lattice();
  t.scattering = scattering_for(vt);
  t.symbol_power = symbol_power;
  t.noise_power = symbol_power * std::pow(10.0, -snr / 10.0);
  t.delay_formula = eq26;
  t.path_count = path_count;
  t.trials = trials;
  t.master_seed = seed;
  t.window_m = window_m;
  t.window_n = window_n;
  t.noise_mode = noise_mode;
  t.exclude_coset2_origin = exclude_coset2_origin;
  t.workers = workers;
  t.sample_interval = sample_interval;
  return t;
}

ExperimentConfig parse_experiment_config(const Config& cfg) {
  ExperimentConfig c;
  for (const auto& e : cfg.entries) {
    const std::string& s = e.section;
    const std::string& k = e.key;
    if (s == "system") {
      if (k == "T") c.T = parse_double(e);
      else if (k == "F") c.F = parse_double(e);
      else if (k == "sigma") c.sigma = parse_double(e);
      else if (k == "sample_interval") c.sample_interval = parse_double(e);
      else if (k == "pulse_length") c.pulse_length = static_cast<int>(parse_long(e));
      else if (k == "n_subcarriers") c.n_subcarriers = static_cast<int>(parse_long(e));
      else if (k == "carrier_hz") c.carrier_hz = parse_double(e);
      else if (k == "symbol_power") c.symbol_power = parse_double(e);
      else fail_at("config", e.line, "unknown key '" + k + "' in [system]");
    } else if (s == "channel") {
      if (k == "vartheta") c.vartheta = parse_double(e);
      else if (k == "delay_split") c.delay_split = parse_double(e);
      else if (k == "tau_max_over_rms") c.tau_max_over_rms = parse_double(e);
      else if (k == "tau_rms") c.tau_rms = parse_double(e);
      else if (k == "f_d") c.f_d = parse_double(e);
      else if (k == "path_count") c.path_count = static_cast<int>(parse_long(e));
      else fail_at("config", e.line, "unknown key '" + k + "' in [channel]");
    } else if (s == "mc") {
      if (k == "trials") c.trials = parse_long(e);
      else if (k == "seed") c.seed = parse_u64(e);
      else if (k == "workers") c.workers = static_cast<int>(parse_long(e));
      else if (k == "window_m") c.window_m = static_cast<int>(parse_long(e));
      else if (k == "window_n") c.window_n = static_cast<int>(parse_long(e));
      else fail_at("config", e.line, "unknown key '" + k + "' in [mc]");
    } else if (s == "sweep") {
      if (k == "snr_db") c.snr_db = parse_list(e);
      else if (k == "vartheta_grid") c.vartheta_grid = parse_list(e);
      else if (k == "rms_ratio") c.rms_ratio = parse_list(e);
      else if (k == "fig3_vartheta") c.fig3_vartheta = parse_list(e);
      else if (k == "fig4_vartheta") c.fig4_vartheta = parse_double(e);
      else if (k == "fig5_snr_db") c.fig5_snr_db = parse_double(e);
      else fail_at("config", e.line, "unknown key '" + k + "' in [sweep]");
    } else if (s == "modes") {
      if (k == "noise") {
        if (e.value == "paper") c.noise_mode = NoiseMode::kPaper;
        else if (e.value == "physical") c.noise_mode = NoiseMode::kPhysical;
        else fail_at("config", e.line, "noise: expected paper|physical");
      } else if (k == "exclude_coset2_origin") {
        c.exclude_coset2_origin = parse_bool(e);
      } else if (k == "eq26") {
        if (e.value == "derived") c.eq26 = DelayFormula::kDerived;
        else if (e.value == "printed") c.eq26 = DelayFormula::kPrinted;
        else fail_at("config", e.line, "eq26: expected derived|printed");
      } else {
        fail_at("config", e.line, "unknown key '" + k + "' in [modes]");
      }
    } else {
      fail_at("config", e.line, "unknown section [" + s + "]");
    }
  }
  // basic validation
  if (!(c.T > 0) || !(c.F > 0)) throw ConfigError("system: T and F must be > 0");
  if (!(c.sample_interval > 0)) throw ConfigError("system: sample_interval must be > 0");
  if (!(c.symbol_power > 0)) throw ConfigError("system: symbol_power must be > 0");
  if ((c.tau_rms > 0) != (c.f_d > 0))
    throw ConfigError("channel: tau_rms and f_d must be given together");
  if (c.tau_rms <= 0 && (!(c.vartheta > 0) || c.vartheta >= 1))
    throw ConfigError("channel: vartheta must be in (0, 1)");
  if (c.path_count < 1) throw ConfigError("channel: path_count must be >= 1");
  if (c.trials < 1) throw ConfigError("mc: trials must be >= 1");
  if (c.workers < 1) throw ConfigError("mc: workers must be >= 1");
  if (c.window_m < 1 || c.window_n < 1) throw ConfigError("mc: window must be >= 1");
  return c;
}

std::string serialize_experiment_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[system]\n";
  os << "T = " << fmt(c.T) << "\n";
  os << "F = " << fmt(c.F) << "\n";
  os << "sigma = " << fmt(c.sigma) << "\n";
  os << "sample_interval = " << fmt(c.sample_interval) << "\n";
  os << "pulse_length = " << c.pulse_length << "\n";
  os << "n_subcarriers = " << c.n_subcarriers << "\n";
  os << "carrier_hz = " << fmt(c.carrier_hz) << "\n";
  os << "symbol_power = " << fmt(c.symbol_power) << "\n";
  os << "[channel]\n";
  os << "vartheta = " << fmt(c.vartheta) << "\n";
  os << "delay_split = " << fmt(c.delay_split) << "\n";
  os << "tau_max_over_rms = " << fmt(c.tau_max_over_rms) << "\n";
  os << "tau_rms = " << fmt(c.tau_rms) << "\n";
  os << "f_d = " << fmt(c.f_d) << "\n";
  os << "path_count = " << c.path_count << "\n";
  os << "[mc]\n";
  os << "trials = " << c.trials << "\n";
  os << "seed = " << c.seed << "\n";
  os << "workers = " << c.workers << "\n";
  os << "window_m = " << c.window_m << "\n";
  os << "window_n = " << c.window_n << "\n";
  os << "[sweep]\n";
  os << "snr_db = " << fmt_list(c.snr_db) << "\n";
  os << "vartheta_grid = " << fmt_list(c.vartheta_grid) << "\n";
  os << "rms_ratio = " << fmt_list(c.rms_ratio) << "\n";
  os << "fig3_vartheta = " << fmt_list(c.fig3_vartheta) << "\n";
  os << "fig4_vartheta = " << fmt(c.fig4_vartheta) << "\n";
  os << "fig5_snr_db = " << fmt(c.fig5_snr_db) << "\n";
  os << "[modes]\n";
  os << "noise = " << (c.noise_mode == NoiseMode::kPaper ? "paper" : "physical") << "\n";
  os << "exclude_coset2_origin = " << (c.exclude_coset2_origin ? "true" : "false") << "\n";
  os << "eq26 = " << (c.eq26 == DelayFormula::kDerived ? "derived" : "printed") << "\n";
  return os.str();
}

}  // namespace hmt
