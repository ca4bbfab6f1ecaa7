// SPDX-License-Identifier: Apache-2.0
//
// hmt: hexagonal multicarrier SINR toolkit.
//
// Subcommands: fig2 | fig3 | fig4 | fig5 | sweep | selftest.
// Exit codes: 0 ok, 2 config error, 3 numerical flags raised, 4 selftest failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hmt/config.hpp"
#include "hmt/figures.hpp"
#include "hmt/selftest.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_path = "-";
  std::string axis = "snr";
  std::string mode;
  std::string eq26;
  std::uint64_t seed = 0;
  bool have_seed = false;
  long trials = 0;
  int workers = 0;
};

hmt::ExperimentConfig load(const Options& opt) {
  hmt::ExperimentConfig cfg;
  if (!opt.config_path.empty())
    cfg = hmt::parse_experiment_config(hmt::load_config_file(opt.config_path));
  if (opt.have_seed) cfg.seed = opt.seed;
  if (opt.trials > 0) cfg.trials = opt.trials;
  if (opt.workers > 0) cfg.workers = opt.workers;
  if (!opt.mode.empty()) {
    if (opt.mode == "paper") cfg.noise_mode = hmt::NoiseMode::kPaper;
    else if (opt.mode == "physical") cfg.noise_mode = hmt::NoiseMode::kPhysical;
    else throw hmt::ConfigError("--mode: expected paper|physical");
  }
  if (!opt.eq26.empty()) {
    if (opt.eq26 == "derived") cfg.eq26 = hmt::DelayFormula::kDerived;
    else if (opt.eq26 == "printed") cfg.eq26 = hmt::DelayFormula::kPrinted;
    else throw hmt::ConfigError("--eq26: expected derived|printed");
  }
  return cfg;
}

int emit(const Options& opt, const std::string& text) {
  if (opt.out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << opt.out_path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hexagonal multicarrier transmission SINR toolkit"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration file (key = value)");
    sub->add_option("--out", opt.out_path, "output path ('-' for stdout)");
    sub->add_option("--seed", opt.seed, "master seed")->each([&](const std::string&) {
      opt.have_seed = true;
    });
    sub->add_option("--trials", opt.trials, "Monte-Carlo trials per point");
    sub->add_option("--workers", opt.workers, "worker threads");
    sub->add_option("--mode", opt.mode, "noise accounting: paper|physical");
    sub->add_option("--eq26", opt.eq26, "delay formula constants: derived|printed");
  };

  CLI::App* fig2 = app.add_subcommand("fig2", "prototype pulse comparison");
  CLI::App* fig3 = app.add_subcommand("fig3", "SINR vs SNR, two spread factors");
  CLI::App* fig4 = app.add_subcommand("fig4", "robustness to tau_rms estimation error");
  CLI::App* fig5 = app.add_subcommand("fig5", "SINR vs channel spread factor");
  CLI::App* sweep = app.add_subcommand("sweep", "generic one-axis sweep");
  CLI::App* selftest = app.add_subcommand("selftest", "run the oracle/invariant checks");
  for (CLI::App* s : {fig2, fig3, fig4, fig5, sweep}) add_common(s);
  sweep->add_option("--axis", opt.axis, "snr|vartheta|rms_ratio");
  selftest->add_option("--workers", opt.workers, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) {
      const auto results = hmt::run_selftest(opt.workers > 0 ? opt.workers : 1);
      int failed = 0;
      for (const auto& r : results) {
        const char* tag = r.informational ? "info" : (r.pass ? "PASS" : "FAIL");
        std::printf("[%s] %-45s %s\n", tag, r.id.c_str(), r.detail.c_str());
        if (!r.pass) ++failed;
      }
      std::printf("%zu checks, %d failed\n", results.size(), failed);
      return failed ? 4 : 0;
    }

    const hmt::ExperimentConfig cfg = load(opt);
    std::ostringstream os;
    unsigned flags = 0;
    if (fig2->parsed()) flags = hmt::run_fig2(cfg, os);
    else if (fig3->parsed()) flags = hmt::run_fig3(cfg, os);
    else if (fig4->parsed()) flags = hmt::run_fig4(cfg, os);
    else if (fig5->parsed()) flags = hmt::run_fig5(cfg, os);
    else if (sweep->parsed()) flags = hmt::run_sweep(cfg, opt.axis, os);
    const int rc = emit(opt, os.str());
    if (rc) return rc;
    if (flags) {
      std::cerr << "note: numerical flags raised (status bits " << flags << ")\n";
      return 3;
    }
    return 0;
  } catch (const hmt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
