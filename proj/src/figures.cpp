// SPDX-License-Identifier: Apache-2.0
#include "hmt/figures.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <vector>

#include "hmt/pulse.hpp"

namespace hmt {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// "0.07" -> "t0p07" column suffix
std::string theta_tag(double vt) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", vt);
  std::string s = "t";
  for (char c : std::string(buf)) s += (c == '.') ? 'p' : c;
  return s;
}

std::string ratio_tag(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", r);
  std::string s = "r";
  for (char c : std::string(buf)) s += (c == '.') ? 'p' : c;
  return s;
}

void write_header(std::ostream& os, const ExperimentConfig& cfg, const char* figure) {
  os << "# hmt " << figure << "\n";
  os << "# config-begin\n";
  std::istringstream cfg_text(serialize_experiment_config(cfg));
  std::string line;
  while (std::getline(cfg_text, line)) os << "# " << line << "\n";
  os << "# config-end\n";
  os << "# channel split: tau_rms = sqrt(sigma*vartheta/delay_split), "
        "tau_max = tau_max_over_rms*tau_rms (= "
     << num(cfg.tau_max_over_rms)
     << "*tau_rms), f_d = vartheta/tau_max; explicit tau_rms/f_d keys override\n";
  os << "# modes: noise=" << (cfg.noise_mode == NoiseMode::kPaper ? "paper" : "physical")
     << " exclude_coset2_origin=" << (cfg.exclude_coset2_origin ? "true" : "false")
     << " eq26=" << (cfg.eq26 == DelayFormula::kDerived ? "derived" : "printed") << "\n";
  os << "# status bits: 1=closed-form-delay-fallback 2=ub-nonunimodal "
        "4=ub-bracket-edge\n";
}

EnergyBreakdown theory_at(const ExperimentConfig& cfg, const ExpUScattering& sc,
                          double snr_db, double dt, NoiseMode mode) {
  SinrOperatingPoint op{cfg.lattice(), sc, cfg.symbol_power,
                        cfg.symbol_power * std::pow(10.0, -snr_db / 10.0), dt};
  AnalysisOptions opts{mode, cfg.exclude_coset2_origin, cfg.window_m, cfg.window_n, 64};
  return theoretical_sinr(op, opts);
}

}  // namespace

unsigned run_fig2(const ExperimentConfig& cfg, std::ostream& os) {
  write_header(os, cfg, "fig2");
  const double sigma = cfg.effective_sigma();
  const GaussianPulse pulse{sigma};

  // Receiver delays for the two spread factors shown in the figure.
  const double vts[2] = {0.1, 0.04};
  double dts[2];
  unsigned flags = 0;
  for (int i = 0; i < 2; ++i) {
    const ExpUScattering sc = cfg.scattering_for(vts[i]);
    const DelaySolution s = closed_form_delay(sigma, sc.tau_rms, cfg.eq26);
    if (s.fallback) flags |= kFlagDelayFallback;
    dts[i] = s.delay;
  }
  os << "# maxsinr delays: theta=0.1 -> " << num(dts[0]) << " s, theta=0.04 -> "
     << num(dts[1]) << " s\n";
  os << "t_s,tpr_pulse,maxsinr_pulse_theta_0p10,maxsinr_pulse_theta_0p04,status\n";
  const int n = cfg.pulse_length;
  for (int k = 0; k < n; ++k) {
    const double t = (k - n / 2) * cfg.sample_interval;
    os << num(t) << "," << num(eval_pulse(pulse, t)) << ","
       << num(eval_pulse(pulse, t - dts[0])) << "," << num(eval_pulse(pulse, t - dts[1]))
       << "," << flags << "\n";
  }
  return flags;
}

unsigned run_fig3(const ExperimentConfig& cfg, std::ostream& os) {
  write_header(os, cfg, "fig3");
  unsigned all_flags = 0;

  struct ThetaBlock {
    double vt;
    ExpUScattering sc;
    std::vector<SweepPoint> tpr, maxsinr;
  };
  std::vector<ThetaBlock> blocks;
  for (double vt : cfg.fig3_vartheta) {
    ThetaBlock b;
    b.vt = vt;
    b.sc = cfg.scattering_for(vt);
    TrialConfig base = cfg.trial_config(vt, cfg.snr_db.front());
    base.delay_mode = DelayMode::kTpr;
    b.tpr = sweep(base, SweepAxis::kSnrDb, cfg.snr_db, {DelayMode::kTpr}, cfg.split());
    b.maxsinr =
        sweep(base, SweepAxis::kSnrDb, cfg.snr_db, {DelayMode::kMaxSinr}, cfg.split());
    blocks.push_back(std::move(b));
  }

  os << "snr_db";
  for (const auto& b : blocks) {
    const std::string tag = theta_tag(b.vt);
    os << ",tpr_theory_db_" << tag << ",maxsinr_theory_db_" << tag << ",ub_db_" << tag
       << ",tpr_emp_db_" << tag << ",maxsinr_emp_db_" << tag << ",ci_db_" << tag
       << ",tpr_theory_phys_db_" << tag << ",maxsinr_theory_phys_db_" << tag
       << ",maxsinr_dt_s_" << tag;
  }
  os << ",status\n";

  for (size_t i = 0; i < cfg.snr_db.size(); ++i) {
    const double snr = cfg.snr_db[i];
    os << num(snr);
    unsigned row_flags = 0;
    for (const auto& b : blocks) {
      const SinrReport& rt = b.tpr[i].report;
      const SinrReport& rm = b.maxsinr[i].report;
      row_flags |= rt.flags | rm.flags;
      const double ci = std::max(rt.ci_halfwidth_db, rm.ci_halfwidth_db);
      const EnergyBreakdown tp = theory_at(cfg, b.sc, snr, 0.0, NoiseMode::kPhysical);
      const EnergyBreakdown mp =
          theory_at(cfg, b.sc, snr, rm.delay_used, NoiseMode::kPhysical);
      os << "," << num(rt.theoretical_sinr_db) << "," << num(rm.theoretical_sinr_db)
         << "," << num(rm.upper_bound_db) << "," << num(rt.empirical_sinr_db) << ","
         << num(rm.empirical_sinr_db) << "," << num(ci) << "," << num(tp.sinr_db) << ","
         << num(mp.sinr_db) << "," << num(rm.delay_used);
    }
    os << "," << row_flags << "\n";
    all_flags |= row_flags;
  }
  return all_flags;
}

unsigned run_fig4(const ExperimentConfig& cfg, std::ostream& os) {
  write_header(os, cfg, "fig4");
  unsigned all_flags = 0;
  const double vt = cfg.fig4_vartheta;
  os << "# maxsinr receiver with misreported tau_rms (channel keeps the true value), "
        "vartheta="
     << num(vt) << "\n";

  // One coefficient pass per ratio (delays differ), reused across the SNR axis.
  const ExpUScattering sc = cfg.scattering_for(vt);
  std::vector<double> dts(cfg.rms_ratio.size());
  std::vector<unsigned> dt_flags(cfg.rms_ratio.size(), 0);
  std::vector<CoeffStats> stats(cfg.rms_ratio.size());
  for (size_t j = 0; j < cfg.rms_ratio.size(); ++j) {
    const DelaySolution s = closed_form_delay(cfg.effective_sigma(),
                                              cfg.rms_ratio[j] * sc.tau_rms, cfg.eq26);
    if (s.fallback) dt_flags[j] |= kFlagDelayFallback;
    dts[j] = s.delay;
    TrialConfig t = cfg.trial_config(vt, cfg.snr_db.front());
    stats[j] = coefficient_stats(t, dts[j]);
  }

  os << "snr_db";
  for (double r : cfg.rms_ratio) os << ",sinr_db_" << ratio_tag(r);
  for (double r : cfg.rms_ratio) os << ",sinr_theory_db_" << ratio_tag(r);
  for (double r : cfg.rms_ratio) os << ",dt_s_" << ratio_tag(r);
  os << ",status\n";

  for (double snr : cfg.snr_db) {
    os << num(snr);
    unsigned row_flags = 0;
    std::vector<double> emp(cfg.rms_ratio.size()), theo(cfg.rms_ratio.size());
    for (size_t j = 0; j < cfg.rms_ratio.size(); ++j) {
      TrialConfig t = cfg.trial_config(vt, snr);
      t.delay_mode = DelayMode::kFixed;
      t.fixed_delay = dts[j];
      // reconstruct the report from the cached statistics
      const double noise =
          (cfg.noise_mode == NoiseMode::kPaper)
              ? t.noise_power * std::exp(-kPi * dts[j] * dts[j] /
                                         (2.0 * t.params.sigma))
              : t.noise_power;
      const double sig = t.symbol_power * stats[j].mean_signal;
      const double intf = t.symbol_power * stats[j].mean_interference;
      emp[j] = 10.0 * std::log10(sig / (intf + noise));
      theo[j] = theory_at(cfg, sc, snr, dts[j], cfg.noise_mode).sinr_db;
      row_flags |= dt_flags[j];
    }
    for (double v : emp) os << "," << num(v);
    for (double v : theo) os << "," << num(v);
    for (double v : dts) os << "," << num(v);
    os << "," << row_flags << "\n";
    all_flags |= row_flags;
  }
  return all_flags;
}

unsigned run_fig5(const ExperimentConfig& cfg, std::ostream& os) {
  write_header(os, cfg, "fig5");
  os << "# snr_db = " << num(cfg.fig5_snr_db) << "\n";
  unsigned all_flags = 0;

  TrialConfig base = cfg.trial_config(cfg.vartheta_grid.front(), cfg.fig5_snr_db);
  const auto points = sweep(base, SweepAxis::kVartheta, cfg.vartheta_grid,
                            {DelayMode::kTpr, DelayMode::kMaxSinr}, cfg.split());

  os << "vartheta,tpr_db,maxsinr_db,ub_db,tpr_theory_db,maxsinr_theory_db,ci_db,"
        "tpr_theory_phys_db,maxsinr_theory_phys_db,maxsinr_dt_s,status\n";
  for (size_t i = 0; i < cfg.vartheta_grid.size(); ++i) {
    const double vt = cfg.vartheta_grid[i];
    const SinrReport& rt = points[2 * i].report;
    const SinrReport& rm = points[2 * i + 1].report;
    const unsigned row_flags = rt.flags | rm.flags;
    const double ci = std::max(rt.ci_halfwidth_db, rm.ci_halfwidth_db);
    const ExpUScattering sc = cfg.scattering_for(vt);
    const EnergyBreakdown tp =
        theory_at(cfg, sc, cfg.fig5_snr_db, 0.0, NoiseMode::kPhysical);
    const EnergyBreakdown mp =
        theory_at(cfg, sc, cfg.fig5_snr_db, rm.delay_used, NoiseMode::kPhysical);
    os << num(vt) << "," << num(rt.empirical_sinr_db) << ","
       << num(rm.empirical_sinr_db) << "," << num(rm.upper_bound_db) << ","
       << num(rt.theoretical_sinr_db) << "," << num(rm.theoretical_sinr_db) << ","
       << num(ci) << "," << num(tp.sinr_db) << "," << num(mp.sinr_db) << ","
       << num(rm.delay_used) << "," << row_flags << "\n";
    all_flags |= row_flags;
  }
  return all_flags;
}

unsigned run_sweep(const ExperimentConfig& cfg, const std::string& axis,
                   std::ostream& os) {
  write_header(os, cfg, ("sweep:" + axis).c_str());
  unsigned all_flags = 0;
  std::vector<SweepPoint> points;
  TrialConfig base = cfg.trial_config(cfg.vartheta, cfg.snr_db.front());
  if (axis == "snr") {
    points = sweep(base, SweepAxis::kSnrDb, cfg.snr_db,
                   {DelayMode::kTpr, DelayMode::kMaxSinr, DelayMode::kUpperBound},
                   cfg.split());
  } else if (axis == "vartheta") {
    base.noise_power = cfg.symbol_power * std::pow(10.0, -cfg.fig5_snr_db / 10.0);
    points = sweep(base, SweepAxis::kVartheta, cfg.vartheta_grid,
                   {DelayMode::kTpr, DelayMode::kMaxSinr}, cfg.split());
  } else if (axis == "rms_ratio") {
    base.noise_power = cfg.symbol_power * std::pow(10.0, -cfg.fig5_snr_db / 10.0);
    base.scattering = cfg.scattering_for(cfg.fig4_vartheta);
    points = sweep(base, SweepAxis::kRmsErrorRatio, cfg.rms_ratio, {}, cfg.split());
  } else {
    throw ConfigError("sweep: unknown axis '" + axis + "' (snr|vartheta|rms_ratio)");
  }
  os << "axis,value,receiver,empirical_db,theory_db,ub_db,ci_db,dt_s,status\n";
  for (const auto& p : points) {
    const char* rec = p.receiver == DelayMode::kTpr         ? "tpr"
                      : p.receiver == DelayMode::kMaxSinr   ? "maxsinr"
                      : p.receiver == DelayMode::kUpperBound ? "upper_bound"
                                                             : "fixed";
    os << axis << "," << num(p.axis_value) << "," << rec << ","
       << num(p.report.empirical_sinr_db) << "," << num(p.report.theoretical_sinr_db)
       << "," << num(p.report.upper_bound_db) << "," << num(p.report.ci_halfwidth_db)
       << "," << num(p.report.delay_used) << "," << p.report.flags << "\n";
    all_flags |= p.report.flags;
  }
  return all_flags;
}

}  // namespace hmt
