// SPDX-License-Identifier: Apache-2.0
#include "hmt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "hmt/pulse.hpp"

namespace hmt {

namespace {

// Runs fn(i) for i in [0, n) on `workers` threads over contiguous blocks.
// Callers index their outputs by i, so scheduling cannot affect results.
void parallel_for(long n, int workers, const std::function<void(long)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2 * workers) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace

double CoefficientSet::interference_power(bool exclude_coset2_origin) const {
  double acc = 0.0;
  for (int coset = 1; coset <= 2; ++coset) {
    for (int m = -window_m; m <= window_m; ++m) {
      for (int n = -window_n; n <= window_n; ++n) {
        if (coset == 1 && m == 0 && n == 0) continue;  // target
        if (exclude_coset2_origin && coset == 2 && m == 0 && n == 0) continue;
        acc += std::norm(at(m, n, coset));
      }
    }
  }
  return acc;
}

CoefficientSet trial_coefficients(const TrialConfig& cfg, const ChannelPaths& paths,
                                  double receiver_delay) {
  const double T = cfg.params.T, F = cfg.params.F;
  const GaussianPulse pulse{cfg.params.sigma};
  CoefficientSet set;
  set.window_m = cfg.window_m;
  set.window_n = cfg.window_n;
  set.values = Eigen::VectorXcd::Zero(2 * (2 * cfg.window_m + 1) *
                                      (2 * cfg.window_n + 1));
  // H_z = sum_p h_p e^{-j2pi f_z tau_p} e^{j2pi (f_z+nu_p)(t_z+tau_p)}
  //             * A_g(dt - t_z - tau_p, -(f_z + nu_p))
  for (int coset = 1; coset <= 2; ++coset) {
    const double to = (coset - 1) * 0.5 * T;
    const double fo = (coset - 1) * 0.5 * F;
    for (int m = -cfg.window_m; m <= cfg.window_m; ++m) {
      const double tz = m * T + to;
      for (int n = -cfg.window_n; n <= cfg.window_n; ++n) {
        const double fz = n * F + fo;
        cplx acc{0.0, 0.0};
        for (Eigen::Index p = 0; p < paths.count(); ++p) {
          const double tau = paths.delays[p];
          const double nu = paths.dopplers[p];
          const double phase =
              2.0 * kPi * (-fz * tau + (fz + nu) * (tz + tau));
          acc += paths.gains[p] * std::polar(1.0, phase) *
                 ambiguity_gaussian(pulse, receiver_delay - tz - tau, -(fz + nu));
        }
        set.values[set.index(m, n, coset)] = acc;
      }
    }
  }
  return set;
}

CoeffStats coefficient_stats(const TrialConfig& cfg, double receiver_delay) {
  if (cfg.trials < 1) throw std::invalid_argument("coefficient_stats: trials must be >= 1");
  const long n = cfg.trials;
  std::vector<double> sig(n), intf(n);
  parallel_for(n, cfg.workers, [&](long i) {
    TrialRng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
    const ChannelPaths paths = draw_paths(cfg.scattering, cfg.path_count, rng);
    const CoefficientSet set = trial_coefficients(cfg, paths, receiver_delay);
    sig[i] = set.target_power();
    intf[i] = set.interference_power(cfg.exclude_coset2_origin);
  });

  CoeffStats st;
  st.trials = n;
  double ms = 0.0, mi = 0.0;
  for (long i = 0; i < n; ++i) {
    ms += sig[i];
    mi += intf[i];
  }
  ms /= n;
  mi /= n;
  double vs = 0.0, vi = 0.0, cv = 0.0;
  for (long i = 0; i < n; ++i) {
    const double ds = sig[i] - ms, di = intf[i] - mi;
    vs += ds * ds;
    vi += di * di;
    cv += ds * di;
  }
  const double denom = (n > 1) ? (n - 1.0) : 1.0;
  st.mean_signal = ms;
  st.mean_interference = mi;
  st.var_signal = vs / denom;
  st.var_interference = vi / denom;
  st.cov = cv / denom;
  return st;
}

double resolve_delay(const TrialConfig& cfg, unsigned& flags) {
  switch (cfg.delay_mode) {
    case DelayMode::kTpr:
      return 0.0;
    case DelayMode::kFixed:
      return cfg.fixed_delay;
    case DelayMode::kMaxSinr: {
      const DelaySolution s =
          closed_form_delay(cfg.params.sigma, cfg.scattering.tau_rms, cfg.delay_formula);
      if (s.fallback) flags |= kFlagDelayFallback;
      return s.delay;
    }
    case DelayMode::kUpperBound: {
      const SinrOperatingPoint op{cfg.params, cfg.scattering, cfg.symbol_power,
                                  cfg.noise_power, 0.0};
      const UpperBound ub = sinr_upper_bound(op, cfg.analysis_options());
      flags |= ub.flags;
      return ub.delay;
    }
  }
  throw std::logic_error("resolve_delay: bad mode");
}

namespace {

SinrReport report_from_stats(const TrialConfig& cfg, double dt, unsigned flags,
                             const CoeffStats& st) {
  SinrReport r;
  r.delay_used = dt;
  r.flags = flags;
  r.signal_power = cfg.symbol_power * st.mean_signal;
  r.interference_power = cfg.symbol_power * st.mean_interference;

  const SinrOperatingPoint op{cfg.params, cfg.scattering, cfg.symbol_power,
                              cfg.noise_power, dt};
  const AnalysisOptions opts = cfg.analysis_options();
  r.noise_power = (cfg.noise_mode == NoiseMode::kPaper)
                      ? cfg.noise_power *
                            std::exp(-kPi * dt * dt / (2.0 * cfg.params.sigma))
                      : cfg.noise_power;

  const double denom = r.interference_power + r.noise_power;
  const double ratio = r.signal_power / denom;
  r.empirical_sinr_db = to_db(ratio);

  // Delta-method 95% CI on the ratio, from the per-trial variances.
  const long n = st.trials;
  const double s2 = cfg.symbol_power * cfg.symbol_power;
  const double var_num = s2 * st.var_signal / n;
  const double var_den = s2 * st.var_interference / n;
  const double cov_nd = s2 * st.cov / n;
  const double rel_var = var_num / (r.signal_power * r.signal_power) +
                         var_den / (denom * denom) -
                         2.0 * cov_nd / (r.signal_power * denom);
  const double sd_rel = std::sqrt(std::max(0.0, rel_var));
  r.ci_halfwidth_db = 10.0 / std::log(10.0) * 1.96 * sd_rel;

  r.theoretical_sinr_db = theoretical_sinr(op, opts).sinr_db;
  r.upper_bound_db = sinr_upper_bound(op, opts).sinr_db;
  return r;
}

}  // namespace

SinrReport estimate_sinr(const TrialConfig& cfg) {
  unsigned flags = 0;
  const double dt = resolve_delay(cfg, flags);
  const CoeffStats st = coefficient_stats(cfg, dt);
  return report_from_stats(cfg, dt, flags, st);
}

std::vector<SweepPoint> sweep(const TrialConfig& base, SweepAxis axis,
                              const std::vector<double>& values,
                              const std::vector<DelayMode>& receivers,
                              const VarthetaSplit& split) {
  if (values.empty()) throw std::invalid_argument("sweep: empty axis");
  std::vector<SweepPoint> out;

  switch (axis) {
    case SweepAxis::kSnrDb: {
      for (DelayMode rec : receivers) {
        TrialConfig cfg = base;
        cfg.delay_mode = rec;
        unsigned flags = 0;
        const double dt = resolve_delay(cfg, flags);
        const CoeffStats st = coefficient_stats(cfg, dt);
        for (double snr_db : values) {
          cfg.noise_power = cfg.symbol_power * std::pow(10.0, -snr_db / 10.0);
          out.push_back({snr_db, rec, report_from_stats(cfg, dt, flags, st)});
        }
      }
      break;
    }
    case SweepAxis::kVartheta: {
      for (double vt : values) {
        TrialConfig cfg = base;
        cfg.scattering = scattering_from_vartheta(base.params.sigma, vt, split);
        for (DelayMode rec : receivers) {
          cfg.delay_mode = rec;
          out.push_back({vt, rec, estimate_sinr(cfg)});
        }
      }
      break;
    }
    case SweepAxis::kRmsErrorRatio: {
      // Only the receiver's delay computation sees ratio * tau_rms; the
      // channel keeps the true spread.
      for (double ratio : values) {
        TrialConfig cfg = base;
        cfg.delay_mode = DelayMode::kFixed;
        unsigned flags = 0;
        const DelaySolution s = closed_form_delay(
            base.params.sigma, ratio * base.scattering.tau_rms, base.delay_formula);
        if (s.fallback) flags |= kFlagDelayFallback;
        cfg.fixed_delay = s.delay;
        const CoeffStats st = coefficient_stats(cfg, s.delay);
        out.push_back({ratio, DelayMode::kMaxSinr,
                       report_from_stats(cfg, s.delay, flags, st)});
      }
      break;
    }
  }
  return out;
}

double waveform_sinr_db(const TrialConfig& cfg, double receiver_delay,
                        int frame_halfwidth, long trials) {
  const int h = frame_halfwidth;
  const int side = 2 * h + 1;
  const GaussianPulse pulse{cfg.params.sigma};
  // Frame indices run 0..2h; the target symbol sits at (h, h, coset 1) so the
  // observed neighborhood is two-sided.
  const LatticePoint target{h, h, 1};

  // Grid covering every lattice pulse, every channel delay, and the receiver
  // pulse around the target.
  const double span = kPulseTailSigmas * std::sqrt(cfg.params.sigma);
  const double t_lo = -span;
  const double t_hi = (side - 1) * cfg.params.T + 0.5 * cfg.params.T +
                      cfg.scattering.tau_max + std::abs(receiver_delay) + span;
  const double ts = cfg.sample_interval;
  const SampleGrid grid{t_lo, ts,
                        static_cast<Eigen::Index>(std::ceil((t_hi - t_lo) / ts)) + 1};
  const ReceiverPulse rx{pulse, receiver_delay};

  double sum_sig = 0.0, sum_err = 0.0;
  for (long i = 0; i < trials; ++i) {
    TrialRng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
    const ChannelPaths paths = draw_paths(cfg.scattering, cfg.path_count, rng);
    const SymbolFrame frame = random_frame(side, side, cfg.symbol_power, rng);

    const SampledWaveform y =
        apply_channel(paths, analytic_frame(frame, cfg.params, pulse), grid);

    // Per-realization response of the target symbol alone (noiseless).
    SymbolFrame probe;
    probe.symbol_power = cfg.symbol_power;
    probe.coset1 = Eigen::MatrixXcd::Zero(side, side);
    probe.coset2 = Eigen::MatrixXcd::Zero(side, side);
    probe.coset1(h, h) = 1.0;
    const SampledWaveform y0 =
        apply_channel(paths, analytic_frame(probe, cfg.params, pulse), grid);
    const cplx h0 = demodulate(y0, target, cfg.params, rx);

    SampledWaveform noisy = y;
    const double nvar = cfg.noise_power / ts;
    for (Eigen::Index k = 0; k < noisy.size(); ++k)
      noisy.samples[k] += rng.complex_normal(nvar);

    const cplx c_hat = demodulate(noisy, target, cfg.params, rx);
    const cplx err = c_hat - h0 * frame.coset1(h, h);
    sum_sig += std::norm(h0);
    sum_err += std::norm(err);
  }
  const double sig = cfg.symbol_power * sum_sig / trials;
  const double err = sum_err / trials;
  return to_db(sig / err);
}

}  // namespace hmt
