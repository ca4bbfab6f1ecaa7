// SPDX-License-Identifier: Apache-2.0
#include "hmt/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "hmt/config.hpp"
#include "hmt/figures.hpp"
#include "hmt/oracle.hpp"
#include "hmt/quadrature.hpp"

namespace hmt {

namespace {

struct Ctx {
  std::vector<CheckResult> results;
  int workers = 1;
  ExperimentConfig cfg;  // defaults: the simulation setup under study

  void add(const std::string& id, bool pass, const std::string& detail,
           bool informational = false) {
    results.push_back({id, pass || informational, informational, detail});
  }
  void add_bound(const std::string& id, double measured, double tol) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "measured=%.3e tol=%.3e", measured, tol);
    add(id, measured < tol, buf);
  }
};

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0 ? std::abs(a - b) / scale : 0.0;
}

// ---------------------------------------------------------------- pulse

void pulse_checks(Ctx& c) {
  {
    const GaussianPulse p{1e-7};
    const cplx a = ambiguity_gaussian(p, 1e-5, 100.0);
    const cplx r = oracle::riemann_cross_ambiguity(p, 0.0, 1e-5, 100.0);
    c.add_bound("pulse.ambiguity_riemann_point", std::abs(a - r), 1e-6);
  }
  {
    // 11x11 grid over +/-3 sqrt(sigma) x +/-3/sqrt(sigma)
    const GaussianPulse p{1e-7};
    const double rt = std::sqrt(p.sigma);
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j <= 10; ++j) {
        const double tau = (-3.0 + 0.6 * i) * rt;
        const double nu = (-3.0 + 0.6 * j) / rt;
        worst = std::max(worst, std::abs(ambiguity_gaussian(p, tau, nu) -
                                         oracle::riemann_cross_ambiguity(p, 0.0, tau, nu)));
      }
    }
    c.add_bound("pulse.ambiguity_riemann_grid", worst, 1e-6);
  }
  {
    // production discrete cross-ambiguity vs the closed form, on-grid taus
    const GaussianPulse p{1e-7};
    const double rt = std::sqrt(p.sigma);
    const double ts = rt / 100.0;
    const SampleGrid g = pulse_grid(p, 0.0, ts, 3.0 * rt);
    const SampledWaveform w = shifted_pulse_samples(p, 0.0, g);
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j <= 10; ++j) {
        const double tau = (i - 5) * 60.0 * ts;  // on-grid, spans +/-3 rt
        const double nu = (-3.0 + 0.6 * j) / rt;
        worst = std::max(worst, std::abs(cross_ambiguity_numeric(w, w, tau, nu) -
                                         ambiguity_gaussian(p, tau, nu)));
      }
    }
    c.add_bound("pulse.numeric_cross_ambiguity_grid", worst, 1e-6);
  }
  {
    // shifted copy: |A_{g, g(.-d)}(tau, nu)| = |A_g(tau + d, nu)|
    const GaussianPulse p{1e-7};
    const double rt = std::sqrt(p.sigma);
    const double ts = rt / 100.0;
    const double d = 0.37 * rt;  // deliberately off-grid
    const SampleGrid g = pulse_grid(p, 0.0, ts, 3.0 * rt + d);
    const SampledWaveform a = shifted_pulse_samples(p, 0.0, g);
    const SampledWaveform b = shifted_pulse_samples(p, d, g);
    double worst = 0.0;
    for (int i = -4; i <= 4; ++i) {
      const double tau = i * 50.0 * ts;
      const double nu = 0.4 * i / rt;
      worst = std::max(worst, std::abs(std::abs(cross_ambiguity_numeric(a, b, tau, nu)) -
                                       std::abs(ambiguity_gaussian(p, tau + d, nu))));
    }
    c.add_bound("pulse.cross_ambiguity_shift_identity", worst, 1e-6);
  }
  {
    const GaussianPulse p{2.3094010767585035e-9};
    const double d = 1.7e-6;
    const SampledWaveform w =
        shifted_pulse_samples(p, d, pulse_grid(p, d, 1e-7, std::abs(d)));
    c.add_bound("pulse.shifted_energy_unit", std::abs(w.energy() - 1.0), 1e-6);
  }
  {
    const GaussianPulse p{3.7e-8};
    double worst_over = 0.0;
    bool peak_ok = std::abs(ambiguity_gaussian(p, 0.0, 0.0) - cplx{1.0, 0.0}) < 1e-15;
    double sep = 0.0;
    const double rt = std::sqrt(p.sigma);
    for (int i = -5; i <= 5; ++i) {
      for (int j = -5; j <= 5; ++j) {
        const double tau = 0.8 * i * rt, nu = 0.8 * j / rt;
        const double m = std::abs(ambiguity_gaussian(p, tau, nu));
        if (i || j) worst_over = std::max(worst_over, m - (1.0 - 1e-12));
        sep = std::max(sep, std::abs(m - std::abs(ambiguity_gaussian(p, tau, 0.0)) *
                                             std::abs(ambiguity_gaussian(p, 0.0, nu))));
      }
    }
    c.add("pulse.peak_at_origin", peak_ok && worst_over <= 0.0,
          "A(0,0)=1, |A|<1 elsewhere");
    c.add_bound("pulse.magnitude_separability", sep, 1e-12);
  }
}

// ---------------------------------------------------------------- hexmod

void hexmod_checks(Ctx& c) {
  {
    const LatticeParams lp = match_parameters(5e-6, 100.0, 1.0, MatchMode::kEq8);
    const double r1 = std::abs(lp.sigma * std::sqrt(3.0) * lp.F / lp.T - 1.0);
    const double r2 = std::abs(lp.T * lp.F - 2.0);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "sigma=%.6e residuals %.2e %.2e", lp.sigma, r1, r2);
    c.add("hexmod.match_eq8_system", lp.sigma == 1e-7 && r1 < 1e-12 && r2 < 1e-12, buf);
  }
  {
    // 3x3 frame: waveform energy and all-18 demodulation against the Gram matrix
    TrialRng rng(derive_seed(11, 0));
    ExperimentConfig ec;
    const LatticeParams lp = ec.lattice();
    const GaussianPulse pulse{lp.sigma};
    const SymbolFrame frame = random_frame(3, 3, 1.0, rng);
    const double span = kPulseTailSigmas * std::sqrt(lp.sigma);
    const SampleGrid grid{-span, ec.sample_interval,
                          static_cast<Eigen::Index>(
                              std::ceil((2.5 * lp.T + 2 * span) / ec.sample_interval)) +
                              1};
    const SampledWaveform x = modulate(frame, lp, pulse, grid);

    std::vector<LatticePoint> pts;
    Eigen::VectorXcd sym(18);
    int k = 0;
    for (int coset = 1; coset <= 2; ++coset)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
          pts.push_back({m, n, coset});
          sym[k++] = (coset == 1) ? frame.coset1(m, n) : frame.coset2(m, n);
        }
    const Eigen::MatrixXcd gram = oracle::lattice_gram(pts, lp, pulse, grid);
    const double energy_direct = x.energy();
    const double energy_gram = std::real(sym.dot(gram * sym));
    c.add_bound("hexmod.frame_energy_gram", rel_err(energy_direct, energy_gram), 1e-9);

    const ReceiverPulse rx{pulse, 0.0};
    double worst = 0.0;
    const Eigen::VectorXcd pred = gram * sym;
    for (int i = 0; i < 18; ++i)
      worst = std::max(worst, std::abs(demodulate(x, pts[i], lp, rx) - pred[i]));
    c.add_bound("hexmod.demodulate_gram_vector", worst, 1e-9);
  }
  {
    // matched-filter shift loss e^{-pi dt^2 / (2 sigma)}
    ExperimentConfig ec;
    const LatticeParams lp = ec.lattice();
    const GaussianPulse pulse{lp.sigma};
    SymbolFrame one;
    one.coset1 = Eigen::MatrixXcd::Constant(1, 1, 1.0);
    one.coset2 = Eigen::MatrixXcd::Zero(1, 1);
    const double dt = 0.6 * std::sqrt(lp.sigma);
    const SampleGrid grid = pulse_grid(pulse, 0.0, 1e-7, dt);
    const SampledWaveform x = modulate(one, lp, pulse, grid);
    const cplx got = demodulate(x, {0, 0, 1}, lp, {pulse, dt});
    const double want = std::exp(-kPi * dt * dt / (2.0 * lp.sigma));
    c.add_bound("hexmod.demod_shift_loss", std::abs(std::abs(got) - want), 1e-9);
  }
}

// ---------------------------------------------------------------- channel

void channel_checks(Ctx& c) {
  const ExpUScattering sc{5e-6, 100.0, 5e-5};
  c.add_bound("channel.scattering_mass",
              std::abs(oracle::scattering_mass_quadrature(sc) - 1.0), 1e-9);
  {
    // delay moments (>= 1e6 draws), Doppler KS (1e5 samples), gain power,
    // WSSUS disjoint-bin correlation (1e5 realizations)
    TrialRng rng(derive_seed(21, 0));
    const int paths = 64;
    const long realizations = 100000;
    double sum_d = 0.0, sum_d2 = 0.0;
    long nd = 0;
    std::vector<double> dops;
    dops.reserve(100096);
    double gain_power = 0.0;
    cplx bin_cross{0.0, 0.0};
    double bin1_pow = 0.0, bin2_pow = 0.0;
    for (long t = 0; t < realizations; ++t) {
      const ChannelPaths ch = draw_paths(sc, paths, rng);
      for (int p = 0; p < paths; ++p) {
        sum_d += ch.delays[p];
        sum_d2 += ch.delays[p] * ch.delays[p];
        ++nd;
      }
      if (dops.size() < 100000)
        for (int p = 0; p < paths; ++p) dops.push_back(ch.dopplers[p]);
      gain_power += ch.gains.squaredNorm();
      cplx g1{0.0, 0.0}, g2{0.0, 0.0};
      for (int p = 0; p < paths; ++p) {
        if (ch.delays[p] < sc.tau_rms)
          g1 += ch.gains[p];
        else if (ch.delays[p] > 2.0 * sc.tau_rms)
          g2 += ch.gains[p];
      }
      bin_cross += g1 * std::conj(g2);
      bin1_pow += std::norm(g1);
      bin2_pow += std::norm(g2);
    }
    const double mean = sum_d / nd;
    const double sd = std::sqrt(sum_d2 / nd - mean * mean);
    const double want_sd = oracle::truncated_exp_std(sc.tau_rms, sc.tau_max);
    c.add_bound("channel.delay_rms_vs_truncated_exp", rel_err(sd, want_sd), 0.02);
    c.add_bound("channel.doppler_ks", oracle::ks_statistic(dops, sc.f_d), 0.01);
    c.add_bound("channel.gain_total_power",
                std::abs(gain_power / realizations - 1.0), 0.01);
    // normalized cross-correlation of disjoint-delay-bin gain sums
    const double corr = std::abs(bin_cross) / std::sqrt(bin1_pow * bin2_pow + 1e-300);
    c.add_bound("channel.wssus_bin_correlation", corr, 0.02);
  }
  {
    // deterministic redraw
    TrialRng r1(derive_seed(37, 5)), r2(derive_seed(37, 5));
    const ChannelPaths a = draw_paths(sc, 16, r1), b = draw_paths(sc, 16, r2);
    const bool same = a.delays == b.delays && a.dopplers == b.dopplers &&
                      (a.gains.array() == b.gains.array()).all();
    c.add("channel.seed_determinism", same, "identical seed, identical paths");
  }
  {
    // single delayed / Doppler-shifted path against the ambiguity magnitude
    ExperimentConfig ec;
    const LatticeParams lp = ec.lattice();
    const GaussianPulse pulse{lp.sigma};
    AnalyticSignal one;
    one.pulse = pulse;
    one.terms.push_back({0.0, 0.0, cplx{1.0, 0.0}});
    const double tau0 = 0.8 * std::sqrt(lp.sigma), nu0 = 0.5 / std::sqrt(lp.sigma);
    ChannelPaths delay_path;
    delay_path.delays = Eigen::VectorXd::Constant(1, tau0);
    delay_path.dopplers = Eigen::VectorXd::Zero(1);
    delay_path.gains = Eigen::VectorXcd::Constant(1, cplx{1.0, 0.0});
    const SampleGrid grid = pulse_grid(pulse, 0.0, 1e-7, tau0 + std::sqrt(lp.sigma));
    const SampledWaveform y = apply_channel(delay_path, one, grid);
    const double got = std::abs(demodulate(y, {0, 0, 1}, lp, {pulse, 0.0}));
    c.add_bound("channel.apply_delay_peak",
                std::abs(got - std::exp(-kPi * tau0 * tau0 / (2.0 * lp.sigma))), 1e-9);

    ChannelPaths dop_path = delay_path;
    dop_path.delays[0] = 0.0;
    dop_path.dopplers[0] = nu0;
    const SampledWaveform y2 = apply_channel(dop_path, one, grid);
    const double got2 = std::abs(demodulate(y2, {0, 0, 1}, lp, {pulse, 0.0}));
    c.add_bound("channel.apply_doppler_peak",
                std::abs(got2 - std::exp(-kPi * lp.sigma * nu0 * nu0 / 2.0)), 1e-9);
  }
  {
    // mean output power of the unit pulse through random channels; the
    // coarse 4 us grid is still alias-free for this pulse width
    ExperimentConfig ec;
    const GaussianPulse pulse{ec.effective_sigma()};
    AnalyticSignal one;
    one.pulse = pulse;
    one.terms.push_back({0.0, 0.0, cplx{1.0, 0.0}});
    const SampleGrid grid = pulse_grid(pulse, 0.0, 4e-6, sc.tau_max);
    TrialRng rng(derive_seed(55, 0));
    double acc = 0.0;
    const long trials = 10000;
    for (long t = 0; t < trials; ++t) {
      const ChannelPaths ch = draw_paths(sc, 64, rng);
      acc += apply_channel(ch, one, grid).energy();
    }
    c.add_bound("channel.mean_power_conservation", std::abs(acc / trials - 1.0), 0.02);
  }
}

// ---------------------------------------------------------------- analysis

void analysis_checks(Ctx& c) {
  {
    // closed form vs adaptive quadrature, 10x10x10
    double worst = 0.0, worst_ab = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double sigma = std::pow(10.0, -9.0 + i * 0.8);  // 1e-9 .. ~1e-2
      for (int j = 0; j < 10; ++j) {
        const double K = 0.5 + 2.2 * j;  // sqrt(sigma)/tau_rms in [0.5, 20.3]
        const double tau_rms = std::sqrt(sigma) / K;
        for (int k = 0; k < 10; ++k) {
          const double center = (-2.0 + 0.7 * k) * tau_rms;
          const double closed = delay_integral(sigma, tau_rms, center);
          const double quad = oracle::delay_integral_quadrature(sigma, tau_rms, center);
          worst = std::max(worst, rel_err(closed, quad));
          const DelayGainFactors f = delay_gain_factors(sigma, tau_rms, center);
          worst_ab = std::max(worst_ab, rel_err(f.a * f.b, closed));
        }
      }
    }
    c.add_bound("analysis.delay_integral_quadrature_grid", worst, 1e-9);
    c.add_bound("analysis.ab_product_identity_grid", worst_ab, 1e-10);
  }
  {
    ExperimentConfig ec;
    const double sigma = ec.effective_sigma();
    const ExpUScattering sc = ec.scattering_for(0.2);
    double worst = 0.0;
    for (int n = -4; n <= 4; ++n) {
      const double center = n * ec.F + 0.5 * ec.F;
      worst = std::max(worst, rel_err(doppler_integral(sigma, sc.f_d, center),
                                      oracle::doppler_integral_nu_form(sigma, sc.f_d,
                                                                       center)));
      worst = std::max(
          worst, rel_err(doppler_integral(sigma, sc.f_d, n * ec.F),
                         oracle::doppler_integral_nu_form(sigma, sc.f_d, n * ec.F)));
    }
    c.add_bound("analysis.doppler_nu_form_oracle", worst, 1e-8);
    double stab = 0.0;
    for (int n = 0; n <= 4; ++n)
      stab = std::max(stab, rel_err(doppler_integral(sigma, sc.f_d, n * ec.F, 64),
                                    doppler_integral(sigma, sc.f_d, n * ec.F, 128)));
    c.add_bound("analysis.doppler_order_stability", stab, 1e-8);
    c.add_bound("analysis.doppler_symmetry",
                rel_err(doppler_integral(sigma, sc.f_d, 2 * ec.F),
                        doppler_integral(sigma, sc.f_d, -2 * ec.F)),
                1e-14);
  }
  {
    // factorized signal energy vs honest 2-D quadrature
    SinrOperatingPoint op;
    op.params = {1.0, 1.0, 1e-7, 2.0};
    op.scattering = {5e-6, 100.0, 5e-5};
    op.symbol_power = 1.0;
    op.noise_power = 0.0;
    op.delay = 0.0;
    c.add_bound("analysis.signal_energy_2d_point",
                rel_err(signal_energy(op), oracle::signal_energy_quadrature(op)), 1e-8);
    ExperimentConfig ec;
    SinrOperatingPoint op2;
    op2.params = ec.lattice();
    op2.scattering = ec.scattering_for(0.2);
    op2.symbol_power = 1.0;
    op2.delay = closed_form_delay(op2.params.sigma, op2.scattering.tau_rms).delay;
    c.add_bound("analysis.signal_energy_2d_iv",
                rel_err(signal_energy(op2), oracle::signal_energy_quadrature(op2)),
                1e-6);
  }
  {
    // unimodality of the signal energy in dt, interior maximum above dt = 0
    ExperimentConfig ec;
    SinrOperatingPoint op;
    op.params = ec.lattice();
    op.scattering = ec.scattering_for(0.2);
    op.symbol_power = 1.0;
    const double hi = op.params.sigma / (2.0 * kPi * op.scattering.tau_rms) * 2.5;
    double prev = -1.0;
    int sign_changes = 0;
    double best = 0.0, at0 = 0.0;
    double last = 0.0;
    for (int i = 0; i <= 200; ++i) {
      op.delay = hi * i / 200.0;
      const double v = signal_energy(op);
      if (i == 0) at0 = v;
      best = std::max(best, v);
      if (i > 0 && (v - last) * prev < 0.0 && std::abs(v - last) > 1e-14 * best)
        ++sign_changes;
      if (i > 0 && std::abs(v - last) > 1e-14 * best) prev = v - last;
      last = v;
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "direction changes=%d max/at0=%.4f", sign_changes,
                  best / at0);
    c.add("analysis.signal_energy_unimodal", sign_changes <= 1 && best > at0, buf);
  }
  {
    // interference window saturation and the zero-spread orthogonality limit
    ExperimentConfig ec;
    SinrOperatingPoint op;
    op.params = ec.lattice();
    op.scattering = ec.scattering_for(0.2);
    op.symbol_power = 1.0;
    op.noise_power = 0.01;
    op.delay = closed_form_delay(op.params.sigma, op.scattering.tau_rms).delay;
    AnalysisOptions w4, w8;
    w8.window_m = w8.window_n = 8;
    c.add_bound("analysis.interference_window_saturation",
                rel_err(interference_noise_energy(op, w4),
                        interference_noise_energy(op, w8)),
                1e-10);

    // widely separated lattice, vanishing dispersion
    SinrOperatingPoint iso;
    const double sg = 1e-7;
    iso.params = LatticeParams::from_tf(20.0 * std::sqrt(sg), 20.0 / std::sqrt(sg), sg);
    iso.scattering = {1e-12, 1e-3, 1e-11};
    iso.symbol_power = 1.0;
    iso.noise_power = 0.123;
    iso.delay = 0.0;
    const double ein = interference_noise_energy(iso, w4);
    c.add_bound("analysis.orthogonality_limit", std::abs(ein - iso.noise_power), 1e-8);
  }
  {
    // erfc approximation quality against the library erfc
    double worst = 0.0;
    for (int i = 1; i <= 50; ++i) {
      const double x = 0.1 * i;
      worst = std::max(worst, rel_err(erfc_approx(x), std::erfc(x / std::sqrt(2.0))));
    }
    c.add_bound("analysis.erfc_approx_grid", worst, 0.02);
  }
  {
    // closed-form delay vs numeric argmax on a 20-point grid, K in [2.6, 7]
    double worst = 0.0, worst_printed = 0.0;
    const double sigmas[5] = {1e-9, 1e-8, 1e-7, 1e-6, 1e-5};
    for (int i = 0; i < 20; ++i) {
      const double K = 2.6 * std::pow(7.0 / 2.6, i / 19.0);
      const double sigma = sigmas[i % 5];
      const double tau_rms = std::sqrt(sigma) / K;
      const DelaySolution cf = closed_form_delay(sigma, tau_rms);
      const double am = argmax_delay_gain(sigma, tau_rms);
      worst = std::max(worst, std::abs(cf.delay - am) / am);
      const DelaySolution pr = closed_form_delay(sigma, tau_rms, DelayFormula::kPrinted);
      worst_printed = std::max(worst_printed, std::abs(pr.delay - am) / am);
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "derived rel=%.4f tol=0.05; printed-constants rel=%.4f (recorded, "
                  "no threshold)",
                  worst, worst_printed);
    c.add("analysis.closed_form_delay_grid", worst < 0.05, buf);

    // Large-K probe: the erfc approximation's argmax error grows ~ K^2, so
    // this point is reported, not asserted.
    const DelaySolution cf = closed_form_delay(1e-7, 5e-6);
    const double am = argmax_delay_gain(1e-7, 5e-6);
    std::snprintf(buf, sizeof(buf),
                  "sigma=1e-7 tau_rms=5e-6 (K=63.2): closed=%.4e argmax=%.4e rel=%.2f",
                  cf.delay, am, std::abs(cf.delay - am) / am);
    c.add("analysis.closed_form_delay_large_K_probe", true, buf, true);
  }
  {
    // dt stays below sigma/(2 pi tau_rms); grows with vartheta (matched sigma)
    ExperimentConfig ec;
    const double sigma = ec.effective_sigma();
    bool below = true, growing = true;
    double prev = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double vt = 0.04 + i * (0.31 / 19.0);
      const ExpUScattering sc = ec.scattering_for(vt);
      const DelaySolution s = closed_form_delay(sigma, sc.tau_rms);
      below = below && s.delay < sigma / (2.0 * kPi * sc.tau_rms);
      growing = growing && s.delay > prev;
      prev = s.delay;
    }
    c.add("analysis.delay_bounds_and_growth", below && growing,
          "dt < sigma/(2 pi tau_rms), increasing with vartheta");
  }
  {
    // d(ab)/ddt from closed forms vs central differences; stationarity at cf
    const double sigma = 1e-7, tau_rms = std::sqrt(sigma) / 3.0;
    auto ab = [&](double dt) { return delay_integral(sigma, tau_rms, dt); };
    auto dab = [&](double dt) {
      // a' b + a b' with b' = exp(-pi/sigma (s - dt)^2)
      const DelayGainFactors f = delay_gain_factors(sigma, tau_rms, dt);
      const double s = sigma / (2.0 * kPi * tau_rms);
      const double bp = std::exp(-kPi / sigma * (s - dt) * (s - dt));
      return -f.a * f.b / tau_rms + f.a * bp;
    };
    double worst = 0.0;
    for (int i = 1; i <= 8; ++i) {
      const double dt = 0.05 * i * tau_rms;  // away from the stationary point
      const double h = 1e-5 * tau_rms;
      const double fd = (ab(dt + h) - ab(dt - h)) / (2.0 * h);
      worst = std::max(worst, rel_err(fd, dab(dt)));
    }
    c.add_bound("analysis.ab_gradient_check", worst, 1e-6);

    const DelaySolution cf = closed_form_delay(sigma, tau_rms);
    const double h = 1e-4 * tau_rms;
    const double fd = (ab(cf.delay + h) - ab(cf.delay - h)) / (2.0 * h);
    // scale: peak curvature ~ |f''| h_range; compare slope against ab/tau_rms
    const double scale = ab(cf.delay) / tau_rms;
    c.add_bound("analysis.ab_stationarity_at_closed_form", std::abs(fd) / scale, 1e-2);
  }
  {
    // quadrature stability: halving the adaptive tolerance
    const double q1 = oracle::delay_integral_quadrature(1e-7, 5e-6, 1e-6);
    const double q2 = delay_integral(1e-7, 5e-6, 1e-6);
    c.add_bound("analysis.quadrature_refinement", rel_err(q1, q2), 1e-8);
  }
  {
    // upper bound collapses to dt = 0 without dispersion
    SinrOperatingPoint op;
    const double sg = 1e-7;
    op.params = LatticeParams::from_tf(20.0 * std::sqrt(sg), 20.0 / std::sqrt(sg), sg);
    op.scattering = {1e-12, 1e-3, 1e-11};
    op.symbol_power = 1.0;
    op.noise_power = 0.01;
    const UpperBound ub = sinr_upper_bound(op);
    c.add_bound("analysis.ub_zero_dispersion", std::abs(ub.delay), 2e-4 * std::sqrt(sg));
  }
  {
    // dominance chain ub >= maxsinr >= tpr over the vartheta grid at 20 dB
    ExperimentConfig ec;
    bool ok = true;
    std::ostringstream det;
    for (double vt : ec.vartheta_grid) {
      SinrOperatingPoint op;
      op.params = ec.lattice();
      op.scattering = ec.scattering_for(vt);
      op.symbol_power = 1.0;
      op.noise_power = 0.01;
      op.delay = 0.0;
      const double tpr = theoretical_sinr(op).sinr_db;
      op.delay = closed_form_delay(op.params.sigma, op.scattering.tau_rms).delay;
      const double mx = theoretical_sinr(op).sinr_db;
      const double ub = sinr_upper_bound(op).sinr_db;
      ok = ok && ub >= mx - 1e-9 && mx >= tpr;
    }
    c.add("analysis.dominance_chain", ok, "ub >= maxsinr >= tpr on the vartheta grid");
  }
  {
    // coset-2 origin convention: measured dB difference (recorded)
    ExperimentConfig ec;
    std::ostringstream det;
    for (double vt : {0.07, 0.2}) {
      SinrOperatingPoint op;
      op.params = ec.lattice();
      op.scattering = ec.scattering_for(vt);
      op.symbol_power = 1.0;
      op.noise_power = 0.01;
      op.delay = closed_form_delay(op.params.sigma, op.scattering.tau_rms).delay;
      AnalysisOptions incl, excl;
      excl.exclude_coset2_origin = true;
      det << "vt=" << vt << ": "
          << theoretical_sinr(op, excl).sinr_db - theoretical_sinr(op, incl).sinr_db
          << " dB  ";
    }
    c.add("analysis.coset2_origin_delta", true, det.str(), true);
  }
}

// ---------------------------------------------------------------- montecarlo

void montecarlo_checks(Ctx& c) {
  ExperimentConfig ec;
  ec.workers = c.workers;
  {
    // identity channel: H_0 = 1 and |H_z| = |A_g| at the lattice offsets
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    ChannelPaths ident;
    ident.delays = Eigen::VectorXd::Zero(1);
    ident.dopplers = Eigen::VectorXd::Zero(1);
    ident.gains = Eigen::VectorXcd::Constant(1, cplx{1.0, 0.0});
    const CoefficientSet set = trial_coefficients(cfg, ident, 0.0);
    const GaussianPulse pulse{cfg.params.sigma};
    double worst = std::abs(set.at(0, 0, 1) - cplx{1.0, 0.0});
    for (int coset = 1; coset <= 2; ++coset)
      for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) {
          const LatticePoint z{m, n, coset};
          const double want = std::abs(ambiguity_gaussian(
              pulse, time_offset(z, cfg.params), freq_offset(z, cfg.params)));
          worst = std::max(worst, std::abs(std::abs(set.at(m, n, coset)) - want));
        }
    c.add_bound("mc.identity_channel", worst, 1e-9);

    // re-matched single delayed path
    ChannelPaths one = ident;
    one.delays[0] = 3.7e-6;
    const CoefficientSet set2 = trial_coefficients(cfg, one, 3.7e-6);
    c.add_bound("mc.rematched_path", std::abs(std::abs(set2.at(0, 0, 1)) - 1.0), 1e-9);
  }
  {
    // analytic path-sum vs grid-evaluated coefficients
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    cfg.window_m = cfg.window_n = 2;
    double worst = 0.0;
    for (int trial = 0; trial < 2; ++trial) {
      TrialRng rng(derive_seed(77, trial));
      const ChannelPaths ch = draw_paths(cfg.scattering, 8, rng);
      const double dt = (trial == 0) ? 0.0 : 1.2e-5;
      const CoefficientSet a = trial_coefficients(cfg, ch, dt);
      const CoefficientSet g = oracle::trial_coefficients_grid(cfg, ch, dt);
      worst = std::max(worst, (a.values - g.values).cwiseAbs().maxCoeff());
    }
    c.add_bound("mc.analytic_vs_grid_coefficients", worst, 1e-9);
  }
  {
    // total captured energy against the term-by-term quadrature of the
    // scattering-weighted ambiguity sums
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    cfg.trials = 20000;
    cfg.master_seed = 101;
    const double dt = 0.0;
    const CoeffStats st = coefficient_stats(cfg, dt);
    double want = 0.0;
    const double sigma = cfg.params.sigma;
    const auto& sc = cfg.scattering;
    for (int coset = 1; coset <= 2; ++coset)
      for (int m = -cfg.window_m; m <= cfg.window_m; ++m)
        for (int n = -cfg.window_n; n <= cfg.window_n; ++n) {
          const LatticePoint z{m, n, coset};
          want += delay_integral(sigma, sc.tau_rms, dt - time_offset(z, cfg.params)) *
                  doppler_integral(sigma, sc.f_d, freq_offset(z, cfg.params)) /
                  (kPi * sc.tau_rms * sc.f_d);
        }
    const double got = st.mean_signal + st.mean_interference;
    c.add_bound("mc.energy_capture_vs_quadrature", rel_err(got, want), 0.01);

    // passivity: captured signal + interference below symbol power + 2%
    char buf[120];
    std::snprintf(buf, sizeof(buf), "S+I=%.5f", got);
    c.add("mc.energy_sanity", got <= 1.02 * cfg.symbol_power, buf);
  }
  {
    // empirical vs theoretical SINR
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    cfg.trials = 10000;
    cfg.delay_mode = DelayMode::kMaxSinr;
    const SinrReport r = estimate_sinr(cfg);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "emp=%.3f theo=%.3f ci=%.3f",
                  r.empirical_sinr_db, r.theoretical_sinr_db, r.ci_halfwidth_db);
    c.add("mc.empirical_vs_theory",
          std::abs(r.empirical_sinr_db - r.theoretical_sinr_db) < 0.5 &&
              r.ci_halfwidth_db < 0.2,
          buf);
  }
  {
    // determinism: repeated run and different worker counts, bit identical
    TrialConfig cfg = ec.trial_config(0.2, 15.0);
    cfg.trials = 400;
    cfg.delay_mode = DelayMode::kMaxSinr;
    cfg.workers = 1;
    const SinrReport a = estimate_sinr(cfg);
    const SinrReport b = estimate_sinr(cfg);
    cfg.workers = 4;
    const SinrReport d = estimate_sinr(cfg);
    const bool same = a.empirical_sinr_db == b.empirical_sinr_db &&
                      a.empirical_sinr_db == d.empirical_sinr_db &&
                      a.ci_halfwidth_db == d.ci_halfwidth_db;
    c.add("mc.determinism", same, "same seed, same bits at 1 and 4 workers");
  }
  {
    // CI shrinks like 1/sqrt(trials)
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    cfg.delay_mode = DelayMode::kTpr;
    double ci[3];
    long n[3] = {100, 1000, 10000};
    for (int i = 0; i < 3; ++i) {
      cfg.trials = n[i];
      ci[i] = estimate_sinr(cfg).ci_halfwidth_db;
    }
    const double r1 = ci[0] / ci[1] / std::sqrt(10.0);
    const double r2 = ci[1] / ci[2] / std::sqrt(10.0);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "ratios %.3f %.3f (want 1 +/- 0.2)", r1, r2);
    c.add("mc.ci_scaling", std::abs(r1 - 1.0) < 0.2 && std::abs(r2 - 1.0) < 0.2, buf);
  }
  {
    // receiver dominance within CI
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    cfg.trials = 4000;
    cfg.delay_mode = DelayMode::kTpr;
    const SinrReport t = estimate_sinr(cfg);
    cfg.delay_mode = DelayMode::kMaxSinr;
    const SinrReport m = estimate_sinr(cfg);
    c.add("mc.receiver_dominance",
          m.empirical_sinr_db >= t.empirical_sinr_db - t.ci_halfwidth_db,
          "maxsinr >= tpr - ci");
  }
  {
    // full waveform cross-check of the coefficient-domain estimator
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    cfg.noise_mode = NoiseMode::kPhysical;  // the waveform path samples real noise
    cfg.window_m = cfg.window_n = 1;        // 3x3 frame neighborhood
    cfg.trials = 1500;
    cfg.delay_mode = DelayMode::kMaxSinr;
    unsigned flags = 0;
    const double dt = resolve_delay(cfg, flags);
    const SinrReport coeff = estimate_sinr(cfg);
    const double wave = waveform_sinr_db(cfg, dt, 1, cfg.trials);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "coeff=%.3f wave=%.3f", coeff.empirical_sinr_db,
                  wave);
    c.add("mc.waveform_crosscheck", std::abs(coeff.empirical_sinr_db - wave) < 0.2, buf);
  }
  {
    // path-count saturation: P = 64 vs P = 256
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    cfg.trials = 10000;
    cfg.delay_mode = DelayMode::kMaxSinr;
    cfg.path_count = 64;
    const double a = estimate_sinr(cfg).empirical_sinr_db;
    cfg.path_count = 256;
    const double b = estimate_sinr(cfg).empirical_sinr_db;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "P64=%.3f P256=%.3f diff=%.3f dB", a, b, a - b);
    c.add("mc.path_count_saturation", std::abs(a - b) < 0.1, buf);
  }
  {
    // snr-axis sweep reuses statistics; must equal the direct estimate bit
    // for bit
    TrialConfig cfg = ec.trial_config(0.2, 20.0);
    cfg.trials = 500;
    const auto pts = sweep(cfg, SweepAxis::kSnrDb, {10.0, 20.0},
                           {DelayMode::kMaxSinr}, ec.split());
    cfg.delay_mode = DelayMode::kMaxSinr;
    cfg.noise_power = cfg.symbol_power * std::pow(10.0, -2.0);
    const SinrReport direct = estimate_sinr(cfg);
    c.add("mc.sweep_cache_consistency",
          pts[1].report.empirical_sinr_db == direct.empirical_sinr_db,
          "cached sweep equals direct estimate");
  }
  {
    // config round trip
    const ExperimentConfig def;
    const std::string s1 = serialize_experiment_config(def);
    const ExperimentConfig back = parse_experiment_config(parse_config(s1));
    const std::string s2 = serialize_experiment_config(back);
    c.add("config.roundtrip", s1 == s2, "serialize-parse-serialize fixed point");
  }
}

}  // namespace

std::vector<CheckResult> run_selftest(int workers) {
  Ctx c;
  c.workers = workers;
  c.cfg.workers = workers;
  pulse_checks(c);
  hexmod_checks(c);
  channel_checks(c);
  analysis_checks(c);
  montecarlo_checks(c);
  return std::move(c.results);
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace hmt
