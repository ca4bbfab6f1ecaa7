// SPDX-License-Identifier: Apache-2.0
#include "hmt/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "hmt/quadrature.hpp"

namespace hmt::oracle {

cplx riemann_cross_ambiguity(const GaussianPulse& p, double shift_b, double tau,
                             double nu, double step_divisor) {
  const double rt = std::sqrt(p.sigma);
  const double step = rt / step_divisor;
  // Cover both factors' supports.
  const double c2 = shift_b + tau;
  const double lo = std::min(0.0, c2) - kPulseTailSigmas * rt;
  const double hi = std::max(0.0, c2) + kPulseTailSigmas * rt;
  const auto n = static_cast<long>(std::ceil((hi - lo) / step));
  cplx acc{0.0, 0.0};
  for (long k = 0; k < n; ++k) {
    const double t = lo + (k + 0.5) * step;
    acc += eval_pulse(p, t) * eval_pulse(p, t - c2) *
           std::polar(1.0, -2.0 * kPi * nu * t);
  }
  return acc * step;
}

double delay_integral_quadrature(double sigma, double tau_rms, double center) {
  const double rt = std::sqrt(sigma);
  const double hi = std::max({40.0 * tau_rms, center + 10.0 * rt, 10.0 * rt});
  auto f = [&](double tau) {
    const double d = tau - center;
    return std::exp(-tau / tau_rms) * std::exp(-kPi * d * d / sigma);
  };
  // Seed the subdivision around the Gaussian peak so it cannot be missed.
  std::vector<double> knots;
  for (double k : {center - 4.0 * rt, center - rt, center, center + rt, center + 4.0 * rt})
    if (k > 0.0 && k < hi) knots.push_back(k);
  return adaptive_simpson(f, 0.0, hi, 1e-12, knots);
}

double doppler_integral_nu_form(double sigma, double f_d, double center) {
  auto f = [&](double nu) {
    const double u = nu / f_d;
    const double v = center + nu;
    return std::exp(-sigma * kPi * v * v) / std::sqrt(1.0 - u * u);
  };
  return tanh_sinh(f, -f_d, f_d, 1e-13);
}

double signal_energy_quadrature(const SinrOperatingPoint& op) {
  const double sigma = op.params.sigma;
  const auto& sc = op.scattering;
  const GaussianPulse pulse{sigma};
  // Inner Doppler integral in the angle variable, adaptive (not the
  // fixed-order rule the implementation uses).
  auto inner = [&](double tau) {
    auto g = [&](double th) {
      const double nu = sc.f_d * std::sin(th);
      const cplx a = ambiguity_gaussian(pulse, tau - op.delay, nu);
      return std::norm(a);
    };
    return sc.f_d * adaptive_simpson(g, -0.5 * kPi, 0.5 * kPi, 1e-11);
  };
  const double rt = std::sqrt(sigma);
  const double hi = std::max({40.0 * sc.tau_rms, op.delay + 10.0 * rt, 10.0 * rt});
  auto outer = [&](double tau) { return std::exp(-tau / sc.tau_rms) * inner(tau); };
  std::vector<double> knots;
  for (double k : {op.delay - 4.0 * rt, op.delay, op.delay + 4.0 * rt})
    if (k > 0.0 && k < hi) knots.push_back(k);
  const double iv = adaptive_simpson(outer, 0.0, hi, 1e-10, knots);
  return op.symbol_power / (kPi * sc.tau_rms * sc.f_d) * iv;
}

double scattering_mass_quadrature(const ExpUScattering& s) {
  // nu = f_d sin(theta) absorbs the endpoint singularity into cos(theta);
  // exactly at |theta| = pi/2 the substituted integrand takes its limit.
  auto inner = [&](double tau) {
    auto g = [&](double th) {
      const double sn = std::sin(th);
      if (std::abs(sn) >= 1.0) return std::exp(-tau / s.tau_rms) / (kPi * s.tau_rms);
      return scattering_density(s, tau, s.f_d * sn) * s.f_d * std::cos(th);
    };
    return adaptive_simpson(g, -0.5 * kPi, 0.5 * kPi, 1e-11);
  };
  return adaptive_simpson(inner, 0.0, 40.0 * s.tau_rms, 1e-11,
                          {s.tau_rms, 5.0 * s.tau_rms});
}

double truncated_exp_mean(double tau_rms, double tau_max) {
  const double q = std::exp(-tau_max / tau_rms);
  return tau_rms - tau_max * q / (1.0 - q);
}

double truncated_exp_std(double tau_rms, double tau_max) {
  const double q = std::exp(-tau_max / tau_rms);
  const double m1 = truncated_exp_mean(tau_rms, tau_max);
  const double m2 = 2.0 * tau_rms * tau_rms -
                    (tau_max * tau_max + 2.0 * tau_max * tau_rms) * q / (1.0 - q);
  return std::sqrt(m2 - m1 * m1);
}

double arcsine_cdf(double nu, double f_d) {
  if (nu <= -f_d) return 0.0;
  if (nu >= f_d) return 1.0;
  return 0.5 + std::asin(nu / f_d) / kPi;
}

double ks_statistic(std::vector<double> samples, double f_d) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double cdf = arcsine_cdf(samples[i], f_d);
    d = std::max(d, std::abs((i + 1.0) / n - cdf));
    d = std::max(d, std::abs(cdf - i / n));
  }
  return d;
}

Eigen::MatrixXcd lattice_gram(const std::vector<LatticePoint>& points,
                              const LatticeParams& params, const GaussianPulse& pulse,
                              const SampleGrid& grid) {
  const auto n = static_cast<Eigen::Index>(points.size());
  // Sampled lattice pulses g_z(t) = g(t - t_z) e^{j 2 pi f_z t}.
  std::vector<Eigen::VectorXcd> waves(points.size());
  for (size_t j = 0; j < points.size(); ++j) {
    const double tz = time_offset(points[j], params);
    const double fz = freq_offset(points[j], params);
    Eigen::VectorXcd w(grid.size);
    for (Eigen::Index k = 0; k < grid.size; ++k) {
      const double t = grid.time_at(k);
      w[k] = eval_pulse(pulse, t - tz) * std::polar(1.0, 2.0 * kPi * fz * t);
    }
    waves[j] = w;
  }
  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      gram(i, j) = (waves[j].array() * waves[i].array().conjugate()).sum() *
                   grid.sample_interval;
  return gram;
}

CoefficientSet trial_coefficients_grid(const TrialConfig& cfg, const ChannelPaths& paths,
                                       double receiver_delay) {
  const GaussianPulse pulse{cfg.params.sigma};
  const double T = cfg.params.T;
  const double span = kPulseTailSigmas * std::sqrt(cfg.params.sigma);
  const double lo = -(cfg.window_m + 1.0) * T - span;
  const double hi = (cfg.window_m + 1.0) * T + cfg.scattering.tau_max +
                    std::abs(receiver_delay) + span;
  const SampleGrid grid{
      lo, cfg.sample_interval,
      static_cast<Eigen::Index>(std::ceil((hi - lo) / cfg.sample_interval)) + 1};
  const ReceiverPulse rx{pulse, receiver_delay};
  const LatticePoint target{0, 0, 1};

  CoefficientSet set;
  set.window_m = cfg.window_m;
  set.window_n = cfg.window_n;
  set.values =
      Eigen::VectorXcd::Zero(2 * (2 * cfg.window_m + 1) * (2 * cfg.window_n + 1));
  for (int coset = 1; coset <= 2; ++coset) {
    for (int m = -cfg.window_m; m <= cfg.window_m; ++m) {
      for (int n = -cfg.window_n; n <= cfg.window_n; ++n) {
        // Build g_z directly as an analytic term at the shifted lattice point.
        AnalyticSignal sig;
        sig.pulse = pulse;
        const LatticePoint z{m, n, coset};
        sig.terms.push_back({time_offset(z, cfg.params), freq_offset(z, cfg.params),
                             cplx{1.0, 0.0}});
        const SampledWaveform y = apply_channel(paths, sig, grid);
        set.values[set.index(m, n, coset)] = demodulate(y, target, cfg.params, rx);
      }
    }
  }
  return set;
}

}  // namespace hmt::oracle
