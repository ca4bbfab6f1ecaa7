// SPDX-License-Identifier: Apache-2.0
#include "hmt/channel.hpp"

#include <cmath>
#include <ostream>

namespace hmt {

namespace {

void check_scattering(const ExpUScattering& s) {
  if (!(s.tau_rms > 0.0) || !(s.f_d > 0.0))
    throw std::invalid_argument("ExpUScattering: tau_rms and f_d must be > 0");
  if (!(s.tau_max >= 5.0 * s.tau_rms))
    throw std::invalid_argument("ExpUScattering: tau_max must be >= 5 * tau_rms");
}

}  // namespace

double scattering_density(const ExpUScattering& s, double tau, double nu) {
  if (!(s.tau_rms > 0.0) || !(s.f_d > 0.0))
    throw std::invalid_argument("scattering_density: tau_rms and f_d must be > 0");
  if (std::abs(nu) >= s.f_d)
    throw std::domain_error("scattering_density: |nu| must be < f_d");
  if (tau < 0.0) return 0.0;
  const double u = nu / s.f_d;
  return std::exp(-tau / s.tau_rms) /
         (kPi * s.tau_rms * s.f_d * std::sqrt(1.0 - u * u));
}

CsfSpec csf(const ExpUScattering& s) {
  if (!(s.tau_max > 0.0) || !(s.f_d > 0.0))
    throw std::invalid_argument("csf: tau_max and f_d must be > 0");
  return {s.tau_max * s.f_d};
}

ChannelPaths draw_paths(const ExpUScattering& s, int path_count, TrialRng& rng) {
  check_scattering(s);
  if (path_count < 1) throw std::invalid_argument("draw_paths: path_count must be >= 1");
  if (!csf(s).underspread())
    throw std::invalid_argument("draw_paths: overspread channel (vartheta >= 1)");

  ChannelPaths ch;
  ch.delays.resize(path_count);
  ch.dopplers.resize(path_count);
  ch.gains.resize(path_count);
  const double gain_var = 1.0 / static_cast<double>(path_count);
  for (int p = 0; p < path_count; ++p) {
    double d;
    do {
      d = rng.exponential(s.tau_rms);
    } while (d > s.tau_max);
    double c;
    do {
      c = std::cos(rng.uniform(0.0, 2.0 * kPi));
    } while (std::abs(c) >= 1.0);
    ch.delays[p] = d;
    ch.dopplers[p] = s.f_d * c;
    ch.gains[p] = rng.complex_normal(gain_var);
  }
  return ch;
}

SampledWaveform apply_channel(const ChannelPaths& paths, const AnalyticSignal& x,
                              const SampleGrid& grid) {
  if (paths.count() < 1) throw std::invalid_argument("apply_channel: no paths");
  if (x.terms.empty()) throw std::invalid_argument("apply_channel: empty signal");

  const double span = kPulseTailSigmas * std::sqrt(x.pulse.sigma);
  const double max_delay = paths.delays.maxCoeff();
  const double tol = 0.5 * grid.sample_interval;
  if (x.min_center() - span < grid.start_time - tol ||
      x.max_center() + max_delay + span > grid.end_time() + tol)
    throw CoverageError("apply_channel: grid does not cover delayed pulse supports");

  SampledWaveform y{Eigen::VectorXcd::Zero(grid.size), grid.sample_interval,
                    grid.start_time};
  // Each (path, term) pair is one shifted Gaussian:
  //   gain * weight * e^{-j2pi f_term delay} * g(t - c - delay) e^{j2pi(f_term + nu)t}
  for (Eigen::Index p = 0; p < paths.count(); ++p) {
    for (const auto& tm : x.terms) {
      const cplx w = paths.gains[p] * tm.weight *
                     std::polar(1.0, -2.0 * kPi * tm.freq_shift * paths.delays[p]);
      accumulate_modulated_gaussian(y, x.pulse, tm.time_center + paths.delays[p],
                                    tm.freq_shift + paths.dopplers[p], w);
    }
  }
  return y;
}

ExpUScattering scattering_from_vartheta(double sigma, double vartheta,
                                        const VarthetaSplit& split) {
  if (!(sigma > 0.0) || !(vartheta > 0.0))
    throw std::invalid_argument("scattering_from_vartheta: inputs must be > 0");
  if (vartheta >= 1.0)
    throw std::invalid_argument("scattering_from_vartheta: overspread (vartheta >= 1)");
  if (!(split.delay_split > 0.0) || !(split.tau_max_over_rms >= 5.0))
    throw std::invalid_argument("scattering_from_vartheta: invalid split");
  ExpUScattering s;
  s.tau_rms = std::sqrt(sigma * vartheta / split.delay_split);
  s.tau_max = split.tau_max_over_rms * s.tau_rms;
  s.f_d = vartheta / s.tau_max;
  return s;
}

void write_paths(std::ostream& os, const ChannelPaths& paths) {
  char line[128];
  for (Eigen::Index p = 0; p < paths.count(); ++p) {
    std::snprintf(line, sizeof(line), "%.17g %.17g %.17g %.17g\n", paths.delays[p],
                  paths.dopplers[p], paths.gains[p].real(), paths.gains[p].imag());
    os << line;
  }
}

}  // namespace hmt
