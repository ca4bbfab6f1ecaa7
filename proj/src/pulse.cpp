// SPDX-License-Identifier: Apache-2.0
#include "hmt/pulse.hpp"

#include <cmath>

namespace hmt {

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("GaussianPulse: sigma must be > 0");
}

}  // namespace

double eval_pulse(const GaussianPulse& p, double t) {
  check_sigma(p.sigma);
  return std::pow(2.0 / p.sigma, 0.25) * std::exp(-(kPi / p.sigma) * t * t);
}

cplx ambiguity_gaussian(const GaussianPulse& p, double tau, double nu) {
  check_sigma(p.sigma);
  const double mag = std::exp(-0.5 * kPi * (tau * tau / p.sigma + p.sigma * nu * nu));
  return std::polar(mag, -kPi * tau * nu);
}

cplx cross_ambiguity_numeric(const SampledWaveform& a, const SampledWaveform& b,
                             double tau, double nu) {
  if (a.size() <= 0 || b.size() <= 0)
    throw std::invalid_argument("cross_ambiguity_numeric: empty waveform");
  if (!(a.sample_interval > 0.0) || a.sample_interval != b.sample_interval)
    throw std::invalid_argument("cross_ambiguity_numeric: sample intervals differ");
  const double ts = a.sample_interval;
  // b is read at t_k - tau, which must fall on b's sample lattice.
  const double off = (a.start_time - tau - b.start_time) / ts;
  const double roff = std::round(off);
  if (std::abs(off - roff) > 1e-6)
    throw std::invalid_argument("cross_ambiguity_numeric: tau is off-grid");
  const auto shift = static_cast<Eigen::Index>(roff);

  cplx acc{0.0, 0.0};
  cplx ph = std::polar(1.0, -2.0 * kPi * nu * a.start_time);
  const cplx step = std::polar(1.0, -2.0 * kPi * nu * ts);
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const Eigen::Index j = k + shift;
    if (j >= 0 && j < b.size()) acc += a.samples[k] * std::conj(b.samples[j]) * ph;
    ph *= step;
  }
  return acc * ts;
}

SampledWaveform shifted_pulse_samples(const GaussianPulse& p, double dt,
                                      const SampleGrid& grid) {
  check_sigma(p.sigma);
  if (grid.size <= 0 || !(grid.sample_interval > 0.0))
    throw std::invalid_argument("shifted_pulse_samples: invalid grid");
  SampledWaveform w;
  w.sample_interval = grid.sample_interval;
  w.start_time = grid.start_time;
  w.samples.resize(grid.size);
  const double amp = std::pow(2.0 / p.sigma, 0.25);
  for (Eigen::Index k = 0; k < grid.size; ++k) {
    const double t = grid.time_at(k) - dt;
    w.samples[k] = amp * std::exp(-(kPi / p.sigma) * t * t);
  }
  return w;
}

SampleGrid pulse_grid(const GaussianPulse& p, double center, double sample_interval,
                      double pad) {
  check_sigma(p.sigma);
  if (!(sample_interval > 0.0))
    throw std::invalid_argument("pulse_grid: sample_interval must be > 0");
  const double span = kPulseTailSigmas * std::sqrt(p.sigma) + pad;
  const auto n = static_cast<Eigen::Index>(std::ceil(2.0 * span / sample_interval)) + 1;
  return {center - span, sample_interval, n};
}

}  // namespace hmt
