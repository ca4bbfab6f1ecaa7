// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hmt/types.hpp"

namespace hmt {

// Waveform grids span pulse centers by this many sqrt(sigma) on each side.
// The truncated two-sided tail energy is erfc(8*sqrt(2*pi)) ~ 1e-176 of the
// total, far below every tolerance in the test suite.
inline constexpr double kPulseTailSigmas = 8.0;

double eval_pulse(const GaussianPulse& p, double t);

// Closed-form auto-ambiguity of the Gaussian pulse:
//   A(tau, nu) = exp(-(pi/2)(tau^2/sigma + sigma nu^2)) exp(-j pi tau nu).
// Note the sigma factor on nu^2; the numeric cross-ambiguity oracle in the
// test suite pins this form.
cplx ambiguity_gaussian(const GaussianPulse& p, double tau, double nu);

// Discrete cross-ambiguity sum_k a_k conj(b(t_k - tau)) e^{-j 2 pi nu t_k} T_s.
// tau must land on the common sample lattice; realize fractional offsets by
// re-evaluating the analytic pulse instead (shifted_pulse_samples).
cplx cross_ambiguity_numeric(const SampledWaveform& a, const SampledWaveform& b,
                             double tau, double nu);

// g(t - dt) evaluated analytically on the grid; dt need not be a multiple of
// the sample interval.
SampledWaveform shifted_pulse_samples(const GaussianPulse& p, double dt,
                                      const SampleGrid& grid);

// Grid covering [center - span, center + span] with
// span = kPulseTailSigmas * sqrt(sigma) + pad.
SampleGrid pulse_grid(const GaussianPulse& p, double center, double sample_interval,
                      double pad = 0.0);

}  // namespace hmt
