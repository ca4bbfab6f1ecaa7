// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent reference computations used by the self-test and the test
// suites. Everything here recomputes its target quantity from definitions
// (Riemann sums, adaptive quadrature, analytic moments) without touching the
// closed forms it is checking.

#include <vector>

#include "hmt/analysis.hpp"
#include "hmt/channel.hpp"
#include "hmt/lattice.hpp"
#include "hmt/montecarlo.hpp"
#include "hmt/pulse.hpp"

namespace hmt::oracle {

// Riemann sum of the defining integral
//   int g(t) g(t - shift_b - tau) e^{-j 2 pi nu t} dt
// at step sqrt(sigma)/step_divisor over +/- 8 sqrt(sigma) around the overlap.
cplx riemann_cross_ambiguity(const GaussianPulse& p, double shift_b, double tau,
                             double nu, double step_divisor = 200.0);

// Adaptive-Simpson evaluation of the delay integral's defining form.
double delay_integral_quadrature(double sigma, double tau_rms, double center);

// tanh-sinh evaluation of the Doppler integral in its original nu form,
// endpoint singularities included.
double doppler_integral_nu_form(double sigma, double f_d, double center);

// 2-D quadrature of the scattering-weighted squared cross-ambiguity
//   sigma_c^2 * iint S_H(tau, nu) |A(tau - dt, nu)|^2 dtau dnu
// (outer adaptive Simpson in tau, inner adaptive Simpson in the Doppler
// angle), validating the factorized signal energy end to end.
double signal_energy_quadrature(const SinrOperatingPoint& op);

// iint of the scattering density itself (should be 1).
double scattering_mass_quadrature(const ExpUScattering& s);

// Moments of the exponential distribution truncated to [0, tau_max].
double truncated_exp_mean(double tau_rms, double tau_max);
double truncated_exp_std(double tau_rms, double tau_max);

// Arcsine Doppler CDF F(nu) = 1/2 + asin(nu / f_d) / pi.
double arcsine_cdf(double nu, double f_d);

// Kolmogorov-Smirnov statistic of samples against a CDF (samples get sorted).
double ks_statistic(std::vector<double> samples, double f_d);

// Brute-force Gram matrix <g_{z_j}, g_{z_i}> of sampled lattice pulses.
Eigen::MatrixXcd lattice_gram(const std::vector<LatticePoint>& points,
                              const LatticeParams& params, const GaussianPulse& pulse,
                              const SampleGrid& grid);

// Grid-evaluated trial coefficients: apply_channel on each single lattice
// pulse followed by discrete demodulation. Independent of the analytic
// path-sum in trial_coefficients.
CoefficientSet trial_coefficients_grid(const TrialConfig& cfg, const ChannelPaths& paths,
                                       double receiver_delay);

}  // namespace hmt::oracle
