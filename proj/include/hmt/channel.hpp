// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

#include "hmt/lattice.hpp"
#include "hmt/rng.hpp"
#include "hmt/types.hpp"

namespace hmt {

// Exponential power delay profile, U-shape (arcsine) Doppler spectrum.
// tau_max truncates the delay support and sets the channel spread factor;
// it is independent of tau_rms (default ratio 10).
struct ExpUScattering {
  double tau_rms = 1e-6;  // s
  double f_d = 100.0;     // Hz
  double tau_max = 1e-5;  // s
};

struct CsfSpec {
  double vartheta = 0.0;  // tau_max * f_d
  bool underspread() const { return vartheta < 1.0; }
};

// Density exp(-tau/tau_rms) / (pi tau_rms f_d sqrt(1 - (nu/f_d)^2)).
// Evaluation exactly on |nu| >= f_d is rejected; tau < 0 yields 0.
double scattering_density(const ExpUScattering& s, double tau, double nu);

CsfSpec csf(const ExpUScattering& s);

// One WSSUS realization as discrete paths (structure-of-arrays).
struct ChannelPaths {
  Eigen::VectorXd delays;    // >= 0, <= tau_max
  Eigen::VectorXd dopplers;  // |nu| < f_d
  Eigen::VectorXcd gains;    // E|gain|^2 = 1/P each

  Eigen::Index count() const { return delays.size(); }
};

// Draw order per path: delay (exponential, redrawn above tau_max), Doppler
// angle (uniform), gain (two normals). The order is part of the
// reproducibility contract.
ChannelPaths draw_paths(const ExpUScattering& s, int path_count, TrialRng& rng);

// y(t_k) = sum_p gain_p x(t_k - delay_p) e^{j 2 pi doppler_p t_k}, with x
// evaluated analytically so fractional delays are exact.
SampledWaveform apply_channel(const ChannelPaths& paths, const AnalyticSignal& x,
                              const SampleGrid& grid);

// Split of a channel spread factor into (tau_rms, f_d, tau_max):
//   tau_rms = sqrt(sigma * vartheta / delay_split),
//   tau_max = tau_max_over_rms * tau_rms,  f_d = vartheta / tau_max.
// delay_split controls how much of the spread goes into delay vs Doppler for
// a given pulse width sigma; see README.
struct VarthetaSplit {
  double delay_split = 1.45;
  double tau_max_over_rms = 10.0;
};

ExpUScattering scattering_from_vartheta(double sigma, double vartheta,
                                        const VarthetaSplit& split = {});

// Plain-text export, one path per line: delay_s doppler_hz gain_re gain_im.
void write_paths(std::ostream& os, const ChannelPaths& paths);

}  // namespace hmt
