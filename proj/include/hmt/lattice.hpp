// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hmt/pulse.hpp"
#include "hmt/rng.hpp"
#include "hmt/types.hpp"

namespace hmt {

// Hexagonal lattice parameters. The lattice is the union of two rectangular
// cosets: coset 1 at (mT, nF), coset 2 offset by (T/2, F/2). Signaling
// efficiency follows the two-symbols-per-TF-cell convention rho = 2/(T F).
struct LatticeParams {
  double T = 1e-4;     // symbol period, s
  double F = 25e3;     // subcarrier separation, Hz
  double sigma = 1.0;  // pulse width parameter, s^2
  double rho = 0.8;    // signaling efficiency

  static LatticeParams from_tf(double T, double F, double sigma) {
    return {T, F, sigma, 2.0 / (T * F)};
  }
};

enum class MatchMode { kEq7, kEq8 };

// Width factor for the channel-matched pulse, tabulated at
// rho in {0.5, 1, 2, 4}; linear in log2(rho) in between, clamped outside.
double alpha_for_efficiency(double rho);

// Channel-matched lattice: sigma = alpha(rho) * tau_rms / f_d, the T/F ratio
// fixed by the matching rule (kEq7: T/F = sigma/sqrt(3); kEq8: T/F =
// sqrt(3)*sigma), and the absolute scale by rho = 2/(T F).
LatticeParams match_parameters(double tau_rms, double f_d, double rho, MatchMode mode);

struct LatticePoint {
  int m = 0;
  int n = 0;
  int coset = 1;  // 1 or 2
};

double time_offset(const LatticePoint& z, const LatticeParams& p);
double freq_offset(const LatticePoint& z, const LatticeParams& p);

// Data symbols on both cosets; rows index m, columns index n.
struct SymbolFrame {
  Eigen::MatrixXcd coset1;
  Eigen::MatrixXcd coset2;
  double symbol_power = 1.0;
};

SymbolFrame random_frame(Eigen::Index rows, Eigen::Index cols, double symbol_power,
                         TrialRng& rng);

// Weighted set of time-frequency shifted Gaussians; exact evaluation at any t.
struct AnalyticSignal {
  GaussianPulse pulse;
  struct Term {
    double time_center = 0.0;
    double freq_shift = 0.0;
    cplx weight{0.0, 0.0};
  };
  std::vector<Term> terms;

  cplx value(double t) const;
  double min_center() const;
  double max_center() const;
};

// Transmit signal of a frame as an analytic description (zero symbols are
// skipped).
AnalyticSignal analytic_frame(const SymbolFrame& frame, const LatticeParams& params,
                              const GaussianPulse& pulse);

// Evaluate an analytic signal on a grid. Throws CoverageError when the grid
// does not contain every term's support.
SampledWaveform sample_signal(const AnalyticSignal& signal, const SampleGrid& grid);

// Adds weight * g(t - center) * e^{j 2 pi freq t} into w over the support
// window [center +/- kPulseTailSigmas*sqrt(sigma)] only.
void accumulate_modulated_gaussian(SampledWaveform& w, const GaussianPulse& p,
                                   double center, double freq, cplx weight);

// x(t) = sum_i sum_{m,n} c_{m,n}^i g(t - mT - (i-1)T/2) e^{j2pi(nF + (i-1)F/2)t}
// evaluated on the grid. Throws CoverageError naming truncated lattice points.
SampledWaveform modulate(const SymbolFrame& frame, const LatticeParams& params,
                         const GaussianPulse& pulse, const SampleGrid& grid);

// Receiver prototype psi(t) = g(t - delay).
struct ReceiverPulse {
  GaussianPulse pulse;
  double delay = 0.0;
};

// Projection <r, psi_z> = sum_k r_k conj(psi(t_k - t_z)) e^{-j2pi f_z t_k} T_s.
cplx demodulate(const SampledWaveform& r, const LatticePoint& z,
                const LatticeParams& params, const ReceiverPulse& rx);

}  // namespace hmt
