// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "hmt/analysis.hpp"
#include "hmt/channel.hpp"

namespace hmt {

enum class DelayMode { kTpr, kMaxSinr, kFixed, kUpperBound };

struct TrialConfig {
  LatticeParams params;
  ExpUScattering scattering;
  double symbol_power = 1.0;
  double noise_power = 0.01;
  DelayMode delay_mode = DelayMode::kTpr;
  double fixed_delay = 0.0;  // used by kFixed
  DelayFormula delay_formula = DelayFormula::kDerived;
  int path_count = 64;
  long trials = 10000;
  std::uint64_t master_seed = 1;
  int window_m = 4;
  int window_n = 4;
  NoiseMode noise_mode = NoiseMode::kPaper;
  bool exclude_coset2_origin = false;
  int workers = 1;
  double sample_interval = 1e-6;  // waveform cross-check path only

  AnalysisOptions analysis_options() const {
    return {noise_mode, exclude_coset2_origin, window_m, window_n, 64};
  }
};

// Per-realization projection coefficients H_z = <H[g_z], psi> for every
// lattice point z in the window (both cosets), target z = (0, 0, coset 1).
struct CoefficientSet {
  int window_m = 0;
  int window_n = 0;
  Eigen::VectorXcd values;

  Eigen::Index index(int m, int n, int coset) const {
    const int wm = 2 * window_m + 1, wn = 2 * window_n + 1;
    return (static_cast<Eigen::Index>(coset - 1) * wm + (m + window_m)) * wn +
           (n + window_n);
  }
  cplx at(int m, int n, int coset) const { return values[index(m, n, coset)]; }
  double target_power() const { return std::norm(at(0, 0, 1)); }
  // Sum over every non-target coefficient, optionally skipping the coset-2
  // origin cell.
  double interference_power(bool exclude_coset2_origin) const;
};

// Analytic path-sum: each H_z is a closed-form Gaussian cross-ambiguity
// accumulated over the channel paths; fractional delays and Dopplers are
// exact and no waveform-length transforms are involved.
CoefficientSet trial_coefficients(const TrialConfig& cfg, const ChannelPaths& paths,
                                  double receiver_delay);

struct CoeffStats {
  double mean_signal = 0.0;
  double mean_interference = 0.0;
  double var_signal = 0.0;        // per-trial sample variance
  double var_interference = 0.0;  // per-trial sample variance
  double cov = 0.0;
  long trials = 0;
};

// Runs cfg.trials independent realizations (trial i seeded with
// derive_seed(master_seed, i)), optionally across cfg.workers threads.
// Reduction order is fixed by trial index, so results are identical for any
// worker count.
CoeffStats coefficient_stats(const TrialConfig& cfg, double receiver_delay);

struct SinrReport {
  double empirical_sinr_db = 0.0;
  double theoretical_sinr_db = 0.0;
  double upper_bound_db = 0.0;
  double signal_power = 0.0;        // empirical, linear
  double interference_power = 0.0;  // empirical, linear
  double noise_power = 0.0;         // per the configured noise mode, linear
  double ci_halfwidth_db = 0.0;     // 95% on the empirical SINR
  double delay_used = 0.0;
  unsigned flags = 0;
};

// Receiver delay for the configured mode (0, closed form, fixed, or the
// upper-bound argmax). Fallbacks set bits in flags.
double resolve_delay(const TrialConfig& cfg, unsigned& flags);

SinrReport estimate_sinr(const TrialConfig& cfg);

enum class SweepAxis { kSnrDb, kVartheta, kRmsErrorRatio };

struct SweepPoint {
  double axis_value = 0.0;
  DelayMode receiver = DelayMode::kTpr;
  SinrReport report;
};

// One report per (axis value, receiver). The SNR axis reuses channel
// statistics across points (the coefficients do not depend on the noise
// power, and per-trial seeds are fixed by the master seed alone). The
// vartheta axis rebuilds the channel through `split`. The RMS-error axis
// runs the closed-form-delay receiver with tau_rms misreported by the given
// ratio while the channel keeps the true value.
std::vector<SweepPoint> sweep(const TrialConfig& base, SweepAxis axis,
                              const std::vector<double>& values,
                              const std::vector<DelayMode>& receivers,
                              const VarthetaSplit& split = {});

// Full waveform validation path: modulate a (2h+1)x(2h+1) frame per coset,
// push it through apply_channel, add sampled noise, and demodulate the
// center symbol. Noise accounting is physical by construction. Returns the
// empirical SINR in dB.
double waveform_sinr_db(const TrialConfig& cfg, double receiver_delay,
                        int frame_halfwidth, long trials);

}  // namespace hmt
