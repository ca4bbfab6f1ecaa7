// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hmt/channel.hpp"
#include "hmt/lattice.hpp"
#include "hmt/types.hpp"

namespace hmt {

// Projection-noise accounting. kPaper counts sigma_w^2 |A_{g,psi}(0,0)|,
// which shrinks as the receiver delay grows; kPhysical counts
// sigma_w^2 ||psi||^2 = sigma_w^2. Figure reproduction defaults to kPaper,
// both values are reported in the CSV output.
enum class NoiseMode { kPaper, kPhysical };

// Quadratic coefficients used by the closed-form receiver delay. kDerived is
// the self-consistent reduction (leading coefficient 1.64^2 - 0.76 = 1.9296);
// kPrinted reproduces the commonly circulated variant (1.76/3.52 constants)
// as a fidelity probe.
enum class DelayFormula { kDerived, kPrinted };

struct AnalysisOptions {
  NoiseMode noise_mode = NoiseMode::kPaper;
  // The coset-2 pulse in the origin cell overlaps the target; it is counted
  // as interference by default. Setting this excludes it (the printed form
  // of the interference sum).
  bool exclude_coset2_origin = false;
  int window_m = 4;
  int window_n = 4;
  int doppler_order = 64;
};

struct SinrOperatingPoint {
  LatticeParams params;
  ExpUScattering scattering;
  double symbol_power = 1.0;  // sigma_c^2
  double noise_power = 0.0;   // sigma_w^2
  double delay = 0.0;         // receiver pulse delay
};

struct EnergyBreakdown {
  double signal = 0.0;
  double interference = 0.0;
  double noise = 0.0;
  double sinr_linear = 0.0;
  double sinr_db = 0.0;
};

// int_0^inf exp(-tau/tau_rms) exp(-pi (tau - center)^2 / sigma) dtau.
// Closed form exp(sigma/(4 pi tau_rms^2) - center/tau_rms) (sqrt(sigma)/2)
// erfc(sqrt(pi/sigma)(sigma/(2 pi tau_rms) - center)), evaluated through the
// scaled complementary error function so large exponents never overflow.
double delay_integral(double sigma, double tau_rms, double center);

// int_{-f_d}^{f_d} exp(-sigma pi (center + nu)^2) / sqrt(1 - (nu/f_d)^2) dnu
// via nu = f_d sin(theta) and fixed-order Gauss-Legendre in theta.
double doppler_integral(double sigma, double f_d, double center, int order = 64);

// sigma_c^2/(pi tau_rms f_d) * delay_integral(sigma, tau_rms, dt)
//                            * doppler_integral(sigma, f_d, 0).
double signal_energy(const SinrOperatingPoint& op, int doppler_order = 64);

// Interference-plus-noise energy: the windowed double lattice sum plus the
// noise term selected by the options.
double interference_noise_energy(const SinrOperatingPoint& op,
                                 const AnalysisOptions& opts = {});

EnergyBreakdown theoretical_sinr(const SinrOperatingPoint& op,
                                 const AnalysisOptions& opts = {});

// erfc(x / sqrt(2)) ~= 2 exp(-x^2/2) / (1.64 x + sqrt(0.76 x^2 + 4)), x > 0.
double erfc_approx(double x);

struct DelayGainFactors {
  double a = 0.0;  // exp(sigma/(4 pi tau_rms^2) - dt/tau_rms)
  double b = 0.0;  // (sqrt(sigma)/2) erfc(sqrt(pi/sigma)(sigma/(2 pi tau_rms) - dt))
};

// a * b equals delay_integral(sigma, tau_rms, dt). The individual factors can
// overflow for extreme sigma/tau_rms^2; use delay_integral for the product.
DelayGainFactors delay_gain_factors(double sigma, double tau_rms, double dt);

// Numeric argmax over dt >= 0 of delay_integral (golden section; the
// objective is unimodal).
double argmax_delay_gain(double sigma, double tau_rms);

struct DelaySolution {
  double delay = 0.0;
  bool fallback = false;  // quadratic had no valid root; numeric argmax used
};

// Receiver delay maximizing the noise-limited objective a(dt)*b(dt) through
// the erfc approximation: with K = sqrt(sigma)/tau_rms and the chosen
// coefficient set, solve q_a z^2 - 3.28 K z + (K^2 - 4) = 0 and take
// dt = sigma/(2 pi tau_rms) - sqrt(sigma/(2 pi)) z for the root with z > 0,
// dt > 0. Requires K > 2; otherwise falls back to the numeric argmax.
DelaySolution closed_form_delay(double sigma, double tau_rms,
                                DelayFormula formula = DelayFormula::kDerived);

inline constexpr unsigned kFlagDelayFallback = 1u;
inline constexpr unsigned kFlagUbNonUnimodal = 2u;
inline constexpr unsigned kFlagUbBracketEdge = 4u;

struct UpperBound {
  double delay = 0.0;
  double sinr_db = 0.0;
  unsigned flags = 0;
};

// max over dt of theoretical_sinr, via a 64-point coarse grid refined by
// golden section (dt tolerance 1e-4 sqrt(sigma)). A multi-modal coarse grid
// triggers a 512-point dense scan and sets kFlagUbNonUnimodal. dt_hi <= 0
// selects the default bracket sigma/(pi tau_rms).
UpperBound sinr_upper_bound(const SinrOperatingPoint& op,
                            const AnalysisOptions& opts = {}, double dt_hi = 0.0);

namespace detail {
// exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);
}  // namespace detail

}  // namespace hmt
