// SPDX-License-Identifier: Apache-2.0
#include "hmt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hmt/quadrature.hpp"

namespace hmt {

namespace detail {

double erfcx(double x) {
  if (x < 0.0) throw std::invalid_argument("erfcx: x must be >= 0");
  if (x < 12.0) return std::exp(x * x) * std::erfc(x);
  // Asymptotic series 1/(x sqrt(pi)) sum (-1)^k (2k-1)!!/(2x^2)^k; at x >= 12
  // eight terms leave a relative error below 1e-13.
  const double q = 0.5 / (x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * q;
    sum += term;
  }
  return sum / (x * std::sqrt(kPi));
}

}  // namespace detail

namespace {

void check_pair(double sigma, double tau_rms, const char* who) {
  if (!(sigma > 0.0) || !(tau_rms > 0.0))
    throw std::invalid_argument(std::string(who) + ": sigma and tau_rms must be > 0");
}

double noise_term(const SinrOperatingPoint& op, NoiseMode mode) {
  if (mode == NoiseMode::kPhysical) return op.noise_power;
  const double dt = op.delay;
  return op.noise_power * std::exp(-kPi * dt * dt / (2.0 * op.params.sigma));
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xatol) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xatol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double delay_integral(double sigma, double tau_rms, double center) {
  check_pair(sigma, tau_rms, "delay_integral");
  const double s = sigma / (2.0 * kPi * tau_rms);
  const double B = std::sqrt(kPi / sigma) * (s - center);
  if (B >= 0.0) {
    // exp(A) erfc(B) with A - B^2 = -pi c^2 / sigma, so no overflow.
    return 0.5 * std::sqrt(sigma) * detail::erfcx(B) *
           std::exp(-kPi * center * center / sigma);
  }
  // center > s: the plain exponent is already negative.
  const double a = sigma / (4.0 * kPi * tau_rms * tau_rms) - center / tau_rms;
  return 0.5 * std::sqrt(sigma) * std::erfc(B) * std::exp(a);
}

double doppler_integral(double sigma, double f_d, double center, int order) {
  if (!(sigma >= 0.0) || !(f_d > 0.0))
    throw std::invalid_argument("doppler_integral: need sigma >= 0, f_d > 0");
  const QuadratureRule& rule = gauss_legendre(order);
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const double th = 0.5 * kPi * rule.nodes[i];
    const double v = center + f_d * std::sin(th);
    acc += rule.weights[i] * std::exp(-sigma * kPi * v * v);
  }
  return f_d * 0.5 * kPi * acc;
}

double signal_energy(const SinrOperatingPoint& op, int doppler_order) {
  const auto& sc = op.scattering;
  return op.symbol_power / (kPi * sc.tau_rms * sc.f_d) *
         delay_integral(op.params.sigma, sc.tau_rms, op.delay) *
         doppler_integral(op.params.sigma, sc.f_d, 0.0, doppler_order);
}

namespace {

double interference_energy(const SinrOperatingPoint& op, const AnalysisOptions& opts) {
  const double sigma = op.params.sigma;
  const double T = op.params.T, F = op.params.F;
  const auto& sc = op.scattering;

  // The two factors separate; cache the Doppler integrals per n.
  std::vector<double> v1(2 * opts.window_n + 1), v2(2 * opts.window_n + 1);
  for (int n = -opts.window_n; n <= opts.window_n; ++n) {
    v1[n + opts.window_n] = doppler_integral(sigma, sc.f_d, n * F, opts.doppler_order);
    v2[n + opts.window_n] =
        doppler_integral(sigma, sc.f_d, n * F + 0.5 * F, opts.doppler_order);
  }
  double acc = 0.0;
  for (int m = -opts.window_m; m <= opts.window_m; ++m) {
    const double d1 = delay_integral(sigma, sc.tau_rms, op.delay - m * T);
    const double d2 = delay_integral(sigma, sc.tau_rms, op.delay - m * T - 0.5 * T);
    for (int n = -opts.window_n; n <= opts.window_n; ++n) {
      if (m != 0 || n != 0) acc += d1 * v1[n + opts.window_n];
      if (!(opts.exclude_coset2_origin && m == 0 && n == 0))
        acc += d2 * v2[n + opts.window_n];
    }
  }
  return op.symbol_power / (kPi * sc.tau_rms * sc.f_d) * acc;
}

}  // namespace

double interference_noise_energy(const SinrOperatingPoint& op,
                                 const AnalysisOptions& opts) {
  return interference_energy(op, opts) + noise_term(op, opts.noise_mode);
}

EnergyBreakdown theoretical_sinr(const SinrOperatingPoint& op,
                                 const AnalysisOptions& opts) {
  EnergyBreakdown e;
  e.signal = signal_energy(op, opts.doppler_order);
  e.interference = interference_energy(op, opts);
  e.noise = noise_term(op, opts.noise_mode);
  e.sinr_linear = e.signal / (e.interference + e.noise);
  e.sinr_db = 10.0 * std::log10(e.sinr_linear);
  return e;
}

double erfc_approx(double x) {
  if (!(x > 0.0)) throw std::domain_error("erfc_approx: x must be > 0");
  return 2.0 * std::exp(-0.5 * x * x) /
         (1.64 * x + std::sqrt(0.76 * x * x + 4.0));
}

DelayGainFactors delay_gain_factors(double sigma, double tau_rms, double dt) {
  check_pair(sigma, tau_rms, "delay_gain_factors");
  DelayGainFactors f;
  f.a = std::exp(sigma / (4.0 * kPi * tau_rms * tau_rms) - dt / tau_rms);
  f.b = 0.5 * std::sqrt(sigma) *
        std::erfc(std::sqrt(kPi / sigma) * (sigma / (2.0 * kPi * tau_rms) - dt));
  return f;
}

double argmax_delay_gain(double sigma, double tau_rms) {
  check_pair(sigma, tau_rms, "argmax_delay_gain");
  const double s = sigma / (2.0 * kPi * tau_rms);
  const double hi = s + 3.0 * std::sqrt(sigma);
  auto f = [&](double dt) { return delay_integral(sigma, tau_rms, dt); };
  return golden_max(f, 0.0, hi, 1e-9 * hi);
}

DelaySolution closed_form_delay(double sigma, double tau_rms, DelayFormula formula) {
  check_pair(sigma, tau_rms, "closed_form_delay");
  const double K = std::sqrt(sigma) / tau_rms;
  const double qa = (formula == DelayFormula::kPrinted) ? 0.88 : 1.64 * 1.64 - 0.76;
  const double qb = -3.28 * K;
  const double qc = K * K - 4.0;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc >= 0.0) {
    const double z = (-qb - std::sqrt(disc)) / (2.0 * qa);
    const double dt = sigma / (2.0 * kPi * tau_rms) - std::sqrt(sigma / (2.0 * kPi)) * z;
    if (z > 0.0 && dt > 0.0) return {dt, false};
  }
  return {argmax_delay_gain(sigma, tau_rms), true};
}

UpperBound sinr_upper_bound(const SinrOperatingPoint& op, const AnalysisOptions& opts,
                            double dt_hi) {
  const double sigma = op.params.sigma;
  if (dt_hi <= 0.0) dt_hi = sigma / (kPi * op.scattering.tau_rms);
  auto f = [&](double dt) {
    SinrOperatingPoint o = op;
    o.delay = dt;
    return theoretical_sinr(o, opts).sinr_db;
  };

  UpperBound ub;
  constexpr int kCoarse = 64;
  std::vector<double> xs(kCoarse + 1), vs(kCoarse + 1);
  int imax = kCoarse;
  for (int ext = 0;; ++ext) {
    for (int i = 0; i <= kCoarse; ++i) {
      xs[i] = dt_hi * i / kCoarse;
      vs[i] = f(xs[i]);
    }
    imax = static_cast<int>(std::max_element(vs.begin(), vs.end()) - vs.begin());
    if (imax < kCoarse || ext >= 3) break;
    dt_hi *= 2.0;  // the edge won; extend the bracket
  }
  if (imax == kCoarse) ub.flags |= kFlagUbBracketEdge;

  // Count strict interior local maxima with a small tolerance against ties.
  int n_local = 0;
  for (int i = 1; i < kCoarse; ++i) {
    const double eps = 1e-12 * (std::abs(vs[i]) + 1.0);
    if (vs[i] > vs[i - 1] + eps && vs[i] > vs[i + 1] + eps) ++n_local;
  }
  if (n_local > 1) {
    ub.flags |= kFlagUbNonUnimodal;
    constexpr int kDense = 512;
    double best = vs[imax], bx = xs[imax];
    for (int i = 0; i <= kDense; ++i) {
      const double x = dt_hi * i / kDense;
      const double v = f(x);
      if (v > best) {
        best = v;
        bx = x;
      }
    }
    ub.delay = bx;
    ub.sinr_db = best;
    return ub;
  }

  const double lo = xs[std::max(0, imax - 1)];
  const double hi = xs[std::min(kCoarse, imax + 1)];
  ub.delay = golden_max(f, lo, hi, 1e-4 * std::sqrt(sigma));
  ub.sinr_db = f(ub.delay);
  return ub;
}

}  // namespace hmt
