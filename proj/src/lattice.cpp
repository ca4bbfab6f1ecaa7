// SPDX-License-Identifier: Apache-2.0
#include "hmt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hmt {

namespace {

void check_point(const LatticePoint& z) {
  if (z.coset != 1 && z.coset != 2)
    throw std::invalid_argument("LatticePoint: coset must be 1 or 2");
}

}  // namespace

// Values outside the +/- kPulseTailSigmas*sqrt(sigma) window are below 1e-170
// of the peak, exactly zero in double precision after the weight multiply.
void accumulate_modulated_gaussian(SampledWaveform& w, const GaussianPulse& p,
                                   double center, double freq, cplx weight) {
  const double span = kPulseTailSigmas * std::sqrt(p.sigma);
  const double ts = w.sample_interval;
  const auto k0 = std::max<Eigen::Index>(
      0, static_cast<Eigen::Index>(std::ceil((center - span - w.start_time) / ts)));
  const auto k1 = std::min<Eigen::Index>(
      w.size() - 1,
      static_cast<Eigen::Index>(std::floor((center + span - w.start_time) / ts)));
  if (k0 > k1) return;
  const double amp = std::pow(2.0 / p.sigma, 0.25);
  cplx ph = std::polar(1.0, 2.0 * kPi * freq * w.time_at(k0));
  const cplx step = std::polar(1.0, 2.0 * kPi * freq * ts);
  for (Eigen::Index k = k0; k <= k1; ++k) {
    const double u = w.time_at(k) - center;
    w.samples[k] += weight * (amp * std::exp(-(kPi / p.sigma) * u * u)) * ph;
    ph *= step;
  }
}

double alpha_for_efficiency(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("alpha_for_efficiency: rho must be > 0");
  static constexpr double kX[] = {-1.0, 0.0, 1.0, 2.0};  // log2(rho)
  static constexpr double kA[] = {2.25, 2.00, 1.90, 1.85};
  const double x = std::log2(rho);
  if (x <= kX[0]) return kA[0];
  if (x >= kX[3]) return kA[3];
  int i = 0;
  while (x > kX[i + 1]) ++i;
  const double f = (x - kX[i]) / (kX[i + 1] - kX[i]);
  return kA[i] + f * (kA[i + 1] - kA[i]);
}

LatticeParams match_parameters(double tau_rms, double f_d, double rho, MatchMode mode) {
  if (!(tau_rms > 0.0) || !(f_d > 0.0) || !(rho > 0.0))
    throw std::invalid_argument("match_parameters: inputs must be > 0");
  const double sigma = alpha_for_efficiency(rho) * tau_rms / f_d;
  const double tf_ratio =
      (mode == MatchMode::kEq7) ? sigma / std::sqrt(3.0) : std::sqrt(3.0) * sigma;
  const double tf_product = 2.0 / rho;
  const double T = std::sqrt(tf_ratio * tf_product);
  return {T, T / tf_ratio, sigma, rho};
}

double time_offset(const LatticePoint& z, const LatticeParams& p) {
  check_point(z);
  return z.m * p.T + (z.coset - 1) * 0.5 * p.T;
}

double freq_offset(const LatticePoint& z, const LatticeParams& p) {
  check_point(z);
  return z.n * p.F + (z.coset - 1) * 0.5 * p.F;
}

SymbolFrame random_frame(Eigen::Index rows, Eigen::Index cols, double symbol_power,
                         TrialRng& rng) {
  if (rows <= 0 || cols <= 0 || !(symbol_power > 0.0))
    throw std::invalid_argument("random_frame: invalid shape or power");
  SymbolFrame f;
  f.symbol_power = symbol_power;
  f.coset1.resize(rows, cols);
  f.coset2.resize(rows, cols);
  for (Eigen::Index m = 0; m < rows; ++m)
    for (Eigen::Index n = 0; n < cols; ++n) f.coset1(m, n) = rng.complex_normal(symbol_power);
  for (Eigen::Index m = 0; m < rows; ++m)
    for (Eigen::Index n = 0; n < cols; ++n) f.coset2(m, n) = rng.complex_normal(symbol_power);
  return f;
}

cplx AnalyticSignal::value(double t) const {
  const double amp = std::pow(2.0 / pulse.sigma, 0.25);
  cplx acc{0.0, 0.0};
  for (const auto& tm : terms) {
    const double u = t - tm.time_center;
    acc += tm.weight * (amp * std::exp(-(kPi / pulse.sigma) * u * u)) *
           std::polar(1.0, 2.0 * kPi * tm.freq_shift * t);
  }
  return acc;
}

double AnalyticSignal::min_center() const {
  double v = 0.0;
  for (size_t i = 0; i < terms.size(); ++i)
    v = (i == 0) ? terms[i].time_center : std::min(v, terms[i].time_center);
  return v;
}

double AnalyticSignal::max_center() const {
  double v = 0.0;
  for (size_t i = 0; i < terms.size(); ++i)
    v = (i == 0) ? terms[i].time_center : std::max(v, terms[i].time_center);
  return v;
}

AnalyticSignal analytic_frame(const SymbolFrame& frame, const LatticeParams& params,
                              const GaussianPulse& pulse) {
  if (frame.coset1.rows() != frame.coset2.rows() ||
      frame.coset1.cols() != frame.coset2.cols())
    throw std::invalid_argument("analytic_frame: coset shapes differ");
  AnalyticSignal s;
  s.pulse = pulse;
  for (int coset = 1; coset <= 2; ++coset) {
    const Eigen::MatrixXcd& c = (coset == 1) ? frame.coset1 : frame.coset2;
    for (Eigen::Index m = 0; m < c.rows(); ++m) {
      for (Eigen::Index n = 0; n < c.cols(); ++n) {
        if (c(m, n) == cplx{0.0, 0.0}) continue;
        const LatticePoint z{static_cast<int>(m), static_cast<int>(n), coset};
        s.terms.push_back({time_offset(z, params), freq_offset(z, params), c(m, n)});
      }
    }
  }
  return s;
}

SampledWaveform sample_signal(const AnalyticSignal& signal, const SampleGrid& grid) {
  if (grid.size <= 0 || !(grid.sample_interval > 0.0))
    throw std::invalid_argument("sample_signal: invalid grid");
  const double span = kPulseTailSigmas * std::sqrt(signal.pulse.sigma);
  const double tol = 0.5 * grid.sample_interval;
  for (const auto& tm : signal.terms) {
    if (tm.time_center - span < grid.start_time - tol ||
        tm.time_center + span > grid.end_time() + tol) {
      std::ostringstream os;
      os << "sample_signal: grid [" << grid.start_time << ", " << grid.end_time()
         << "] does not cover pulse at t=" << tm.time_center;
      throw CoverageError(os.str());
    }
  }
  SampledWaveform w{Eigen::VectorXcd::Zero(grid.size), grid.sample_interval,
                    grid.start_time};
  for (const auto& tm : signal.terms)
    accumulate_modulated_gaussian(w, signal.pulse, tm.time_center, tm.freq_shift,
                                  tm.weight);
  return w;
}

SampledWaveform modulate(const SymbolFrame& frame, const LatticeParams& params,
                         const GaussianPulse& pulse, const SampleGrid& grid) {
  const double span = kPulseTailSigmas * std::sqrt(pulse.sigma);
  const double tol = 0.5 * grid.sample_interval;
  std::ostringstream missing;
  int n_missing = 0;
  for (int coset = 1; coset <= 2; ++coset) {
    const Eigen::MatrixXcd& c = (coset == 1) ? frame.coset1 : frame.coset2;
    for (Eigen::Index m = 0; m < c.rows(); ++m) {
      for (Eigen::Index n = 0; n < c.cols(); ++n) {
        if (c(m, n) == cplx{0.0, 0.0}) continue;
        const LatticePoint z{static_cast<int>(m), static_cast<int>(n), coset};
        const double tc = time_offset(z, params);
        if (tc - span < grid.start_time - tol || tc + span > grid.end_time() + tol) {
          missing << (n_missing++ ? ", " : "") << "(m=" << z.m << ",n=" << z.n
                  << ",coset=" << z.coset << ")";
        }
      }
    }
  }
  if (n_missing > 0)
    throw CoverageError("modulate: grid truncates lattice points " + missing.str());
  return sample_signal(analytic_frame(frame, params, pulse), grid);
}

cplx demodulate(const SampledWaveform& r, const LatticePoint& z,
                const LatticeParams& params, const ReceiverPulse& rx) {
  check_point(z);
  if (r.size() <= 0) throw std::invalid_argument("demodulate: empty waveform");
  const double t_off = time_offset(z, params);
  const double f_off = freq_offset(z, params);
  const double center = t_off + rx.delay;
  const double span = kPulseTailSigmas * std::sqrt(rx.pulse.sigma);
  const double ts = r.sample_interval;
  if (center - span < r.start_time - 0.5 * ts ||
      center + span > r.time_at(r.size() - 1) + 0.5 * ts) {
    std::ostringstream os;
    os << "demodulate: waveform does not cover receiver pulse at (m=" << z.m
       << ",n=" << z.n << ",coset=" << z.coset << "), support center " << center;
    throw CoverageError(os.str());
  }
  const auto k0 = std::max<Eigen::Index>(
      0, static_cast<Eigen::Index>(std::ceil((center - span - r.start_time) / ts)));
  const auto k1 = std::min<Eigen::Index>(
      r.size() - 1,
      static_cast<Eigen::Index>(std::floor((center + span - r.start_time) / ts)));
  const double amp = std::pow(2.0 / rx.pulse.sigma, 0.25);
  cplx acc{0.0, 0.0};
  cplx ph = std::polar(1.0, -2.0 * kPi * f_off * r.time_at(k0));
  const cplx step = std::polar(1.0, -2.0 * kPi * f_off * ts);
  for (Eigen::Index k = k0; k <= k1; ++k) {
    const double u = r.time_at(k) - center;
    acc += r.samples[k] * (amp * std::exp(-(kPi / rx.pulse.sigma) * u * u)) * ph;
    ph *= step;
  }
  return acc * ts;
}

}  // namespace hmt
