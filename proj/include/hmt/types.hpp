// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hmt {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Thrown when a sampling grid does not cover the support of a pulse an
// operation needs to place on it.
class CoverageError : public std::runtime_error {
 public:
  explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

// Unit-energy Gaussian prototype pulse g(t) = (2/sigma)^(1/4) exp(-(pi/sigma) t^2),
// sigma in s^2.
struct GaussianPulse {
  double sigma = 1.0;
};

// Uniform sampling grid: t_k = start_time + k * sample_interval.
struct SampleGrid {
  double start_time = 0.0;
  double sample_interval = 1.0;
  Eigen::Index size = 0;

  double time_at(Eigen::Index k) const {
    return start_time + static_cast<double>(k) * sample_interval;
  }
  double end_time() const { return time_at(size - 1); }
};

struct SampledWaveform {
  Eigen::VectorXcd samples;
  double sample_interval = 1.0;
  double start_time = 0.0;

  Eigen::Index size() const { return samples.size(); }
  double time_at(Eigen::Index k) const {
    return start_time + static_cast<double>(k) * sample_interval;
  }
  SampleGrid grid() const { return {start_time, sample_interval, samples.size()}; }
  // Discrete energy sum |x_k|^2 * T_s.
  double energy() const { return samples.squaredNorm() * sample_interval; }
};

}  // namespace hmt
