// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hmt/oracle.hpp"
#include "hmt/pulse.hpp"
#include "hmt/rng.hpp"

using namespace hmt;

TEST_CASE("eval_pulse closed form") {
  const GaussianPulse unit{1.0};
  CHECK(eval_pulse(unit, 0.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
  // monotone decay in |t|
  double prev = eval_pulse(unit, 0.0);
  for (int i = 1; i <= 12; ++i) {
    const double v = eval_pulse(unit, 0.5 * i);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(eval_pulse(unit, 40.0) == doctest::Approx(0.0).epsilon(0.0));

  const double sigma_iv = 2.3094e-9;
  CHECK(eval_pulse(GaussianPulse{sigma_iv}, 0.0) ==
        doctest::Approx(std::pow(2.0 / sigma_iv, 0.25)).epsilon(1e-12));

  CHECK_THROWS_AS(eval_pulse(GaussianPulse{0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_pulse(GaussianPulse{-1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("pulse unit energy on a sampled grid") {
  for (double sigma : {1.0, 1e-7, 2.3094e-9}) {
    const GaussianPulse p{sigma};
    const double ts = std::sqrt(sigma) / 50.0;
    const SampledWaveform w = shifted_pulse_samples(p, 0.0, pulse_grid(p, 0.0, ts));
    CHECK(w.energy() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ambiguity_gaussian closed form") {
  const GaussianPulse p{1.0};
  CHECK(std::abs(ambiguity_gaussian(p, 0.0, 0.0) - cplx{1.0, 0.0}) < 1e-15);
  CHECK_THROWS_AS(ambiguity_gaussian(GaussianPulse{-2.0}, 0.0, 0.0),
                  std::invalid_argument);

  // magnitude point symmetry and separability
  TrialRng rng(derive_seed(3, 0));
  const GaussianPulse q{4.2e-8};
  const double rt = std::sqrt(q.sigma);
  for (int i = 0; i < 50; ++i) {
    const double tau = rng.uniform(-3.0, 3.0) * rt;
    const double nu = rng.uniform(-3.0, 3.0) / rt;
    const double m = std::abs(ambiguity_gaussian(q, tau, nu));
    CHECK(m == doctest::Approx(std::abs(ambiguity_gaussian(q, -tau, -nu)))
                   .epsilon(1e-13));
    CHECK(m == doctest::Approx(std::abs(ambiguity_gaussian(q, tau, 0.0)) *
                               std::abs(ambiguity_gaussian(q, 0.0, nu)))
                   .epsilon(1e-13));
    if (tau != 0.0 || nu != 0.0) CHECK(m < 1.0);
  }
}

TEST_CASE("ambiguity matches the Riemann-sum oracle") {
  // frozen from the oracle: A(tau=1e-5, nu=100) at sigma=1e-7
  const GaussianPulse p{1e-7};
  const cplx frozen{0.9968584176656111, -0.003131733384604074};
  CHECK(std::abs(ambiguity_gaussian(p, 1e-5, 100.0) - frozen) < 1e-12);
  CHECK(std::abs(oracle::riemann_cross_ambiguity(p, 0.0, 1e-5, 100.0) - frozen) < 1e-9);

  double worst = 0.0;
  const double rt = std::sqrt(p.sigma);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) {
      const double tau = (-3.0 + 1.5 * i) * rt;
      const double nu = (-3.0 + 1.5 * j) / rt;
      worst = std::max(worst, std::abs(ambiguity_gaussian(p, tau, nu) -
                                       oracle::riemann_cross_ambiguity(p, 0.0, tau, nu)));
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("cross_ambiguity_numeric") {
  const GaussianPulse p{1e-7};
  const double rt = std::sqrt(p.sigma);
  const double ts = rt / 100.0;
  const SampleGrid g = pulse_grid(p, 0.0, ts, 4.0 * rt);
  const SampledWaveform w = shifted_pulse_samples(p, 0.0, g);

  SUBCASE("self inner product") {
    CHECK(std::abs(cross_ambiguity_numeric(w, w, 0.0, 0.0) - cplx{1.0, 0.0}) < 1e-9);
  }
  SUBCASE("three-sigma point") {
    const double tau = 300.0 * ts;  // 3 sqrt(sigma), on-grid
    const double want = std::exp(-0.5 * kPi * 9.0);
    CHECK(std::abs(cross_ambiguity_numeric(w, w, tau, 0.0)) ==
          doctest::Approx(want).epsilon(1e-4));
  }
  SUBCASE("shifted second pulse: |A_{g,g(.-d)}(tau,nu)| = |A_g(tau+d,nu)|") {
    const double d = 0.31 * rt;  // fractional shift, realized analytically
    const SampledWaveform b = shifted_pulse_samples(p, d, g);
    for (int i = -3; i <= 3; ++i) {
      const double tau = 40.0 * i * ts;
      const double nu = 0.7 * i / rt;
      CHECK(std::abs(cross_ambiguity_numeric(w, b, tau, nu)) ==
            doctest::Approx(std::abs(ambiguity_gaussian(p, tau + d, nu)))
                .epsilon(1e-6));
    }
  }
  SUBCASE("convergence to the closed form on the 11x11 grid") {
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; j <= 10; ++j) {
        const double tau = (i - 5) * 60.0 * ts;
        const double nu = (-3.0 + 0.6 * j) / rt;
        worst = std::max(worst, std::abs(cross_ambiguity_numeric(w, w, tau, nu) -
                                         ambiguity_gaussian(p, tau, nu)));
      }
    CHECK(worst < 1e-6);
  }
  SUBCASE("mismatched sample intervals rejected") {
    SampledWaveform other = w;
    other.sample_interval *= 2.0;
    CHECK_THROWS_AS(cross_ambiguity_numeric(w, other, 0.0, 0.0),
                    std::invalid_argument);
  }
  SUBCASE("off-grid tau rejected") {
    CHECK_THROWS_AS(cross_ambiguity_numeric(w, w, 0.4321 * ts, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("shifted_pulse_samples") {
  const GaussianPulse p{1e-7};
  const double ts = std::sqrt(p.sigma) / 64.0;
  const SampleGrid g = pulse_grid(p, 0.0, ts, 2e-5);

  SUBCASE("zero shift equals direct sampling") {
    const SampledWaveform a = shifted_pulse_samples(p, 0.0, g);
    for (Eigen::Index k = 0; k < a.size(); k += 97)
      CHECK(a.samples[k].real() == doctest::Approx(eval_pulse(p, a.time_at(k))));
  }
  SUBCASE("half-sample shift: peak below g(0), symmetric about dt") {
    const double dt = 0.5 * ts;
    const SampledWaveform a = shifted_pulse_samples(p, dt, g);
    double peak = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k)
      peak = std::max(peak, std::abs(a.samples[k]));
    CHECK(peak < eval_pulse(p, 0.0));
    // sample pairs equidistant from t = dt agree
    for (Eigen::Index k = 1; k < a.size(); k += 131) {
      const double mirror = 2.0 * dt - a.time_at(k);
      const double jf = (mirror - a.start_time) / ts;
      const auto j = static_cast<Eigen::Index>(std::round(jf));
      if (j >= 0 && j < a.size() && std::abs(jf - j) < 1e-9)
        CHECK(std::abs(a.samples[k]) ==
              doctest::Approx(std::abs(a.samples[j])).epsilon(1e-12));
    }
  }
  SUBCASE("unit energy after fractional shift") {
    const double dt = 4.3 * ts;
    const SampledWaveform a =
        shifted_pulse_samples(p, dt, pulse_grid(p, 0.0, ts, std::abs(dt) + 1e-6));
    CHECK(a.energy() == doctest::Approx(1.0).epsilon(1e-6));
  }
}
