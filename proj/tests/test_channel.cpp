// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hmt/channel.hpp"
#include "hmt/oracle.hpp"

using namespace hmt;

TEST_CASE("scattering_density substitutions") {
  const ExpUScattering s{5e-6, 100.0, 5e-5};
  const double peak = 1.0 / (kPi * s.tau_rms * s.f_d);
  CHECK(scattering_density(s, 1e-12, 0.0) == doctest::Approx(peak).epsilon(1e-6));
  CHECK(scattering_density(s, s.tau_rms, 0.0) ==
        doctest::Approx(std::exp(-1.0) * peak).epsilon(1e-12));
  CHECK(scattering_density(s, -1e-9, 0.0) == 0.0);
  CHECK_THROWS_AS(scattering_density(s, 1e-6, s.f_d), std::domain_error);
  CHECK_THROWS_AS(scattering_density(s, 1e-6, -s.f_d * 1.001), std::domain_error);
}

TEST_CASE("scattering density integrates to one") {
  const ExpUScattering s{5e-6, 100.0, 5e-5};
  CHECK(oracle::scattering_mass_quadrature(s) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("csf") {
  CHECK(csf({1e-4, 100.0, 1e-3}).vartheta == doctest::Approx(0.1));
  CHECK(csf({1e-4, 100.0, 1e-3}).underspread());
  CHECK(csf({3.5e-4, 100.0, 3.5e-3}).vartheta == doctest::Approx(0.35));
  CHECK_FALSE(csf({1e-3, 1000.0, 1e-2}).underspread());
}

TEST_CASE("draw_paths basic contracts") {
  const ExpUScattering s{5e-6, 100.0, 5e-5};
  TrialRng rng(derive_seed(13, 0));
  CHECK_THROWS_AS(draw_paths(s, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(draw_paths({5e-6, 100.0, 1e-5}, 4, rng), std::invalid_argument);
  // overspread rejected
  CHECK_THROWS_AS(draw_paths({1e-3, 2000.0, 1e-2}, 4, rng), std::invalid_argument);

  const ChannelPaths ch = draw_paths(s, 500, rng);
  CHECK(ch.count() == 500);
  for (int p = 0; p < 500; ++p) {
    CHECK(ch.delays[p] >= 0.0);
    CHECK(ch.delays[p] <= s.tau_max);
    CHECK(std::abs(ch.dopplers[p]) < s.f_d);
  }
}

TEST_CASE("draw_paths single-path gain normalization") {
  const ExpUScattering s{5e-6, 100.0, 5e-5};
  TrialRng rng(derive_seed(13, 1));
  double acc = 0.0;
  const long n = 100000;
  for (long i = 0; i < n; ++i) acc += std::norm(draw_paths(s, 1, rng).gains[0]);
  CHECK(std::abs(acc / n - 1.0) < 0.01);
}

TEST_CASE("draw_paths determinism") {
  const ExpUScattering s{5e-6, 100.0, 5e-5};
  TrialRng a(derive_seed(99, 3)), b(derive_seed(99, 3));
  const ChannelPaths pa = draw_paths(s, 32, a), pb = draw_paths(s, 32, b);
  CHECK(pa.delays == pb.delays);
  CHECK(pa.dopplers == pb.dopplers);
  CHECK((pa.gains.array() == pb.gains.array()).all());
}

TEST_CASE("apply_channel") {
  const double sigma = 2.3094010767585035e-9;
  const GaussianPulse pulse{sigma};
  AnalyticSignal one;
  one.pulse = pulse;
  one.terms.push_back({0.0, 0.0, cplx{1.0, 0.0}});
  const LatticeParams lp = LatticeParams::from_tf(1e-4, 25e3, sigma);

  SUBCASE("identity path is exact") {
    ChannelPaths ident;
    ident.delays = Eigen::VectorXd::Zero(1);
    ident.dopplers = Eigen::VectorXd::Zero(1);
    ident.gains = Eigen::VectorXcd::Constant(1, cplx{1.0, 0.0});
    const SampleGrid g = pulse_grid(pulse, 0.0, 1e-7);
    const SampledWaveform y = apply_channel(ident, one, g);
    const SampledWaveform x = sample_signal(one, g);
    CHECK((y.samples - x.samples).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("pure delay: matched peak drops by the ambiguity factor") {
    const double tau0 = 1.1e-5;
    ChannelPaths ch;
    ch.delays = Eigen::VectorXd::Constant(1, tau0);
    ch.dopplers = Eigen::VectorXd::Zero(1);
    ch.gains = Eigen::VectorXcd::Constant(1, cplx{1.0, 0.0});
    const SampleGrid g = pulse_grid(pulse, 0.0, 1e-7, 2.0 * tau0);
    const SampledWaveform y = apply_channel(ch, one, g);
    const double got = std::abs(demodulate(y, {0, 0, 1}, lp, {pulse, 0.0}));
    CHECK(got == doctest::Approx(std::exp(-kPi * tau0 * tau0 / (2.0 * sigma)))
                     .epsilon(1e-9));
  }
  SUBCASE("pure Doppler: matched peak drops by exp(-pi sigma nu^2 / 2)") {
    const double nu0 = 9500.0;
    ChannelPaths ch;
    ch.delays = Eigen::VectorXd::Zero(1);
    ch.dopplers = Eigen::VectorXd::Constant(1, nu0);
    ch.gains = Eigen::VectorXcd::Constant(1, cplx{1.0, 0.0});
    const SampleGrid g = pulse_grid(pulse, 0.0, 1e-7);
    const SampledWaveform y = apply_channel(ch, one, g);
    const double got = std::abs(demodulate(y, {0, 0, 1}, lp, {pulse, 0.0}));
    CHECK(got == doctest::Approx(std::exp(-kPi * sigma * nu0 * nu0 / 2.0))
                     .epsilon(1e-9));
  }
  SUBCASE("grid not covering the delayed support is rejected") {
    ChannelPaths ch;
    ch.delays = Eigen::VectorXd::Constant(1, 1e-3);
    ch.dopplers = Eigen::VectorXd::Zero(1);
    ch.gains = Eigen::VectorXcd::Constant(1, cplx{1.0, 0.0});
    CHECK_THROWS_AS(apply_channel(ch, one, pulse_grid(pulse, 0.0, 1e-7)),
                    CoverageError);
  }
}

TEST_CASE("scattering_from_vartheta") {
  const double sigma = 2.3094010767585035e-9;
  const ExpUScattering s = scattering_from_vartheta(sigma, 0.2);
  CHECK(s.tau_rms == doctest::Approx(std::sqrt(sigma * 0.2 / 1.45)).epsilon(1e-14));
  CHECK(s.tau_max == doctest::Approx(10.0 * s.tau_rms).epsilon(1e-14));
  CHECK(csf(s).vartheta == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(scattering_from_vartheta(sigma, 1.2), std::invalid_argument);
}

TEST_CASE("path export format") {
  ChannelPaths ch;
  ch.delays = Eigen::VectorXd::Constant(1, 1.5e-6);
  ch.dopplers = Eigen::VectorXd::Constant(1, -42.0);
  ch.gains = Eigen::VectorXcd::Constant(1, cplx{0.5, -0.25});
  std::ostringstream os;
  write_paths(os, ch);
  CHECK(os.str() == "1.5000000000000001e-06 -42 0.5 -0.25\n");
}
