// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hmt/lattice.hpp"
#include "hmt/oracle.hpp"

using namespace hmt;

namespace {
const double kSigmaIv = 1e-4 / (std::sqrt(3.0) * 25e3);
const LatticeParams kIv = LatticeParams::from_tf(1e-4, 25e3, kSigmaIv);
}  // namespace

TEST_CASE("alpha table and interpolation") {
  CHECK(alpha_for_efficiency(1.0) == doctest::Approx(2.00));
  CHECK(alpha_for_efficiency(0.5) == doctest::Approx(2.25));
  CHECK(alpha_for_efficiency(2.0) == doctest::Approx(1.90));
  CHECK(alpha_for_efficiency(4.0) == doctest::Approx(1.85));
  // clamped outside the table, linear in log2 inside
  CHECK(alpha_for_efficiency(0.25) == doctest::Approx(2.25));
  CHECK(alpha_for_efficiency(8.0) == doctest::Approx(1.85));
  CHECK(alpha_for_efficiency(std::sqrt(2.0)) == doctest::Approx(0.5 * (2.00 + 1.90)));
  CHECK_THROWS_AS(alpha_for_efficiency(0.0), std::invalid_argument);
}

TEST_CASE("match_parameters solves both constraints") {
  SUBCASE("eq8 worked example") {
    const LatticeParams lp = match_parameters(5e-6, 100.0, 1.0, MatchMode::kEq8);
    CHECK(lp.sigma == doctest::Approx(1e-7).epsilon(1e-14));
    CHECK(lp.T * lp.F == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lp.sigma * std::sqrt(3.0) * lp.F / lp.T == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("eq7 constraint") {
    const LatticeParams lp = match_parameters(5e-6, 100.0, 1.0, MatchMode::kEq7);
    CHECK(lp.sigma * lp.F / (std::sqrt(3.0) * lp.T) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lp.T * lp.F == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(match_parameters(-1e-6, 100.0, 1.0, MatchMode::kEq8),
                  std::invalid_argument);
  CHECK_THROWS_AS(match_parameters(1e-6, 0.0, 1.0, MatchMode::kEq8),
                  std::invalid_argument);
}

TEST_CASE("lattice point offsets") {
  CHECK(time_offset({2, 1, 1}, kIv) == doctest::Approx(2e-4));
  CHECK(time_offset({2, 1, 2}, kIv) == doctest::Approx(2.5e-4));
  CHECK(freq_offset({2, 1, 1}, kIv) == doctest::Approx(25e3));
  CHECK(freq_offset({2, 1, 2}, kIv) == doctest::Approx(37.5e3));
  CHECK_THROWS_AS(time_offset({0, 0, 3}, kIv), std::invalid_argument);
}

TEST_CASE("modulate single symbols") {
  const GaussianPulse pulse{kIv.sigma};
  const double ts = 1e-7;
  SymbolFrame f;
  f.coset1 = Eigen::MatrixXcd::Zero(1, 1);
  f.coset2 = Eigen::MatrixXcd::Zero(1, 1);

  SUBCASE("coset 1 reproduces the bare pulse") {
    f.coset1(0, 0) = 1.0;
    const SampleGrid g = pulse_grid(pulse, 0.0, ts);
    const SampledWaveform x = modulate(f, kIv, pulse, g);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k)
      worst = std::max(worst, std::abs(x.samples[k] - eval_pulse(pulse, x.time_at(k))));
    CHECK(worst < 1e-12);
  }
  SUBCASE("coset 2 is the (T/2, F/2)-shifted pulse") {
    f.coset2(0, 0) = 1.0;
    const SampleGrid g = pulse_grid(pulse, 0.5 * kIv.T, ts);
    const SampledWaveform x = modulate(f, kIv, pulse, g);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double t = x.time_at(k);
      const cplx want = eval_pulse(pulse, t - 0.5 * kIv.T) *
                        std::polar(1.0, 2.0 * kPi * 0.5 * kIv.F * t);
      worst = std::max(worst, std::abs(x.samples[k] - want));
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("grid too short names the truncated point") {
    f.coset1(0, 0) = 1.0;
    const SampleGrid g{0.0, ts, 50};
    CHECK_THROWS_AS(modulate(f, kIv, pulse, g), CoverageError);
    try {
      modulate(f, kIv, pulse, g);
    } catch (const CoverageError& e) {
      CHECK(std::string(e.what()).find("(m=0,n=0,coset=1)") != std::string::npos);
    }
  }
}

TEST_CASE("frame energy and demodulation against the brute-force Gram matrix") {
  TrialRng rng(derive_seed(7, 1));
  const GaussianPulse pulse{kIv.sigma};
  const SymbolFrame frame = random_frame(3, 3, 1.0, rng);
  const double span = kPulseTailSigmas * std::sqrt(kIv.sigma);
  const double ts = 1e-6;
  const SampleGrid grid{-span, ts,
                        static_cast<Eigen::Index>(std::ceil((2.5 * kIv.T + 2 * span) / ts)) + 1};
  const SampledWaveform x = modulate(frame, kIv, pulse, grid);

  std::vector<LatticePoint> pts;
  Eigen::VectorXcd sym(18);
  int k = 0;
  for (int coset = 1; coset <= 2; ++coset)
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) {
        pts.push_back({m, n, coset});
        sym[k++] = (coset == 1) ? frame.coset1(m, n) : frame.coset2(m, n);
      }
  const Eigen::MatrixXcd gram = oracle::lattice_gram(pts, kIv, pulse, grid);

  CHECK(x.energy() ==
        doctest::Approx(std::real(sym.dot(gram * sym))).epsilon(1e-9));

  const Eigen::VectorXcd pred = gram * sym;
  const ReceiverPulse rx{pulse, 0.0};
  for (int i = 0; i < 18; ++i)
    CHECK(std::abs(demodulate(x, pts[i], kIv, rx) - pred[i]) < 1e-9);
}

TEST_CASE("demodulate") {
  const GaussianPulse pulse{kIv.sigma};
  SymbolFrame f;
  f.coset1 = Eigen::MatrixXcd::Constant(1, 1, 1.0);
  f.coset2 = Eigen::MatrixXcd::Zero(1, 1);
  const double ts = 1e-7;

  SUBCASE("matched filter recovers the symbol") {
    const SampledWaveform x = modulate(f, kIv, pulse, pulse_grid(pulse, 0.0, ts));
    CHECK(std::abs(demodulate(x, {0, 0, 1}, kIv, {pulse, 0.0}) - cplx{1.0, 0.0}) < 1e-9);
  }
  SUBCASE("delayed receiver pulse loses exp(-pi dt^2/(2 sigma))") {
    const double dt = 0.8 * std::sqrt(kIv.sigma);
    const SampledWaveform x = modulate(f, kIv, pulse, pulse_grid(pulse, 0.0, ts, dt));
    const double got = std::abs(demodulate(x, {0, 0, 1}, kIv, {pulse, dt}));
    CHECK(got == doctest::Approx(std::exp(-kPi * dt * dt / (2.0 * kIv.sigma)))
                     .epsilon(1e-9));
  }
  SUBCASE("linearity") {
    TrialRng rng(derive_seed(7, 2));
    const SampleGrid g = pulse_grid(pulse, 0.0, ts, kIv.T);
    SymbolFrame f2;
    f2.coset1 = Eigen::MatrixXcd::Zero(1, 1);
    f2.coset2 = Eigen::MatrixXcd::Constant(1, 1, cplx{0.3, -0.9});
    const SampledWaveform x1 = modulate(f, kIv, pulse, g);
    const SampledWaveform x2 = modulate(f2, kIv, pulse, g);
    const cplx a{1.7, -0.4}, b{-0.6, 2.2};
    SampledWaveform mix = x1;
    mix.samples = a * x1.samples + b * x2.samples;
    const ReceiverPulse rx{pulse, 0.0};
    const cplx lhs = demodulate(mix, {0, 0, 2}, kIv, rx);
    const cplx rhs = a * demodulate(x1, {0, 0, 2}, kIv, rx) +
                     b * demodulate(x2, {0, 0, 2}, kIv, rx);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  SUBCASE("insufficient coverage rejected") {
    const SampledWaveform x = modulate(f, kIv, pulse, pulse_grid(pulse, 0.0, ts));
    CHECK_THROWS_AS(demodulate(x, {3, 0, 1}, kIv, {pulse, 0.0}), CoverageError);
  }
}

TEST_CASE("coset-2 pulses sit at (T/2, F/2) relative to coset 1") {
  const GaussianPulse pulse{kIv.sigma};
  // build the coset-2 origin pulse and project it onto an explicitly shifted
  // coset-1 pulse; a unit-magnitude match pins the offsets
  SymbolFrame f;
  f.coset1 = Eigen::MatrixXcd::Zero(1, 1);
  f.coset2 = Eigen::MatrixXcd::Constant(1, 1, 1.0);
  const SampleGrid g = pulse_grid(pulse, 0.5 * kIv.T, 1e-7);
  const SampledWaveform x = modulate(f, kIv, pulse, g);
  const cplx proj = demodulate(x, {0, 0, 2}, kIv, {pulse, 0.0});
  CHECK(std::abs(proj - cplx{1.0, 0.0}) < 1e-9);
  // and the match collapses by the ambiguity factor if read from coset 1
  const cplx wrong = demodulate(x, {0, 0, 1}, kIv, {pulse, 0.0});
  const double want =
      std::abs(ambiguity_gaussian(pulse, 0.5 * kIv.T, 0.5 * kIv.F));
  CHECK(std::abs(wrong) == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("random_frame symbol power statistic") {
  TrialRng rng(derive_seed(7, 3));
  const double sc2 = 2.5;
  const SymbolFrame f = random_frame(71, 71, sc2, rng);
  const double mean =
      (f.coset1.squaredNorm() + f.coset2.squaredNorm()) / (2.0 * 71 * 71);
  CHECK(std::abs(mean - sc2) / sc2 < 0.05);
}
