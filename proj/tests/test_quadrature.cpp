// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hmt/quadrature.hpp"
#include "hmt/types.hpp"

using namespace hmt;

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const QuadratureRule& r = gauss_legendre(8);
  // degree 15 is exact for order 8
  double acc = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    const double x = r.nodes[i];
    acc += r.weights[i] * (std::pow(x, 14) + 3.0 * std::pow(x, 7) + 1.0);
  }
  CHECK(acc == doctest::Approx(2.0 / 15.0 + 2.0).epsilon(1e-14));

  double wsum = 0.0;
  const QuadratureRule& r64 = gauss_legendre(64);
  for (double w : r64.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adaptive_simpson on smooth and peaked integrands") {
  const double a = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12);
  CHECK(a == doctest::Approx(2.0).epsilon(1e-11));

  // narrow Gaussian inside a wide interval, found through the knot seed
  const double s = 1e-4;
  const double b = adaptive_simpson(
      [&](double x) { return std::exp(-(x - 0.5) * (x - 0.5) / (2 * s * s)); }, 0.0,
      100.0, 1e-12, {0.5 - 4 * s, 0.5, 0.5 + 4 * s});
  CHECK(b == doctest::Approx(s * std::sqrt(2.0 * kPi)).epsilon(1e-10));
}

TEST_CASE("tanh_sinh handles inverse-sqrt endpoint singularities") {
  const double v = tanh_sinh(
      [](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, -1.0, 1.0, 1e-13);
  CHECK(v == doctest::Approx(kPi).epsilon(1e-10));

  const double w = tanh_sinh([](double x) { return x * x; }, 0.0, 3.0, 1e-13);
  CHECK(w == doctest::Approx(9.0).epsilon(1e-12));
}
