// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace hmt {

struct QuadratureRule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes and weights; cached per order, thread-safe.
const QuadratureRule& gauss_legendre(int order);

// Adaptive Simpson on [a, b] to the given relative tolerance. `knots` seeds
// the initial subdivision so narrow features are not stepped over.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, const std::vector<double>& knots = {});

// tanh-sinh (double exponential) quadrature on [a, b]; tolerant of integrable
// endpoint singularities.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

}  // namespace hmt
