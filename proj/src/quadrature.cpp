// SPDX-License-Identifier: Apache-2.0
#include "hmt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "hmt/types.hpp"

namespace hmt {

namespace {

QuadratureRule make_gauss_legendre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, flm, m, fm);
  const double right = simpson(m, fm, frm, b, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, tol * 0.5, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, tol * 0.5, depth - 1);
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_gauss_legendre(order)).first;
  return it->second;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, const std::vector<double>& knots) {
  if (!(b > a)) return 0.0;
  std::vector<double> pts{a, b};
  for (double k : knots)
    if (k > a && k < b) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // First pass for a magnitude estimate, second pass with the scaled tolerance.
  double scale = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double m = 0.5 * (pts[i] + pts[i + 1]);
    scale += std::abs(f(m)) * (pts[i + 1] - pts[i]);
  }
  if (scale == 0.0) scale = 1e-300;

  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    const double flo = f(lo), fhi = f(hi);
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    const double whole = simpson(lo, flo, fm, hi, fhi);
    total += adaptive_step(f, lo, flo, hi, fhi, m, fm, whole, rel_tol * scale, 52);
  }
  return total;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  // Map to [-1, 1]; abscissae x = tanh((pi/2) sinh(t)) on a t-grid that halves
  // per level. Points accumulated at one level are the even multiples of the
  // next level's step, so the running sum stays valid across levels.
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  auto eval = [&](double u) { return f(mid + half * u); };
  auto node = [](double t, double& x, double& w) {
    const double ex = (kPi / 2.0) * std::sinh(t);
    if (ex > 350.0) return false;
    const double c = std::cosh(ex);
    w = (kPi / 2.0) * std::cosh(t) / (c * c);
    if (w < 1e-320) return false;
    x = std::tanh(ex);
    return true;
  };

  double h = 1.0;
  double sum = (kPi / 2.0) * eval(0.0);
  for (int k = 1;; ++k) {
    double x, w;
    if (!node(h * k, x, w)) break;
    sum += w * (eval(x) + eval(-x));
  }
  double prev = sum * h;
  for (int level = 1; level <= 11; ++level) {
    h *= 0.5;
    for (int k = 1;; k += 2) {
      double x, w;
      if (!node(h * k, x, w)) break;
      sum += w * (eval(x) + eval(-x));
    }
    const double estimate = sum * h;
    if (level >= 3 && std::abs(estimate - prev) <= rel_tol * std::abs(estimate)) {
      return estimate * half;
    }
    prev = estimate;
  }
  return prev * half;
}

}  // namespace hmt
