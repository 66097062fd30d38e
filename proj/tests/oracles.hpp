// Test-only numerical oracles, independent of the library's evaluation paths.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

namespace oracle {

// Adaptive Simpson quadrature.
inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-13) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Power-series Bessel I0, independent of any library implementation.
inline double bessel_i0_series(double z) {
  const double t = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= t / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Stationary distribution by power iteration on the dense transition matrix.
inline Eigen::VectorXd power_iteration_steady(const Eigen::MatrixXd& P,
                                              int iters = 2000000,
                                              double tol = 1e-14) {
  const Eigen::Index n = P.rows();
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd next = P.transpose() * p;
    next /= next.sum();
    if ((next - p).lpNorm<Eigen::Infinity>() < tol) return next;
    p = next;
  }
  return p;
}

}  // namespace oracle
