#include "ehsense/observation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace ehsense {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Adaptive Simpson on [a, b], used only as the Marcum fallback path.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace

void validate(const RayleighRician& m) {
  if (!(m.s >= 0.0)) throw std::invalid_argument("noncentrality s must be >= 0");
  if (!(m.sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
  if (!(m.sigma1 > 0.0)) throw std::invalid_argument("sigma1 must be > 0");
}

void validate(const TailTable& m) {
  if (m.tau.empty() || m.tau.size() != m.tails.size())
    throw std::invalid_argument("tail table must be non-empty and aligned");
  if (!std::is_sorted(m.tau.begin(), m.tau.end()))
    throw std::invalid_argument("tail table thresholds must be sorted");
  for (const TailPair& t : m.tails) {
    if (!(t.q0 >= 0.0 && t.q0 <= 1.0 && t.q1 >= 0.0 && t.q1 <= 1.0))
      throw std::invalid_argument("tail table entries must lie in [0,1]");
  }
}

void validate(const ObservationModel& m) {
  std::visit([](const auto& v) { validate(v); }, m);
}

double bessel_i0(double z) { return std::exp(log_bessel_i0(z)); }

double log_bessel_i0(double z) {
  z = std::abs(z);
  if (z < 500.0) {
    return std::log(std::cyl_bessel_i(0.0, z));
  }
  // Asymptotic expansion, relative error far below 1e-12 for z >= 500.
  const double r = 1.0 / (8.0 * z);
  const double corr = 1.0 + r * (1.0 + r * (4.5 + r * 37.5));
  return z - 0.5 * std::log(kTwoPi * z) + std::log(corr);
}

double marcum_q1(double a, double b) {
  if (b <= 0.0) return 1.0;
  if (a == 0.0) return std::exp(-0.5 * b * b);
  const double x = 0.5 * a * a;  // Poisson mean
  const double y = 0.5 * b * b;
  if (x < 350.0 && y < 350.0) {
    // Q1 = sum_k Pois(k; x) * e^{-y} sum_{j<=k} y^j / j!
    double pois = std::exp(-x);
    double erl_term = std::exp(-y);
    double erl = erl_term;
    double total = 0.0;
    double pois_tail = 1.0;  // 1 - sum of Poisson terms so far
    for (int k = 0; k < 100000; ++k) {
      total += pois * erl;
      pois_tail -= pois;
      // Remaining contribution is at most the unsummed Poisson mass.
      if (k > x && pois_tail < 1e-14 * std::max(total, 1e-300)) break;
      pois *= x / (k + 1);
      erl_term *= y / (k + 1);
      erl += erl_term;
    }
    return std::min(1.0, std::max(0.0, total));
  }
  // Extreme arguments: integrate the Rician density directly.
  auto dens = [a](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(std::log(t) - 0.5 * (t * t + a * a) + log_bessel_i0(a * t));
  };
  const double hi = std::max(b, a + 12.0);
  if (b >= hi) return 0.0;
  return std::min(1.0, std::max(0.0, integrate(dens, b, hi, 1e-13)));
}

TailPair tail_probabilities(const ObservationModel& model, double tau) {
  validate(model);
  if (const auto* rr = std::get_if<RayleighRician>(&model)) {
    if (tau < 0.0)
      throw std::invalid_argument("threshold must be >= 0 for magnitude models");
    TailPair out;
    out.q0 = std::exp(-0.5 * tau * tau / (rr->sigma0 * rr->sigma0));
    out.q1 = marcum_q1(rr->s / rr->sigma1, tau / rr->sigma1);
    return out;
  }
  const auto& table = std::get<TailTable>(model);
  auto it = std::upper_bound(table.tau.begin(), table.tau.end(), tau);
  const std::size_t idx =
      (it == table.tau.begin()) ? 0 : static_cast<std::size_t>(it - table.tau.begin()) - 1;
  return table.tails[idx];
}

double density(const RayleighRician& m, double x, int hypothesis) {
  validate(m);
  if (x < 0.0) throw std::invalid_argument("observation must be >= 0");
  if (x == 0.0) return 0.0;
  if (hypothesis == 0) {
    const double v = m.sigma0 * m.sigma0;
    return x / v * std::exp(-0.5 * x * x / v);
  }
  const double v = m.sigma1 * m.sigma1;
  const double logf = std::log(x) - std::log(v) -
                      0.5 * (x * x + m.s * m.s) / v + log_bessel_i0(x * m.s / v);
  return std::exp(logf);
}

double sample(const RayleighRician& m, int hypothesis, std::mt19937_64& rng) {
  if (hypothesis == 0) {
    // Inverse CDF of Rayleigh(sigma0).
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    while (u <= 0.0) u = unif(rng);
    return m.sigma0 * std::sqrt(-2.0 * std::log(u));
  }
  // Magnitude of a 2-D Gaussian offset by s.
  std::normal_distribution<double> normal(0.0, 1.0);
  const double z1 = m.s + m.sigma1 * normal(rng);
  const double z2 = m.sigma1 * normal(rng);
  return std::hypot(z1, z2);
}

}  // namespace ehsense
