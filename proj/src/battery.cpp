#include "ehsense/battery.hpp"

#include <cmath>
#include <stdexcept>

namespace ehsense {

namespace {

// Stationary distribution of the tridiagonal chain.  The balance equations for
// states 0..K-1 plus the normalization row form a linear system whose
// tridiagonal part is eliminated in O(K); the dense normalization row is
// reduced against each pivot as elimination proceeds.
Eigen::VectorXd solve_stationary(const Eigen::VectorXd& diag,
                                 const Eigen::VectorXd& upper,
                                 const Eigen::VectorXd& lower) {
  const Eigen::Index n = diag.size();  // K+1
  const Eigen::Index K = n - 1;
  Eigen::VectorXd c(K), d(K);  // row k: c(k)*p_k + d(k)*p_{k+1} = 0
  c(0) = diag(0) - 1.0;
  d(0) = lower(0);
  for (Eigen::Index k = 1; k < K; ++k) {
    const double f = upper(k - 1) / c(k - 1);
    c(k) = (diag(k) - 1.0) - f * d(k - 1);
    d(k) = lower(k);
  }
  // Normalization row, initially all ones with rhs 1.
  double g = 1.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    g = 1.0 - (g / c(k)) * d(k);
  }
  Eigen::VectorXd p(n);
  p(K) = 1.0 / g;
  for (Eigen::Index k = K - 1; k >= 0; --k) {
    p(k) = -d(k) * p(k + 1) / c(k);
  }
  return p;
}

}  // namespace

void validate(const BatteryParams& p) {
  if (!p.infinite() && p.capacity < 1)
    throw std::invalid_argument("battery capacity must be >= 1 or infinite");
  if (!(p.pe >= 0.0 && p.pe <= 1.0))
    throw std::invalid_argument("p_e must lie in [0,1]");
  if (!(p.q >= 0.0 && p.q <= 1.0))
    throw std::invalid_argument("q must lie in [0,1]");
}

double battery_omega(const BatteryParams& p) {
  return p.pe * (1.0 - p.q) / (p.q * (1.0 - p.pe));
}

Eigen::MatrixXd BatteryChain::dense_matrix() const {
  const Eigen::Index n = diag.size();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  P.diagonal() = diag;
  P.diagonal(1) = upper;
  P.diagonal(-1) = lower;
  return P;
}

BatteryChain build_chain(const BatteryParams& params) {
  validate(params);
  if (params.infinite())
    throw std::invalid_argument("build_chain requires a finite capacity");
  const int K = params.capacity;
  const double pe = params.pe;
  const double q = params.q;

  BatteryChain chain;
  chain.params = params;
  chain.diag.resize(K + 1);
  chain.upper.resize(K);
  chain.lower.resize(K);

  // An intended transmission at an empty battery consumes nothing; an arrival
  // during the same interval is stored.
  chain.diag(0) = 1.0 - pe;
  chain.upper(0) = pe;
  for (int k = 1; k < K; ++k) {
    chain.diag(k) = q * pe + (1.0 - q) * (1.0 - pe);
    chain.upper(k) = (1.0 - q) * pe;
  }
  for (int k = 0; k < K; ++k) chain.lower(k) = q * (1.0 - pe);
  chain.diag(K) = 1.0 - q * (1.0 - pe);

  // Reducible limits: the elimination below would hit a zero pivot.
  if (pe == 0.0) {
    chain.steady = Eigen::VectorXd::Unit(K + 1, 0);
  } else if (q == 0.0 || pe == 1.0) {
    chain.steady = Eigen::VectorXd::Unit(K + 1, K);
  } else {
    chain.steady = solve_stationary(chain.diag, chain.upper, chain.lower);
  }
  return chain;
}

const Eigen::VectorXd& steady_state(const BatteryChain& chain) {
  return chain.steady;
}

double depletion_probability(const BatteryParams& params) {
  validate(params);
  const double pe = params.pe;
  const double q = params.q;
  if (q == 0.0) return pe == 0.0 ? 1.0 : 0.0;
  if (pe == 1.0) return 0.0;
  if (pe == 0.0) return 1.0;
  if (q == 1.0) {
    // Omega^k / (1 - q) -> pe / (1 - pe) for k = 1 and 0 for k > 1.
    return params.infinite() || params.capacity >= 1 ? 1.0 - pe : 1.0;
  }

  if (params.infinite()) {
    return pe >= q ? 0.0 : 1.0 - pe / q;
  }
  const int K = params.capacity;
  if (pe == q) {
    // Omega = 1 limit of the geometric sum.
    return (1.0 - q) / (1.0 - q + static_cast<double>(K));
  }
  const double omega = battery_omega(params);
  const double log_omega = std::log(omega);
  if (K * log_omega < 600.0) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= K; ++k) {
      term *= omega;
      sum += term;
    }
    return 1.0 / (1.0 + sum / (1.0 - q));
  }
  // Omega^K overflows a double; the sum is dominated by its top term.
  const double log_sum = K * log_omega +
                         std::log((1.0 - std::exp(-K * log_omega)) /
                                  (1.0 - 1.0 / omega));
  const double log_t = log_sum - std::log1p(-q);
  return std::exp(-log_t);
}

double depletion_probability_ratio_form(const BatteryParams& params) {
  validate(params);
  if (params.infinite() || params.pe == params.q || params.q == 0.0 ||
      params.pe == 0.0 || params.pe == 1.0)
    throw std::invalid_argument("ratio form requires finite K and p_e != q");
  const double pe = params.pe;
  const double q = params.q;
  const int K = params.capacity;
  const double log_omega = std::log(battery_omega(params));
  if (K * log_omega < 600.0) {
    return (pe - q) / (pe * std::exp(K * log_omega) - q);
  }
  // p0 ~ (pe - q) / (pe Omega^K) for huge Omega^K.
  return (pe - q) / pe * std::exp(-K * log_omega);
}

}  // namespace ehsense
