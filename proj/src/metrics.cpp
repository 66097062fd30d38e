#include "ehsense/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ehsense {

void validate(const ChannelModel& ch) {
  // eps == 0 is allowed (noiseless cases).
  if (!(ch.eps0 >= 0.0 && ch.eps0 < 0.5))
    throw std::invalid_argument("eps0 must lie in [0, 0.5)");
  if (!(ch.eps1 >= 0.0 && ch.eps1 < 0.5))
    throw std::invalid_argument("eps1 must lie in [0, 0.5)");
}

SensorDesign make_sensor_design(const ObservationModel& model, double tau,
                                int capacity, double pe,
                                const ChannelModel& channel, double pi1) {
  validate(model);
  validate(channel);
  if (!(pi1 > 0.0 && pi1 < 1.0))
    throw std::invalid_argument("pi1 must lie in (0,1)");
  SensorDesign d;
  d.model = model;
  d.tau = tau;
  d.capacity = capacity;
  d.pe = pe;
  d.channel = channel;
  d.tails = tail_probabilities(model, tau);
  d.q = (1.0 - pi1) * d.tails.q0 + pi1 * d.tails.q1;
  d.p0 = depletion_probability({capacity, pe, d.q});
  return d;
}

std::pair<double, double> channel_output_pmf(double q0, double q1, double p0,
                                             const ChannelModel& ch) {
  validate(ch);
  const double delta = ch.delta();
  return {ch.eps0 + delta * q0 * (1.0 - p0),
          ch.eps0 + delta * q1 * (1.0 - p0)};
}

double bhattacharyya(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
    throw std::invalid_argument("Bernoulli parameters must lie in [0,1]");
  const double coeff = std::sqrt(a * b) + std::sqrt((1.0 - a) * (1.0 - b));
  if (coeff <= 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, -std::log(coeff));
}

double constrained_bd(const SensorDesign& design, double pi1) {
  (void)pi1;  // the prior is already folded into design.q and design.p0
  const auto [a, b] =
      channel_output_pmf(design.tails.q0, design.tails.q1, design.p0,
                         design.channel);
  return bhattacharyya(a, b);
}

double unconstrained_bd(double q0, double q1, const ChannelModel& ch) {
  const auto [a, b] = channel_output_pmf(q0, q1, 0.0, ch);
  return bhattacharyya(a, b);
}

double bd_upper_bound(int capacity, double pe, double pi1,
                      const ChannelModel& ch) {
  validate(ch);
  if (!(pi1 > 0.0 && pi1 < 1.0))
    throw std::invalid_argument("pi1 must lie in (0,1)");
  // Worst-case transmission probability is pi1 (q0 = 0, q1 = 1).
  const double p0_bar = depletion_probability({capacity, pe, pi1});
  const double delta = ch.delta();
  const double coeff =
      std::sqrt(ch.eps0 * (1.0 - ch.eps1 - p0_bar * delta)) +
      std::sqrt((1.0 - ch.eps0) * (ch.eps1 + p0_bar * delta));
  if (coeff <= 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, -std::log(coeff));
}

double kailath_bound(double b_total, double pi1) {
  if (!(b_total >= 0.0))
    throw std::invalid_argument("total BD must be >= 0");
  const double pi0 = 1.0 - pi1;
  if (std::isinf(b_total)) return 0.0;
  const double bound = std::sqrt(pi0 * pi1) * std::exp(-b_total);
  return std::clamp(bound, 0.0, std::min(pi0, pi1));
}

}  // namespace ehsense
