// ============================================================================
// observation.hpp -- Sensor observation models and threshold tail probabilities
//
// A sensor observes a nonnegative magnitude whose law depends on the active
// hypothesis: Rayleigh(sigma0) under H0, Rician(s, sigma1) under H1.  The
// threshold test u = 1{x >= tau} has false-alarm probability q0 and detection
// probability q1; both are computed here.  A table-backed model is provided so
// callers can inject exact (q0, q1) pairs without touching special functions.
// ============================================================================
#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

namespace ehsense {

struct TailPair {
  double q0 = 0.0;  // Pr(X >= tau | H0), false alarm
  double q1 = 0.0;  // Pr(X >= tau | H1), detection
};

// Rayleigh under H0, Rician under H1.  The likelihood ratio is monotone
// increasing in x when sigma0 == sigma1, so thresholds live in observation
// space rather than log-likelihood space.
struct RayleighRician {
  double s = 0.0;       // noncentrality (H1)
  double sigma0 = 1.0;  // Rayleigh scale (H0)
  double sigma1 = 1.0;  // Rician scale (H1)
};

// Piecewise-constant (q0, q1) lookup keyed by threshold.  tail_probabilities
// returns the entry with the largest tau_i <= tau; below the first entry the
// first entry is returned.  Entries must be sorted by tau ascending.
struct TailTable {
  std::vector<double> tau;
  std::vector<TailPair> tails;
};

using ObservationModel = std::variant<RayleighRician, TailTable>;

void validate(const RayleighRician& m);
void validate(const TailTable& m);
void validate(const ObservationModel& m);

/// (q0, q1) of the threshold test x >= tau.
TailPair tail_probabilities(const ObservationModel& model, double tau);

/// Conditional density f_{X|H}(x | h) for the Rayleigh/Rician model.
double density(const RayleighRician& m, double x, int hypothesis);

/// Draw one observation under hypothesis h.
double sample(const RayleighRician& m, int hypothesis, std::mt19937_64& rng);

// Special-function kernels, exposed for tests.
double log_bessel_i0(double z);
double bessel_i0(double z);

/// Generalized Marcum Q of order 1, Q1(a, b) = Pr(X >= b) for X the magnitude
/// of a 2-D unit-variance Gaussian at distance a from the origin.  Series in
/// the noncentral chi-square representation with adaptive truncation
/// (relative tolerance 1e-12); quadrature fallback for extreme arguments.
double marcum_q1(double a, double b);

}  // namespace ehsense
