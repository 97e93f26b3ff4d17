#pragma once

#include <cstddef>

#include "dpstream/types.hpp"

namespace dpstream {

// Exponential decay model. A point that arrived at t_i weighs
// a^(lambda * (t - t_i)) at time t.
struct DecayParams {
  double a = 0.998;
  double lambda = 1.0;
  double v = 1000.0;   // expected arrival rate, points per second
  double beta = 0.0021;

  // Throws ParameterError unless 0 < a < 1, lambda > 0, v > 0 and
  // (1 - a^lambda) / v < beta < 1.
  void validate() const;

  // Per-second retention factor a^lambda.
  double retention() const;
};

// Factors below this are flushed to zero.
inline constexpr double kFreshnessFloor = 1e-12;

double freshness(const DecayParams& params, Timestamp t_i, Timestamp t);

// rho_last decayed from t_last to t.
double decay_density(double rho_last, Timestamp t_last, Timestamp t, const DecayParams& params);

// Decay to t, then add the freshly arrived point.
double absorb(double rho_last, Timestamp t_last, Timestamp t, const DecayParams& params);

// Limit of the summed freshness of an unbounded stream: v / (1 - a^lambda).
double total_freshness(const DecayParams& params);

// Density at or above which a cell takes part in the tree:
// beta * v / (1 - a^lambda).
double active_threshold(const DecayParams& params);

struct DeletionHorizon {
  double seconds = 0.0;
  // Set when the closed form is non-positive and the horizon was clamped to 0.
  bool degenerate = false;
};

// (log_a(1 - a^lambda) - log_a(beta * v)) / (lambda * v).
DeletionHorizon deletion_horizon(const DecayParams& params);

}  // namespace dpstream
