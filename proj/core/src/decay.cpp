#include "dpstream/decay.hpp"

#include <cmath>
#include <sstream>

#include "dpstream/error.hpp"

namespace dpstream {

void DecayParams::validate() const {
  if (!(a > 0.0 && a < 1.0)) throw ParameterError("decay base a must lie in (0, 1)");
  if (!(lambda > 0.0)) throw ParameterError("decay exponent lambda must be positive");
  if (!(v > 0.0)) throw ParameterError("arrival rate v must be positive");
  const double lower = (1.0 - retention()) / v;
  if (!(beta > lower && beta < 1.0)) {
    std::ostringstream msg;
    msg << "beta must lie in (" << lower << ", 1), got " << beta;
    throw ParameterError(msg.str());
  }
}

double DecayParams::retention() const { return std::pow(a, lambda); }

namespace {

double decay_factor(Timestamp from, Timestamp to, const DecayParams& params) {
  if (to < from) throw PreconditionError("decay requested backwards in time");
  if (to == from) return 1.0;
  const double f = std::pow(params.a, params.lambda * (to - from));
  return f < kFreshnessFloor ? 0.0 : f;
}

}  // namespace

double freshness(const DecayParams& params, Timestamp t_i, Timestamp t) {
  return decay_factor(t_i, t, params);
}

double decay_density(double rho_last, Timestamp t_last, Timestamp t, const DecayParams& params) {
  if (rho_last < 0.0) throw InvariantError("negative density");
  return rho_last * decay_factor(t_last, t, params);
}

double absorb(double rho_last, Timestamp t_last, Timestamp t, const DecayParams& params) {
  return decay_density(rho_last, t_last, t, params) + 1.0;
}

double total_freshness(const DecayParams& params) {
  params.validate();
  return params.v / (1.0 - params.retention());
}

double active_threshold(const DecayParams& params) {
  return params.beta * total_freshness(params);
}

DeletionHorizon deletion_horizon(const DecayParams& params) {
  params.validate();
  const double log_a = std::log(params.a);
  const double numerator =
      std::log(1.0 - params.retention()) / log_a - std::log(params.beta * params.v) / log_a;
  const double seconds = numerator / (params.lambda * params.v);
  if (!(seconds > 0.0)) return {0.0, true};
  return {seconds, false};
}

}  // namespace dpstream
