#pragma once

#include <span>
#include <vector>

#include "dpstream/cellspace.hpp"
#include "dpstream/dptree.hpp"

namespace dpstream {

// Separation objective for a threshold tau over a multiset of finite
// dependent distances (smaller is better). With n = |{d > tau}|,
// m = |{d <= tau}| and mean over all of them:
//
//   AsPrinted:   alpha * sum(d > tau) / (n * mean) + (1 - alpha) * m * mean / sum(d <= tau)
//   Reciprocal:  alpha * n * mean / sum(d > tau) + (1 - alpha) * sum(d <= tau) / (m * mean)
//
// AsPrinted grows as the inter distances grow and the intra ones shrink, so
// a clean two-way split scores worst. Reciprocal rewards short links inside
// clusters and long links between them.
// Throws UndefinedObjective when either side is empty or the intra sum is zero.
enum class ObjectiveForm { AsPrinted, Reciprocal };

double objective(double alpha, double tau, std::span<const double> deltas,
                 ObjectiveForm form = ObjectiveForm::AsPrinted);

// Candidate thresholds: distinct finite values that leave both sides of the
// partition non-empty (every value but the largest), ascending.
std::vector<double> candidate_taus(std::span<const double> deltas);

// Grid step for the preference weight.
inline constexpr double kAlphaStep = 0.01;

struct AlphaFit {
  double alpha = 0.5;
  double feasible_lo = 0.0;  // smallest feasible grid value
  double feasible_hi = 0.0;  // largest feasible grid value
};

// Finds the weights on the grid {0.01, ..., 0.99} under which tau0 beats
// every candidate that induces a different partition, and returns the
// midpoint of that range. Throws NoConsistentAlpha when none exists.
AlphaFit fit_alpha(std::span<const double> deltas, double tau0,
                   ObjectiveForm form = ObjectiveForm::AsPrinted);
double learn_alpha(std::span<const double> deltas, double tau0,
                   ObjectiveForm form = ObjectiveForm::AsPrinted);

// Candidate minimising the objective; ties go to the smaller tau. Throws
// UndefinedObjective when no candidate is valid.
double select_tau(double alpha, std::span<const double> deltas,
                  ObjectiveForm form = ObjectiveForm::AsPrinted);

struct TauState {
  double alpha = 0.5;
  double tau = 1.0;
  std::vector<double> candidates;  // sorted
};

struct DecisionGraphPoint {
  CellId id = 0;
  double rho = 0.0;
  double delta = kInfinity;  // +inf for the root
};

// (rho, delta) of every active cell at t, sorted by id.
std::vector<DecisionGraphPoint> decision_graph(const CellStore& store, const DpTree& tree, Timestamp t);

// The value a root's delta is drawn at: 1.1 x the largest finite delta
// (1.0 when there is none).
double display_delta(std::span<const DecisionGraphPoint> graph);

}  // namespace dpstream
