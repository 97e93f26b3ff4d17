#include "dpstream/tauctl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpstream/error.hpp"

namespace dpstream {

double objective(double alpha, double tau, std::span<const double> deltas, ObjectiveForm form) {
  double inter_sum = 0.0;
  double intra_sum = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  for (double d : deltas) {
    if (!std::isfinite(d)) throw InputError("objective takes finite dependent distances only");
    if (d > tau) {
      inter_sum += d;
      ++n;
    } else {
      intra_sum += d;
      ++m;
    }
  }
  if (n == 0 || m == 0 || intra_sum <= 0.0) {
    std::ostringstream msg;
    msg << "objective undefined at tau=" << tau << " (n=" << n << ", m=" << m << ")";
    throw UndefinedObjective(msg.str());
  }
  const double mean = (inter_sum + intra_sum) / static_cast<double>(n + m);
  if (form == ObjectiveForm::Reciprocal) {
    return alpha * static_cast<double>(n) * mean / inter_sum +
           (1.0 - alpha) * intra_sum / (static_cast<double>(m) * mean);
  }
  return alpha * inter_sum / (static_cast<double>(n) * mean) +
         (1.0 - alpha) * static_cast<double>(m) * mean / intra_sum;
}

std::vector<double> candidate_taus(std::span<const double> deltas) {
  std::vector<double> values;
  for (double d : deltas) {
    if (std::isfinite(d)) values.push_back(d);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (!values.empty()) values.pop_back();
  // A zero-valued intra side has no defined objective.
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return v <= 0.0; }),
               values.end());
  return values;
}

namespace {

// Number of deltas strictly above tau identifies the partition.
std::size_t inter_count(std::span<const double> deltas, double tau) {
  return static_cast<std::size_t>(std::count_if(deltas.begin(), deltas.end(), [tau](double d) { return d > tau; }));
}

}  // namespace

AlphaFit fit_alpha(std::span<const double> deltas, double tau0, ObjectiveForm form) {
  const std::vector<double> candidates = candidate_taus(deltas);
  const std::size_t own = inter_count(deltas, tau0);
  std::vector<double> rivals;
  for (double c : candidates) {
    if (inter_count(deltas, c) != own) rivals.push_back(c);
  }
  // Validates tau0's own partition.
  (void)objective(0.5, tau0, deltas, form);
  if (rivals.empty()) throw NoConsistentAlpha("tau0 has no competing partition to learn from");

  bool any = false;
  AlphaFit fit;
  for (int step = 1; step <= 99; ++step) {
    const double alpha = step * kAlphaStep;
    const double own_value = objective(alpha, tau0, deltas, form);
    const bool feasible = std::all_of(rivals.begin(), rivals.end(), [&](double r) {
      return own_value < objective(alpha, r, deltas, form);
    });
    if (!feasible) continue;
    if (!any) fit.feasible_lo = alpha;
    fit.feasible_hi = alpha;
    any = true;
  }
  if (!any) {
    std::ostringstream msg;
    msg << "no preference weight on the grid makes tau0=" << tau0 << " optimal";
    throw NoConsistentAlpha(msg.str());
  }
  fit.alpha = std::round((fit.feasible_lo + fit.feasible_hi) / 2.0 / kAlphaStep) * kAlphaStep;
  return fit;
}

double learn_alpha(std::span<const double> deltas, double tau0, ObjectiveForm form) {
  return fit_alpha(deltas, tau0, form).alpha;
}

double select_tau(double alpha, std::span<const double> deltas, ObjectiveForm form) {
  const std::vector<double> candidates = candidate_taus(deltas);
  if (candidates.empty()) throw UndefinedObjective("no candidate threshold splits the dependent distances");
  double best_tau = candidates.front();
  double best = objective(alpha, best_tau, deltas, form);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double value = objective(alpha, candidates[i], deltas, form);
    if (value < best) {
      best = value;
      best_tau = candidates[i];
    }
  }
  return best_tau;
}

std::vector<DecisionGraphPoint> decision_graph(const CellStore& store, const DpTree& tree, Timestamp t) {
  std::vector<DecisionGraphPoint> out;
  for (CellId id : tree.ids()) {
    out.push_back({id, store.density_at(id, t), tree.node(id).delta});
  }
  return out;
}

double display_delta(std::span<const DecisionGraphPoint> graph) {
  double max_finite = 0.0;
  bool any = false;
  for (const auto& p : graph) {
    if (std::isfinite(p.delta)) {
      max_finite = std::max(max_finite, p.delta);
      any = true;
    }
  }
  return any ? 1.1 * max_finite : 1.0;
}

}  // namespace dpstream
