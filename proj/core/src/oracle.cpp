#include "dpstream/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dpstream/error.hpp"

namespace dpstream::oracle {

void BatchParams::validate() const {
  if (!(d_c > 0.0) || !(xi >= 0.0) || !(tau > 0.0)) throw ParameterError("batch parameters must be positive");
}

namespace {

template <class DistFn>
std::vector<Dependency> dependencies(const std::vector<CellId>& ids, const std::vector<double>& rho,
                                     DistFn dist) {
  std::vector<Dependency> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (i == j || !ranks_above(rho[j], ids[j], rho[i], ids[i])) continue;
      const double d = dist(i, j);
      auto& dep = out[i];
      if (!dep.parent || d < dep.delta || (d == dep.delta && ids[j] < *dep.parent)) {
        dep.parent = ids[j];
        dep.delta = d;
      }
    }
  }
  return out;
}

}  // namespace

BatchResult batch_dp(std::span<const std::vector<double>> points, const BatchParams& params) {
  params.validate();
  if (points.empty()) throw InputError("no points");
  const std::size_t n = points.size();
  BatchResult res;
  res.rho.assign(n, 0.0);
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = euclidean_distance(points[i], points[j]);
      if (dist[i * n + j] < params.d_c) res.rho[i] += 1.0;
    }
  }
  std::vector<CellId> kept;
  std::vector<double> kept_rho;
  for (std::size_t i = 0; i < n; ++i) {
    if (res.rho[i] <= params.xi) {
      res.outliers.push_back(i);
    } else {
      kept.push_back(i);
      kept_rho.push_back(res.rho[i]);
    }
  }
  const auto deps = dependencies(kept, kept_rho, [&](std::size_t i, std::size_t j) {
    return dist[kept[i] * n + kept[j]];
  });
  res.dependency.assign(n, Dependency{});
  std::map<CellId, Dependency> forest;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    res.dependency[kept[i]] = deps[i];
    forest[kept[i]] = deps[i];
  }
  res.clusters = clusters_of(forest, params.tau);
  return res;
}

std::map<CellId, Dependency> recompute_all(const CellStore& store, std::span<const CellId> cells, Timestamp t) {
  std::vector<CellId> ids(cells.begin(), cells.end());
  std::sort(ids.begin(), ids.end());
  std::vector<double> rho;
  rho.reserve(ids.size());
  for (CellId id : ids) rho.push_back(store.density_at(id, t));
  const auto deps = dependencies(ids, rho, [&](std::size_t i, std::size_t j) {
    return store.metric()(store.cell(ids[i]).seed, store.cell(ids[j]).seed);
  });
  std::map<CellId, Dependency> out;
  for (std::size_t i = 0; i < ids.size(); ++i) out[ids[i]] = deps[i];
  return out;
}

std::vector<CellId> threshold_partition(const CellStore& store, Timestamp t) {
  const double threshold = active_threshold(store.decay());
  std::vector<CellId> out;
  for (CellId id : store.ids()) {
    if (store.density_at(id, t) >= threshold) out.push_back(id);
  }
  return out;
}

std::vector<Cluster> clusters_of(const std::map<CellId, Dependency>& forest, double tau) {
  std::map<CellId, std::vector<CellId>> groups;
  for (const auto& [id, dep] : forest) {
    CellId cur = id;
    while (true) {
      const auto& d = forest.at(cur);
      if (!d.parent || d.delta > tau) break;
      cur = *d.parent;
    }
    groups[cur].push_back(id);
  }
  std::vector<Cluster> out;
  for (auto& [root, members] : groups) out.push_back({root, std::move(members)});
  return out;
}

double weighted_purity(const ClusterSnapshot& snapshot, std::span<const LabeledAssignment> points,
                       const DecayParams& decay, Timestamp t) {
  if (points.empty()) throw UndefinedMetric("no labeled points");
  std::unordered_map<CellId, CellId> cluster_of;
  for (const auto& c : snapshot.clusters) {
    for (CellId m : c.members) cluster_of[m] = c.id;
  }
  std::map<CellId, std::map<std::string, double>> mass;
  for (const auto& p : points) {
    if (p.t > t) continue;
    auto it = cluster_of.find(p.cell);
    if (it == cluster_of.end()) continue;
    const double w = freshness(decay, p.t, t);
    mass[it->second][p.label] += w;
  }
  // Summed per cluster in the same order, so a pure clustering gives exactly 1.
  double dominant = 0.0;
  double total = 0.0;
  for (const auto& [cluster, labels] : mass) {
    double best = 0.0;
    double all = 0.0;
    for (const auto& [label, w] : labels) {
      best = std::max(best, w);
      all += w;
    }
    dominant += best;
    total += all;
  }
  if (!(total > 0.0)) throw UndefinedMetric("no clustered point carries weight");
  return dominant / total;
}

}  // namespace dpstream::oracle
