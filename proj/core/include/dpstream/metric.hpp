#pragma once

#include <functional>
#include <span>
#include <string>

namespace dpstream {

// Distance between two coordinate vectors of equal dimension. Euclidean by
// default. A custom metric that does not satisfy the triangle inequality
// switches off the triangle filter in the tree maintenance.
class Metric {
 public:
  using Function = std::function<double(std::span<const double>, std::span<const double>)>;

  Metric() = default;
  Metric(std::string name, Function fn, bool triangle_inequality);

  static Metric euclidean();
  static Metric manhattan();

  double operator()(std::span<const double> x, std::span<const double> y) const;

  bool satisfies_triangle_inequality() const { return triangle_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_ = "euclidean";
  Function fn_;  // empty means the built-in Euclidean fast path
  bool triangle_ = true;
};

double euclidean_distance(std::span<const double> x, std::span<const double> y);

}  // namespace dpstream
