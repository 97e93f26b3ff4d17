#include "dpstream/metric.hpp"

#include <cmath>
#include <utility>

namespace dpstream {

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Metric::Metric(std::string name, Function fn, bool triangle_inequality)
    : name_(std::move(name)), fn_(std::move(fn)), triangle_(triangle_inequality) {}

Metric Metric::euclidean() { return Metric{}; }

Metric Metric::manhattan() {
  return Metric(
      "manhattan",
      [](std::span<const double> x, std::span<const double> y) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - y[i]);
        return sum;
      },
      true);
}

double Metric::operator()(std::span<const double> x, std::span<const double> y) const {
  if (!fn_) return euclidean_distance(x, y);
  return fn_(x, y);
}

}  // namespace dpstream
