#include "badmm/projection.hpp"

#include <algorithm>
#include <stdexcept>

namespace badmm {

Vector project_simplex(std::span<const double> v, double radius) {
  if (v.empty()) throw std::invalid_argument("project_simplex: empty input");
  if (!(radius > 0.0)) throw std::invalid_argument("project_simplex: radius must be > 0");

  Vector sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  double partial = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    partial += sorted[k];
    const double candidate = (partial - radius) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) {
      theta = candidate;
    } else {
      break;  // sorted order: once the test fails it fails for all larger k
    }
  }

  Vector w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = std::max(v[i] - theta, 0.0);
  }
  return w;
}

}  // namespace badmm
