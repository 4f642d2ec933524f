#include "badmm/divergence.hpp"

#include <cmath>
#include <stdexcept>

namespace badmm {

namespace {

void require_same_size(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("bregman divergence: dimension mismatch");
  }
}

}  // namespace

double bregman_value(const DivergenceSpec& spec, std::span<const double> u,
                     std::span<const double> v) {
  require_same_size(u, v);
  switch (spec.kind) {
    case DivergenceKind::SquaredEuclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        s += d * d;
      }
      return 0.5 * s;
    }
    case DivergenceKind::GeneralizedKl: {
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0) {
          throw std::invalid_argument("generalized KL: first argument must be >= 0");
        }
        if (!(v[i] > 0.0)) {
          throw std::invalid_argument("generalized KL: second argument must be > 0");
        }
        if (u[i] > 0.0) s += u[i] * (std::log(u[i]) - std::log(v[i])) - u[i] + v[i];
        else s += v[i];  // 0 ln 0 := 0
      }
      return s;
    }
  }
  throw std::logic_error("bregman divergence: unknown kind");
}

Vector bregman_grad_first(const DivergenceSpec& spec, std::span<const double> u,
                          std::span<const double> v) {
  require_same_size(u, v);
  Vector g(u.size());
  switch (spec.kind) {
    case DivergenceKind::SquaredEuclidean:
      for (std::size_t i = 0; i < u.size(); ++i) g[i] = u[i] - v[i];
      return g;
    case DivergenceKind::GeneralizedKl:
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0) || !(v[i] > 0.0)) {
          throw std::invalid_argument("generalized KL gradient: arguments must be > 0");
        }
        g[i] = std::log(u[i]) - std::log(v[i]);
      }
      return g;
  }
  throw std::logic_error("bregman divergence: unknown kind");
}

}  // namespace badmm
