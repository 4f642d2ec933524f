#pragma once

#include <span>

#include "badmm/core.hpp"

namespace badmm {

enum class DivergenceKind { SquaredEuclidean, GeneralizedKl };

// A Bregman divergence together with the strong-convexity witness (alpha, p)
// of its generating function: B(u, v) >= (alpha/2) * ||u - v||_p^2 on the
// divergence's domain (the scaled simplex, in the KL case).
struct DivergenceSpec {
  DivergenceKind kind;
  double alpha;
  double p;

  static DivergenceSpec squared_euclidean() {
    return {DivergenceKind::SquaredEuclidean, 1.0, 2.0};
  }
  static DivergenceSpec generalized_kl() {
    return {DivergenceKind::GeneralizedKl, 1.0, 1.0};
  }
};

// B(u, v). Squared Euclidean: 0.5 * ||u - v||_2^2 on all of R^d.
// Generalized KL: sum_i [u_i ln(u_i / v_i) - u_i + v_i] with 0 ln 0 := 0,
// requiring u >= 0 and v > 0 elementwise.
double bregman_value(const DivergenceSpec& spec, std::span<const double> u,
                     std::span<const double> v);

// Gradient of B(., v) at u. Squared Euclidean: u - v. Generalized KL:
// ln(u_i / v_i), requiring u > 0 and v > 0 elementwise.
Vector bregman_grad_first(const DivergenceSpec& spec, std::span<const double> u,
                          std::span<const double> v);

inline double bregman_value(const DivergenceSpec& spec, const Matrix& u, const Matrix& v) {
  return bregman_value(spec, std::span<const double>(u.storage()),
                       std::span<const double>(v.storage()));
}

}  // namespace badmm
