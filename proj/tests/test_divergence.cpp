#include <cmath>
#include <stdexcept>
#include <vector>

#include "badmm/core.hpp"
#include "badmm/divergence.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using badmm::bregman_grad_first;
using badmm::bregman_value;
using badmm::DivergenceSpec;
using badmm::Rng;
using badmm::Vector;

namespace {

Vector random_positive(Rng& rng, std::size_t d) {
  Vector v(d);
  for (double& x : v) x = 0.05 + rng.uniform();
  return v;
}

Vector random_simplex(Rng& rng, std::size_t d) {
  Vector v(d);
  double sum = 0.0;
  for (double& x : v) {
    x = 0.01 + rng.uniform();
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

double l1_distance(const Vector& u, const Vector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - v[i]);
  return s;
}

}  // namespace

TEST_CASE("spec constants") {
  const DivergenceSpec se = DivergenceSpec::squared_euclidean();
  CHECK(se.alpha == 1.0);
  CHECK(se.p == 2.0);
  const DivergenceSpec kl = DivergenceSpec::generalized_kl();
  CHECK(kl.alpha == 1.0);
  CHECK(kl.p == 1.0);
}

TEST_CASE("euclidean value") {
  const DivergenceSpec se = DivergenceSpec::squared_euclidean();
  CHECK(bregman_value(se, Vector{1.0, 0.0}, Vector{0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(bregman_value(se, Vector{0.3, 0.7}, Vector{0.3, 0.7}) == 0.0);
  CHECK_THROWS_AS(bregman_value(se, Vector{1.0}, Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("kl value") {
  const DivergenceSpec kl = DivergenceSpec::generalized_kl();
  CHECK(bregman_value(kl, Vector{0.3, 0.7}, Vector{0.3, 0.7}) == 0.0);

  // 0.5 ln(5/9) + 0.5 ln 5 - 1 + 1 = 0.5 ln(25/9)
  const Vector u{0.5, 0.5}, v{0.9, 0.1};
  const double exact = static_cast<double>(refs::kl_ld(u, v));
  CHECK(bregman_value(kl, u, v) == doctest::Approx(exact).epsilon(1e-14));
  CHECK(bregman_value(kl, u, v) >= 0.32);  // half the squared l1 distance

  // zero entries in u are fine (0 ln 0 = 0); nonpositive v is not
  CHECK(bregman_value(kl, Vector{0.0, 1.0}, Vector{0.5, 0.5}) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(bregman_value(kl, Vector{0.5, 0.5}, Vector{0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(bregman_value(kl, Vector{-0.1, 1.1}, Vector{0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("euclidean gradient") {
  const DivergenceSpec se = DivergenceSpec::squared_euclidean();
  const Vector u{0.4, 0.6}, same{0.4, 0.6};
  const Vector g = bregman_grad_first(se, u, same);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  const Vector g2 = bregman_grad_first(se, Vector{1.0, 3.0}, Vector{0.5, 1.0});
  CHECK(g2[0] == doctest::Approx(0.5));
  CHECK(g2[1] == doctest::Approx(2.0));
}

TEST_CASE("kl gradient") {
  const DivergenceSpec kl = DivergenceSpec::generalized_kl();
  const double e = std::exp(1.0);
  const Vector g = bregman_grad_first(kl, Vector{e * 0.1, 0.1}, Vector{0.1, 0.1});
  CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(bregman_grad_first(kl, Vector{0.0, 1.0}, Vector{0.5, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("gradient matches finite differences") {
  Rng rng(31);
  for (const DivergenceSpec spec :
       {DivergenceSpec::squared_euclidean(), DivergenceSpec::generalized_kl()}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vector u = random_positive(rng, 4);
      const Vector v = random_positive(rng, 4);
      const Vector g = bregman_grad_first(spec, u, v);
      const std::vector<double> fd = refs::fd_gradient(
          [&](const std::vector<double>& point) { return bregman_value(spec, point, v); }, u,
          1e-6);
      for (std::size_t i = 0; i < 4; ++i) CHECK(g[i] == doctest::Approx(fd[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("nonnegativity and identity of indiscernibles") {
  Rng rng(32);
  for (const DivergenceSpec spec :
       {DivergenceSpec::squared_euclidean(), DivergenceSpec::generalized_kl()}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Vector u = random_positive(rng, 5);
      const Vector v = random_positive(rng, 5);
      const double b = bregman_value(spec, u, v);
      CHECK(b >= 0.0);
      CHECK(bregman_value(spec, u, u) <= 1e-12);
      if (b < 1e-12) {
        CHECK(l1_distance(u, v) < 1e-5);
      }
    }
  }
}

TEST_CASE("three point identity") {
  // <grad phi(u) - grad phi(v), w - u> = B(w,v) - B(w,u) - B(u,v)
  Rng rng(33);
  for (const DivergenceSpec spec :
       {DivergenceSpec::squared_euclidean(), DivergenceSpec::generalized_kl()}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vector u = random_positive(rng, 6);
      const Vector v = random_positive(rng, 6);
      const Vector w = random_positive(rng, 6);
      const Vector g = bregman_grad_first(spec, u, v);
      double lhs = 0.0;
      for (std::size_t i = 0; i < 6; ++i) lhs += g[i] * (w[i] - u[i]);
      const double rhs =
          bregman_value(spec, w, v) - bregman_value(spec, w, u) - bregman_value(spec, u, v);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("pinsker bound on the simplex") {
  const DivergenceSpec kl = DivergenceSpec::generalized_kl();
  Rng rng(34);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform() * 7.0);
    const Vector u = random_simplex(rng, d);
    const Vector v = random_simplex(rng, d);
    const double l1 = l1_distance(u, v);
    CHECK(bregman_value(kl, u, v) >= 0.5 * l1 * l1 - 1e-12);
  }
}

TEST_CASE("strong convexity witness") {
  Rng rng(35);
  const DivergenceSpec se = DivergenceSpec::squared_euclidean();
  for (int trial = 0; trial < 200; ++trial) {
    const Vector u = random_positive(rng, 5);
    const Vector v = random_positive(rng, 5);
    double sq = 0.0;
    for (std::size_t i = 0; i < 5; ++i) sq += (u[i] - v[i]) * (u[i] - v[i]);
    CHECK(bregman_value(se, u, v) >= 0.5 * se.alpha * sq - 1e-12);
  }
  const DivergenceSpec kl = DivergenceSpec::generalized_kl();
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
    const Vector u = random_simplex(rng, d);
    const Vector v = random_simplex(rng, d);
    const double l1 = l1_distance(u, v);
    CHECK(bregman_value(kl, u, v) >= 0.5 * kl.alpha * l1 * l1 - 1e-12);
  }
}
