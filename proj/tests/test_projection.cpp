#include <cmath>
#include <stdexcept>
#include <vector>

#include "badmm/core.hpp"
#include "badmm/projection.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using badmm::project_simplex;
using badmm::Rng;
using badmm::Vector;

TEST_CASE("feasible input is unchanged") {
  const Vector w = project_simplex(Vector{0.3, 0.7}, 1.0);
  CHECK(w[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("saturating case") {
  const Vector w = project_simplex(Vector{2.0, 0.0}, 1.0);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w[1] == 0.0);
}

TEST_CASE("interior threshold") {
  // all three coordinates stay active: theta = (0.9 - 0.5)/3
  const Vector w = project_simplex(Vector{0.4, 0.3, 0.2}, 0.5);
  CHECK(w[0] == doctest::Approx(0.4 - 0.4 / 3.0).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.3 - 0.4 / 3.0).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(0.2 - 0.4 / 3.0).epsilon(1e-12));
  CHECK(w[0] == doctest::Approx(0.266666666666667).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.166666666666667).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(0.066666666666667).epsilon(1e-10));
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(project_simplex(Vector{1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(project_simplex(Vector{1.0}, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(project_simplex(Vector{}, 1.0), std::invalid_argument);
}

TEST_CASE("output is feasible") {
  Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 12.0);
    Vector v(d);
    for (double& x : v) x = (rng.uniform() - 0.5) * 10.0;
    const double radius = 0.1 + rng.uniform() * 5.0;
    const Vector w = project_simplex(v, radius);
    double sum = 0.0;
    for (double x : w) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(radius).epsilon(1e-12));
  }
}

TEST_CASE("idempotence") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    Vector v(6);
    for (double& x : v) x = (rng.uniform() - 0.5) * 4.0;
    const double radius = 0.5 + rng.uniform();
    const Vector w = project_simplex(v, radius);
    const Vector w2 = project_simplex(w, radius);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(w2[i] == doctest::Approx(w[i]).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("matches support enumeration") {
  Rng rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 12.0);
    Vector v(d);
    for (double& x : v) x = (rng.uniform() - 0.5) * 6.0;
    const double radius = 0.1 + rng.uniform() * 3.0;
    const Vector fast = project_simplex(v, radius);
    const std::vector<double> exact = refs::simplex_project_enum(v, radius);
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(fast[i] == doctest::Approx(exact[i]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("nonexpansiveness") {
  Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    Vector v1(8), v2(8);
    for (std::size_t i = 0; i < 8; ++i) {
      v1[i] = (rng.uniform() - 0.5) * 8.0;
      v2[i] = (rng.uniform() - 0.5) * 8.0;
    }
    const double radius = 0.2 + rng.uniform() * 2.0;
    const Vector p1 = project_simplex(v1, radius);
    const Vector p2 = project_simplex(v2, radius);
    CHECK(badmm::distance_l2(p1, p2) <= badmm::distance_l2(v1, v2) + 1e-12);
  }
}

TEST_CASE("ties collapse to equal shares") {
  const Vector w = project_simplex(Vector{1.0, 1.0, 1.0, 1.0}, 1.0);
  for (double x : w) CHECK(x == doctest::Approx(0.25).epsilon(1e-14));
}
