#pragma once

// Random strongly convex quadratic split problems for engine tests: the
// all-Euclidean regime where the generalized engine must reproduce classical
// ADMM step for step.

#include <cstddef>
#include <utility>
#include <vector>

#include "badmm/core.hpp"
#include "badmm/framework.hpp"
#include "oracles.hpp"

namespace fixtures {

inline refs::QuadSplitData random_quad_data(badmm::Rng& rng, std::size_t n1, std::size_t n2,
                                            std::size_t m) {
  auto spd = [&](std::size_t k) {
    std::vector<double> r(k * k);
    for (double& v : r) v = rng.uniform() - 0.5;
    std::vector<double> out(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < k; ++l) s += r[l * k + i] * r[l * k + j];
        out[i * k + j] = s + (i == j ? static_cast<double>(k) : 0.0);
      }
    }
    return out;
  };
  refs::QuadSplitData d;
  d.n1 = n1;
  d.n2 = n2;
  d.m = m;
  d.p_mat = spd(n1);
  d.q_mat = spd(n2);
  d.q_vec.resize(n1);
  for (double& v : d.q_vec) v = rng.uniform() - 0.5;
  d.r_vec.resize(n2);
  for (double& v : d.r_vec) v = rng.uniform() - 0.5;
  d.a_mat.resize(m * n1);
  for (double& v : d.a_mat) v = rng.uniform() - 0.5;
  d.b_mat.resize(m * n2);
  for (double& v : d.b_mat) v = rng.uniform() - 0.5;
  d.c_vec.resize(m);
  for (double& v : d.c_vec) v = rng.uniform() - 0.5;
  return d;
}

// Split problem whose block minimizers are the exact quadratic solves; with
// rho_x = rho_z = 0 and tau = rho these are precisely the classical ADMM
// subproblems, so the engine under test differs from the textbook oracle only
// in its sequencing code.
class QuadraticSplitProblem final : public badmm::SplitProblem {
 public:
  explicit QuadraticSplitProblem(refs::QuadSplitData data)
      : data_(std::move(data)),
        quad_(badmm::DivergenceSpec::squared_euclidean()),
        rhs_(data_.c_vec) {}

  std::size_t dim_x() const override { return data_.n1; }
  std::size_t dim_z() const override { return data_.n2; }
  std::size_t dim_constraint() const override { return data_.m; }

  double f_value(const badmm::Vector& x) const override {
    return quad_form(data_.p_mat, data_.q_vec, x);
  }
  double g_value(const badmm::Vector& z) const override {
    return quad_form(data_.q_mat, data_.r_vec, z);
  }

  badmm::Vector apply_a(const badmm::Vector& x) const override {
    return matvec(data_.a_mat, data_.m, data_.n1, x);
  }
  badmm::Vector apply_b(const badmm::Vector& z) const override {
    return matvec(data_.b_mat, data_.m, data_.n2, z);
  }
  const badmm::Vector& constraint_rhs() const override { return rhs_; }

  const badmm::DivergenceSpec& penalty_divergence() const override { return quad_; }
  const badmm::DivergenceSpec& prox_divergence_x() const override { return quad_; }
  const badmm::DivergenceSpec& prox_divergence_z() const override { return quad_; }

  // (P + rho A'A + rho_x I) x = -q - A'y - rho A'(Bz_t - c) + rho_x x_t
  badmm::Vector solve_x(const badmm::SplitState& state,
                        const badmm::StepSizes& steps) const override {
    const std::size_t n1 = data_.n1, m = data_.m;
    std::vector<double> lhs(n1 * n1);
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n1; ++j) {
        double ata = 0.0;
        for (std::size_t k = 0; k < m; ++k) ata += data_.a_mat[k * n1 + i] * data_.a_mat[k * n1 + j];
        lhs[i * n1 + j] = data_.p_mat[i * n1 + j] + steps.rho * ata +
                          (i == j ? steps.rho_x : 0.0);
      }
    }
    const badmm::Vector bz = apply_b(state.z);
    std::vector<double> shifted(m);
    for (std::size_t k = 0; k < m; ++k) shifted[k] = bz[k] - data_.c_vec[k];
    const std::vector<double> at_y = matvec_t(data_.a_mat, m, n1, state.y);
    const std::vector<double> at_shift = matvec_t(data_.a_mat, m, n1, shifted);
    std::vector<double> rhs(n1);
    for (std::size_t i = 0; i < n1; ++i) {
      rhs[i] = -data_.q_vec[i] - at_y[i] - steps.rho * at_shift[i] + steps.rho_x * state.x[i];
    }
    return refs::gauss_solve(lhs, rhs);
  }

  // (Q + rho B'B + rho_z I) z = -r - B'y - rho B'(Ax' - c) + rho_z z_t
  badmm::Vector solve_z(const badmm::Vector& x_new, const badmm::SplitState& state,
                        const badmm::StepSizes& steps) const override {
    const std::size_t n2 = data_.n2, m = data_.m;
    std::vector<double> lhs(n2 * n2);
    for (std::size_t i = 0; i < n2; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        double btb = 0.0;
        for (std::size_t k = 0; k < m; ++k) btb += data_.b_mat[k * n2 + i] * data_.b_mat[k * n2 + j];
        lhs[i * n2 + j] = data_.q_mat[i * n2 + j] + steps.rho * btb +
                          (i == j ? steps.rho_z : 0.0);
      }
    }
    const badmm::Vector ax = apply_a(x_new);
    std::vector<double> shifted(m);
    for (std::size_t k = 0; k < m; ++k) shifted[k] = ax[k] - data_.c_vec[k];
    const std::vector<double> bt_y = matvec_t(data_.b_mat, m, n2, state.y);
    const std::vector<double> bt_shift = matvec_t(data_.b_mat, m, n2, shifted);
    std::vector<double> rhs(n2);
    for (std::size_t i = 0; i < n2; ++i) {
      rhs[i] = -data_.r_vec[i] - bt_y[i] - steps.rho * bt_shift[i] + steps.rho_z * state.z[i];
    }
    return refs::gauss_solve(lhs, rhs);
  }

  const refs::QuadSplitData& data() const { return data_; }

  // Exact KKT triple by solving the stationarity plus feasibility system
  //   P x + A'y = -q,  Q z + B'y = -r,  A x + B z = c.
  std::pair<badmm::Vector, std::pair<badmm::Vector, badmm::Vector>> kkt_solution() const {
    const std::size_t n1 = data_.n1, n2 = data_.n2, m = data_.m;
    const std::size_t dim = n1 + n2 + m;
    std::vector<double> big(dim * dim, 0.0);
    std::vector<double> rhs(dim, 0.0);
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n1; ++j) big[i * dim + j] = data_.p_mat[i * n1 + j];
      for (std::size_t k = 0; k < m; ++k) big[i * dim + (n1 + n2 + k)] = data_.a_mat[k * n1 + i];
      rhs[i] = -data_.q_vec[i];
    }
    for (std::size_t i = 0; i < n2; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        big[(n1 + i) * dim + (n1 + j)] = data_.q_mat[i * n2 + j];
      }
      for (std::size_t k = 0; k < m; ++k) {
        big[(n1 + i) * dim + (n1 + n2 + k)] = data_.b_mat[k * n2 + i];
      }
      rhs[n1 + i] = -data_.r_vec[i];
    }
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < n1; ++j) big[(n1 + n2 + k) * dim + j] = data_.a_mat[k * n1 + j];
      for (std::size_t j = 0; j < n2; ++j) {
        big[(n1 + n2 + k) * dim + (n1 + j)] = data_.b_mat[k * n2 + j];
      }
      rhs[n1 + n2 + k] = data_.c_vec[k];
    }
    const std::vector<double> sol = refs::gauss_solve(big, rhs);
    badmm::Vector x(sol.begin(), sol.begin() + static_cast<long>(n1));
    badmm::Vector z(sol.begin() + static_cast<long>(n1),
                    sol.begin() + static_cast<long>(n1 + n2));
    badmm::Vector y(sol.begin() + static_cast<long>(n1 + n2), sol.end());
    return {std::move(x), {std::move(z), std::move(y)}};
  }

 private:
  static badmm::Vector matvec(const std::vector<double>& mat, std::size_t rows, std::size_t cols,
                              const badmm::Vector& v) {
    badmm::Vector out(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) out[i] += mat[i * cols + j] * v[j];
    }
    return out;
  }
  static std::vector<double> matvec_t(const std::vector<double>& mat, std::size_t rows,
                                      std::size_t cols, const badmm::Vector& v) {
    std::vector<double> out(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) out[j] += mat[i * cols + j] * v[i];
    }
    return out;
  }
  static double quad_form(const std::vector<double>& mat, const std::vector<double>& lin,
                          const badmm::Vector& v) {
    const std::size_t k = lin.size();
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < k; ++j) row += mat[i * k + j] * v[j];
      s += 0.5 * v[i] * row + lin[i] * v[i];
    }
    return s;
  }

  refs::QuadSplitData data_;
  badmm::DivergenceSpec quad_;
  badmm::Vector rhs_;
};

}  // namespace fixtures
