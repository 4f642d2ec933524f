#pragma once

#include <vector>

#include "badmm/core.hpp"
#include "badmm/framework.hpp"

namespace badmm::transport {

// Z0_ij = a_i b_j / sum(b), X0 = Z0, Y0 = 0.
IterateState initial_state(const TransportProblem& problem);

// <C, plan>
double objective(const TransportProblem& problem, const Matrix& plan);

// One Bregman sweep over the rows: X'_ij is proportional to
//   exp[(rho ln Z_ij + rho_x ln X_ij - (C_ij + Y_ij)) / (rho + rho_x)]
// normalized so row i sums to a_i. Computed per row in the log domain with a
// max-shifted log-sum-exp, so tiny rho stays finite. Zero reference entries
// stay zero; a row with no positive reference mass is a domain error.
Matrix badmm_x_update(const TransportProblem& problem, const IterateState& state,
                      const StepSizes& steps);

// Column counterpart: Z'_ij proportional to
//   exp[(rho ln X'_ij + rho_z ln Z_ij + Y_ij) / (rho + rho_z)]
// normalized so column j sums to b_j.
Matrix badmm_z_update(const TransportProblem& problem, const Matrix& x_new,
                      const IterateState& state, const StepSizes& steps);

// Euclidean sweeps: project (rho Z + rho_x X - (C + Y)) / (rho + rho_x) row
// by row onto the a_i-simplexes, and (rho X' + rho_z Z + Y) / (rho + rho_z)
// column by column onto the b_j-simplexes.
Matrix admm_x_update(const TransportProblem& problem, const IterateState& state,
                     const StepSizes& steps);
Matrix admm_z_update(const TransportProblem& problem, const Matrix& x_new,
                     const IterateState& state, const StepSizes& steps);

// Y' = Y + tau (X' - Z')
Matrix dual_update(const IterateState& state, const Matrix& x_new, const Matrix& z_new,
                   double tau);

struct SolveResult {
  IterateState state;
  std::vector<TraceRecord> trace;
  StopReason reason;
};

// Full solver loop for either variant. Records one TraceRecord per iteration
// (objective <C,X>, primal ||X-Z||_F, dual rho ||Z-Z_prev||_F, progress
// residual) and stops when max(primal, dual) <= tol or at max_iters. The KL
// variant carries log-domain iterates across iterations so rho as small as
// 1e-3 runs without underflow.
SolveResult solve(const TransportProblem& problem, const SolverConfig& config);

// The transport instance as a split problem: x = vec(X), z = vec(Z),
// constraint -x + z = 0, f = <vec(C), x>, g = 0. The engine's dual sign is
// opposite to the Y the sweep formulas above use; the adapter handles the
// flip, and the Lyapunov/progress diagnostics are invariant under it.
// Diagnostics require iterates with strictly positive entries in the KL
// variant, which holds for the parameter ranges the engine path is meant for
// (moderate rho); production-scale tiny-rho runs belong to solve().
class TransportSplitProblem final : public SplitProblem {
 public:
  TransportSplitProblem(TransportProblem problem, Variant variant);

  std::size_t dim_x() const override { return size_; }
  std::size_t dim_z() const override { return size_; }
  std::size_t dim_constraint() const override { return size_; }

  double f_value(const Vector& x) const override;
  double g_value(const Vector& z) const override;

  Vector apply_a(const Vector& x) const override;
  Vector apply_b(const Vector& z) const override;
  const Vector& constraint_rhs() const override { return rhs_; }

  const DivergenceSpec& penalty_divergence() const override { return penalty_; }
  const DivergenceSpec& prox_divergence_x() const override { return prox_; }
  const DivergenceSpec& prox_divergence_z() const override { return prox_; }

  Vector solve_x(const SplitState& state, const StepSizes& steps) const override;
  Vector solve_z(const Vector& x_new, const SplitState& state,
                 const StepSizes& steps) const override;

  const TransportProblem& problem() const { return problem_; }

 private:
  IterateState unpack(const SplitState& state) const;

  TransportProblem problem_;
  Variant variant_;
  std::size_t size_;
  DivergenceSpec penalty_;
  DivergenceSpec prox_;
  Vector rhs_;
};

// Engine-side view of the standard initialization (zero dual).
SplitState initial_split_state(const TransportProblem& problem);

// vec(X), vec(Z), -vec(Y) and back.
SplitState to_split_state(const IterateState& state);
IterateState from_split_state(const SplitState& state, std::size_t rows, std::size_t cols);

}  // namespace badmm::transport
