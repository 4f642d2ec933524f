#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "badmm/core.hpp"
#include "badmm/framework.hpp"

namespace badmm::logistic {

// l1-regularized logistic regression through the consensus split
// min h(x) + lambda ||z||_1 subject to x = z, with
// h(x) = (1/N) sum_s ln(1 + exp(-y_s <w_s, x>)).
struct Problem {
  Matrix features;  // N x d, one sample per row
  Vector labels;    // entries +1 or -1
  double lambda;

  Problem(Matrix features_in, Vector labels_in, double lambda_in);

  std::size_t samples() const { return features.rows(); }
  std::size_t dim() const { return features.cols(); }
};

// h(x), evaluated through log1p so large margins of either sign stay exact.
double loss_value(const Problem& problem, const Vector& x);
Vector loss_gradient(const Problem& problem, const Vector& x);

double l1_norm(std::span<const double> v);
double composite_objective(const Problem& problem, const Vector& x);

// Power-iteration estimate of lambda_max(W^T W) / (4N), the Lipschitz
// constant of grad h; the default proximal weight of the x block.
double gradient_lipschitz_estimate(const Problem& problem, int power_iters = 50);

// sign(v_i) max(|v_i| - kappa, 0)
Vector soft_threshold(std::span<const double> v, double kappa);

// Minimizer of the linearized x block:
//   <grad, x - x_t> + <y, x - z_t> + (rho/2)||x - z_t||^2 + (rho_x/2)||x - x_t||^2
// which is (rho z_t - y - grad + rho_x x_t) / (rho + rho_x).
Vector linearized_x_update(const Vector& x_prev, const Vector& z_prev, const Vector& y,
                           const Vector& grad, double rho, double rho_x);

// Consensus split problem over R^d: A = I, B = -I, c = 0, quadratic
// divergences everywhere. The x block linearizes h at the previous iterate.
class LogisticSplitProblem final : public SplitProblem {
 public:
  explicit LogisticSplitProblem(Problem problem);

  std::size_t dim_x() const override { return problem_.dim(); }
  std::size_t dim_z() const override { return problem_.dim(); }
  std::size_t dim_constraint() const override { return problem_.dim(); }

  double f_value(const Vector& x) const override { return loss_value(problem_, x); }
  double g_value(const Vector& z) const override { return problem_.lambda * l1_norm(z); }

  Vector apply_a(const Vector& x) const override { return x; }
  Vector apply_b(const Vector& z) const override;
  const Vector& constraint_rhs() const override { return rhs_; }

  const DivergenceSpec& penalty_divergence() const override { return quad_; }
  const DivergenceSpec& prox_divergence_x() const override { return quad_; }
  const DivergenceSpec& prox_divergence_z() const override { return quad_; }

  Vector solve_x(const SplitState& state, const StepSizes& steps) const override;
  Vector solve_z(const Vector& x_new, const SplitState& state,
                 const StepSizes& steps) const override;

  const Problem& problem() const { return problem_; }

 private:
  Problem problem_;
  DivergenceSpec quad_;
  Vector rhs_;
};

struct SolveResult {
  SplitState state;
  std::vector<TraceRecord> trace;
  StopReason reason;
};

// Runs the engine from x = z = 0, y = 0. Trace objective is the composite
// h(x_t) + lambda ||z_t||_1; primal/dual residuals are ||x - z||_2 and
// rho ||z_t - z_{t-1}||_2; stops at max(primal, dual) <= tol or max_iters.
// config.rho_x == 0 means "use the Lipschitz estimate", the front end's
// default proximal weight.
SolveResult solve(const Problem& problem, const SolverConfig& config);

// Deterministic synthetic instance: gaussian features, a sparse planted
// weight vector, labels from the noisy margins.
Problem synthetic_fixture(std::size_t n_samples, std::size_t dim, double lambda,
                          std::uint64_t seed);

}  // namespace badmm::logistic
