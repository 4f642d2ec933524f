#include "badmm/framework.hpp"

#include <cmath>
#include <stdexcept>

namespace badmm {

StepSizes sqrt_t_schedule(int total_iters, double c1, double c2) {
  if (total_iters < 1) throw std::invalid_argument("sqrt_t_schedule: total_iters must be >= 1");
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw std::invalid_argument("sqrt_t_schedule: c1 and c2 must be > 0");
  }
  const double root = std::sqrt(static_cast<double>(total_iters));
  return StepSizes{root, c2 * root, c1 * root, c1 * root};
}

StepSizes effective_steps(const SolverConfig& config) {
  config.validate();
  if (config.schedule.kind == ScheduleKind::SqrtT) {
    return sqrt_t_schedule(config.max_iters, config.schedule.c1, config.schedule.c2);
  }
  return StepSizes{config.rho, config.tau_ratio * config.rho, config.rho_x, config.rho_z};
}

Vector SplitProblem::constraint_residual(const Vector& x, const Vector& z) const {
  Vector ax = apply_a(x);
  const Vector bz = apply_b(z);
  const Vector& c = constraint_rhs();
  if (ax.size() != bz.size() || ax.size() != c.size()) {
    throw std::logic_error("split problem: inconsistent constraint dimensions");
  }
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] += bz[i] - c[i];
  return ax;
}

SplitState iterate(const SplitProblem& problem, const SplitState& state, const StepSizes& steps) {
  SplitState next;
  next.x = problem.solve_x(state, steps);
  next.z = problem.solve_z(next.x, state, steps);
  next.y = state.y;
  const Vector residual = problem.constraint_residual(next.x, next.z);
  for (std::size_t i = 0; i < next.y.size(); ++i) next.y[i] += steps.tau * residual[i];
  next.iter = state.iter + 1;
  return next;
}

double progress_residual(const SplitProblem& problem, const SplitState& prev,
                         const SplitState& next, const StepSizes& steps, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("progress_residual: gamma must be > 0");
  double r = 0.0;
  if (steps.rho_x > 0.0) {
    r += steps.rho_x / steps.rho *
         bregman_value(problem.prox_divergence_x(), next.x, prev.x);
  }
  if (steps.rho_z > 0.0) {
    r += steps.rho_z / steps.rho *
         bregman_value(problem.prox_divergence_z(), next.z, prev.z);
  }
  // coupling term at the half-step: fresh x against the previous z image
  Vector lhs = problem.apply_a(next.x);
  const Vector& c = problem.constraint_rhs();
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = c[i] - lhs[i];
  r += bregman_value(problem.penalty_divergence(), lhs, problem.apply_b(prev.z));
  const Vector feas = problem.constraint_residual(next.x, next.z);
  const double feas_norm = norm_l2(feas);
  r += gamma * feas_norm * feas_norm;
  return r;
}

KktPoint make_kkt_point(const SplitProblem& problem, Vector x, Vector z, Vector y) {
  if (x.size() != problem.dim_x() || z.size() != problem.dim_z() ||
      y.size() != problem.dim_constraint()) {
    throw std::invalid_argument("kkt point: dimension mismatch");
  }
  const double feas = norm_l2(problem.constraint_residual(x, z));
  if (!(feas <= 1e-8)) {
    throw std::invalid_argument("kkt point: constraint residual " + std::to_string(feas) +
                                " exceeds 1e-8");
  }
  return KktPoint{std::move(x), std::move(z), std::move(y)};
}

double lyapunov_distance(const SplitProblem& problem, const KktPoint& ref,
                         const SplitState& state, const StepSizes& steps) {
  const double dual_gap = distance_l2(ref.y, state.y);
  double d = dual_gap * dual_gap / (2.0 * steps.tau * steps.rho);
  d += bregman_value(problem.penalty_divergence(), problem.apply_b(ref.z),
                     problem.apply_b(state.z));
  if (steps.rho_x > 0.0) {
    d += steps.rho_x / steps.rho * bregman_value(problem.prox_divergence_x(), ref.x, state.x);
  }
  if (steps.rho_z > 0.0) {
    d += steps.rho_z / steps.rho * bregman_value(problem.prox_divergence_z(), ref.z, state.z);
  }
  return d;
}

double step_size_bound(double alpha, double p, std::size_t m_dim, double gamma, double rho) {
  if (!(alpha > 0.0)) throw std::invalid_argument("step_size_bound: alpha must be > 0");
  if (!(p > 0.0)) throw std::invalid_argument("step_size_bound: p must be > 0");
  if (m_dim == 0) throw std::invalid_argument("step_size_bound: dimension must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("step_size_bound: rho must be > 0");
  const double sigma =
      std::min(1.0, std::pow(static_cast<double>(m_dim), 2.0 / p - 1.0));
  if (!(gamma > 0.0) || !(gamma < alpha * sigma / 2.0)) {
    throw std::invalid_argument("step_size_bound: gamma must lie in (0, alpha*sigma/2)");
  }
  return (alpha * sigma - 2.0 * gamma) * rho;
}

std::pair<Vector, Vector> ergodic_average(std::span<const SplitState> iterates,
                                          std::size_t count) {
  if (count == 0 || count > iterates.size()) {
    throw std::invalid_argument("ergodic_average: count must be in [1, size]");
  }
  Vector x_bar(iterates[0].x.size(), 0.0);
  Vector z_bar(iterates[0].z.size(), 0.0);
  for (std::size_t t = 0; t < count; ++t) {
    const SplitState& s = iterates[t];
    if (s.x.size() != x_bar.size() || s.z.size() != z_bar.size()) {
      throw std::invalid_argument("ergodic_average: inconsistent iterate dimensions");
    }
    for (std::size_t i = 0; i < x_bar.size(); ++i) x_bar[i] += s.x[i];
    for (std::size_t i = 0; i < z_bar.size(); ++i) z_bar[i] += s.z[i];
  }
  const double inv = 1.0 / static_cast<double>(count);
  for (double& v : x_bar) v *= inv;
  for (double& v : z_bar) v *= inv;
  return {std::move(x_bar), std::move(z_bar)};
}

double ergodic_gap_bound(const SplitProblem& problem, const KktPoint& ref,
                         const SplitState& initial, const StepSizes& steps) {
  if (norm_l2(initial.y) != 0.0) {
    throw std::invalid_argument("ergodic_gap_bound: requires a zero initial dual");
  }
  double d1 = steps.rho * bregman_value(problem.penalty_divergence(), problem.apply_b(ref.z),
                                        problem.apply_b(initial.z));
  if (steps.rho_x > 0.0) {
    d1 += steps.rho_x * bregman_value(problem.prox_divergence_x(), ref.x, initial.x);
  }
  if (steps.rho_z > 0.0) {
    d1 += steps.rho_z * bregman_value(problem.prox_divergence_z(), ref.z, initial.z);
  }
  return d1;
}

}  // namespace badmm
