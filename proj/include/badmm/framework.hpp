#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "badmm/core.hpp"
#include "badmm/divergence.hpp"

namespace badmm {

// Step sizes actually used by one solver run, after applying the schedule.
struct StepSizes {
  double rho;    // penalty weight on the coupling divergence
  double tau;    // dual step
  double rho_x;  // proximal weight on the x block
  double rho_z;  // proximal weight on the z block
};

// Growing-parameter schedule: held constant through a run of total_iters
// iterations at (rho_x, rho_z, tau, rho) = (c1 sqrt(T), c1 sqrt(T),
// c2 sqrt(T), sqrt(T)).
StepSizes sqrt_t_schedule(int total_iters, double c1, double c2);

// Resolves a config into the step sizes for the run. Constant schedule:
// tau = tau_ratio * rho and the configured rho_x/rho_z. SqrtT schedule:
// sqrt_t_schedule(max_iters, c1, c2).
StepSizes effective_steps(const SolverConfig& config);

// Iterate of the split formulation min f(x) + g(z) s.t. Ax + Bz = c.
struct SplitState {
  Vector x;
  Vector z;
  Vector y;
  int iter = 0;
};

// One structured problem instance. Front ends implement the two block
// minimizers; the engine only sequences them and never inspects their
// internals. solve_x minimizes
//   f(x) + <y, Ax + Bz_t - c> + rho * B(c - Ax, B z_t) + rho_x * Bx(x, x_t)
// at the incoming state, and solve_z minimizes
//   g(z) + <y, Ax' + Bz - c> + rho * B(Bz, c - Ax') + rho_z * Bz(z, z_t)
// at the fresh x'. The declared divergences are the ones the diagnostics
// (progress residual, Lyapunov distance, ergodic bound) are evaluated with.
class SplitProblem {
 public:
  virtual ~SplitProblem() = default;

  virtual std::size_t dim_x() const = 0;
  virtual std::size_t dim_z() const = 0;
  virtual std::size_t dim_constraint() const = 0;

  virtual double f_value(const Vector& x) const = 0;
  virtual double g_value(const Vector& z) const = 0;

  virtual Vector apply_a(const Vector& x) const = 0;  // A x
  virtual Vector apply_b(const Vector& z) const = 0;  // B z
  virtual const Vector& constraint_rhs() const = 0;   // c

  virtual const DivergenceSpec& penalty_divergence() const = 0;
  virtual const DivergenceSpec& prox_divergence_x() const = 0;
  virtual const DivergenceSpec& prox_divergence_z() const = 0;

  virtual Vector solve_x(const SplitState& state, const StepSizes& steps) const = 0;
  virtual Vector solve_z(const Vector& x_new, const SplitState& state,
                         const StepSizes& steps) const = 0;

  // Ax + Bz - c
  Vector constraint_residual(const Vector& x, const Vector& z) const;
};

// One full sweep: x block with the previous z, z block with the fresh x,
// then the dual ascent y + tau (Ax' + Bz' - c). The order is fixed.
SplitState iterate(const SplitProblem& problem, const SplitState& state, const StepSizes& steps);

// Per-step progress residual
//   (rho_x/rho) Bx(x', x) + (rho_z/rho) Bz(z', z)
//   + B(c - Ax', Bz) + gamma ||Ax' + Bz' - c||_2^2
// evaluated across one transition. Terms with zero weight are skipped, so
// rho_x = rho_z = 0 never touches the proximal divergences.
double progress_residual(const SplitProblem& problem, const SplitState& prev,
                         const SplitState& next, const StepSizes& steps, double gamma);

// A primal-dual point satisfying Ax + Bz = c to 1e-8; construction checks it.
struct KktPoint {
  Vector x;
  Vector z;
  Vector y;
};
KktPoint make_kkt_point(const SplitProblem& problem, Vector x, Vector z, Vector y);

// Lyapunov distance to a reference point:
//   ||y* - y||^2 / (2 tau rho) + B(Bz*, Bz)
//   + (rho_x/rho) Bx(x*, x) + (rho_z/rho) Bz(z*, z)
// Each engine sweep with an admissible dual step decreases it by at least the
// progress residual of that sweep.
double lyapunov_distance(const SplitProblem& problem, const KktPoint& ref,
                         const SplitState& state, const StepSizes& steps);

// Largest admissible dual step (alpha * sigma - 2 gamma) * rho with
// sigma = min(1, m^(2/p - 1)) for an (alpha, p) strongly convex generator in
// an m-dimensional constraint space. Requires 0 < gamma < alpha * sigma / 2.
double step_size_bound(double alpha, double p, std::size_t m_dim, double gamma, double rho);

// Mean of the first count entries (the iterates w_1..w_T, initial state
// excluded by the caller). Returns the averaged (x, z) pair.
std::pair<Vector, Vector> ergodic_average(std::span<const SplitState> iterates,
                                          std::size_t count);

// Constant D1 bounding the ergodic objective gap by D1 / T when started at
// `initial` with zero dual:
//   rho B(Bz*, Bz0) + rho_x Bx(x*, x0) + rho_z Bz(z*, z0).
double ergodic_gap_bound(const SplitProblem& problem, const KktPoint& ref,
                         const SplitState& initial, const StepSizes& steps);

}  // namespace badmm
