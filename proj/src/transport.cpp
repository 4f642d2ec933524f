#include "badmm/transport.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "badmm/projection.hpp"

namespace badmm::transport {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_shape(const TransportProblem& problem, const Matrix& m, const char* what) {
  if (m.rows() != problem.rows() || m.cols() != problem.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape does not match the problem");
  }
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

IterateState initial_state(const TransportProblem& problem) {
  const std::size_t m = problem.rows(), n = problem.cols();
  double b_sum = 0.0;
  for (double v : problem.col_marginal) b_sum += v;
  IterateState state{Matrix(m, n), Matrix(m, n), Matrix(m, n), 0};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      state.z(i, j) = problem.row_marginal[i] * problem.col_marginal[j] / b_sum;
    }
  }
  state.x = state.z;
  return state;
}

double objective(const TransportProblem& problem, const Matrix& plan) {
  require_shape(problem, plan, "objective");
  return dot(problem.cost.storage(), plan.storage());
}

Matrix badmm_x_update(const TransportProblem& problem, const IterateState& state,
                      const StepSizes& steps) {
  require_shape(problem, state.x, "x update");
  require_shape(problem, state.z, "x update");
  require_shape(problem, state.y, "x update");
  const std::size_t m = problem.rows(), n = problem.cols();
  const double rho = steps.rho, rho_x = steps.rho_x;
  const double inv_den = 1.0 / (rho + rho_x);
  Matrix out(m, n);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < m; ++i) {
    double mx = kNegInf;
    for (std::size_t j = 0; j < n; ++j) {
      double v = rho * std::log(state.z(i, j)) - (problem.cost(i, j) + state.y(i, j));
      if (rho_x > 0.0) v += rho_x * std::log(state.x(i, j));
      s[j] = v * inv_den;
      if (s[j] > mx) mx = s[j];
    }
    if (mx == kNegInf) {
      throw std::domain_error("x update: row " + std::to_string(i) +
                              " has no positive reference mass");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = std::exp(s[j] - mx);
      sum += out(i, j);
    }
    const double scale = problem.row_marginal[i] / sum;
    for (std::size_t j = 0; j < n; ++j) out(i, j) *= scale;
  }
  return out;
}

Matrix badmm_z_update(const TransportProblem& problem, const Matrix& x_new,
                      const IterateState& state, const StepSizes& steps) {
  require_shape(problem, x_new, "z update");
  require_shape(problem, state.z, "z update");
  require_shape(problem, state.y, "z update");
  const std::size_t m = problem.rows(), n = problem.cols();
  const double rho = steps.rho, rho_z = steps.rho_z;
  const double inv_den = 1.0 / (rho + rho_z);
  Matrix out(m, n);
  std::vector<double> u(m);
  for (std::size_t j = 0; j < n; ++j) {
    double mx = kNegInf;
    for (std::size_t i = 0; i < m; ++i) {
      double v = rho * std::log(x_new(i, j)) + state.y(i, j);
      if (rho_z > 0.0) v += rho_z * std::log(state.z(i, j));
      u[i] = v * inv_den;
      if (u[i] > mx) mx = u[i];
    }
    if (mx == kNegInf) {
      throw std::domain_error("z update: column " + std::to_string(j) +
                              " has no positive reference mass");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      out(i, j) = std::exp(u[i] - mx);
      sum += out(i, j);
    }
    const double scale = problem.col_marginal[j] / sum;
    for (std::size_t i = 0; i < m; ++i) out(i, j) *= scale;
  }
  return out;
}

Matrix admm_x_update(const TransportProblem& problem, const IterateState& state,
                     const StepSizes& steps) {
  require_shape(problem, state.x, "x update");
  require_shape(problem, state.z, "x update");
  require_shape(problem, state.y, "x update");
  const std::size_t m = problem.rows(), n = problem.cols();
  const double inv_den = 1.0 / (steps.rho + steps.rho_x);
  Matrix out(m, n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      w[j] = (steps.rho * state.z(i, j) + steps.rho_x * state.x(i, j) -
              (problem.cost(i, j) + state.y(i, j))) *
             inv_den;
    }
    const Vector proj = project_simplex(w, problem.row_marginal[i]);
    for (std::size_t j = 0; j < n; ++j) out(i, j) = proj[j];
  }
  return out;
}

Matrix admm_z_update(const TransportProblem& problem, const Matrix& x_new,
                     const IterateState& state, const StepSizes& steps) {
  require_shape(problem, x_new, "z update");
  require_shape(problem, state.z, "z update");
  require_shape(problem, state.y, "z update");
  const std::size_t m = problem.rows(), n = problem.cols();
  const double inv_den = 1.0 / (steps.rho + steps.rho_z);
  Matrix out(m, n);
  std::vector<double> w(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = (steps.rho * x_new(i, j) + steps.rho_z * state.z(i, j) + state.y(i, j)) * inv_den;
    }
    const Vector proj = project_simplex(w, problem.col_marginal[j]);
    for (std::size_t i = 0; i < m; ++i) out(i, j) = proj[i];
  }
  return out;
}

Matrix dual_update(const IterateState& state, const Matrix& x_new, const Matrix& z_new,
                   double tau) {
  if (x_new.rows() != z_new.rows() || x_new.cols() != z_new.cols() ||
      state.y.rows() != x_new.rows() || state.y.cols() != x_new.cols()) {
    throw std::invalid_argument("dual update: shape mismatch");
  }
  Matrix out = state.y;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.storage()[k] += tau * (x_new.storage()[k] - z_new.storage()[k]);
  }
  return out;
}

namespace {

struct LoopAccumulators {
  double objective = 0.0;
  double primal_sq = 0.0;
  double dual_sq = 0.0;
  double r_value = 0.0;
};

// KL variant, fused log-domain loop. Carries ln X and ln Z across iterations;
// the linear-domain X and Z exist only as normalized softmax outputs, so an
// underflowed entry is a harmless exact zero while its log stays finite.
SolveResult solve_kl(const TransportProblem& problem, const SolverConfig& config,
                     const StepSizes& steps) {
  const std::size_t m = problem.rows(), n = problem.cols();
  const std::size_t total = m * n;
  const double rho = steps.rho, tau = steps.tau, rho_x = steps.rho_x, rho_z = steps.rho_z;
  const double inv_den_x = 1.0 / (rho + rho_x);
  const double inv_den_z = 1.0 / (rho + rho_z);
  const double* cost = problem.cost.storage().data();

  std::vector<double> log_a(m), log_b(n);
  for (std::size_t i = 0; i < m; ++i) log_a[i] = std::log(problem.row_marginal[i]);
  for (std::size_t j = 0; j < n; ++j) log_b[j] = std::log(problem.col_marginal[j]);
  double b_sum = 0.0;
  for (double v : problem.col_marginal) b_sum += v;
  const double log_bsum = std::log(b_sum);

  std::vector<double> x(total), z(total), y(total, 0.0), lx(total), lz(total);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double l = log_a[i] + log_b[j] - log_bsum;
      lz[i * n + j] = l;
      z[i * n + j] = std::exp(l);
    }
  }
  x = z;
  lx = lz;

  std::vector<double> s_row(n), x_old_row, lx_old_row;
  if (rho_x > 0.0) {
    x_old_row.resize(n);
    lx_old_row.resize(n);
  }
  std::vector<double> u(total), v(total);
  std::vector<double> col_max(n), col_sum(n), col_scale(n), col_shift(n);

  std::vector<TraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(config.max_iters));
  const auto t0 = std::chrono::steady_clock::now();
  StopReason reason = StopReason::IterationLimit;
  int iters_done = config.max_iters;

  for (int t = 1; t <= config.max_iters; ++t) {
    LoopAccumulators acc;
    double kl_coupling = 0.0;  // KL(X', Z_t)
    double kl_prox_x = 0.0;    // KL(X', X_t)
    double kl_prox_z = 0.0;    // KL(Z', Z_t)

    // row sweep: X' and ln X'
    for (std::size_t i = 0; i < m; ++i) {
      double* x_row = x.data() + i * n;
      double* lx_row = lx.data() + i * n;
      const double* lz_row = lz.data() + i * n;
      const double* z_row = z.data() + i * n;
      const double* c_row = cost + i * n;
      const double* y_row = y.data() + i * n;

      double mx = kNegInf;
      if (rho_x > 0.0) {
        for (std::size_t j = 0; j < n; ++j) {
          x_old_row[j] = x_row[j];
          lx_old_row[j] = lx_row[j];
          const double sv = (rho * lz_row[j] + rho_x * lx_row[j] - (c_row[j] + y_row[j])) *
                            inv_den_x;
          s_row[j] = sv;
          if (sv > mx) mx = sv;
        }
      } else {
        for (std::size_t j = 0; j < n; ++j) {
          const double sv = (rho * lz_row[j] - (c_row[j] + y_row[j])) * inv_den_x;
          s_row[j] = sv;
          if (sv > mx) mx = sv;
        }
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double e = std::exp(s_row[j] - mx);
        x_row[j] = e;
        sum += e;
      }
      const double log_norm = log_a[i] - mx - std::log(sum);
      const double scale = problem.row_marginal[i] / sum;
      double obj_row = 0.0, kl_row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double xv = x_row[j] * scale;
        const double lxv = s_row[j] + log_norm;
        x_row[j] = xv;
        lx_row[j] = lxv;
        obj_row += c_row[j] * xv;
        kl_row += xv * (lxv - lz_row[j]) - xv + z_row[j];
      }
      acc.objective += obj_row;
      kl_coupling += kl_row;
      if (rho_x > 0.0) {
        double kl_px = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          kl_px += x_row[j] * (lx_row[j] - lx_old_row[j]) - x_row[j] + x_old_row[j];
        }
        kl_prox_x += kl_px;
      }
    }

    // column sweep: Z' and ln Z', plus the dual step and the residuals,
    // accumulated in fixed row-major order
    for (std::size_t j = 0; j < n; ++j) col_max[j] = kNegInf;
    if (rho_z > 0.0) {
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t base = i * n;
        for (std::size_t j = 0; j < n; ++j) {
          const double uv = (rho * lx[base + j] + rho_z * lz[base + j] + y[base + j]) *
                            inv_den_z;
          u[base + j] = uv;
          if (uv > col_max[j]) col_max[j] = uv;
        }
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t base = i * n;
        for (std::size_t j = 0; j < n; ++j) {
          const double uv = (rho * lx[base + j] + y[base + j]) * inv_den_z;
          u[base + j] = uv;
          if (uv > col_max[j]) col_max[j] = uv;
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) col_sum[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t base = i * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double e = std::exp(u[base + j] - col_max[j]);
        v[base + j] = e;
        col_sum[j] += e;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      col_scale[j] = problem.col_marginal[j] / col_sum[j];
      col_shift[j] = log_b[j] - col_max[j] - std::log(col_sum[j]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t base = i * n;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = base + j;
        const double z_old = z[k];
        const double lz_old = lz[k];
        const double z_new = v[k] * col_scale[j];
        const double lz_new = u[k] + col_shift[j];
        const double dz = z_new - z_old;
        acc.dual_sq += dz * dz;
        const double gap = x[k] - z_new;
        acc.primal_sq += gap * gap;
        if (rho_z > 0.0) kl_prox_z += z_new * (lz_new - lz_old) - z_new + z_old;
        z[k] = z_new;
        lz[k] = lz_new;
        y[k] += tau * gap;
      }
    }

    // guard float cancellation: each KL sum is nonnegative in exact arithmetic
    if (kl_coupling < 0.0) kl_coupling = 0.0;
    if (kl_prox_x < 0.0) kl_prox_x = 0.0;
    if (kl_prox_z < 0.0) kl_prox_z = 0.0;
    acc.r_value = kl_coupling + config.gamma * acc.primal_sq;
    if (rho_x > 0.0) acc.r_value += rho_x / rho * kl_prox_x;
    if (rho_z > 0.0) acc.r_value += rho_z / rho * kl_prox_z;

    const double primal = std::sqrt(acc.primal_sq);
    const double dual = rho * std::sqrt(acc.dual_sq);
    trace.push_back(TraceRecord{t, elapsed_since(t0), acc.objective, primal, dual, acc.r_value});
    // an infinite tol disables the residual stop and runs to max_iters
    if (std::isfinite(config.tol) && std::max(primal, dual) <= config.tol) {
      reason = StopReason::ResidualTolerance;
      iters_done = t;
      break;
    }
  }

  SolveResult result{IterateState{Matrix(m, n, std::move(x)), Matrix(m, n, std::move(z)),
                                  Matrix(m, n, std::move(y)), iters_done},
                     std::move(trace), reason};
  return result;
}

SolveResult solve_euclidean(const TransportProblem& problem, const SolverConfig& config,
                            const StepSizes& steps) {
  const std::size_t m = problem.rows(), n = problem.cols();
  const double rho = steps.rho, tau = steps.tau, rho_x = steps.rho_x, rho_z = steps.rho_z;
  const double inv_den_x = 1.0 / (rho + rho_x);
  const double inv_den_z = 1.0 / (rho + rho_z);

  IterateState state = initial_state(problem);
  Matrix& x = state.x;
  Matrix& z = state.z;
  Matrix& y = state.y;

  std::vector<double> w_row(n), w_col(m);
  std::vector<TraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(config.max_iters));
  const auto t0 = std::chrono::steady_clock::now();
  StopReason reason = StopReason::IterationLimit;
  int iters_done = config.max_iters;

  for (int t = 1; t <= config.max_iters; ++t) {
    LoopAccumulators acc;
    double prox_x_sq = 0.0, prox_z_sq = 0.0, coupling_sq = 0.0;

    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        w_row[j] = (rho * z(i, j) + rho_x * x(i, j) - (problem.cost(i, j) + y(i, j))) *
                   inv_den_x;
      }
      const Vector proj = project_simplex(w_row, problem.row_marginal[i]);
      for (std::size_t j = 0; j < n; ++j) {
        const double dx = proj[j] - x(i, j);
        prox_x_sq += dx * dx;
        const double dc = proj[j] - z(i, j);
        coupling_sq += dc * dc;
        x(i, j) = proj[j];
        acc.objective += problem.cost(i, j) * proj[j];
      }
    }

    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        w_col[i] = (rho * x(i, j) + rho_z * z(i, j) + y(i, j)) * inv_den_z;
      }
      const Vector proj = project_simplex(w_col, problem.col_marginal[j]);
      for (std::size_t i = 0; i < m; ++i) {
        const double dz = proj[i] - z(i, j);
        prox_z_sq += dz * dz;
        const double gap = x(i, j) - proj[i];
        acc.primal_sq += gap * gap;
        z(i, j) = proj[i];
        y(i, j) += tau * gap;
      }
    }

    acc.r_value = 0.5 * coupling_sq + config.gamma * acc.primal_sq;
    if (rho_x > 0.0) acc.r_value += rho_x / rho * 0.5 * prox_x_sq;
    if (rho_z > 0.0) acc.r_value += rho_z / rho * 0.5 * prox_z_sq;
    acc.dual_sq = prox_z_sq;

    const double primal = std::sqrt(acc.primal_sq);
    const double dual = rho * std::sqrt(acc.dual_sq);
    trace.push_back(TraceRecord{t, elapsed_since(t0), acc.objective, primal, dual, acc.r_value});
    if (std::isfinite(config.tol) && std::max(primal, dual) <= config.tol) {
      reason = StopReason::ResidualTolerance;
      iters_done = t;
      break;
    }
  }

  state.iter = iters_done;
  return SolveResult{std::move(state), std::move(trace), reason};
}

}  // namespace

SolveResult solve(const TransportProblem& problem, const SolverConfig& config) {
  config.validate();
  const StepSizes steps = effective_steps(config);
  if (config.variant == Variant::BadmmKl) return solve_kl(problem, config, steps);
  return solve_euclidean(problem, config, steps);
}

TransportSplitProblem::TransportSplitProblem(TransportProblem problem, Variant variant)
    : problem_(std::move(problem)),
      variant_(variant),
      size_(problem_.rows() * problem_.cols()),
      penalty_(variant == Variant::BadmmKl ? DivergenceSpec::generalized_kl()
                                           : DivergenceSpec::squared_euclidean()),
      prox_(penalty_),
      rhs_(size_, 0.0) {}

double TransportSplitProblem::f_value(const Vector& x) const {
  return dot(problem_.cost.storage(), x);
}

double TransportSplitProblem::g_value(const Vector&) const { return 0.0; }

Vector TransportSplitProblem::apply_a(const Vector& x) const {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
  return out;
}

Vector TransportSplitProblem::apply_b(const Vector& z) const { return z; }

IterateState TransportSplitProblem::unpack(const SplitState& state) const {
  return from_split_state(state, problem_.rows(), problem_.cols());
}

Vector TransportSplitProblem::solve_x(const SplitState& state, const StepSizes& steps) const {
  const IterateState s = unpack(state);
  Matrix x_new = (variant_ == Variant::BadmmKl) ? badmm_x_update(problem_, s, steps)
                                                : admm_x_update(problem_, s, steps);
  return std::move(x_new.storage());
}

Vector TransportSplitProblem::solve_z(const Vector& x_new, const SplitState& state,
                                      const StepSizes& steps) const {
  const IterateState s = unpack(state);
  Matrix x_mat(problem_.rows(), problem_.cols(), x_new);
  Matrix z_new = (variant_ == Variant::BadmmKl) ? badmm_z_update(problem_, x_mat, s, steps)
                                                : admm_z_update(problem_, x_mat, s, steps);
  return std::move(z_new.storage());
}

SplitState initial_split_state(const TransportProblem& problem) {
  return to_split_state(initial_state(problem));
}

SplitState to_split_state(const IterateState& state) {
  SplitState s;
  s.x = state.x.storage();
  s.z = state.z.storage();
  s.y.resize(state.y.size());
  for (std::size_t k = 0; k < s.y.size(); ++k) s.y[k] = -state.y.storage()[k];
  s.iter = state.iter;
  return s;
}

IterateState from_split_state(const SplitState& state, std::size_t rows, std::size_t cols) {
  if (state.x.size() != rows * cols || state.z.size() != rows * cols ||
      state.y.size() != rows * cols) {
    throw std::invalid_argument("split state: size does not match the requested shape");
  }
  Vector y_flip(state.y.size());
  for (std::size_t k = 0; k < y_flip.size(); ++k) y_flip[k] = -state.y[k];
  return IterateState{Matrix(rows, cols, state.x), Matrix(rows, cols, state.z),
                      Matrix(rows, cols, std::move(y_flip)), state.iter};
}

}  // namespace badmm::transport
