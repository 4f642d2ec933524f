#include "badmm/logistic.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace badmm::logistic {

namespace {

// ln(1 + e^u) without overflow on either tail
double softplus(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_dim(const Problem& problem, const Vector& x, const char* what) {
  if (x.size() != problem.dim()) {
    throw std::invalid_argument(std::string(what) + ": vector length does not match dim");
  }
}

}  // namespace

Problem::Problem(Matrix features_in, Vector labels_in, double lambda_in)
    : features(std::move(features_in)), labels(std::move(labels_in)), lambda(lambda_in) {
  if (features.rows() == 0 || features.cols() == 0) {
    throw std::invalid_argument("logistic problem: empty feature matrix");
  }
  if (labels.size() != features.rows()) {
    throw std::invalid_argument("logistic problem: label count does not match sample count");
  }
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (labels[s] != 1.0 && labels[s] != -1.0) {
      throw std::invalid_argument("logistic problem: label " + std::to_string(s) +
                                  " must be +1 or -1");
    }
  }
  if (lambda < 0.0) throw std::invalid_argument("logistic problem: lambda must be >= 0");
}

double loss_value(const Problem& problem, const Vector& x) {
  require_dim(problem, x, "loss value");
  const std::size_t n = problem.samples();
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double margin = problem.labels[s] * dot(problem.features.row(s), x);
    total += softplus(-margin);
  }
  return total / static_cast<double>(n);
}

Vector loss_gradient(const Problem& problem, const Vector& x) {
  require_dim(problem, x, "loss gradient");
  const std::size_t n = problem.samples();
  const std::size_t d = problem.dim();
  Vector grad(d, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    const double margin = problem.labels[s] * dot(problem.features.row(s), x);
    // sigma(-margin) = 1 / (1 + e^margin); saturates cleanly at both tails
    const double weight = 1.0 / (1.0 + std::exp(margin));
    const double coeff = -problem.labels[s] * weight;
    const auto row = problem.features.row(s);
    for (std::size_t k = 0; k < d; ++k) grad[k] += coeff * row[k];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& g : grad) g *= inv_n;
  return grad;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double composite_objective(const Problem& problem, const Vector& x) {
  return loss_value(problem, x) + problem.lambda * l1_norm(x);
}

double gradient_lipschitz_estimate(const Problem& problem, int power_iters) {
  if (power_iters < 1) {
    throw std::invalid_argument("lipschitz estimate: power_iters must be >= 1");
  }
  const std::size_t n = problem.samples();
  const std::size_t d = problem.dim();
  Vector v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  Vector wv(n), g(d);
  double eigen = 0.0;
  for (int it = 0; it < power_iters; ++it) {
    for (std::size_t s = 0; s < n; ++s) wv[s] = dot(problem.features.row(s), v);
    for (std::size_t k = 0; k < d; ++k) g[k] = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const auto row = problem.features.row(s);
      for (std::size_t k = 0; k < d; ++k) g[k] += row[k] * wv[s];
    }
    eigen = norm_l2(g);
    if (eigen == 0.0) return 0.0;  // zero feature matrix
    for (std::size_t k = 0; k < d; ++k) v[k] = g[k] / eigen;
  }
  return eigen / (4.0 * static_cast<double>(n));
}

Vector soft_threshold(std::span<const double> v, double kappa) {
  if (kappa < 0.0) throw std::invalid_argument("soft_threshold: kappa must be >= 0");
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - kappa;
    out[i] = mag > 0.0 ? (v[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

Vector linearized_x_update(const Vector& x_prev, const Vector& z_prev, const Vector& y,
                           const Vector& grad, double rho, double rho_x) {
  const std::size_t d = x_prev.size();
  if (z_prev.size() != d || y.size() != d || grad.size() != d) {
    throw std::invalid_argument("linearized x update: dimension mismatch");
  }
  if (!(rho + rho_x > 0.0)) {
    throw std::invalid_argument("linearized x update: rho + rho_x must be > 0");
  }
  Vector out(d);
  const double inv_den = 1.0 / (rho + rho_x);
  for (std::size_t k = 0; k < d; ++k) {
    out[k] = (rho * z_prev[k] - y[k] - grad[k] + rho_x * x_prev[k]) * inv_den;
  }
  return out;
}

LogisticSplitProblem::LogisticSplitProblem(Problem problem)
    : problem_(std::move(problem)),
      quad_(DivergenceSpec::squared_euclidean()),
      rhs_(problem_.dim(), 0.0) {}

Vector LogisticSplitProblem::apply_b(const Vector& z) const {
  Vector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = -z[i];
  return out;
}

Vector LogisticSplitProblem::solve_x(const SplitState& state, const StepSizes& steps) const {
  const Vector grad = loss_gradient(problem_, state.x);
  return linearized_x_update(state.x, state.z, state.y, grad, steps.rho, steps.rho_x);
}

Vector LogisticSplitProblem::solve_z(const Vector& x_new, const SplitState& state,
                                     const StepSizes& steps) const {
  const std::size_t d = x_new.size();
  const double den = steps.rho + steps.rho_z;
  Vector v(d);
  for (std::size_t k = 0; k < d; ++k) {
    v[k] = (steps.rho * x_new[k] + state.y[k] + steps.rho_z * state.z[k]) / den;
  }
  return soft_threshold(v, problem_.lambda / den);
}

SolveResult solve(const Problem& problem, const SolverConfig& config) {
  config.validate();
  SolverConfig cfg = config;
  if (cfg.rho_x == 0.0) cfg.rho_x = gradient_lipschitz_estimate(problem);
  const StepSizes steps = effective_steps(cfg);

  const LogisticSplitProblem split(problem);
  SplitState state;
  state.x.assign(problem.dim(), 0.0);
  state.z.assign(problem.dim(), 0.0);
  state.y.assign(problem.dim(), 0.0);

  std::vector<TraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(cfg.max_iters));
  const auto t0 = std::chrono::steady_clock::now();
  StopReason reason = StopReason::IterationLimit;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    const SplitState next = iterate(split, state, steps);
    const double primal = distance_l2(next.x, next.z);
    const double dual = steps.rho * distance_l2(next.z, state.z);
    const double r_value = progress_residual(split, state, next, steps, cfg.gamma);
    const double objective =
        loss_value(problem, next.x) + problem.lambda * l1_norm(next.z);
    trace.push_back(TraceRecord{t, elapsed_since(t0), objective, primal, dual, r_value});
    state = next;
    if (std::isfinite(cfg.tol) && std::max(primal, dual) <= cfg.tol) {
      reason = StopReason::ResidualTolerance;
      break;
    }
  }

  return SolveResult{std::move(state), std::move(trace), reason};
}

Problem synthetic_fixture(std::size_t n_samples, std::size_t dim, double lambda,
                          std::uint64_t seed) {
  if (n_samples == 0 || dim == 0) {
    throw std::invalid_argument("synthetic fixture: need at least one sample and one feature");
  }
  Rng rng(seed);
  Matrix features(n_samples, dim);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t k = 0; k < dim; ++k) features(s, k) = rng.normal();
  }
  // planted sparse weights on the first third of the coordinates
  Vector planted(dim, 0.0);
  const std::size_t support = std::max<std::size_t>(1, dim / 3);
  for (std::size_t k = 0; k < support; ++k) planted[k] = rng.normal() * 2.0;
  Vector labels(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double margin = dot(features.row(s), planted) + 0.5 * rng.normal();
    labels[s] = margin >= 0.0 ? 1.0 : -1.0;
  }
  return Problem(std::move(features), std::move(labels), lambda);
}

}  // namespace badmm::logistic
