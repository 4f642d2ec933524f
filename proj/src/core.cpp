#include "badmm/core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace badmm {

void check_finite(std::span<const double> values, const std::string& what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument(what + ": entry " + std::to_string(i) +
                                  " is not finite");
    }
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("matrix: " + std::to_string(entries_.size()) +
                                " entries for " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
  }
  check_finite(entries_, "matrix");
}

Matrix Matrix::constant(std::size_t rows, std::size_t cols, double value) {
  return Matrix(rows, cols, std::vector<double>(rows * cols, value));
}

double norm_l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double distance_l2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distance_l2: size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double frobenius_norm(const Matrix& m) { return norm_l2(m.storage()); }

double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frobenius_distance: shape mismatch");
  }
  return distance_l2(a.storage(), b.storage());
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

Matrix uniform_cost_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = rng.uniform();
    }
  }
  return m;
}

TransportProblem::TransportProblem(Matrix cost_in, Vector a, Vector b)
    : cost(std::move(cost_in)),
      row_marginal(std::move(a)),
      col_marginal(std::move(b)) {
  if (row_marginal.size() != cost.rows() || col_marginal.size() != cost.cols()) {
    throw std::invalid_argument("transport problem: marginal lengths do not match cost shape");
  }
  check_finite(row_marginal, "row marginal");
  check_finite(col_marginal, "col marginal");
  double mass_a = 0.0, mass_b = 0.0;
  for (double v : row_marginal) {
    if (v <= 0.0) throw std::invalid_argument("transport problem: row marginal must be > 0");
    mass_a += v;
  }
  for (double v : col_marginal) {
    if (v <= 0.0) throw std::invalid_argument("transport problem: col marginal must be > 0");
    mass_b += v;
  }
  const double scale = std::max(mass_a, mass_b);
  if (std::abs(mass_a - mass_b) > 1e-9 * scale) {
    throw std::invalid_argument("transport problem: marginal masses differ (" +
                                std::to_string(mass_a) + " vs " + std::to_string(mass_b) + ")");
  }
}

void SolverConfig::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("config: rho must be > 0");
  if (!(tau_ratio > 0.0)) throw std::invalid_argument("config: tau-ratio must be > 0");
  if (rho_x < 0.0) throw std::invalid_argument("config: rho-x must be >= 0");
  if (rho_z < 0.0) throw std::invalid_argument("config: rho-z must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("config: gamma must be > 0");
  if (max_iters < 1) throw std::invalid_argument("config: max-iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be > 0");
  if (schedule.kind == ScheduleKind::SqrtT) {
    if (!(schedule.c1 > 0.0) || !(schedule.c2 > 0.0)) {
      throw std::invalid_argument("config: schedule constants c1, c2 must be > 0");
    }
  }
}

void check_trace(const std::vector<TraceRecord>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].iter <= trace[i - 1].iter) {
      throw std::logic_error("trace: iter must be strictly increasing");
    }
    if (trace[i].elapsed_sec < trace[i - 1].elapsed_sec) {
      throw std::logic_error("trace: elapsed_sec must be nondecreasing");
    }
  }
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ResidualTolerance:
      return "residual tolerance";
    case StopReason::IterationLimit:
      return "iteration limit";
  }
  return "unknown";
}

}  // namespace badmm
