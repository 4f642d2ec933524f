#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace badmm {

using Vector = std::vector<double>;

// Throws std::invalid_argument naming `what` if any entry is NaN or infinite.
void check_finite(std::span<const double> values, const std::string& what);

// Dense row-major matrix of doubles. Entries are validated finite whenever a
// matrix is built from external data; in-place mutation through operator() is
// the caller's responsibility.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix constant(std::size_t rows, std::size_t cols, double value);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }

  std::vector<double>& storage() { return entries_; }
  const std::vector<double>& storage() const { return entries_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

double frobenius_norm(const Matrix& m);
double frobenius_distance(const Matrix& a, const Matrix& b);
double norm_l2(std::span<const double> v);
double distance_l2(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

// Seeded uniform doubles in [0, 1) via mt19937_64 and the 53-bit mapping
// (x >> 11) * 2^-53. The engine's output sequence is pinned by the standard,
// so identical seeds give bit-identical streams on every platform, which
// std::uniform_real_distribution does not guarantee. Normals are Box-Muller
// over the same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next_u64() { return gen_(); }
  double uniform();
  double normal();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// rows x cols iid U[0,1) entries drawn in row-major order.
Matrix uniform_cost_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Mass-transportation instance: cost matrix plus strictly positive marginals
// with matching total mass (relative mismatch above 1e-9 is rejected).
struct TransportProblem {
  Matrix cost;
  Vector row_marginal;  // a, length cost.rows()
  Vector col_marginal;  // b, length cost.cols()

  TransportProblem(Matrix cost_in, Vector a, Vector b);

  std::size_t rows() const { return cost.rows(); }
  std::size_t cols() const { return cost.cols(); }
};

enum class Variant { BadmmKl, AdmmEuclidean };
enum class ScheduleKind { Constant, SqrtT };

struct Schedule {
  ScheduleKind kind = ScheduleKind::Constant;
  double c1 = 1.0;
  double c2 = 1.0;
};

struct SolverConfig {
  double rho = 1e-3;
  double tau_ratio = 1.0;  // tau = tau_ratio * rho under the constant schedule
  double rho_x = 0.0;
  double rho_z = 0.0;
  double gamma = 0.125;  // feeds the progress-residual diagnostics only
  int max_iters = 2000;
  double tol = 1e-4;
  Variant variant = Variant::BadmmKl;
  Schedule schedule;

  void validate() const;  // throws std::invalid_argument
};

struct TraceRecord {
  int iter;
  double elapsed_sec;
  double objective;
  double primal_residual;
  double dual_residual;
  double r_residual;
};

// Enforces strictly increasing iter and nondecreasing elapsed_sec.
void check_trace(const std::vector<TraceRecord>& trace);

enum class StopReason { ResidualTolerance, IterationLimit };
std::string to_string(StopReason reason);

// Transport iterate triple. x carries the plan updated against the row
// marginals, z the one updated against the column marginals, y the dual.
struct IterateState {
  Matrix x;
  Matrix z;
  Matrix y;
  int iter = 0;
};

}  // namespace badmm
