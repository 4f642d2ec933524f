#include "badmm/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace badmm::oracle {

AssignmentSolution assignment_bruteforce(const Matrix& cost) {
  const std::size_t n = cost.rows();
  if (n == 0 || cost.cols() != n) {
    throw std::invalid_argument("assignment oracle: cost matrix must be square and nonempty");
  }
  if (n > 8) {
    throw std::invalid_argument("assignment oracle: n must be <= 8 (got " + std::to_string(n) +
                                ")");
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  AssignmentSolution best{perm, 0.0};
  for (std::size_t i = 0; i < n; ++i) best.value += cost(i, perm[i]);

  // next_permutation walks lexicographically, so keeping strict improvements
  // only leaves the lexicographically smallest minimizer in place.
  while (std::next_permutation(perm.begin(), perm.end())) {
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) value += cost(i, perm[i]);
    if (value < best.value) {
      best.value = value;
      best.assignment = perm;
    }
  }
  return best;
}

}  // namespace badmm::oracle
