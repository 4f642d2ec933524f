#pragma once

#include <cstddef>
#include <vector>

#include "badmm/core.hpp"

namespace badmm::oracle {

struct AssignmentSolution {
  std::vector<std::size_t> assignment;  // assignment[i] = column matched to row i
  double value;
};

// Exact minimum-cost assignment by exhaustive enumeration of all n!
// permutations, n <= 8. Ties keep the lexicographically smallest assignment.
// With unit marginals this value equals the transport LP optimum, so it
// serves as the ground truth for small solver runs.
AssignmentSolution assignment_bruteforce(const Matrix& cost);

}  // namespace badmm::oracle
