#pragma once

#include <span>

#include "badmm/core.hpp"

namespace badmm {

// Euclidean projection onto the scaled simplex {w >= 0, sum w = radius} by
// sort and threshold: with v sorted descending and partial sums s_k, theta is
// (s_k - radius)/k for the largest k keeping v_(k) - theta positive, and the
// projection is max(v_i - theta, 0). Requires radius > 0 and nonempty v.
Vector project_simplex(std::span<const double> v, double radius);

}  // namespace badmm
