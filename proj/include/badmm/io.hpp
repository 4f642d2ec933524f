#pragma once

#include <string>
#include <vector>

#include "badmm/core.hpp"

namespace badmm::io {

// Doubles are rendered with 17 significant digits ("%.17g"), enough to
// round-trip any binary64 value exactly. '.' decimal separator, no locale.
std::string format_g17(double v);

// CSV matrix: one row per line, comma separated, no header, Unix newlines.
Matrix load_matrix_csv(const std::string& path);
void store_matrix_csv(const Matrix& m, const std::string& path);

// Raw binary matrix: 8-byte header of two little-endian uint32 (rows, cols)
// followed by rows*cols little-endian float64 in row-major order.
Matrix load_matrix_binary(const std::string& path);
void store_matrix_binary(const Matrix& m, const std::string& path);

// Dispatches on extension: ".csv" reads text, ".bin" reads raw binary.
Matrix load_cost_file(const std::string& path);

// Trace CSV with the fixed header
// iter,elapsed_sec,objective,primal_residual,dual_residual,R_residual
void write_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path);

// Labeled samples, one per row: feature columns first, label (+1/-1) last.
struct LabeledData {
  Matrix features;
  Vector labels;
};
LabeledData load_labeled_csv(const std::string& path);

}  // namespace badmm::io
