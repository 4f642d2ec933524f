#include "badmm/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace badmm::io {

namespace {

static_assert(std::numeric_limits<double>::is_iec559, "IEEE-754 doubles required");

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::runtime_error(path + ": " + why);
}

double parse_double(const std::string& path, std::size_t line_no, std::string_view field) {
  // trim ASCII whitespace
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t' || field.front() == '\r')) {
    field.remove_prefix(1);
  }
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    fail(path, "line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) +
                   "' as a number");
  }
  return value;
}

std::vector<std::vector<double>> load_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      fail(path, "line " + std::to_string(line_no) + ": empty line");
    }
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = (comma == std::string::npos) ? line.size() : comma;
      row.push_back(parse_double(path, line_no, std::string_view(line).substr(start, end - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(path, "line " + std::to_string(line_no) + ": expected " +
                     std::to_string(rows.front().size()) + " fields, got " +
                     std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(path, "no data rows");
  return rows;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix load_matrix_csv(const std::string& path) {
  const auto rows = load_csv_rows(path);
  const std::size_t r = rows.size();
  const std::size_t c = rows.front().size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) entries.insert(entries.end(), row.begin(), row.end());
  try {
    return Matrix(r, c, std::move(entries));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

void store_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep '\n' on every platform
  if (!out) fail(path, "cannot open file for writing");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_g17(m(i, j));
    }
    out << '\n';
  }
  if (!out) fail(path, "write failed");
}

Matrix load_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  unsigned char header[8];
  if (!in.read(reinterpret_cast<char*>(header), 8)) fail(path, "truncated header");
  auto read_u32 = [&](int off) {
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | header[off + k];
    return v;
  };
  const std::uint32_t r = read_u32(0);
  const std::uint32_t c = read_u32(4);
  if (r == 0 || c == 0) fail(path, "zero dimension in header");
  const std::uint64_t count = static_cast<std::uint64_t>(r) * c;
  if (count > (std::numeric_limits<std::size_t>::max() / sizeof(double))) {
    fail(path, "dimensions overflow");
  }
  std::vector<double> entries(count);
  if (!in.read(reinterpret_cast<char*>(entries.data()),
               static_cast<std::streamsize>(count * sizeof(double)))) {
    fail(path, "truncated payload");
  }
  in.peek();
  if (!in.eof()) fail(path, "trailing bytes after payload");
  // entries were read as native doubles; this code targets little-endian
  // hosts, matching the on-disk layout byte for byte.
  try {
    return Matrix(r, c, std::move(entries));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

void store_matrix_binary(const Matrix& m, const std::string& path) {
  if (m.rows() > std::numeric_limits<std::uint32_t>::max() ||
      m.cols() > std::numeric_limits<std::uint32_t>::max()) {
    fail(path, "matrix too large for the binary header");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  unsigned char header[8];
  auto write_u32 = [&](int off, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) header[off + k] = static_cast<unsigned char>((v >> (8 * k)) & 0xff);
  };
  write_u32(0, static_cast<std::uint32_t>(m.rows()));
  write_u32(4, static_cast<std::uint32_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(header), 8);
  out.write(reinterpret_cast<const char*>(m.storage().data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!out) fail(path, "write failed");
}

Matrix load_cost_file(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return load_matrix_csv(path);
  }
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0) {
    return load_matrix_binary(path);
  }
  fail(path, "unknown cost file extension (expected .csv or .bin)");
}

void write_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path) {
  check_trace(trace);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  out << "iter,elapsed_sec,objective,primal_residual,dual_residual,R_residual\n";
  for (const auto& rec : trace) {
    out << rec.iter << ',' << format_g17(rec.elapsed_sec) << ',' << format_g17(rec.objective)
        << ',' << format_g17(rec.primal_residual) << ',' << format_g17(rec.dual_residual) << ','
        << format_g17(rec.r_residual) << '\n';
  }
  if (!out) fail(path, "write failed");
}

LabeledData load_labeled_csv(const std::string& path) {
  const auto rows = load_csv_rows(path);
  const std::size_t n = rows.size();
  const std::size_t width = rows.front().size();
  if (width < 2) fail(path, "need at least one feature column plus the label column");
  const std::size_t d = width - 1;
  std::vector<double> features;
  features.reserve(n * d);
  Vector labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    features.insert(features.end(), rows[i].begin(), rows[i].begin() + static_cast<long>(d));
    const double label = rows[i].back();
    if (label != 1.0 && label != -1.0) {
      fail(path, "row " + std::to_string(i + 1) + ": label must be +1 or -1, got " +
                     format_g17(label));
    }
    labels.push_back(label);
  }
  return LabeledData{Matrix(n, d, std::move(features)), std::move(labels)};
}

}  // namespace badmm::io
