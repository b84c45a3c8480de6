// Copyright 2026 The gsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-text helpers shared by every on-disk format: fixed 6-decimal
// numbers, exact round-trip doubles, CSV splitting and atomic file writes.

#ifndef GSP_CSV_HPP_
#define GSP_CSV_HPP_

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gsp/matrix.hpp"

namespace gsp {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "%.6f", with negative zero printed as zero so that a value that rounds to
// zero has a single spelling.
inline std::string Fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

// Shortest spelling guaranteed to parse back to the same double.
inline std::string ExactDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline double ParseDouble(std::string_view text) {
  std::string s(text);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw IoError("not a number: '" + s + "'");
  return v;
}

inline long long ParseInt(std::string_view text) {
  std::string s(text);
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw IoError("not an integer: '" + s + "'");
  return v;
}

inline std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to a sibling temp file, then renames over the target.
inline void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

// A labelled matrix as it appears on disk: the first row holds the corner
// tag followed by column labels, each later row a row label and its cells.
struct LabelledMatrix {
  std::string corner;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  DenseMatrix values;
};

inline void CheckLabel(const std::string& label) {
  if (label.find_first_of(",\r\n") != std::string::npos)
    throw IoError("label may not contain commas or newlines: " + label);
}

inline std::string FormatMatrixCsv(const LabelledMatrix& m) {
  if (m.row_labels.size() != m.values.rows() || m.col_labels.size() != m.values.cols())
    throw IoError("label count does not match matrix shape");
  std::string out;
  CheckLabel(m.corner);
  out += m.corner;
  for (const auto& c : m.col_labels) {
    CheckLabel(c);
    out += ',';
    out += c;
  }
  out += '\n';
  for (std::size_t i = 0; i < m.values.rows(); ++i) {
    CheckLabel(m.row_labels[i]);
    out += m.row_labels[i];
    for (std::size_t j = 0; j < m.values.cols(); ++j) {
      out += ',';
      out += Fixed6(m.values(i, j));
    }
    out += '\n';
  }
  return out;
}

inline LabelledMatrix ParseMatrixCsv(std::string_view text) {
  LabelledMatrix m;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (line.empty()) continue;
    auto cells = SplitCsvLine(line);
    if (line_no++ == 0) {
      m.corner = cells.front();
      m.col_labels.assign(cells.begin() + 1, cells.end());
      continue;
    }
    if (cells.size() != m.col_labels.size() + 1)
      throw IoError("csv row " + std::to_string(line_no) + " has wrong cell count");
    m.row_labels.push_back(cells.front());
    std::vector<double> r;
    for (std::size_t j = 1; j < cells.size(); ++j) r.push_back(ParseDouble(cells[j]));
    rows.push_back(std::move(r));
  }
  if (line_no == 0) throw IoError("empty csv");
  m.values = DenseMatrix(rows.size(), m.col_labels.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.values(i, j) = rows[i][j];
  return m;
}

}  // namespace gsp

#endif  // GSP_CSV_HPP_
