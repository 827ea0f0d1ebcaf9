#pragma once

// Square matrices keyed by graph id (pairwise GED, Gram), with CSV and
// binary serialization. Row/column order is the dataset file order.
//
// CSV:    header "graph_id,<id_0>,...,<id_n-1>", then one row per id.
// Binary: "CFGM" magic, u32 version=1, u64 n, n x (u64 length + bytes),
//         n*n little-endian IEEE-754 doubles in row-major order.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfged/dataset_io.hpp"
#include "cfged/error.hpp"

namespace cfged {

struct LabeledMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;

  std::size_t size() const { return ids.size(); }
};

// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string matrix_to_csv(const LabeledMatrix& m) {
  std::string out = "graph_id";
  for (const auto& id : m.ids) out += "," + id;
  out += "\n";
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    out += m.ids[i];
    for (std::size_t j = 0; j < m.ids.size(); ++j)
      out += "," + format_double(m.values(i, j));
    out += "\n";
  }
  return out;
}

inline LabeledMatrix matrix_from_csv(const std::string& text,
                                     const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  LabeledMatrix m;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    auto fields = detail::split_line(line, ',');
    const std::string where = source + ":" + std::to_string(lineno);
    if (!header_seen) {
      header_seen = true;
      if (fields.empty() || fields[0] != "graph_id")
        throw Error(ErrorKind::kParse, where + ": expected header starting with 'graph_id'");
      m.ids.assign(fields.begin() + 1, fields.end());
      m.values = Eigen::MatrixXd::Zero(m.ids.size(), m.ids.size());
      continue;
    }
    if (row >= m.ids.size())
      throw Error(ErrorKind::kShape, where + ": more rows than header ids");
    if (fields.size() != m.ids.size() + 1)
      throw Error(ErrorKind::kShape, where + ": expected " +
                                         std::to_string(m.ids.size() + 1) + " fields");
    if (fields[0] != m.ids[row])
      throw Error(ErrorKind::kParse, where + ": row id '" + fields[0] +
                                         "' does not match header order");
    for (std::size_t j = 0; j < m.ids.size(); ++j) {
      try {
        std::size_t used = 0;
        m.values(row, j) = std::stod(fields[j + 1], &used);
        if (used != fields[j + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(ErrorKind::kParse, where + ": bad number '" + fields[j + 1] + "'");
      }
    }
    ++row;
  }
  if (!header_seen)
    throw Error(ErrorKind::kParse, source + ": empty matrix file");
  if (row != m.ids.size())
    throw Error(ErrorKind::kShape, source + ": expected " + std::to_string(m.ids.size()) +
                                       " rows, found " + std::to_string(row));
  return m;
}

namespace detail {

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::endian::native == std::endian::little,
                "binary matrix I/O assumes a little-endian host");
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
T get_le(const std::string& in, std::size_t& pos, const std::string& source) {
  if (pos + sizeof(T) > in.size())
    throw Error(ErrorKind::kParse, source + ": truncated binary matrix");
  T value;
  std::memcpy(&value, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

}  // namespace detail

inline std::string matrix_to_binary(const LabeledMatrix& m) {
  std::string out = "CFGM";
  detail::put_le<std::uint32_t>(out, 1);
  detail::put_le<std::uint64_t>(out, m.ids.size());
  for (const auto& id : m.ids) {
    detail::put_le<std::uint64_t>(out, id.size());
    out += id;
  }
  for (std::size_t i = 0; i < m.ids.size(); ++i)
    for (std::size_t j = 0; j < m.ids.size(); ++j)
      detail::put_le<double>(out, m.values(i, j));
  return out;
}

inline LabeledMatrix matrix_from_binary(const std::string& in,
                                        const std::string& source) {
  if (in.compare(0, 4, "CFGM") != 0)
    throw Error(ErrorKind::kParse, source + ": missing CFGM magic");
  std::size_t pos = 4;
  if (detail::get_le<std::uint32_t>(in, pos, source) != 1)
    throw Error(ErrorKind::kParse, source + ": unsupported binary matrix version");
  const auto n = detail::get_le<std::uint64_t>(in, pos, source);
  if (n > in.size())
    throw Error(ErrorKind::kParse, source + ": implausible matrix size");
  LabeledMatrix m;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto len = detail::get_le<std::uint64_t>(in, pos, source);
    if (pos + len > in.size())
      throw Error(ErrorKind::kParse, source + ": truncated id");
    m.ids.emplace_back(in.substr(pos, len));
    pos += len;
  }
  m.values.resize(n, n);
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < n; ++j)
      m.values(i, j) = detail::get_le<double>(in, pos, source);
  if (pos != in.size())
    throw Error(ErrorKind::kParse, source + ": trailing bytes after matrix");
  return m;
}

// Extension ".bin" selects the binary format, anything else CSV.
inline void save_matrix(const LabeledMatrix& m, const std::filesystem::path& path) {
  detail::write_file(path, path.extension() == ".bin" ? matrix_to_binary(m)
                                                      : matrix_to_csv(m));
}

// Sniffs the CFGM magic rather than trusting the extension.
inline LabeledMatrix load_matrix(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  if (text.compare(0, 4, "CFGM") == 0) return matrix_from_binary(text, path.string());
  return matrix_from_csv(text, path.string());
}

}  // namespace cfged
