#pragma once

// Matrix files: {"rows": r, "cols": c, "real": [[...], ...], "imag": [[...], ...]}
// with "imag" optional (absent means zero). Doubles are written with
// round-trip precision, so write → read reproduces values bit for bit.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "orcalc/numlin.hpp"

namespace orcalc::io {

using json = nlohmann::json;

namespace detail {

inline RealMatrix read_array(const json& j, const char* key, Index rows, Index cols) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || static_cast<Index>(arr.size()) != rows) {
    throw Error(ErrorKind::ParseError, std::string("'") + key + "' must have " + std::to_string(rows) + " rows");
  }
  RealMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = arr[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(ErrorKind::ParseError,
                  std::string("'") + key + "' row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    }
    for (Index k = 0; k < cols; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw Error(ErrorKind::ParseError, std::string("non-numeric entry in '") + key + "'");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

inline json write_array(const RealMatrix& m) {
  json arr = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace detail

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "matrix file must hold a JSON object");
  try {
    const auto rows = j.at("rows").get<long long>();
    const auto cols = j.at("cols").get<long long>();
    if (rows <= 0 || cols <= 0) throw Error(ErrorKind::ParseError, "rows and cols must be positive");
    const RealMatrix re = detail::read_array(j, "real", rows, cols);
    RealMatrix im = RealMatrix::Zero(rows, cols);
    if (j.contains("imag")) im = detail::read_array(j, "imag", rows, cols);
    Matrix m(rows, cols);
    m.real() = re;
    m.imag() = im;
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

/// "imag" is emitted only when some entry is nonzero.
inline json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["real"] = detail::write_array(m.real());
  if (m.size() && m.imag().cwiseAbs().maxCoeff() != 0.0) j["imag"] = detail::write_array(m.imag());
  return j;
}

inline Matrix parse_matrix(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return matrix_from_json(j);
}

inline Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

inline void save_matrix(const std::string& path, const Matrix& m) { save_json(path, matrix_to_json(m)); }

}  // namespace orcalc::io
