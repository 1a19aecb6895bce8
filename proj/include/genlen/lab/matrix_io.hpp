#pragma once

// JSON matrix files:
//   {"n": 2, "matrices": [ [ [[re, im], [re, im]], [[re, im], [re, im]] ], ... ]}
// i.e. matrices -> rows -> entries, each entry a two-element [re, im] array.
// Doubles are written with round-trip precision, so emit/parse is bit-exact.

#include "genlen/numkernel.hpp"
#include "genlen/wordspan.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace genlen::lab {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path + ": read failed");
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) line += (text[i] == '\n') ? 1 : 0;
  return line;
}

inline double finite_number(const nlohmann::json& v, const std::string& where, const std::string& source) {
  if (!v.is_number()) throw FormatError(source + ": " + where + " is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw FormatError(source + ": " + where + " is not finite");
  return x;
}

}  // namespace detail

inline std::vector<CMatrix> parse_matrix_list(const std::string& text, const std::string& source = "<input>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(source + ":" + std::to_string(detail::line_of(text, e.byte)) + ": malformed JSON (" +
                      e.what() + ")");
  }
  if (!doc.is_object()) throw FormatError(source + ": top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw FormatError(source + ": field \"n\" must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(doc["n"].get<long long>());
  if (!doc.contains("matrices") || !doc["matrices"].is_array() || doc["matrices"].empty()) {
    throw FormatError(source + ": field \"matrices\" must be a non-empty array");
  }
  std::vector<CMatrix> mats;
  const auto& arr = doc["matrices"];
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string mk = "matrices[" + std::to_string(k) + "]";
    const auto& m = arr[k];
    if (!m.is_array()) throw FormatError(source + ": " + mk + " is not an array of rows");
    if (m.size() != n) {
      throw FormatError(source + ": " + mk + " has " + std::to_string(m.size()) + " rows, expected n = " +
                        std::to_string(n));
    }
    CMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      const std::string rk = mk + "[" + std::to_string(r) + "]";
      const auto& row = m[r];
      if (!row.is_array() || row.size() != n) {
        throw FormatError(source + ": " + rk + " is ragged: expected " + std::to_string(n) + " entries" +
                          (row.is_array() ? ", got " + std::to_string(row.size()) : ""));
      }
      for (std::size_t c = 0; c < n; ++c) {
        const std::string ek = rk + "[" + std::to_string(c) + "]";
        const auto& z = row[c];
        if (!z.is_array() || z.size() != 2) throw FormatError(source + ": " + ek + " must be [re, im]");
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            cplx(detail::finite_number(z[0], ek + "[0]", source), detail::finite_number(z[1], ek + "[1]", source));
      }
    }
    mats.push_back(std::move(out));
  }
  return mats;
}

inline GeneratingSystem parse_matrices_text(const std::string& text, const std::string& source = "<input>") {
  return GeneratingSystem(parse_matrix_list(text, source));
}

inline GeneratingSystem parse_matrices(const std::string& path) { return parse_matrices_text(read_file(path), path); }

inline nlohmann::json matrices_to_json(const std::vector<CMatrix>& mats) {
  nlohmann::json doc;
  doc["n"] = mats.empty() ? 0 : mats.front().rows();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : mats) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
      rows.push_back(std::move(row));
    }
    arr.push_back(std::move(rows));
  }
  doc["matrices"] = std::move(arr);
  return doc;
}

inline std::string emit_matrices_text(const std::vector<CMatrix>& mats) { return matrices_to_json(mats).dump(1) + "\n"; }

inline void emit_matrices(const GeneratingSystem& s, const std::string& path) {
  write_file(path, emit_matrices_text(s.mats()));
}

}  // namespace genlen::lab
