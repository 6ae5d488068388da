// Copyright 2026 The latq Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latq/identify.hpp"
#include "latq/linalg.hpp"
#include "latq/theta.hpp"

namespace latq {

/// Failure to read or write a file.
class IoError : public Error {
 public:
  using Error::Error;
};

struct LatticeFile {
  std::string name;
  GeneratorMatrix basis;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Lattice document with every entry printed to 17 significant digits.
inline std::string lattice_to_string(const std::string& name, const Matrix& b) {
  std::ostringstream os;
  os << "{\n  \"name\": " << nlohmann::json(name).dump() << ",\n  \"n\": " << b.rows() << ",\n  \"basis\": [\n";
  for (std::size_t i = 0; i < b.rows(); ++i) {
    os << "    [";
    for (std::size_t j = 0; j < b.cols(); ++j) os << (j ? ", " : "") << format_double(b(i, j));
    os << "]" << (i + 1 < b.rows() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

inline LatticeFile lattice_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("lattice file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("basis")) throw InvalidArgument("lattice file needs n and basis");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) throw InvalidArgument("lattice n must be positive");
  const auto n = j["n"].get<std::size_t>();
  const auto& rows = j["basis"];
  if (!rows.is_array() || rows.size() != n) throw InvalidArgument("basis must have n rows");
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) throw InvalidArgument("basis rows must have n entries");
    for (std::size_t k = 0; k < n; ++k) {
      if (!rows[i][k].is_number()) throw InvalidArgument("basis entries must be numbers");
      b(i, k) = rows[i][k].get<double>();
    }
  }
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "";
  return {std::move(name), GeneratorMatrix(std::move(b))};
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

inline LatticeFile read_lattice(const std::filesystem::path& path) { return lattice_from_string(read_text(path)); }

inline void write_lattice(const std::filesystem::path& path, const std::string& name, const Matrix& b) {
  write_text(path, lattice_to_string(name, b));
}

inline std::string theta_csv(const std::vector<ThetaStep>& steps) {
  std::string s = "r2,cumulative_count\n";
  for (const auto& t : steps) s += format_double(t.r2) + "," + std::to_string(t.cumulative) + "\n";
  return s;
}

inline nlohmann::json rational_json(const Rational& q) {
  return nlohmann::json::array({boost::multiprecision::numerator(q).str(), boost::multiprecision::denominator(q).str()});
}

inline Rational rational_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    throw InvalidArgument("rational must be a [numerator, denominator] string pair");
  const BigInt den(j[1].get<std::string>());
  if (den == 0) throw InvalidArgument("zero denominator");
  return Rational(BigInt(j[0].get<std::string>()), den);
}

inline nlohmann::json rational_matrix_json(const RationalMatrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) r.push_back(rational_json(a(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline RationalMatrix rational_matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidArgument("rational matrix must be a nonempty array");
  RationalMatrix a(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (rows[i].size() != a.cols()) throw InvalidArgument("ragged rational matrix");
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = rational_from_json(rows[i][j]);
  }
  return a;
}

inline nlohmann::json float_matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline nlohmann::json match_report_json(const MatchReport& rep) {
  nlohmann::json shells = nlohmann::json::array();
  for (const auto& s : rep.shells) {
    nlohmann::json e{{"exact_r2", s.exact_norm}, {"exact_count", s.exact_count}, {"matched", s.matched}};
    if (s.numerical_count > 0) {
      e["numerical_r2"] = s.numerical_norm;
      e["numerical_count"] = s.numerical_count;
    }
    shells.push_back(std::move(e));
  }
  return {{"all_match", rep.all_match}, {"shells", std::move(shells)}};
}

}  // namespace latq
