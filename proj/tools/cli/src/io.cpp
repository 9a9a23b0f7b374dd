// SPDX-License-Identifier: Apache-2.0

#include "wvqp_cli/io.hpp"

#include "wvqp/errors.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

namespace wvqp::cli {

namespace {

using nlohmann::json;

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InvariantViolation(std::string(what) + " must be a number");
  return j.get<double>();
}

Matrix real_matrix(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) throw InvariantViolation(std::string(what) + " must be a non-empty array of rows");
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = static_cast<Eigen::Index>(rows.front().is_array() ? rows.front().size() : 0);
  Matrix m(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw InvariantViolation(std::string(what) + " rows must all have the same length");
    }
    for (Eigen::Index k = 0; k < n_cols; ++k) m(i, k) = number(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

Vector real_vector(const json& values, const char* what) {
  if (!values.is_array() || values.empty()) throw InvariantViolation(std::string(what) + " must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(values[i], what);
  return v;
}

// {"re": [..], "im": [..]} with im optional.
Vector complex_flat(const json& j, const char* what) {
  Vector v = real_vector(j["re"], what);
  if (j.contains("im")) {
    const Vector im = real_vector(j["im"], what);
    if (im.size() != v.size()) throw DimMismatch(std::string(what) + ": re/im lengths differ");
    v += Complex(0.0, 1.0) * im;
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc{}) throw std::runtime_error("cannot format double");
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string header_comment(std::uint64_t scenario_hash, const Alpha& alpha) {
  return "# " + std::string(kToolName) + " " + std::string(kToolVersion) + " | scenario " +
         hex64(scenario_hash) + " | alpha " + format_double(alpha.s()) + "," + format_double(alpha.t());
}

json meta_object(std::uint64_t scenario_hash, const Alpha& alpha) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"scenario", hex64(scenario_hash)},
              {"alpha", to_json(alpha)}};
}

Alpha alpha_from_json(const json& j) {
  if (j.is_number()) return Alpha(j.get<double>());
  if (j.is_array() && (j.size() == 1 || j.size() == 2)) {
    return Alpha(number(j[0], "alpha"), j.size() == 2 ? number(j[1], "alpha") : 0.0);
  }
  if (j.is_object() && j.contains("re")) {
    return Alpha(number(j["re"], "alpha.re"), j.contains("im") ? number(j["im"], "alpha.im") : 0.0);
  }
  throw InvariantViolation("alpha must be a number, [re, im] or {\"re\", \"im\"}");
}

Alpha parse_alpha(std::string_view text) {
  const auto parse = [&](std::string_view part) {
    double v = 0.0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size()) {
      throw InvariantViolation("cannot parse alpha component '" + std::string(part) + "'");
    }
    return v;
  };
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return Alpha(parse(text));
  return Alpha(parse(text.substr(0, comma)), parse(text.substr(comma + 1)));
}

json to_json(const Alpha& alpha) { return json::array({alpha.s(), alpha.t()}); }

Matrix matrix_from_json(const json& j) {
  if (j.is_array()) return real_matrix(j, "matrix");
  if (!j.is_object() || !j.contains("re")) throw InvariantViolation("matrix must be an array or {\"re\", \"im\"}");
  // {"dim": n, "re": [n*n], "im": [n*n]} is row-major and flat.
  if (j.contains("dim")) {
    const std::size_t n = j["dim"].get<std::size_t>();
    const Vector flat = complex_flat(j, "matrix");
    if (n == 0 || static_cast<std::size_t>(flat.size()) != n * n) throw DimMismatch("matrix entries do not match dim*dim");
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = flat(static_cast<Eigen::Index>(r * n + c));
    return m;
  }
  Matrix m = real_matrix(j["re"], "matrix.re");
  if (j.contains("im")) {
    const Matrix im = real_matrix(j["im"], "matrix.im");
    if (im.rows() != m.rows() || im.cols() != m.cols()) throw DimMismatch("matrix re/im shapes differ");
    m += Complex(0.0, 1.0) * im;
  }
  return m;
}

Vector vector_from_json(const json& j) {
  if (j.is_array()) return real_vector(j, "vector");
  if (!j.is_object() || !j.contains("re")) throw InvariantViolation("vector must be an array or {\"re\", \"im\"}");
  Vector v = complex_flat(j, "vector");
  if (j.contains("dim") && j["dim"].get<std::size_t>() != static_cast<std::size_t>(v.size())) {
    throw DimMismatch("vector length does not match dim");
  }
  return v;
}

json to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json to_json(const Vector& v) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"dim", v.size()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace wvqp::cli
