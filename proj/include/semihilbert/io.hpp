#pragma once

// JSON problem and report files. Complex numbers are [re, im] pairs and
// matrices are row-major arrays of rows.

#include "semihilbert/core.hpp"
#include "semihilbert/geometry.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace semihilbert::io {

using Json = nlohmann::ordered_json;

struct ProblemOptions {
  Tolerances<double> tol;
  int grid = 256;
  std::uint64_t seed = 7;
};

struct Problem {
  int dim = 0;
  Matrix<double> A;
  Matrix<double> T;
  std::optional<Matrix<double>> S;
  ProblemOptions options;
};

/// Parse or validation failure; `line` and `column` are 1-based and zero
/// when not applicable.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

Json complex_to_json(Complex<double> z);
Complex<double> complex_from_json(const Json& j, const std::string& where);
Json matrix_to_json(const Matrix<double>& M);
Matrix<double> matrix_from_json(const Json& j, int dim, const std::string& where);
Json vector_to_json(const Vector<double>& v);
Json tolerances_to_json(const Tolerances<double>& tol);
Tolerances<double> tolerances_from_json(const Json& j, Tolerances<double> base);

/// Reads text into JSON, mapping parser byte offsets to line and column.
Json parse_json_text(const std::string& text);
std::string read_file(const std::filesystem::path& path);

Problem problem_from_json(const Json& j);
Json problem_to_json(const Problem& p);
/// Accepts a problem file, or a report file carrying its input under
/// provenance.input.
Problem read_problem(const std::filesystem::path& path);

Json certificate_to_json(const Certificate<double>& c);

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double x);

}  // namespace semihilbert::io
