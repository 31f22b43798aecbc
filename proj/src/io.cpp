#include "semihilbert/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace semihilbert::io {

Json complex_to_json(Complex<double> z) { return Json::array({z.real(), z.imag()}); }

Complex<double> complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const Matrix<double>& M) {
  Json rows = Json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < M.cols(); ++k) row.push_back(complex_to_json(M(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix<double> matrix_from_json(const Json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw FormatError(where + ": expected " + std::to_string(dim) + " rows");
  Matrix<double> M(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw FormatError(where + "[" + std::to_string(i) + "]: expected " + std::to_string(dim) +
                        " entries");
    for (int k = 0; k < dim; ++k)
      M(i, k) = complex_from_json(row[k], where + "[" + std::to_string(i) + "][" +
                                              std::to_string(k) + "]");
  }
  if (!M.allFinite()) throw FormatError(where + ": non-finite entry");
  return M;
}

Json vector_to_json(const Vector<double>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Json tolerances_to_json(const Tolerances<double>& tol) {
  return Json{{"rank", tol.rank},         {"hermiticity", tol.hermiticity},
              {"num", tol.num},           {"decision", tol.decision},
              {"min_modulus_gate", tol.min_modulus_gate},
              {"cross", tol.cross},       {"formula", tol.formula},
              {"psd", tol.psd}};
}

Tolerances<double> tolerances_from_json(const Json& j, Tolerances<double> base) {
  if (j.is_number()) {
    base.decision = j.get<double>();
    return base;
  }
  if (!j.is_object()) throw FormatError("options.tol: expected a number or an object");
  auto take = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    if (!j[key].is_number() || !(j[key].get<double>() > 0))
      throw FormatError(std::string("options.tol.") + key + ": expected a positive number");
    field = j[key].get<double>();
  };
  take("rank", base.rank);
  take("hermiticity", base.hermiticity);
  take("num", base.num);
  take("decision", base.decision);
  take("min_modulus_gate", base.min_modulus_gate);
  take("cross", base.cross);
  take("formula", base.formula);
  take("psd", base.psd);
  return base;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw FormatError("malformed JSON: " + std::string(e.what()), line, column);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem problem_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("problem: expected a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw FormatError("dim: expected an integer");
  const auto dim = j["dim"].get<long long>();
  if (dim < 1 || dim > 512) throw FormatError("dim: must lie in [1, 512]");
  Problem p;
  p.dim = static_cast<int>(dim);
  if (!j.contains("A")) throw FormatError("A: missing");
  if (!j.contains("T")) throw FormatError("T: missing");
  p.A = matrix_from_json(j["A"], p.dim, "A");
  p.T = matrix_from_json(j["T"], p.dim, "T");
  if (j.contains("S") && !j["S"].is_null()) p.S = matrix_from_json(j["S"], p.dim, "S");
  if (j.contains("options")) {
    const Json& o = j["options"];
    if (!o.is_object()) throw FormatError("options: expected an object");
    if (o.contains("tol")) p.options.tol = tolerances_from_json(o["tol"], p.options.tol);
    if (o.contains("grid")) {
      if (!o["grid"].is_number_integer() || o["grid"].get<long long>() < 8)
        throw FormatError("options.grid: expected an integer >= 8");
      p.options.grid = o["grid"].get<int>();
    }
    if (o.contains("seed")) {
      if (!o["seed"].is_number_unsigned()) throw FormatError("options.seed: expected an unsigned integer");
      p.options.seed = o["seed"].get<std::uint64_t>();
    }
  }
  return p;
}

Json problem_to_json(const Problem& p) {
  Json j{{"dim", p.dim}, {"A", matrix_to_json(p.A)}, {"T", matrix_to_json(p.T)}};
  if (p.S) j["S"] = matrix_to_json(*p.S);
  j["options"] = Json{{"tol", tolerances_to_json(p.options.tol)},
                      {"grid", p.options.grid},
                      {"seed", p.options.seed}};
  return j;
}

Problem read_problem(const std::filesystem::path& path) {
  const Json j = parse_json_text(read_file(path));
  if (j.is_object() && j.contains("provenance") && j["provenance"].contains("input"))
    return problem_from_json(j["provenance"]["input"]);
  return problem_from_json(j);
}

Json certificate_to_json(const Certificate<double>& c) {
  Json j{{"method", c.method},     {"verdict", c.verdict}, {"lhs", c.lhs},
         {"rhs", c.rhs},           {"residual", c.residual}, {"tol", c.tol}};
  if (c.witness_vector) j["witness_vector"] = vector_to_json(*c.witness_vector);
  if (c.witness_lambda) j["witness_lambda"] = complex_to_json(*c.witness_lambda);
  return j;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (x == 0) x = 0;  // drop the sign of zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace semihilbert::io
