#include "test_support.hpp"

#include "semihilbert/report.hpp"

#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace semihilbert;
using namespace semihilbert::io;
using test::diag;

namespace {

Problem problem(const Matrix<double>& A, const Matrix<double>& T) {
  Problem p;
  p.dim = static_cast<int>(A.rows());
  p.A = A;
  p.T = T;
  return p;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "semihilbert_test_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Io, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Io, FormatDoubleIsShortestAndLocaleFree) {
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5e-10), "-2.5e-10");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(std::stod(format_double(M_PI)), M_PI);
  std::setlocale(LC_NUMERIC, "C");
}

TEST(Io, ParseErrorsCarryLineAndColumn) {
  try {
    parse_json_text("{\n  \"dim\": 2,\n  \"A\": [1, 2\n}");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_GE(e.column(), 1u);
  }
}

TEST(Io, ProblemValidation) {
  auto reject = [](const std::string& text) {
    EXPECT_THROW(problem_from_json(parse_json_text(text)), FormatError) << text;
  };
  reject("[]");
  reject(R"({"A": [[1]], "T": [[1]]})");
  reject(R"({"dim": 0, "A": [], "T": []})");
  reject(R"({"dim": 2, "A": [[1, 0], [0, 1]], "T": [[1, 0]]})");
  reject(R"({"dim": 1, "A": [[[1, 0, 0]]], "T": [[1]]})");
  reject(R"({"dim": 1, "A": [["x"]], "T": [[1]]})");
  reject(R"({"dim": 1, "A": [[1]]})");
  reject(R"({"dim": 1, "A": [[1]], "T": [[1]], "options": {"grid": 2}})");
  reject(R"({"dim": 1, "A": [[1]], "T": [[1]], "options": {"tol": {"decision": -1}}})");
}

TEST(Io, ProblemRoundTrip) {
  const Json j = parse_json_text(R"({
    "dim": 2,
    "A": [[[1, 0], [0, 0.5]], [[0, -0.5], 3]],
    "T": [[[1, 2], 0], [0, [-1, 0]]],
    "S": [[1, 0], [0, 1]],
    "options": {"tol": 1e-8, "grid": 64, "seed": 42}})");
  const Problem p = problem_from_json(j);
  EXPECT_EQ(p.dim, 2);
  EXPECT_EQ(p.A(0, 1), Complex<double>(0, 0.5));
  EXPECT_EQ(p.T(0, 0), Complex<double>(1, 2));
  ASSERT_TRUE(p.S.has_value());
  EXPECT_EQ(p.options.tol.decision, 1e-8);
  EXPECT_EQ(p.options.grid, 64);
  EXPECT_EQ(p.options.seed, 42u);
  const Problem q = problem_from_json(problem_to_json(p));
  EXPECT_EQ((q.A - p.A).norm(), 0.0);
  EXPECT_EQ((q.T - p.T).norm(), 0.0);
  EXPECT_EQ(problem_to_json(q).dump(), problem_to_json(p).dump());
  EXPECT_EQ(problem_hash(q), problem_hash(p));
}

TEST(Report, ExampleTwo) {
  const Json r = analyze(problem(diag({1, 2}), diag({1, -1})));
  EXPECT_NEAR(r["scalars"]["norm"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(r["scalars"]["norm_of_shift"].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(r["scalars"]["davis_wielandt"].get<double>(), std::sqrt(2.0), 1e-9);
  EXPECT_TRUE(r["certificates"]["parallel_to_identity"]["verdict"].get<bool>());
  EXPECT_TRUE(r["certificates"]["daugavet"]["verdict"].get<bool>());
  EXPECT_TRUE(r["certificates"]["daugavet"]["agree"].get<bool>());
  EXPECT_TRUE(r["certificates"]["normaloid_cluster"]["agree"].get<bool>());
  for (const auto& c : r["certificates"]["normaloid_cluster"]["conditions"]) {
    EXPECT_TRUE(c.contains("residual"));
    EXPECT_TRUE(c.contains("tol"));
  }
  EXPECT_EQ(r["provenance"]["input_sha256"].get<std::string>().size(), 64u);
}

TEST(Report, ThreeDimensionalExample) {
  const Json r = analyze(problem(diag({1, 1, 0}), diag({2, -1, 1})));
  EXPECT_NEAR(r["scalars"]["distance_to_line"].get<double>(), 1.5, 1e-9);
  EXPECT_NEAR(r["scalars"]["identity_distance_to_line"].get<double>(), 1.0, 1e-9);
  EXPECT_FALSE(r["certificates"]["bj_identity"]["T_I"]["verdict"].get<bool>());
  EXPECT_TRUE(r["certificates"]["bj_identity"]["I_T"]["verdict"].get<bool>());
  EXPECT_NEAR(r["scalars"]["center_of_mass"][0].get<double>(), 0.5, 1e-9);
}

TEST(Report, ReplayFromReportGivesIdenticalScalars) {
  Problem p = problem(diag({2, 0.5, 0}), test::Matrix::Zero(3, 3));
  p.T.topLeftCorner(2, 2) << Complex<double>(0.3, 1), 2, Complex<double>(0, -1), -0.7;
  p.T(2, 2) = 5;
  p.options.seed = 99;
  const Json first = analyze(p);
  const auto path = write_temp("report.json", first.dump(2));
  const Problem replay = read_problem(path);
  const Json second = analyze(replay);
  EXPECT_EQ(first["scalars"].dump(), second["scalars"].dump());
  EXPECT_EQ(first["provenance"]["input_sha256"], second["provenance"]["input_sha256"]);
}

TEST(Report, UnboundedOperatorCarriesDouglasDiagnostic) {
  test::Matrix T = test::Matrix::Zero(2, 2);
  T(0, 1) = 1;
  try {
    analyze(problem(diag({1, 0}), T));
    FAIL() << "expected UnboundedError";
  } catch (const UnboundedError& e) {
    ASSERT_EQ(e.diagnostic().size(), 1u);
    EXPECT_EQ(e.diagnostic()[0]["operator"], "T");
    EXPECT_NEAR(e.diagnostic()[0]["range_residual"].get<double>(), 0.5, 1e-12);
  }
}

TEST(Range, IdentityGivesSinglePoint) {
  const auto rows = lines(range_csv(problem(diag({1, 3}), diag({1, 1})), 16));
  ASSERT_EQ(rows.size(), 18u);
  EXPECT_EQ(rows.front(), "theta,re,im");
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const auto tail = rows[i].substr(rows[i].find(','));
    EXPECT_EQ(tail, ",1,0") << rows[i];
  }
  EXPECT_EQ(rows.back(), "# center=1,0 radius=0");
}

TEST(Range, SegmentExamplesStayInsideDisc) {
  struct Case {
    test::Matrix A, T;
    double lo, hi;
  };
  const std::vector<Case> cases{{diag({1, 2}), diag({1, -1}), -1, 1},
                                {diag({1, 1, 0}), diag({2, -1, 1}), -1, 2}};
  for (const auto& c : cases) {
    const auto rows = lines(range_csv(problem(c.A, c.T), 64));
    double cre = 0, cim = 0, radius = 0;
    ASSERT_EQ(std::sscanf(rows.back().c_str(), "# center=%lf,%lf radius=%lf", &cre, &cim, &radius), 3);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
      double theta = 0, re = 0, im = 0;
      ASSERT_EQ(std::sscanf(rows[i].c_str(), "%lf,%lf,%lf", &theta, &re, &im), 3);
      EXPECT_GE(re, c.lo - 1e-12);
      EXPECT_LE(re, c.hi + 1e-12);
      EXPECT_NEAR(im, 0.0, 1e-12);
      EXPECT_LE(std::hypot(re - cre, im - cim), radius + 1e-9);
    }
    EXPECT_NEAR(cre, 0.5 * (c.lo + c.hi), 1e-9);
    EXPECT_NEAR(radius, 0.5 * (c.hi - c.lo), 1e-9);
  }
}

TEST(SuiteJson, ScalarsExcludeTiming) {
  harness::SuiteReport r;
  r.trials = 3;
  r.wall_seconds = 1.25;
  r.threads_used = 4;
  r.properties.push_back({"p", 3, 3, 0, 1e-12, 17, true, 2, 1});
  const Json j = suite_report_to_json(r);
  EXPECT_EQ(j["timing"]["wall_seconds"], 1.25);
  EXPECT_EQ(j["scalars"].dump().find("wall"), std::string::npos);
  EXPECT_EQ(j["scalars"]["properties"][0]["true_verdicts"], 2);
}
