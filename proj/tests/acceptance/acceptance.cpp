// Acceptance run: one PASS/FAIL line per criterion. argv[1] is the CLI
// binary used by the determinism criterion; argv[2] a scratch directory.

#include "semihilbert/harness.hpp"
#include "semihilbert/report.hpp"
#include "semihilbert/semihilbert.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>

using namespace semihilbert;
using namespace semihilbert::harness;

namespace {

using Mat = Matrix<double>;
using Op = Operator<double>;
using Clock = std::chrono::steady_clock;

constexpr double kExampleTol = 1e-9;
constexpr double kExampleSeconds = 0.1;
constexpr int kClusterInstances = 1000;
constexpr double kClusterResidual = 1e-6;
constexpr int kNormaloidInstances = 500;
constexpr int kChainInstances = 1000;
constexpr double kChainTol = 1e-8;
constexpr int kOracleInstances = 200;
constexpr int kOracleDensity = 200;
constexpr double kOracleTol = 5e-3;
constexpr double kOracleDwTol = 1e-2;
constexpr int kDiscInstances = 200;
constexpr int kDiscGrid = 512;
constexpr double kDiscSlack = -1e-7;
constexpr int kRankOnePairs = 500;
constexpr double kRankOneTol = 1e-8;
constexpr double kSuiteSeconds = 60;

// Trials of the shared suite run; chosen so that the sparsest property in
// criterion 6 (growth on constructed orthogonal pairs) exceeds 1000.
constexpr int kSuiteTrials = 1500;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Mat diag(std::initializer_list<double> v) {
  Mat M = Mat::Zero(v.size(), v.size());
  int i = 0;
  for (double x : v) M(i, i) = x, ++i;
  return M;
}

WeightPtr<double> weight(const Mat& A) { return std::make_shared<const Weight<double>>(make_weight(A)); }

void example_two() {
  const auto t0 = Clock::now();
  const auto A = weight(diag({1, 2}));
  const Op T(A, diag({1, -1}));
  const Op I = identity(A);
  const double nt = *seminorm(T);
  const double shift = *seminorm(T + I);
  const auto par = is_parallel(T, I);
  const auto dau = daugavet_check(T);
  const auto dw = davis_wielandt_radius(T);
  const double w = numerical_radius(T).value;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const double err = std::max({std::abs(nt - 1), std::abs(shift - 2), std::abs(par.lambda_star - 1.0),
                               std::abs(dw.value - std::sqrt(2.0)),
                               std::abs(dw.value - std::sqrt(w * w + std::pow(nt, 4)))});
  const bool pass = err <= kExampleTol && par.certificate.verdict && dau.equation.verdict && dau.agree &&
                    secs < kExampleSeconds;
  report(1, pass, fmt("example (2): max error %.2e, parallel/daugavet verdicts true, %.4f s", err, secs));
}

void example_three() {
  double err = 0;
  bool verdicts = true;
  for (double lam : {0.5, 1.0, 3.0}) {
    const auto A = weight(diag({0, 1, 0}));
    const Op T(A, diag({0, lam, 1}));
    const Op S(A, diag({lam, lam, 1}));
    const auto par = is_parallel(T, S);
    const auto& x = *par.certificate.witness_vector;
    err = std::max({err, std::abs(*seminorm(T) - lam) / lam, std::abs(*seminorm(S) - lam) / lam,
                    std::abs(*seminorm(T + S) - 2 * lam) / lam, std::abs(std::abs(x(1)) - 1),
                    std::abs(x(0)) + std::abs(x(2))});
    verdicts = verdicts && par.certificate.verdict;
  }
  report(2, err <= kExampleTol && verdicts,
         fmt("example (3) truncation, lambda in {0.5, 1, 3}: max error %.2e, witness on e2", err));
}

void c3_example() {
  const auto A = weight(diag({1, 1, 0}));
  const Op T(A, diag({2, -1, 1}));
  const Op I = identity(A);
  const double d1 = distance_to_line(T, I).distance;
  const double d2 = distance_to_line(I, T).distance;
  const double err = std::max({std::abs(d1 - 1.5), std::abs(*seminorm(T) - 2), std::abs(d2 - 1)});
  const bool ti = is_bj_orthogonal(T, I).verdict;
  const bool it = is_bj_orthogonal(I, T).verdict;
  report(3, err <= kExampleTol && !ti && it,
         fmt("C^3 example: d(T,CI) = %.12f, d(I,CT) = %.12f, bj(T,I) = %g, bj(I,T) = %g", d1, d2, ti, it));
}

const PropertyStats* find(const SuiteReport& r, const std::string& name) {
  for (const auto& p : r.properties)
    if (p.name == name) return &p;
  return nullptr;
}

/// Zero failures, enough instances and residuals within `bound`.
bool clean(const SuiteReport& r, const std::string& name, long need, double bound, std::string& detail) {
  const PropertyStats* p = find(r, name);
  if (!p) {
    detail += " " + name + "=missing";
    return false;
  }
  detail += " " + name + "=" + std::to_string(p->passes) + "/" + std::to_string(p->trials);
  return p->failures == 0 && p->trials >= need && p->max_residual <= bound;
}

void suite_criteria(const std::filesystem::path& scratch) {
  SuiteConfig cfg;
  cfg.trials = kSuiteTrials;
  cfg.seed = 20240601;
  cfg.sizes = {2, 3, 4, 5, 6};
  cfg.repro_dir = scratch / "suite_failures";
  const SuiteReport r = run_suite(cfg);
  std::printf("suite: %ld trials, %ld resamples, %.1f s on %d threads, %ld failures\n", r.trials, r.resamples,
              r.wall_seconds, r.threads_used, r.failure_count());
  for (const auto& f : r.failures) std::printf("  failure %s reproducer %s\n", f.property.c_str(), f.reproducer.c_str());

  std::string d4;
  bool c4 = clean(r, "parallel_routes", kClusterInstances, kClusterResidual, d4);
  c4 = clean(r, "bj_five_way", kClusterInstances, kClusterResidual, d4) && c4;
  report(4, c4, "parallelism routes and BJ five-way consensus:" + d4);

  std::string d5;
  const bool c5 = clean(r, "normaloid_cluster", kNormaloidInstances, kClusterResidual, d5);
  const PropertyStats* nc = find(r, "normaloid_cluster");
  if (nc) d5 += " (true " + std::to_string(nc->true_verdicts) + ", false " + std::to_string(nc->false_verdicts) + ")";
  report(5, c5 && nc && nc->true_verdicts > 0 && nc->false_verdicts > 0, "normaloid cluster:" + d5);

  std::string d6;
  bool c6 = true;
  for (const char* name : {"radius_ordering", "dw_sandwich", "power_inequality", "distance_chain", "zamani_growth"})
    c6 = clean(r, name, kChainInstances, kChainTol, d6) && c6;
  report(6, c6, "inequality chains:" + d6);
}

/// Ranks 1..3 over every family and pair mode.
Instance small_rank_instance(int k, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, k));
  const int n = std::uniform_int_distribution<int>(1, 6)(rng);
  const int r = std::uniform_int_distribution<int>(1, std::min(3, n))(rng);
  const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-1, 1)(rng));
  return generate({n, r, scale, mix_seed(seed, 1000 + k), kFamilies[k % 6], kPairModes[(k / 6) % 4]});
}

void oracle_criterion() {
  double worst = 0;
  double worst_dw = 0;
  for (int k = 0; k < kOracleInstances; ++k) {
    const Instance inst = small_rank_instance(k, 77);
    const Op T(inst.weight, inst.T);
    const Op S(inst.weight, inst.S);
    const auto o = brute_oracle(T, S, kOracleDensity);
    worst = std::max({worst, std::abs(o.norm - *seminorm(T)), std::abs(o.omega - numerical_radius(T).value),
                      std::abs(o.distance - distance_to_line(T, S).distance)});
    worst_dw = std::max(worst_dw, std::abs(o.davis_wielandt - davis_wielandt_radius(T).value));
  }
  report(7, worst <= kOracleTol && worst_dw <= kOracleDwTol,
         fmt("oracle at density 200 over 200 instances: max |diff| %.2e (norm, omega, distance), %.2e (dw)",
             worst, worst_dw));
}

void disc_criterion() {
  double slack = INFINITY;
  for (int k = 0; k < kDiscInstances; ++k) {
    std::mt19937_64 rng(mix_seed(91, k));
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int r = std::uniform_int_distribution<int>(1, n)(rng);
    const Instance inst = generate({n, r, 1.0, mix_seed(91, 1000 + k), kFamilies[k % 6], PairMode::Identity});
    const Op T(inst.weight, inst.T);
    const auto c = center_of_mass(T, identity(inst.weight));
    for (const auto& s : numerical_range_samples(T, kDiscGrid))
      slack = std::min(slack, c.distance - std::abs(s.point - c.value));
  }
  report(8, slack >= kDiscSlack, fmt("disc containment over 200 instances, grid 512: min slack %.2e", slack));
}

void rank_one_criterion() {
  double worst = 0;
  int disagreements = 0;
  int dependent = 0;
  for (int k = 0; k < kRankOnePairs; ++k) {
    std::mt19937_64 rng(mix_seed(123, k));
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int r = std::uniform_int_distribution<int>(1, n)(rng);
    const Instance inst = generate({n, r, 1.0, mix_seed(123, 1000 + k), Family::RankOne, PairMode::Identity});
    const auto& A = *inst.weight;
    const double nx = semi_norm(A, inst.x);
    const double ny = semi_norm(A, inst.y);
    const double p = std::abs(semi_inner(A, inst.x, inst.y));
    const Op T = rank_one(inst.weight, inst.x, inst.y);
    const double scale = std::max(nx * ny, 1e-300);
    worst = std::max({worst, std::abs(*seminorm(T) - nx * ny) / scale,
                      std::abs(numerical_radius(T).value - 0.5 * (p + nx * ny)) / scale});
    const auto rp = rank_one_parallel_identity(inst.weight, inst.x, inst.y);
    disagreements += rp.agree ? 0 : 1;
    dependent += rp.dependence.verdict ? 1 : 0;
  }
  report(9, worst <= kRankOneTol && disagreements == 0,
         fmt("rank-one closed forms over 500 pairs: max relative error %.2e, %g disagreements (%g dependent)",
             worst, disagreements, dependent));
}

std::string scalars_of(const std::filesystem::path& path) {
  return io::parse_json_text(io::read_file(path))["scalars"].dump();
}

void determinism_criterion(const std::string& cli, const std::filesystem::path& scratch) {
  std::string sections[2];
  double seconds[2] = {0, 0};
  bool exits = true;
  for (int i = 0; i < 2; ++i) {
    const auto out = scratch / ("suite_run" + std::to_string(i) + ".json");
    const std::string cmd = "\"" + cli + "\" suite --trials 100 --seed 7 --output \"" + out.string() +
                            "\" --repro-dir \"" + (scratch / "cli_failures").string() + "\" > \"" +
                            (scratch / ("suite_run" + std::to_string(i) + ".txt")).string() + "\"";
    const auto t0 = Clock::now();
    exits = std::system(cmd.c_str()) == 0 && exits;
    seconds[i] = std::chrono::duration<double>(Clock::now() - t0).count();
    sections[i] = std::filesystem::exists(out) ? scalars_of(out) : "";
  }
  const bool same = !sections[0].empty() && sections[0] == sections[1];
  report(10, exits && same && seconds[0] < kSuiteSeconds && seconds[1] < kSuiteSeconds,
         fmt("suite --trials 100 --seed 7 twice: exit 0 = %g, identical scalars = %g, %.1f s and %.1f s", exits,
             same, seconds[0], seconds[1]));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <semihilbert-cli> <scratch-dir>\n");
    return 2;
  }
  const std::filesystem::path scratch = argv[2];
  std::filesystem::create_directories(scratch);
  const std::pair<int, std::function<void()>> steps[] = {
      {1, example_two},
      {2, example_three},
      {3, c3_example},
      {4, [&] { suite_criteria(scratch); }},
      {7, oracle_criterion},
      {8, disc_criterion},
      {9, rank_one_criterion},
      {10, [&] { determinism_criterion(argv[1], scratch); }}};
  for (const auto& [id, step] : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%s: %d criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
