#pragma once

// Random instances and the executable property suite.

#include "semihilbert/core.hpp"
#include "semihilbert/operators.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semihilbert::harness {

enum class Family { Generic, Diagonal, ASelfadjoint, ANormal, NilpotentReduced, RankOne };

inline constexpr std::array<Family, 6> kFamilies{Family::Generic,  Family::Diagonal,
                                                 Family::ASelfadjoint, Family::ANormal,
                                                 Family::NilpotentReduced, Family::RankOne};

/// How the second operator S relates to T.
enum class PairMode { Independent, Identity, Sharp, Multiple };

inline constexpr std::array<PairMode, 4> kPairModes{PairMode::Independent, PairMode::Identity,
                                                    PairMode::Sharp, PairMode::Multiple};

const char* to_string(Family f);
const char* to_string(PairMode m);
std::optional<Family> family_from_string(std::string_view s);
std::optional<PairMode> pair_mode_from_string(std::string_view s);

struct InstanceSpec {
  int dim = 2;
  int rank = 2;
  double entry_scale = 1.0;
  std::uint64_t seed = 0;
  Family family = Family::Generic;
  PairMode pair = PairMode::Independent;
};

struct Instance {
  InstanceSpec spec;
  WeightPtr<double> weight;
  Matrix<double> T;
  Matrix<double> S;
  /// Factors of T for the rank_one family.
  Vector<double> x;
  Vector<double> y;
};

/// A = V diag(d) V^* with Haar-like V and log-uniform d in
/// [1e-3, 1e3] * entry_scale on exactly `rank` coordinates; T per family,
/// rescaled so that ||T||_A is log-uniform in [1/2, 2]; S per pair mode.
/// Throws BadSpec unless 1 <= rank <= dim <= 64.
Instance generate(const InstanceSpec& spec);

/// 64-bit mixer used to derive independent per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct OracleValues {
  double norm = 0;
  double omega = 0;
  double davis_wielandt = 0;
  /// sup over A-unit x of |<Tx, Sx>_A|.
  double pairing = 0;
  double distance = 0;
  long points = 0;
};

/// Grid evaluation of the defining suprema over the A-unit sphere and of
/// inf over gamma of ||T + gamma S||_A, independent of the spectral routes.
/// Throws RankTooLarge when rank A > 3.
OracleValues brute_oracle(const Operator<double>& T, const Operator<double>& S,
                          int grid_density);

struct PropertyStats {
  std::string name;
  long trials = 0;
  long passes = 0;
  long failures = 0;
  double max_residual = 0;
  std::uint64_t worst_seed = 0;
  /// Verdict counts for decision properties; both must be positive for
  /// branch coverage.
  bool decision = false;
  long true_verdicts = 0;
  long false_verdicts = 0;
};

struct FailureRecord {
  std::string property;
  std::uint64_t seed = 0;
  double residual = 0;
  std::string reproducer;
};

struct SuiteConfig {
  int trials = 100;
  std::uint64_t seed = 7;
  std::vector<int> sizes{2, 3, 4, 5, 6};
  Tolerances<double> tol;
  /// 0 means SEMIHILBERT_THREADS, falling back to the hardware count.
  int threads = 0;
  std::filesystem::path repro_dir = "suite_failures";
  /// Oracle grid density for ranks <= 3; 0 disables the oracle property.
  int oracle_density = 40;
};

struct SuiteReport {
  SuiteConfig config;
  long trials = 0;
  long resamples = 0;
  std::vector<PropertyStats> properties;
  std::vector<FailureRecord> failures;
  bool coverage_ok = true;
  std::vector<std::string> coverage_gaps;
  double wall_seconds = 0;
  int threads_used = 1;

  long failure_count() const;
};

int thread_budget(int requested);

SuiteReport run_suite(const SuiteConfig& config);

}  // namespace semihilbert::harness
