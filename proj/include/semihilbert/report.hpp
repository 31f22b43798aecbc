#pragma once

// Analysis and suite reports as JSON, plus the range CSV.

#include "semihilbert/harness.hpp"
#include "semihilbert/io.hpp"

#include <optional>
#include <string>

namespace semihilbert::io {

inline constexpr const char* kToolName = "semihilbert";
inline constexpr const char* kToolVersion = "0.1.0";

/// Thrown by analyze when T or S leaks N(A) into R(A).
class UnboundedError : public std::runtime_error {
 public:
  UnboundedError(const std::string& what, Json diagnostic)
      : std::runtime_error(what), diagnostic_(std::move(diagnostic)) {}
  const Json& diagnostic() const { return diagnostic_; }

 private:
  Json diagnostic_;
};

/// Full analysis of (A, T, S); S defaults to the identity. Identical
/// problems give identical reports except for provenance.samples.
Json analyze(const Problem& problem, const std::optional<std::string>& samples_path = {});

/// SHA-256 of the canonical serialization of the problem.
std::string problem_hash(const Problem& problem);

/// Boundary samples of W_A(T) as `theta,re,im` rows followed by
/// `# center=<re>,<im> radius=<r>` for the disc D(c_A(T, I), d_A(T, C I)).
std::string range_csv(const Problem& problem, int grid);

/// "scalars" is a pure function of the configuration; wall time and thread
/// count live under "timing".
Json suite_report_to_json(const harness::SuiteReport& report);

}  // namespace semihilbert::io
