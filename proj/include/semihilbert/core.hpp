#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace semihilbert {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  ZeroWeight,
  DimensionMismatch,
  ZeroRank,
  NotABounded,
  MinModulusTooSmall,
  RankTooLarge,
  BadSpec,
  InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroRank: return "ZeroRank";
    case ErrorKind::NotABounded: return "NotABounded";
    case ErrorKind::MinModulusTooSmall: return "MinModulusTooSmall";
    case ErrorKind::RankTooLarge: return "RankTooLarge";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical thresholds shared by every module. Every decision routine takes
/// a Tolerances argument so callers can tighten or loosen individual gates.
template <typename Real>
struct Tolerances {
  /// Relative eigenvalue cutoff that defines rank A.
  Real rank = Real(1e-10);
  /// Relative Hermitian defect accepted in a weight matrix.
  Real hermiticity = Real(1e-8);
  /// Scalar comparisons of computed quantities (A-boundedness, unit checks).
  Real num = Real(1e-9);
  /// Equality decisions on scalar identities (parallelism, BJ, Daugavet).
  Real decision = Real(1e-7);
  /// m_A(S) <= gate * ||S||_A disables the sup-form and center of mass.
  Real min_modulus_gate = Real(1e-8);
  /// Agreement between two routes computing the same scalar.
  Real cross = Real(1e-7);
  /// Limit-formula check for the center of mass at a finite witness.
  Real formula = Real(1e-6);
  /// PSD test: min eigenvalue of w^2 A - T*AT must be >= -psd * ||A||.
  Real psd = Real(1e-8);

  template <typename Other>
  Tolerances<Other> cast() const {
    return {Other(rank), Other(hermiticity), Other(num), Other(decision),
            Other(min_modulus_gate), Other(cross), Other(formula), Other(psd)};
  }
};

/// A decision record: a verdict together with the two scalars it compared,
/// the residual that produced the verdict and, where one exists, a witness.
/// verdict == (residual <= tol) always holds.
template <typename Real>
struct Certificate {
  std::string method;
  bool verdict = false;
  Real lhs = 0;
  Real rhs = 0;
  Real residual = 0;
  Real tol = 0;
  std::optional<Vector<Real>> witness_vector;
  std::optional<Complex<Real>> witness_lambda;

  static Certificate decide(std::string method, Real lhs, Real rhs, Real residual, Real tol) {
    Certificate c;
    c.method = std::move(method);
    c.lhs = lhs;
    c.rhs = rhs;
    c.residual = residual;
    c.tol = tol;
    c.verdict = residual <= tol;
    return c;
  }
};

/// |a - b| relative to the larger magnitude; 0 when both vanish.
template <typename Real>
Real relative_gap(Real a, Real b) {
  using std::abs;
  using std::max;
  const Real scale = max(abs(a), abs(b));
  if (scale == Real(0)) return Real(0);
  return abs(a - b) / scale;
}

/// Amount by which lhs <= rhs is violated, relative to the larger magnitude.
template <typename Real>
Real relative_excess(Real lhs, Real rhs) {
  using std::abs;
  using std::max;
  const Real scale = max({abs(lhs), abs(rhs), std::numeric_limits<Real>::min()});
  return max(Real(0), lhs - rhs) / scale;
}

}  // namespace semihilbert
