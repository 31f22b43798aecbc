#pragma once

// The weight A and the semi-inner product it induces on C^n.
//
// Convention: <x, y> = y^* x, linear in the first argument and conjugate
// linear in the second. Hence <x, y>_A = <Ax, y> = y^* A x, and the A-adjoint
// identity reads <Tx, y>_A = <x, T^{#A} y>_A.

#include "semihilbert/core.hpp"
#include "semihilbert/detail/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace semihilbert {

/// Coordinates of a vector in the semi-Hilbertian space (C^n, <.,.>_A).
/// May lie in N(A), where its seminorm vanishes.
template <typename Real>
using SemiVector = Vector<Real>;

template <typename Real>
class Weight;

/// Validates M as a positive semidefinite weight and factorizes it.
///
/// The Hermitian part (M + M^*)/2 is factorized; eigenvalues at or below
/// rank_tol * max|eigenvalue| are dropped from the range.
template <typename Real>
Weight<Real> make_weight(const Matrix<Real>& M, Real rank_tol = Real(1e-10),
                         Real hermiticity_tol = Real(1e-8));

/// A validated positive semidefinite weight with its spectral data.
///
/// Eigenvalues are stored in descending order and `range_basis()` holds the
/// eigenvectors of the retained (positive) part, so V diag(d) V^* is the
/// matrix actually used. Instances are immutable; build them with
/// make_weight().
template <typename Real>
class Weight {
 public:
  Index dim() const { return matrix_.rows(); }
  Index rank() const { return range_basis_.cols(); }

  /// Cleaned weight V diag(d) V^*.
  const Matrix<Real>& matrix() const { return matrix_; }
  /// All eigenvalues of the Hermitian part of the input, descending.
  const RealVector<Real>& eigenvalues() const { return eigenvalues_; }
  const Matrix<Real>& eigenvectors() const { return eigenvectors_; }
  /// n x r orthonormal basis of R(A).
  const Matrix<Real>& range_basis() const { return range_basis_; }
  /// The r retained eigenvalues, descending and positive.
  const RealVector<Real>& range_eigenvalues() const { return d_; }

  const Matrix<Real>& sqrt() const { return sqrt_; }
  const Matrix<Real>& pinv() const { return pinv_; }
  const Matrix<Real>& pinv_sqrt() const { return pinv_sqrt_; }
  /// Orthogonal projector onto R(A).
  const Matrix<Real>& projector() const { return proj_; }
  Real rank_tol() const { return rank_tol_; }
  /// ||A|| (largest eigenvalue).
  Real norm() const { return d_(0); }

  /// D^{1/2} V^* x: isometric coordinates of x in the Hilbert space R(A^{1/2}).
  template <typename Derived>
  Vector<Real> reduce(const Eigen::MatrixBase<Derived>& x) const {
    return d_sqrt_.asDiagonal() * (range_basis_.adjoint() * x);
  }

  /// V D^{-1/2} u: the A-preimage of reduced coordinates, lying in R(A).
  template <typename Derived>
  Vector<Real> lift(const Eigen::MatrixBase<Derived>& u) const {
    return range_basis_ * (d_sqrt_.cwiseInverse().asDiagonal() * u);
  }

  /// V D^{-1/2} B D^{1/2} V^*: an operator with reduction B that vanishes
  /// on N(A).
  Matrix<Real> lift_matrix(const Matrix<Real>& B) const {
    const auto ds = d_sqrt_.template cast<Complex<Real>>();
    return range_basis_ * (ds.cwiseInverse().asDiagonal() * B * ds.asDiagonal()) *
           range_basis_.adjoint();
  }

  template <typename R>
  friend Weight<R> make_weight(const Matrix<R>& M, R rank_tol, R hermiticity_tol);

 private:
  Weight() = default;

  Matrix<Real> matrix_;
  RealVector<Real> eigenvalues_;
  Matrix<Real> eigenvectors_;
  Matrix<Real> range_basis_;
  RealVector<Real> d_;
  RealVector<Real> d_sqrt_;
  Matrix<Real> sqrt_;
  Matrix<Real> pinv_;
  Matrix<Real> pinv_sqrt_;
  Matrix<Real> proj_;
  Real rank_tol_ = 0;
};

template <typename Real>
Weight<Real> make_weight(const Matrix<Real>& M, Real rank_tol, Real hermiticity_tol) {
  using std::abs;
  using std::sqrt;
  if (M.rows() != M.cols() || M.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "weight must be a non-empty square matrix");
  if (!(rank_tol > 0 && rank_tol < 1))
    throw Error(ErrorKind::InvalidArgument, "rank_tol must lie in (0, 1)");
  if (!M.allFinite()) throw Error(ErrorKind::InvalidArgument, "weight has non-finite entries");

  const Real mnorm = M.norm();
  if (mnorm == Real(0)) throw Error(ErrorKind::ZeroWeight, "weight matrix is zero");
  const Real defect = (M - M.adjoint()).norm() / mnorm;
  if (defect > hermiticity_tol)
    throw Error(ErrorKind::NotHermitian,
                "relative Hermitian defect " + std::to_string(double(defect)));

  const Matrix<Real> H = (M + M.adjoint()) * Real(0.5);
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(H);
  const Index n = H.rows();

  Weight<Real> w;
  w.rank_tol_ = rank_tol;
  w.eigenvalues_ = es.eigenvalues().reverse();
  w.eigenvectors_ = es.eigenvectors().rowwise().reverse();

  const Real scale = w.eigenvalues_.cwiseAbs().maxCoeff();
  if (scale == Real(0)) throw Error(ErrorKind::ZeroWeight, "weight has no spectrum");
  const Real cutoff = rank_tol * scale;
  if (w.eigenvalues_(n - 1) < -cutoff)
    throw Error(ErrorKind::NotPSD,
                "eigenvalue " + std::to_string(double(w.eigenvalues_(n - 1))) + " is negative");

  Index r = 0;
  while (r < n && w.eigenvalues_(r) > cutoff) ++r;
  if (r == 0) throw Error(ErrorKind::ZeroWeight, "weight has no positive eigenvalue");

  w.range_basis_ = w.eigenvectors_.leftCols(r);
  w.d_ = w.eigenvalues_.head(r);
  w.d_sqrt_ = w.d_.cwiseSqrt();
  const auto& V = w.range_basis_;
  const Matrix<Real> Vd = V * w.d_.template cast<Complex<Real>>().asDiagonal();
  w.matrix_ = Vd * V.adjoint();
  w.sqrt_ = V * w.d_sqrt_.template cast<Complex<Real>>().asDiagonal() * V.adjoint();
  w.pinv_ = V * w.d_.cwiseInverse().template cast<Complex<Real>>().asDiagonal() * V.adjoint();
  w.pinv_sqrt_ =
      V * w.d_sqrt_.cwiseInverse().template cast<Complex<Real>>().asDiagonal() * V.adjoint();
  w.proj_ = V * V.adjoint();
  return w;
}

template <typename Real>
void check_dimension(const Weight<Real>& A, Index size, const char* what) {
  if (size != A.dim())
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " has size " + std::to_string(size) + ", weight has " +
                    std::to_string(A.dim()));
}

/// <x, y>_A = <Ax, y> = y^* A x.
template <typename Real>
Complex<Real> semi_inner(const Weight<Real>& A, const SemiVector<Real>& x,
                         const SemiVector<Real>& y) {
  check_dimension(A, x.size(), "x");
  check_dimension(A, y.size(), "y");
  return (y.adjoint() * (A.matrix() * x))(0);
}

/// ||x||_A, evaluated as the Euclidean norm of the reduced coordinates so
/// that vectors in N(A) give exactly zero up to rounding.
template <typename Real>
Real semi_norm(const Weight<Real>& A, const SemiVector<Real>& x) {
  check_dimension(A, x.size(), "x");
  return A.reduce(x).norm();
}

/// `count` A-unit vectors x = V D^{-1/2} u with u uniform on the unit sphere
/// of C^r. Deterministic for a given seed.
template <typename Real>
std::vector<SemiVector<Real>> a_unit_sample(const Weight<Real>& A, int count,
                                            std::uint64_t seed) {
  if (A.rank() < 1) throw Error(ErrorKind::ZeroRank, "weight has rank 0");
  std::mt19937_64 rng(seed);
  std::vector<SemiVector<Real>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(A.lift(detail::random_unit_vector<Real>(A.rank(), rng)));
  return out;
}

}  // namespace semihilbert
