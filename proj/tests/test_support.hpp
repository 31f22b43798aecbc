#pragma once

#include "semihilbert/semihilbert.hpp"

#include <initializer_list>
#include <memory>
#include <random>

namespace test {

using semihilbert::Complex;
using Matrix = semihilbert::Matrix<double>;
using Vector = semihilbert::Vector<double>;
using Op = semihilbert::Operator<double>;
using WeightPtr = semihilbert::WeightPtr<double>;

inline Matrix diag(std::initializer_list<Complex<double>> values) {
  Matrix M = Matrix::Zero(values.size(), values.size());
  int i = 0;
  for (auto v : values) M(i, i) = v, ++i;
  return M;
}

inline Matrix mat2(Complex<double> a, Complex<double> b, Complex<double> c, Complex<double> d) {
  Matrix M(2, 2);
  M << a, b, c, d;
  return M;
}

inline WeightPtr weight(const Matrix& A) {
  return std::make_shared<const semihilbert::Weight<double>>(semihilbert::make_weight(A));
}

inline Vector vec(std::initializer_list<Complex<double>> values) {
  Vector v(values.size());
  int i = 0;
  for (auto x : values) v(i++) = x;
  return v;
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = Complex<double>(g(rng), g(rng));
  return M;
}

/// Random PSD weight of the given rank with condition number up to 1e2.
inline Matrix random_weight(int n, int r, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  const Matrix Q = qr.householderQ();
  std::uniform_real_distribution<double> u(0.1, 10.0);
  Matrix D = Matrix::Zero(n, n);
  for (int i = 0; i < r; ++i) D(i, i) = u(rng);
  return Q * D * Q.adjoint();
}

/// Random operator that maps N(A) into N(A): T = P X P + (I - P) Y.
inline Matrix random_bounded(const semihilbert::Weight<double>& A, std::mt19937_64& rng) {
  const int n = static_cast<int>(A.dim());
  const Matrix P = A.projector();
  const Matrix Q = Matrix::Identity(n, n) - P;
  return P * random_matrix(n, n, rng) * P + Q * random_matrix(n, n, rng);
}

}  // namespace test
