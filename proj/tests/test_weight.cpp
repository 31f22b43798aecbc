#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace semihilbert;
using test::diag;
using test::vec;

TEST(Weight, DiagonalFactorizationIsDescending) {
  const auto A = make_weight(diag({1, 2}));
  EXPECT_EQ(A.rank(), 2);
  EXPECT_NEAR(A.range_eigenvalues()(0), 2.0, 1e-15);
  EXPECT_NEAR(A.range_eigenvalues()(1), 1.0, 1e-15);
  // Columns follow the eigenvalue order, so V is the swap up to phases.
  EXPECT_NEAR(std::abs(A.range_basis()(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(A.range_basis()(0, 1)), 1.0, 1e-15);
  EXPECT_LT((A.matrix() - diag({1, 2})).norm(), 1e-14);
}

TEST(Weight, ProjectionWeight) {
  const auto A = make_weight(diag({1, 1, 0}));
  EXPECT_EQ(A.rank(), 2);
  EXPECT_LT((A.projector() - diag({1, 1, 0})).norm(), 1e-14);
}

TEST(Weight, RankOneAllOnes) {
  test::Matrix M(2, 2);
  M << 1, 1, 1, 1;
  const auto A = make_weight(M);
  EXPECT_EQ(A.rank(), 1);
  EXPECT_NEAR(A.eigenvalues()(0), 2.0, 1e-14);
  EXPECT_NEAR(A.eigenvalues()(1), 0.0, 1e-14);
  const test::Vector v = A.range_basis().col(0);
  EXPECT_NEAR(std::abs(v(0)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(v(1)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(v(0) - v(1)), 0.0, 1e-14);
  EXPECT_LT((A.range_basis() * A.range_eigenvalues()(0) * A.range_basis().adjoint() - M).norm(), 1e-14);
}

TEST(Weight, DerivedMatricesAreConsistent) {
  std::mt19937_64 rng(11);
  const auto A = make_weight(test::random_weight(5, 3, rng));
  EXPECT_LT((A.sqrt() * A.sqrt() - A.matrix()).norm(), 1e-12);
  EXPECT_LT((A.pinv() * A.matrix() * A.pinv() - A.pinv()).norm(), 1e-12);
  EXPECT_LT((A.projector() * A.projector() - A.projector()).norm(), 1e-12);
  EXPECT_LT((A.pinv_sqrt() * A.pinv_sqrt() - A.pinv()).norm(), 1e-12);
}

TEST(Weight, Errors) {
  try {
    make_weight(test::mat2(1, 1, 0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
  try {
    make_weight(diag({1, -1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
  try {
    make_weight(diag({0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroWeight);
  }
  try {
    make_weight(test::Matrix(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
  EXPECT_THROW(make_weight(diag({1, 2}), 0.0), Error);
}

TEST(Weight, RoundoffBelowRankTolIsDropped) {
  const auto A = make_weight(diag({1, 1e-14, -1e-14}));
  EXPECT_EQ(A.rank(), 1);
}

TEST(SemiInner, Examples) {
  const auto A = make_weight(diag({1, 2}));
  EXPECT_NEAR(std::abs(semi_inner(A, vec({1, 0}), vec({0, 1}))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(semi_inner(A, vec({1, 1}), vec({1, 1})) - Complex<double>(3)), 0.0, 1e-14);
  EXPECT_NEAR(semi_norm(A, vec({1, 1})), std::sqrt(3.0), 1e-14);

  const auto P = make_weight(diag({1, 1, 0}));
  EXPECT_NEAR(std::abs(semi_inner(P, vec({0, 0, 5}), vec({1, {2, 3}, 4}))), 0.0, 1e-15);
  EXPECT_NEAR(semi_norm(P, vec({{1, 1}, 2, 9})), std::sqrt(6.0), 1e-14);
  EXPECT_THROW(semi_inner(P, vec({1, 0}), vec({1, 0, 0})), Error);
}

TEST(SemiInner, LinearInFirstArgument) {
  const auto A = make_weight(diag({1, 2}));
  const auto x = vec({1, {0, 1}});
  const auto y = vec({{2, -1}, 3});
  const Complex<double> a(0.5, 2);
  EXPECT_NEAR(std::abs(semi_inner(A, test::Vector(a * x), y) - a * semi_inner(A, x, y)), 0, 1e-14);
  EXPECT_NEAR(std::abs(semi_inner(A, x, test::Vector(a * y)) - std::conj(a) * semi_inner(A, x, y)), 0,
              1e-14);
}

TEST(UnitSample, Examples) {
  const auto I2 = make_weight(diag({1, 1}));
  const auto s = a_unit_sample(I2, 1, 3);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].norm(), 1.0, 1e-14);

  const auto A4 = make_weight(diag({4}));
  const auto x = a_unit_sample(A4, 1, 3)[0];
  EXPECT_NEAR(std::abs(x(0)), 0.5, 1e-15);

  const auto P = make_weight(diag({1, 1, 0}));
  for (const auto& v : a_unit_sample(P, 20, 5)) {
    EXPECT_NEAR(std::abs(v(2)), 0.0, 1e-15);
    EXPECT_NEAR(semi_norm(P, v), 1.0, 1e-9);
  }
  EXPECT_EQ(a_unit_sample(P, 4, 9)[3], a_unit_sample(P, 4, 9)[3]);
}

// Property checks over seeded random weights and vectors.
TEST(WeightProperties, CauchySchwarzAndReducedIsometry) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const int r = 1 + static_cast<int>(rng() % n);
    const auto A = make_weight(test::random_weight(n, r, rng));
    ASSERT_EQ(A.rank(), r);
    const test::Vector x = test::random_matrix(n, 1, rng);
    const test::Vector y = test::random_matrix(n, 1, rng);
    const double nx = semi_norm(A, x);
    const double ny = semi_norm(A, y);
    EXPECT_LE(std::abs(semi_inner(A, x, y)), nx * ny * (1 + 1e-12) + 1e-14);
    EXPECT_NEAR(nx * nx, semi_inner(A, x, x).real(), 1e-9 * (1 + nx * nx));
    EXPECT_NEAR(nx, (A.sqrt() * x).norm(), 1e-9 * (1 + nx));
    const test::Vector z = x - A.projector() * x;
    EXPECT_LT(semi_norm(A, z), 1e-9 * (1 + x.norm()));

    const auto B = make_weight(A.matrix());
    EXPECT_EQ(B.rank(), A.rank());
    EXPECT_NEAR(semi_norm(B, x), nx, 1e-9 * (1 + nx));
  }
}

TEST(Weight, LongDoubleInstantiation) {
  Matrix<long double> M = Matrix<long double>::Zero(2, 2);
  M(0, 0) = 1;
  M(1, 1) = 2;
  const auto A = make_weight<long double>(M);
  Vector<long double> x(2);
  x << 1, 1;
  EXPECT_NEAR(static_cast<double>(semi_norm(A, x)), std::sqrt(3.0), 1e-15);
}
