#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace semihilbert;
using test::diag;
using test::mat2;
using test::Op;

namespace {

// Independent oracle for d(T, C S) on 2x2 or diagonal data: dense grid over
// the gamma plane followed by local zooming.
double gamma_grid_distance(const test::Matrix& T, const test::Matrix& S, double radius) {
  auto f = [&](std::complex<double> g) {
    Eigen::JacobiSVD<test::Matrix> svd(T + g * S);
    return svd.singularValues()(0);
  };
  std::complex<double> center(0, 0);
  double best = f(center);
  double h = radius;
  for (int round = 0; round < 24; ++round) {
    std::complex<double> next = center;
    for (int i = -20; i <= 20; ++i)
      for (int j = -20; j <= 20; ++j) {
        const std::complex<double> g = center + std::complex<double>(h * i / 20, h * j / 20);
        const double v = f(g);
        if (v < best) best = v, next = g;
      }
    center = next;
    h *= 0.25;
  }
  return best;
}

}  // namespace

TEST(Parallel, ExampleTwo) {
  const auto A = test::weight(diag({1, 2}));
  const auto r = is_parallel(Op(A, diag({1, -1})), identity(A));
  EXPECT_TRUE(r.certificate.verdict);
  EXPECT_TRUE(r.routes_agree);
  EXPECT_NEAR(std::abs(r.lambda_star - 1.0), 0.0, 1e-9);
  EXPECT_NEAR(r.value_at_lambda, 2.0, 1e-12);
  EXPECT_NEAR(r.product, 1.0, 1e-14);
}

TEST(Parallel, ExampleThree) {
  for (double lam : {0.5, 1.0, 3.0}) {
    const auto A = test::weight(diag({0, 1, 0}));
    const Op T(A, diag({0, lam, 1}));
    const Op S(A, diag({lam, lam, 1}));
    const auto r = is_parallel(T, S);
    EXPECT_TRUE(r.certificate.verdict);
    const auto& x = *r.certificate.witness_vector;
    EXPECT_NEAR(std::abs(x(1)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(x(0)) + std::abs(x(2)), 0.0, 1e-14);
  }
}

TEST(Parallel, NotParallelDisjointSupports) {
  const auto I = test::weight(diag({1, 1}));
  const auto r = is_parallel(Op(I, diag({1, 0})), Op(I, diag({0, 1})));
  EXPECT_FALSE(r.certificate.verdict);
  EXPECT_TRUE(r.routes_agree);
  EXPECT_NEAR(r.value_at_lambda, 1.0, 1e-12);
  // Exhaustive lambda grid: ||T + lambda S|| = 1 everywhere.
  for (int k = 0; k < 64; ++k) {
    const auto lam = std::polar(1.0, 2 * M_PI * k / 64);
    EXPECT_NEAR(*seminorm(Op(I, diag({1, lam}))), 1.0, 1e-14);
  }
}

TEST(Parallel, ZeroOperatorIsParallel) {
  const auto I = test::weight(diag({1, 1}));
  EXPECT_TRUE(is_parallel(Op(I, test::Matrix::Zero(2, 2)), Op(I, diag({1, 2}))).certificate.verdict);
}

TEST(Orthogonality, CubeExample) {
  const auto P = test::weight(diag({1, 1, 0}));
  const Op T(P, diag({2, -1, 1}));
  const auto I3 = identity(P);
  const auto c = is_bj_orthogonal(I3, T);
  EXPECT_TRUE(c.verdict);
  ASSERT_TRUE(c.witness_vector.has_value());
  EXPECT_NEAR(semi_norm(*P, *c.witness_vector), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(semi_inner(*P, *c.witness_vector, test::Vector(T.matrix() * *c.witness_vector))),
              0.0, 1e-9);
  const auto d = is_bj_orthogonal(T, I3);
  EXPECT_FALSE(d.verdict);
  EXPECT_NEAR(d.lhs, 1.5, 1e-9);
  EXPECT_TRUE(is_bj_orthogonal(T, Op(P, test::Matrix::Zero(3, 3))).verdict);
}

TEST(Distance, Examples) {
  const auto P = test::weight(diag({1, 1, 0}));
  const Op T(P, diag({2, -1, 1}));
  const auto d = distance_to_line(T, identity(P));
  EXPECT_NEAR(d.distance, 1.5, 1e-10);
  EXPECT_NEAR(std::abs(d.gamma_star - (-0.5)), 0.0, 1e-8);
  ASSERT_TRUE(d.sup_form_value.has_value());
  EXPECT_NEAR(*d.sup_form_value, 2.25, 1e-9);
  EXPECT_LT(d.cross_residual, 1e-7);

  const auto s = distance_to_line(T, T);
  EXPECT_NEAR(s.distance, 0.0, 1e-10);
  EXPECT_NEAR(std::abs(s.gamma_star + 1.0), 0.0, 1e-8);

  const auto I = test::weight(diag({1, 1}));
  const auto n = distance_to_line(Op(I, mat2(0, 1, 0, 0)), identity(I));
  EXPECT_NEAR(n.distance, 1.0, 1e-10);
  EXPECT_NEAR(gamma_grid_distance(mat2(0, 1, 0, 0), test::Matrix::Identity(2, 2), 2), 1.0, 1e-9);

  const auto z = distance_to_line(Op(I, mat2(0, 1, 0, 0)), Op(I, test::Matrix::Zero(2, 2)));
  EXPECT_TRUE(z.sup_form_skipped);
  EXPECT_NEAR(z.distance, 1.0, 1e-14);
}

TEST(Distance, MatchesGammaGridOracle) {
  std::mt19937_64 rng(123);
  const auto I = test::weight(diag({1, 1}));
  for (int trial = 0; trial < 20; ++trial) {
    const test::Matrix T = test::random_matrix(2, 2, rng);
    const test::Matrix S = test::random_matrix(2, 2, rng);
    const auto d = distance_to_line(Op(I, T), Op(I, S));
    const double nt = T.jacobiSvd().singularValues()(0);
    const double ns = S.jacobiSvd().singularValues()(0);
    const double oracle = gamma_grid_distance(T, S, 2 * nt / ns);
    EXPECT_LE(d.distance, oracle * (1 + 1e-12));
    EXPECT_NEAR(d.distance, oracle, 1e-9 * nt);
    if (d.sup_form_value) EXPECT_LT(d.cross_residual, 1e-7);
  }
}

TEST(Center, Examples) {
  const auto P = test::weight(diag({1, 1, 0}));
  const auto c = center_of_mass(Op(P, diag({2, -1, 1})), identity(P));
  EXPECT_NEAR(std::abs(c.value - 0.5), 0.0, 1e-8);
  EXPECT_TRUE(c.formula_ok);
  ASSERT_TRUE(c.pairing_with_witness.has_value());

  const auto I = test::weight(diag({1, 1}));
  const std::complex<double> alpha(0.3, -2);
  const auto a = center_of_mass(Op(I, alpha * test::Matrix::Identity(2, 2)), identity(I));
  EXPECT_NEAR(std::abs(a.value - alpha), 0.0, 1e-9);

  try {
    center_of_mass(identity(I), Op(I, diag({1, 0})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MinModulusTooSmall);
  }
}

TEST(Center, NormalOperatorAgainstItsAdjoint) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto A = test::weight(test::random_weight(3, 3, rng));
    // Reduced normal matrix U diag(z) U^*, lifted back to C^3.
    Eigen::HouseholderQR<test::Matrix> qr(test::random_matrix(3, 3, rng));
    const test::Matrix U = qr.householderQ();
    const test::Matrix z = test::random_matrix(3, 1, rng);
    test::Matrix D = test::Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) D(i, i) = z(i) + z(i) / std::abs(z(i));
    const test::Matrix B = U * D * U.adjoint();
    const test::Matrix T = A->lift_matrix(B);
    const Op op(A, T);
    EXPECT_LE(std::abs(center_of_mass(op, sharp_a(op)).value), 1.0 + 1e-7);
  }
}

TEST(Daugavet, Examples) {
  const auto A = test::weight(diag({1, 2}));
  const auto d = daugavet_check(Op(A, diag({1, -1})));
  EXPECT_TRUE(d.equation.verdict);
  EXPECT_TRUE(d.agree);
  EXPECT_NEAR(d.equation.lhs, 2.0, 1e-12);

  const auto m = daugavet_check(Op(A, diag({-1, -1})));
  EXPECT_FALSE(m.equation.verdict);
  EXPECT_TRUE(m.agree);

  const auto I = test::weight(diag({1, 1}));
  const auto n = daugavet_check(Op(I, mat2(0, 1, 0, 0)));
  EXPECT_FALSE(n.equation.verdict);
  EXPECT_TRUE(n.agree);
  EXPECT_NEAR(n.equation.lhs, (1 + std::sqrt(5.0)) / 2, 1e-12);
}

TEST(NormaloidCluster, Examples) {
  const auto A = test::weight(diag({1, 2}));
  for (const auto& c : parallel_to_identity_suite(Op(A, diag({1, -1})), 3)) EXPECT_TRUE(c.verdict) << c.method;
  for (const auto& c : parallel_to_identity_suite(identity(A), 3)) EXPECT_TRUE(c.verdict) << c.method;
  const auto I = test::weight(diag({1, 1}));
  for (const auto& c : parallel_to_identity_suite(Op(I, mat2(0, 1, 0, 0)), 3))
    EXPECT_FALSE(c.verdict) << c.method;
}

TEST(RankOneParallel, Examples) {
  const auto P = test::weight(diag({1, 1, 0}));
  const auto x = test::vec({1, 0, 7});
  EXPECT_TRUE(rank_one_parallel_identity(P, x, test::vec({1, 0, -3})).dependence.verdict);
  EXPECT_TRUE(rank_one_parallel_identity(P, x, test::vec({1, 0, -3})).agree);
  const auto e = rank_one_parallel_identity(P, test::vec({1, 0, 0}), test::vec({0, 1, 0}));
  EXPECT_FALSE(e.dependence.verdict);
  EXPECT_TRUE(e.agree);
  const auto y = rank_one_parallel_identity(P, x, test::Vector(2.0 * x));
  EXPECT_TRUE(y.dependence.verdict);
  EXPECT_TRUE(y.agree);
}

TEST(DwLower, Examples) {
  const auto I = test::weight(diag({1, 1}));
  const auto z = dw_lower_attainment_check(Op(I, test::Matrix::Zero(2, 2)));
  EXPECT_TRUE(z.attained.verdict);
  EXPECT_TRUE(z.implication_holds);
  // dw of the 2x2 shift equals max{1/2, 1} = 1, so both orthogonalities hold.
  const auto n = dw_lower_attainment_check(Op(I, mat2(0, 1, 0, 0)));
  EXPECT_TRUE(n.attained.verdict);
  EXPECT_TRUE(n.operator_orthogonal_to_identity.verdict);
  EXPECT_TRUE(n.identity_orthogonal_to_operator.verdict);
}

TEST(DistancePanel, Examples) {
  const auto P = test::weight(diag({1, 1, 0}));
  const auto p = distance_inequality_panel(Op(P, diag({2, -1, 1})));
  EXPECT_NEAR(p.distance_to_identity_line, 1.5, 1e-10);
  EXPECT_NEAR(p.identity_distance_to_line, 1.0, 1e-10);
  for (const auto& c : p.checks) EXPECT_LE(c.excess, 1e-8) << c.name;
  EXPECT_NEAR(p.checks[0].lhs, 0.0, 1e-12);

  const auto q = distance_inequality_panel(identity(P));
  EXPECT_NEAR(q.distance_to_identity_line, 0.0, 1e-10);
  EXPECT_NEAR(q.identity_distance_to_line, 0.0, 1e-10);
  for (const auto& c : q.checks) EXPECT_LE(c.excess, 1e-8) << c.name;
}
