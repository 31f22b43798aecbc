#pragma once

// Parallelism, Birkhoff-James orthogonality, distances to complex lines,
// centers of mass and the Daugavet equation for A-bounded operators.
//
// Every decision is computed on reductions B_T = T~, B_S = S~ and reported
// as a Certificate whose residual is relative (scale invariant) unless stated
// otherwise.

#include "semihilbert/core.hpp"
#include "semihilbert/detail/linalg.hpp"
#include "semihilbert/operators.hpp"
#include "semihilbert/weight.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace semihilbert {

namespace reduced {

template <typename Real>
struct LineDistanceOptions {
  /// Locate a unit u with ||Mu|| = ||M|| and <Mu, B_S u> = 0, M = B_T + gamma* B_S.
  bool witness = true;
  /// Evaluate sup_u (||B_T u||^2 - |<B_T u, B_S u>|^2 / ||B_S u||^2).
  bool sup_form = true;
  /// m(B_S) <= gate ||B_S|| disables the sup-form.
  Real gate = Real(1e-8);
  std::uint64_t seed = 0xd157;
};

template <typename Real>
struct LineDistance {
  Real distance = 0;
  Complex<Real> gamma{0, 0};
  Real norm_t = 0;
  Real norm_s = 0;
  Real min_modulus_s = 0;
  bool sup_form_computed = false;
  /// Squared distance predicted by the sup-form.
  Real sup_form_value = 0;
  /// Maximizer of the sup-form objective found by ascent.
  Vector<Real> sup_form_point;
  /// Unit vector attaining ||M|| with <Mu, B_S u> = 0.
  Vector<Real> witness;
  /// |<Mu, B_S u>| / (||M|| ||B_S||) at the witness.
  Real witness_residual = 0;
  int iterations = 0;
};

/// Unit u in the top singular subspace of M with <Mu, Su> as close to zero
/// as that subspace allows. The subspace is widened when the first cluster
/// does not contain a zero of the pairing.
template <typename Real>
Vector<Real> pairing_witness(const Matrix<Real>& M, const Matrix<Real>& Sm, Real* residual) {
  const Index r = M.rows();
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(M.adjoint() * M);
  const Real top = std::max(es.eigenvalues()(r - 1), Real(0));
  const Real scale = std::sqrt(top) * norm<Real>(Sm);
  if (top == Real(0) || scale == Real(0)) {
    if (residual) *residual = 0;
    return es.eigenvectors().col(r - 1);
  }
  Vector<Real> best;
  Real best_res = std::numeric_limits<Real>::infinity();
  for (Real delta : {Real(1e-8), Real(1e-6), Real(1e-4)}) {
    const Real cut = top * (Real(1) - delta) * (Real(1) - delta);
    Index k = 0;
    while (k < r && es.eigenvalues()(r - 1 - k) >= cut) ++k;
    const Matrix<Real> U = es.eigenvectors().rightCols(k).rowwise().reverse();
    const Matrix<Real> K = U.adjoint() * Sm.adjoint() * M * U;
    const Vector<Real> u = U * detail::zero_in_numerical_range<Real>(K);
    const Real res = std::abs((u.adjoint() * Sm.adjoint() * M * u)(0)) / scale;
    if (res < best_res) {
      best_res = res;
      best = u.normalized();
    }
    if (best_res <= Real(1e-10)) break;
  }
  if (residual) *residual = best_res;
  return best;
}

/// inf over complex gamma of ||B_T + gamma B_S|| by the two-dimensional
/// ellipsoid method on (Re gamma, Im gamma). The objective is convex; the
/// subgradient at gamma is (Re w, -Im w) with w = u^* B_S v for a top
/// singular pair (u, v) of B_T + gamma B_S.
template <typename Real>
LineDistance<Real> line_distance(const Matrix<Real>& BT, const Matrix<Real>& BS,
                                 const LineDistanceOptions<Real>& opt = {}) {
  using std::sqrt;
  LineDistance<Real> out;
  const Index r = BT.rows();
  out.norm_t = norm<Real>(BT);
  out.norm_s = norm<Real>(BS);
  out.min_modulus_s = min_modulus<Real>(BS);
  out.distance = out.norm_t;

  const Real eps = std::numeric_limits<Real>::epsilon();
  if (out.norm_s > Real(0) && out.norm_t > Real(0)) {
    using Vec2 = Eigen::Matrix<Real, 2, 1>;
    using Mat2 = Eigen::Matrix<Real, 2, 2>;
    const Real radius = Real(2) * out.norm_t / out.norm_s * (Real(1) + Real(1e-6));
    Vec2 c = Vec2::Zero();
    Mat2 P = Mat2::Identity() * radius * radius;
    const Real gamma_scale = out.norm_t / out.norm_s;
    for (int it = 0; it < 3000; ++it) {
      out.iterations = it + 1;
      const Complex<Real> gamma(c(0), c(1));
      const Matrix<Real> M = BT + gamma * BS;
      Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(M.adjoint() * M);
      const Real sigma = sqrt(std::max(es.eigenvalues()(r - 1), Real(0)));
      if (sigma < out.distance) {
        out.distance = sigma;
        out.gamma = gamma;
      }
      if (sigma == Real(0)) break;
      const Vector<Real> v = es.eigenvectors().col(r - 1);
      const Vector<Real> u = M * v / sigma;
      const Complex<Real> w = (u.adjoint() * BS * v)(0);
      const Vec2 g(w.real(), -w.imag());
      const Real gPg = g.dot(P * g);
      if (!(gPg > Real(0))) break;
      const Real gap = sqrt(gPg);
      const Real diameter = sqrt(std::max(P.eigenvalues().real().maxCoeff(), Real(0)));
      if (gap <= Real(4) * eps * out.norm_t ||
          diameter <= Real(1e-13) * (std::abs(gamma) + gamma_scale))
        break;
      const Vec2 Pg = P * g / gap;
      c -= Pg / Real(3);
      P = (Real(4) / Real(3)) * (P - (Real(2) / Real(3)) * Pg * Pg.transpose());
      P = (P + P.transpose()) * Real(0.5);
    }
  }

  const Matrix<Real> M = BT + out.gamma * BS;
  if (opt.witness) out.witness = pairing_witness<Real>(M, BS, &out.witness_residual);

  if (opt.sup_form && out.norm_s > Real(0) && out.min_modulus_s > opt.gate * out.norm_s) {
    out.sup_form_computed = true;
    const Matrix<Real> C = BS.adjoint() * BT;
    const Matrix<Real> Ch = C.adjoint();
    const Matrix<Real> TT = BT.adjoint() * BT;
    const Matrix<Real> SS = BS.adjoint() * BS;
    auto value = [&](const Vector<Real>& u) {
      const Real s = (u.adjoint() * SS * u)(0).real();
      return (u.adjoint() * TT * u)(0).real() - std::norm((u.adjoint() * C * u)(0)) / s;
    };
    auto fg = [&](const Vector<Real>& u) {
      const Vector<Real> Cu = C * u;
      const Vector<Real> SSu = SS * u;
      const Complex<Real> p = (u.adjoint() * Cu)(0);
      const Real s = (u.adjoint() * SSu)(0).real();
      const Real q = std::norm(p);
      const Vector<Real> TTu = TT * u;
      Vector<Real> grad = Real(2) * TTu -
                          (Real(2) * (std::conj(p) * Cu + p * (Ch * u)) * s -
                           q * Real(2) * SSu) /
                              (s * s);
      return std::pair<Real, Vector<Real>>{(u.adjoint() * TTu)(0).real() - q / s,
                                           std::move(grad)};
    };
    std::vector<Vector<Real>> seeds;
    if (opt.witness) seeds.push_back(out.witness);
    seeds.push_back(detail::top_singular<Real>(BT).right);
    std::mt19937_64 rng(opt.seed);
    for (int k = 0; k < 6; ++k) seeds.push_back(detail::random_unit_vector<Real>(r, rng));
    Real best = -std::numeric_limits<Real>::infinity();
    for (const auto& s : seeds) {
      auto res = detail::ascend_on_sphere<Real>(fg, s);
      const Real v = value(res.point);
      if (v > best) {
        best = v;
        out.sup_form_point = res.point;
      }
    }
    out.sup_form_value = best;
  }
  return out;
}

/// Birkhoff-James orthogonality B_T _|_ B_S: d(B_T, C B_S) >= ||B_T|| (1 - tol).
template <typename Real>
Certificate<Real> bj_orthogonal(const Matrix<Real>& BT, const Matrix<Real>& BS, Real tol,
                                bool want_witness = true) {
  LineDistanceOptions<Real> opt;
  opt.witness = false;
  opt.sup_form = false;
  const auto ld = line_distance<Real>(BT, BS, opt);
  const Real residual =
      ld.norm_t > Real(0) ? std::max(Real(0), ld.norm_t - ld.distance) / ld.norm_t : Real(0);
  auto cert = Certificate<Real>::decide("distance_to_line", ld.distance, ld.norm_t, residual, tol);
  if (cert.verdict && want_witness) {
    Real wres = 0;
    cert.witness_vector = pairing_witness<Real>(BT, BS, &wres);
  }
  return cert;
}

/// M, or exactly zero when ||M|| <= eps * scale. Orthogonality to a
/// difference that cancelled down to rounding is decided against 0.
template <typename Real>
Matrix<Real> cancel_rounding(Matrix<Real> M, Real scale, Real eps) {
  if (norm<Real>(M) <= eps * scale) M.setZero();
  return M;
}

template <typename Real>
struct Parallelism {
  Real residual_norm = 0;      // route (a): max over lambda of ||B_T + lambda B_S||
  Real residual_omega = 0;     // route (b): w(B_S^* B_T)
  Real residual_spectral = 0;  // route (c): r(B_S^* B_T)
  Complex<Real> lambda_star{1, 0};
  Real value_at_lambda = 0;
  Real omega_check = 0;
  Real spectral_check = 0;
  Real product = 0;
  Real norm_t = 0;
  Real norm_s = 0;
  Vector<Real> witness;
  Complex<Real> witness_lambda{1, 0};
  bool degenerate = false;
};

/// Three routes to B_T || B_S, each reduced to a relative residual that
/// vanishes exactly on parallel pairs.
template <typename Real>
Parallelism<Real> parallelism(const Matrix<Real>& BT, const Matrix<Real>& BS) {
  Parallelism<Real> out;
  out.norm_t = norm<Real>(BT);
  out.norm_s = norm<Real>(BS);
  out.product = out.norm_t * out.norm_s;
  out.witness = Vector<Real>::Unit(BT.rows(), 0);
  if (out.product == Real(0)) {
    out.degenerate = true;
    out.value_at_lambda = out.norm_t + out.norm_s;
    return out;
  }

  auto f = [&](Real phi) { return norm<Real>(BT + detail::unit_phase(phi) * BS); };
  auto [phi, value] = detail::maximize_on_circle<Real>(f, 1024);
  out.lambda_star = detail::unit_phase(phi);
  out.value_at_lambda = value;
  const Real sum = out.norm_t + out.norm_s;
  out.residual_norm = std::max(Real(0), sum - value) / sum;

  const Matrix<Real> C = BS.adjoint() * BT;
  const auto w = numerical_radius<Real>(C);
  out.omega_check = w.value;
  out.residual_omega = std::max(Real(0), out.product - w.value) / out.product;

  out.spectral_check = spectral_radius<Real>(C);
  out.residual_spectral = std::max(Real(0), out.product - out.spectral_check) / out.product;

  out.witness = w.vector;
  const Complex<Real> pairing = (w.vector.adjoint() * C * w.vector)(0);
  if (std::abs(pairing) > Real(0)) out.witness_lambda = pairing / std::abs(pairing);
  return out;
}

}  // namespace reduced

// ---------------------------------------------------------------------------
// Operator-level API.
// ---------------------------------------------------------------------------

template <typename Real>
struct ParallelismResult {
  /// verdict is the conjunction of the three routes; residual is their max.
  Certificate<Real> certificate;
  Complex<Real> lambda_star{1, 0};
  Real value_at_lambda = 0;
  /// w_A(S^{#A} T) and r_A(S^{#A} T).
  Real omega_check = 0;
  Real spectral_check = 0;
  /// ||T||_A ||S||_A.
  Real product = 0;
  std::array<Real, 3> route_residuals{};
  bool routes_agree = true;
};

template <typename Real>
ParallelismResult<Real> is_parallel(const Operator<Real>& T, const Operator<Real>& S,
                                    const Tolerances<Real>& tol = {}) {
  check_same_space(T, S);
  const auto p = reduced::parallelism<Real>(T.reduced(), S.reduced());
  ParallelismResult<Real> out;
  out.lambda_star = p.lambda_star;
  out.value_at_lambda = p.value_at_lambda;
  out.omega_check = p.omega_check;
  out.spectral_check = p.spectral_check;
  out.product = p.product;
  out.route_residuals = {p.residual_norm, p.residual_omega, p.residual_spectral};
  const Real worst = *std::max_element(out.route_residuals.begin(), out.route_residuals.end());
  out.certificate = Certificate<Real>::decide("norm_circle+omega+spectral", p.value_at_lambda,
                                              p.norm_t + p.norm_s, worst, tol.decision);
  int votes = 0;
  for (Real r : out.route_residuals) votes += r <= tol.decision ? 1 : 0;
  out.routes_agree = votes == 0 || votes == 3;
  out.certificate.witness_vector = T.weight().lift(p.witness);
  out.certificate.witness_lambda = p.degenerate ? p.lambda_star : p.witness_lambda;
  return out;
}

template <typename Real>
Certificate<Real> is_bj_orthogonal(const Operator<Real>& T, const Operator<Real>& S,
                                   const Tolerances<Real>& tol = {}) {
  check_same_space(T, S);
  auto c = reduced::bj_orthogonal<Real>(T.reduced(), S.reduced(), tol.decision);
  if (c.witness_vector) c.witness_vector = T.weight().lift(*c.witness_vector);
  return c;
}

template <typename Real>
struct LineDistanceResult {
  Real distance = 0;
  /// Minimizer of gamma -> ||T + gamma S||_A; -gamma_star is the center of
  /// mass when m_A(S) > 0.
  Complex<Real> gamma_star{0, 0};
  /// Squared distance from the sup-form, absent when m_A(S) is below the gate.
  std::optional<Real> sup_form_value;
  bool sup_form_skipped = false;
  /// |distance^2 - sup_form_value| / ||T||_A^2.
  Real cross_residual = 0;
  /// A-unit x with ||(T + gamma_star S)x||_A = distance, <(T + gamma_star S)x, Sx>_A = 0.
  SemiVector<Real> witness;
  Real witness_residual = 0;
};

template <typename Real>
LineDistanceResult<Real> distance_to_line(const Operator<Real>& T, const Operator<Real>& S,
                                          const Tolerances<Real>& tol = {}) {
  check_same_space(T, S);
  reduced::LineDistanceOptions<Real> opt;
  opt.gate = tol.min_modulus_gate;
  const auto ld = reduced::line_distance<Real>(T.reduced(), S.reduced(), opt);
  LineDistanceResult<Real> out;
  out.distance = ld.distance;
  out.gamma_star = ld.gamma;
  out.witness = T.weight().lift(ld.witness);
  out.witness_residual = ld.witness_residual;
  out.sup_form_skipped = !ld.sup_form_computed;
  if (ld.sup_form_computed) {
    out.sup_form_value = ld.sup_form_value;
    const Real scale = std::max(ld.norm_t * ld.norm_t, std::numeric_limits<Real>::min());
    out.cross_residual = std::abs(ld.distance * ld.distance - ld.sup_form_value) / scale;
  }
  return out;
}

template <typename Real>
struct CenterOfMass {
  Complex<Real> value{0, 0};
  Real distance = 0;
  /// <Tx, Sx>_A / ||Sx||_A^2 at the sup-form maximizer x.
  Complex<Real> limit_formula{0, 0};
  /// |limit_formula - value| / max(|value|, ||T||_A / ||S||_A).
  Real formula_residual = 0;
  /// Uncertainty of the minimizer implied by double-precision values of
  /// gamma -> ||T + gamma S||_A, on the same relative scale. Quadratic
  /// growth with curvature m_A(S)^2 / d makes it large when m_A(S) is small.
  Real conditioning = 0;
  bool formula_ok = true;
  /// <Tx, x>_A at the same x; reported for S = I.
  std::optional<Complex<Real>> pairing_with_witness;
  SemiVector<Real> witness;
};

/// c_A(T, S) = -gamma_star. Throws MinModulusTooSmall when m_A(S) is at or
/// below min_modulus_gate * ||S||_A, where the minimizer need not be unique.
template <typename Real>
CenterOfMass<Real> center_of_mass(const Operator<Real>& T, const Operator<Real>& S,
                                  const Tolerances<Real>& tol = {}) {
  check_same_space(T, S);
  const Matrix<Real>& BT = T.reduced();
  const Matrix<Real>& BS = S.reduced();
  const Real ns = reduced::norm<Real>(BS);
  const Real ms = reduced::min_modulus<Real>(BS);
  if (!(ns > Real(0)) || ms <= tol.min_modulus_gate * ns)
    throw Error(ErrorKind::MinModulusTooSmall,
                "m_A(S) = " + std::to_string(double(ms)) + " is below the gate");
  reduced::LineDistanceOptions<Real> opt;
  opt.gate = tol.min_modulus_gate;
  const auto ld = reduced::line_distance<Real>(BT, BS, opt);

  CenterOfMass<Real> out;
  out.value = -ld.gamma;
  out.distance = ld.distance;
  const Vector<Real>& u = ld.sup_form_point;
  const Vector<Real> Su = BS * u;
  out.limit_formula = (Su.adjoint() * (BT * u))(0) / Su.squaredNorm();
  const Real scale = std::max({std::abs(out.value), ld.norm_t / ns, std::numeric_limits<Real>::min()});
  out.formula_residual = std::abs(out.limit_formula - out.value) / scale;
  const Real acc = Real(64) * std::numeric_limits<Real>::epsilon() *
                   std::max(ld.norm_t, std::abs(ld.gamma) * ns);
  out.conditioning = (sqrt(Real(2) * ld.distance * acc) + acc) / ms / scale;
  out.formula_ok = out.formula_residual <= tol.formula + out.conditioning;
  const Matrix<Real> Id = Matrix<Real>::Identity(BS.rows(), BS.cols());
  if ((BS - Id).norm() <= tol.num * Real(BS.rows())) out.pairing_with_witness = (u.adjoint() * BT * u)(0);
  out.witness = T.weight().lift(u);
  return out;
}

template <typename Real>
struct DaugavetResult {
  /// ||T + I||_A = ||T||_A + 1.
  Certificate<Real> equation;
  /// ||T||_A in closure W_A(T), via max Re of the range samples.
  Certificate<Real> range_membership;
  /// I _|_BJ (||T||_A I - T) and T _|_BJ (T - ||T||_A I).
  Certificate<Real> identity_orthogonal;
  Certificate<Real> operator_orthogonal;
  bool agree = true;
};

template <typename Real>
DaugavetResult<Real> daugavet_check(const Operator<Real>& T, const Tolerances<Real>& tol = {},
                                    int grid = 64) {
  const Matrix<Real>& B = T.reduced();
  const Index r = B.rows();
  const Matrix<Real> Id = Matrix<Real>::Identity(r, r);
  const Real nt = reduced::norm<Real>(B);
  const Real lhs = reduced::norm<Real>(Matrix<Real>(B + Id));

  DaugavetResult<Real> out;
  out.equation = Certificate<Real>::decide("norm_of_shift", lhs, nt + Real(1),
                                           relative_gap(lhs, nt + Real(1)), tol.decision);
  Real max_re = -std::numeric_limits<Real>::infinity();
  for (const auto& s : reduced::range_samples<Real>(B, grid)) max_re = std::max(max_re, s.point.real());
  out.range_membership =
      Certificate<Real>::decide("max_re_range", max_re, nt, relative_gap(max_re, nt), tol.decision);
  const Matrix<Real> gap = reduced::cancel_rounding<Real>(nt * Id - B, nt, tol.num);
  out.identity_orthogonal = reduced::bj_orthogonal<Real>(Id, gap, tol.decision, false);
  out.operator_orthogonal = reduced::bj_orthogonal<Real>(B, Matrix<Real>(-gap), tol.decision, false);
  const bool v = out.equation.verdict;
  out.agree = out.range_membership.verdict == v && out.identity_orthogonal.verdict == v &&
              out.operator_orthogonal.verdict == v;
  return out;
}

/// The A-normaloid equivalence cluster for one operator. Every certificate
/// carries the same verdict when the library is consistent.
template <typename Real>
std::vector<Certificate<Real>> parallel_to_identity_suite(const Operator<Real>& T, int p_max,
                                                          const Tolerances<Real>& tol = {}) {
  using std::sqrt;
  const Matrix<Real>& B = T.reduced();
  const Index r = B.rows();
  const Matrix<Real> Id = Matrix<Real>::Identity(r, r);
  const Matrix<Real> Bh = B.adjoint();
  const Real nt = reduced::norm<Real>(B);
  const Real w = reduced::numerical_radius<Real>(B).value;

  std::vector<Certificate<Real>> out;
  auto parallel = [&](std::string name, const Matrix<Real>& X, const Matrix<Real>& Y) {
    const auto p = reduced::parallelism<Real>(X, Y);
    const Real res = std::max({p.residual_norm, p.residual_omega, p.residual_spectral});
    out.push_back(Certificate<Real>::decide(std::move(name), p.value_at_lambda,
                                            p.norm_t + p.norm_s, res, tol.decision));
  };
  parallel("T||I", B, Id);
  parallel("T||T#", B, Bh);
  parallel("T#T||T#", Matrix<Real>(Bh * B), Bh);

  const Real dw = reduced::davis_wielandt<Real>(B).value;
  const Real upper = sqrt(w * w + nt * nt * nt * nt);
  out.push_back(Certificate<Real>::decide("dw_upper_attained", dw, upper, relative_gap(dw, upper),
                                          tol.decision));
  const Real rho = reduced::spectral_radius<Real>(B);
  out.push_back(Certificate<Real>::decide("r=||T||", rho, nt, relative_gap(rho, nt), tol.decision));
  out.push_back(Certificate<Real>::decide("w=||T||", w, nt, relative_gap(w, nt), tol.decision));

  const auto& A = T.weight();
  const Matrix<Real> gap =
      w * w * A.matrix() - T.matrix().adjoint() * A.matrix() * T.matrix();
  const Real lmin = detail::lambda_min<Real>(Matrix<Real>((gap + gap.adjoint()) * Real(0.5)));
  out.push_back(Certificate<Real>::decide("w^2A-T*AT>=0", lmin, -tol.psd * A.norm(),
                                          std::max(Real(0), -lmin) / A.norm(), tol.psd));

  const Real w2 = reduced::numerical_radius<Real>(Matrix<Real>(B * B)).value;
  out.push_back(Certificate<Real>::decide("w(T^2)=||T||^2", w2, nt * nt, relative_gap(w2, nt * nt),
                                          tol.decision));
  const Real w3 = reduced::numerical_radius<Real>(Matrix<Real>(B * Bh * B)).value;
  out.push_back(Certificate<Real>::decide("w(TT#T)=||T||^3", w3, nt * nt * nt,
                                          relative_gap(w3, nt * nt * nt), tol.decision));

  // Powers are quantified over every p, since T^p may vanish (and so be
  // trivially parallel) for non-normaloid T.
  Matrix<Real> P = B;
  Matrix<Real> Q = Bh;
  Real worst_identity = 0;
  Real worst_sharp = 0;
  for (int p = 1; p <= std::max(p_max, 1); ++p) {
    if (p > 1) {
      P = P * B;
      Q = Q * Bh;
    }
    const auto pi = reduced::parallelism<Real>(P, Id);
    const auto ps = reduced::parallelism<Real>(P, Q);
    worst_identity = std::max({worst_identity, pi.residual_norm, pi.residual_omega, pi.residual_spectral});
    worst_sharp = std::max({worst_sharp, ps.residual_norm, ps.residual_omega, ps.residual_spectral});
  }
  const std::string range = "p<=" + std::to_string(std::max(p_max, 1));
  out.push_back(Certificate<Real>::decide("T^p||I," + range, worst_identity, Real(0), worst_identity,
                                          tol.decision));
  out.push_back(Certificate<Real>::decide("T^p||(T#)^p," + range, worst_sharp, Real(0), worst_sharp,
                                          tol.decision));
  return out;
}

template <typename Real>
struct RankOneParallel {
  /// |<x, y>_A| = ||x||_A ||y||_A.
  Certificate<Real> dependence;
  ParallelismResult<Real> parallel;
  bool agree = true;
};

template <typename Real>
RankOneParallel<Real> rank_one_parallel_identity(const WeightPtr<Real>& weight,
                                                 const SemiVector<Real>& x,
                                                 const SemiVector<Real>& y,
                                                 const Tolerances<Real>& tol = {}) {
  const Real pairing = std::abs(semi_inner(*weight, x, y));
  const Real product = semi_norm(*weight, x) * semi_norm(*weight, y);
  RankOneParallel<Real> out;
  out.dependence = Certificate<Real>::decide("cauchy_schwarz_equality", pairing, product,
                                             relative_gap(pairing, product), tol.decision);
  const auto T = rank_one(weight, x, y);
  out.parallel = is_parallel(T, identity(weight), tol);
  out.agree = out.dependence.verdict == out.parallel.certificate.verdict;
  return out;
}

template <typename Real>
struct DwLowerAttainment {
  /// dw_A(T) = max{w_A(T), ||T||_A^2}.
  Certificate<Real> attained;
  Certificate<Real> operator_orthogonal_to_identity;
  Certificate<Real> identity_orthogonal_to_operator;
  /// False only when the bound is attained but an orthogonality fails.
  bool implication_holds = true;
};

template <typename Real>
DwLowerAttainment<Real> dw_lower_attainment_check(const Operator<Real>& T,
                                                  const Tolerances<Real>& tol = {}) {
  const Matrix<Real>& B = T.reduced();
  const Matrix<Real> Id = Matrix<Real>::Identity(B.rows(), B.cols());
  const auto dw = reduced::davis_wielandt<Real>(B);
  DwLowerAttainment<Real> out;
  out.attained = Certificate<Real>::decide("dw_lower_bound", dw.value, dw.lower,
                                           relative_gap(dw.value, dw.lower), tol.decision);
  out.operator_orthogonal_to_identity = reduced::bj_orthogonal<Real>(B, Id, tol.decision, false);
  out.identity_orthogonal_to_operator = reduced::bj_orthogonal<Real>(Id, B, tol.decision, false);
  out.implication_holds = !out.attained.verdict || (out.operator_orthogonal_to_identity.verdict &&
                                                    out.identity_orthogonal_to_operator.verdict);
  return out;
}

/// One inequality lhs <= rhs with its relative excess.
template <typename Real>
struct InequalityCheck {
  std::string name;
  Real lhs = 0;
  Real rhs = 0;
  Real excess = 0;
};

/// `scale` is the natural magnitude of both sides; it keeps rounding in
/// quantities that vanish exactly from reading as a relative violation.
template <typename Real>
InequalityCheck<Real> inequality(std::string name, Real lhs, Real rhs, Real scale = Real(0)) {
  using std::abs;
  const Real denom = std::max({abs(lhs), abs(rhs), scale, std::numeric_limits<Real>::min()});
  return {std::move(name), lhs, rhs, std::max(Real(0), lhs - rhs) / denom};
}

template <typename Real>
struct DistancePanel {
  Real norm = 0;
  Real omega = 0;
  /// d_A(T, C I) and d_A(I, C T).
  Real distance_to_identity_line = 0;
  Real identity_distance_to_line = 0;
  Real alpha = 0;
  std::vector<InequalityCheck<Real>> checks;
};

/// ||T||^2 - w^2 <= d^2(T, C I) <= ||T||^2 d^2(I, C T), together with
/// 1 - alpha_A(T)^2 <= d^2(I, C T).
template <typename Real>
DistancePanel<Real> distance_inequality_panel(const Operator<Real>& T) {
  const Matrix<Real>& B = T.reduced();
  const Matrix<Real> Id = Matrix<Real>::Identity(B.rows(), B.cols());
  reduced::LineDistanceOptions<Real> opt;
  opt.witness = false;
  opt.sup_form = false;
  DistancePanel<Real> out;
  out.norm = reduced::norm<Real>(B);
  out.omega = reduced::numerical_radius<Real>(B).value;
  out.distance_to_identity_line = reduced::line_distance<Real>(B, Id, opt).distance;
  out.identity_distance_to_line = reduced::line_distance<Real>(Id, B, opt).distance;
  out.alpha = reduced::alpha<Real>(B);
  const Real n2 = out.norm * out.norm;
  const Real dt2 = out.distance_to_identity_line * out.distance_to_identity_line;
  const Real di2 = out.identity_distance_to_line * out.identity_distance_to_line;
  out.checks.push_back(inequality<Real>("norm^2-w^2<=d^2(T,CI)", n2 - out.omega * out.omega, dt2, n2));
  out.checks.push_back(inequality<Real>("d^2(T,CI)<=norm^2*d^2(I,CT)", dt2, n2 * di2, n2));
  out.checks.push_back(inequality<Real>("1-alpha^2<=d^2(I,CT)", Real(1) - out.alpha * out.alpha, di2, Real(1)));
  return out;
}

/// ||T + gamma S||_A^2 >= ||T||_A^2 + |gamma|^2 m_A(S)^2 on a 5 x 5 grid of
/// gamma in [-h, h]^2 with h = ||T||_A / ||S||_A. Holds for every gamma when
/// T _|_BJ S.
template <typename Real>
std::vector<InequalityCheck<Real>> orthogonality_growth_grid(const Operator<Real>& T,
                                                             const Operator<Real>& S) {
  check_same_space(T, S);
  const Matrix<Real>& BT = T.reduced();
  const Matrix<Real>& BS = S.reduced();
  const Real nt = reduced::norm<Real>(BT);
  const Real ns = reduced::norm<Real>(BS);
  const Real ms = reduced::min_modulus<Real>(BS);
  const Real h = ns > Real(0) ? std::max(nt, Real(1)) / ns : Real(1);
  std::vector<InequalityCheck<Real>> out;
  for (int j = -2; j <= 2; ++j)
    for (int k = -2; k <= 2; ++k) {
      const Complex<Real> gamma(h * Real(j) / Real(2), h * Real(k) / Real(2));
      const Real lhs = reduced::norm<Real>(Matrix<Real>(BT + gamma * BS));
      out.push_back(inequality<Real>("growth(" + std::to_string(j) + "," + std::to_string(k) + ")",
                                     nt * nt + std::norm(gamma) * ms * ms, lhs * lhs));
    }
  return out;
}

}  // namespace semihilbert
