#pragma once

#include "semihilbert/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace semihilbert::detail {

template <typename Real>
constexpr Real two_pi() {
  return Real(2) * std::numbers::pi_v<Real>;
}

template <typename Real>
Complex<Real> unit_phase(Real theta) {
  return std::polar(Real(1), theta);
}

/// (e^{i theta} M + e^{-i theta} M^*) / 2.
template <typename Real>
Matrix<Real> rotated_hermitian_part(const Matrix<Real>& M, Real theta) {
  const Complex<Real> phase = unit_phase(theta);
  Matrix<Real> H = phase * M;
  return (H + H.adjoint()) * Real(0.5);
}

template <typename Real>
Real lambda_max(const Matrix<Real>& H) {
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(H.rows() - 1);
}

template <typename Real>
Real lambda_min(const Matrix<Real>& H) {
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

template <typename Real>
std::pair<Real, Vector<Real>> top_eigenpair(const Matrix<Real>& H) {
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(H);
  const Index last = H.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

/// Largest singular value. The Gram route is accurate to relative machine
/// precision for the top value, which is all the callers need.
template <typename Real>
Real spectral_norm(const Matrix<Real>& M) {
  if (M.size() == 0) return Real(0);
  using std::max;
  using std::sqrt;
  const Matrix<Real> gram = M.adjoint() * M;
  return sqrt(max(Real(0), lambda_max<Real>(gram)));
}

template <typename Real>
struct SingularTriple {
  Real sigma = 0;
  Vector<Real> left;
  Vector<Real> right;
};

template <typename Real>
SingularTriple<Real> top_singular(const Matrix<Real>& M) {
  Eigen::JacobiSVD<Matrix<Real>> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

template <typename Real>
Real smallest_singular_value(const Matrix<Real>& M) {
  if (M.size() == 0) return Real(0);
  Eigen::JacobiSVD<Matrix<Real>> svd(M);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

template <typename Real>
Real spectral_radius_of(const Matrix<Real>& M) {
  if (M.size() == 0) return Real(0);
  Eigen::ComplexEigenSolver<Matrix<Real>> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Golden-section maximization of f on [a, b] down to the given width.
template <typename Real, typename F>
std::pair<Real, Real> golden_section_max(F&& f, Real a, Real b, Real width) {
  const Real inv_phi = (std::sqrt(Real(5)) - Real(1)) / Real(2);
  Real c = b - inv_phi * (b - a);
  Real d = a + inv_phi * (b - a);
  Real fc = f(c);
  Real fd = f(d);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Maximizes a 2*pi-periodic function: uniform sweep over `samples` angles,
/// then golden-section refinement inside the brackets of the best few local
/// maxima of the sweep.
template <typename Real, typename F>
std::pair<Real, Real> maximize_on_circle(F&& f, int samples, Real width = Real(1e-12),
                                         int brackets = 3) {
  const Real h = two_pi<Real>() / Real(samples);
  std::vector<Real> values(samples);
  for (int k = 0; k < samples; ++k) values[k] = f(h * Real(k));

  std::vector<int> peaks;
  for (int k = 0; k < samples; ++k) {
    const Real prev = values[(k + samples - 1) % samples];
    const Real next = values[(k + 1) % samples];
    if (values[k] >= prev && values[k] >= next) peaks.push_back(k);
  }
  if (peaks.empty()) peaks.push_back(0);
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](int i, int j) { return values[i] > values[j]; });
  if (static_cast<int>(peaks.size()) > brackets) peaks.resize(brackets);

  Real best_theta = h * Real(peaks.front());
  Real best_value = values[peaks.front()];
  for (int k : peaks) {
    const Real center = h * Real(k);
    auto [theta, value] = golden_section_max<Real>(f, center - h, center + h, width);
    if (value > best_value) {
      best_value = value;
      best_theta = theta;
    }
  }
  best_theta = std::fmod(best_theta, two_pi<Real>());
  if (best_theta < 0) best_theta += two_pi<Real>();
  return {best_theta, best_value};
}

template <typename Real>
Vector<Real> random_unit_vector(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector<Real> v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex<Real>(Real(normal(rng)), Real(normal(rng)));
  const Real n = v.norm();
  if (n == Real(0)) {
    v.setZero();
    v(0) = 1;
    return v;
  }
  return v / n;
}

template <typename Real>
struct AscentResult {
  Vector<Real> point;
  Real value = 0;
  int iterations = 0;
};

/// Riemannian gradient ascent on the unit sphere of C^k with Armijo
/// backtracking. `fg(u)` returns (value, euclidean gradient) where the
/// gradient G satisfies d f = Re(du^* G).
template <typename Real, typename FG>
AscentResult<Real> ascend_on_sphere(FG&& fg, Vector<Real> u, int max_iter = 400) {
  using std::abs;
  using std::max;
  u.normalize();
  auto [value, grad] = fg(u);
  Real step = Real(-1);
  int it = 0;
  bool stalled = false;
  for (; it < max_iter && !stalled; ++it) {
    const Real radial = (u.adjoint() * grad)(0).real();
    Vector<Real> tangent = grad - radial * u;
    const Real tnorm = tangent.norm();
    const Real scale = max(abs(value), std::numeric_limits<Real>::min());
    if (!(tnorm > Real(1e-15) * max(scale, grad.norm()))) break;
    if (step < 0) step = Real(0.25) * scale / (tnorm * tnorm);

    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Vector<Real> cand = u + step * tangent;
      cand.normalize();
      auto [cv, cg] = fg(cand);
      if (cv >= value + Real(1e-4) * step * tnorm * tnorm) {
        const Real gain = cv - value;
        u = std::move(cand);
        value = cv;
        grad = std::move(cg);
        step *= Real(2);
        accepted = true;
        stalled = gain <= Real(8) * std::numeric_limits<Real>::epsilon() * scale;
        break;
      }
      step *= Real(0.5);
    }
    if (!accepted) break;
  }
  return {u, value, it};
}

/// Finds a unit w with w^* K w = z when z lies in the numerical range of the
/// 2x2 compression of K to span{x, y}. Returns the best vector of the
/// one-parameter family when z is not reachable.
template <typename Real>
Vector<Real> solve_two_dimensional(const Matrix<Real>& K, const Vector<Real>& x,
                                   const Vector<Real>& y, Complex<Real> z) {
  using std::abs;
  using std::sqrt;
  Vector<Real> q1 = x.normalized();
  Vector<Real> q2 = y - (q1.adjoint() * y)(0) * q1;
  const Real q2n = q2.norm();
  if (q2n <= Real(1e-12) * y.norm()) return q1;
  q2 /= q2n;

  Matrix<Real> Q(x.size(), 2);
  Q.col(0) = q1;
  Q.col(1) = q2;
  Matrix<Real> G = Q.adjoint() * K * Q;
  G -= z * Matrix<Real>::Identity(2, 2);

  Matrix<Real> H1 = (G + G.adjoint()) * Real(0.5);
  Matrix<Real> H2 = (G - G.adjoint()) * Complex<Real>(0, Real(-0.5));
  const Real h1scale = H1.norm();
  const Real h2scale = H2.norm();
  const bool swap = h1scale <= Real(1e-14) * (h1scale + h2scale);
  if (swap) std::swap(H1, H2);

  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(H1);
  const Real mu_lo = es.eigenvalues()(0);
  const Real mu_hi = es.eigenvalues()(1);
  const Vector<Real> e_lo = es.eigenvectors().col(0);
  const Vector<Real> e_hi = es.eigenvectors().col(1);
  if (mu_lo > 0) return Q * e_lo;
  if (mu_hi < 0) return Q * e_hi;

  // Every w = a e_hi + b e^{i phi} e_lo with a^2 mu_hi + b^2 mu_lo = 0 zeroes
  // the first Hermitian form; phi then tunes the second.
  const Real a = sqrt(-mu_lo);
  const Real b = sqrt(mu_hi);
  const Real norm2 = a * a + b * b;
  if (norm2 == Real(0)) return Q * e_hi;
  const Complex<Real> h12 = (e_hi.adjoint() * H2 * e_lo)(0);
  const Real c0 = a * a * (e_hi.adjoint() * H2 * e_hi)(0).real() +
                  b * b * (e_lo.adjoint() * H2 * e_lo)(0).real();
  const Real amp = Real(2) * a * b * abs(h12);
  Real phi = 0;
  if (amp > 0) {
    const Real c = std::clamp(-c0 / amp, Real(-1), Real(1));
    phi = std::acos(c) - std::arg(h12);
  }
  Vector<Real> w = a * e_hi + b * unit_phase(phi) * e_lo;
  w /= sqrt(norm2);
  return Q * w;
}

/// Unit vector w with w^* K w as close to 0 as the numerical range allows.
/// Exact up to rounding when 0 lies in W(K): a triangle of support points
/// containing 0 is located and two 2x2 inverse problems finish the job. The
/// inscribed support polygon is refined at the edge facing 0 while 0 may lie
/// in W(K) but outside the polygon.
template <typename Real>
Vector<Real> zero_in_numerical_range(const Matrix<Real>& K, int directions = 64,
                                     int refinements = 60) {
  using std::abs;
  const Index k = K.rows();
  if (k == 1) return Vector<Real>::Ones(1);

  struct Support {
    Real theta;
    Real height;  // support function lambda_max(Re(e^{i theta} K))
    Complex<Real> point;
    Vector<Real> vector;
  };
  auto support = [&](Real theta) {
    auto [lam, v] = top_eigenpair<Real>(rotated_hermitian_part<Real>(K, theta));
    return Support{theta, lam, (v.adjoint() * K * v)(0), v};
  };
  std::vector<Support> poly;
  for (int j = 0; j < directions; ++j)
    poly.push_back(support(two_pi<Real>() * Real(j) / Real(directions)));

  auto value_at = [&](const Vector<Real>& w) { return abs((w.adjoint() * K * w)(0)); };
  auto cross = [](Complex<Real> a, Complex<Real> b) {
    return a.real() * b.imag() - a.imag() * b.real();
  };

  Vector<Real> best = poly[0].vector;
  Real best_value = value_at(best);
  auto consider = [&](const Vector<Real>& w) {
    const Real v = value_at(w);
    if (v < best_value) {
      best_value = v;
      best = w;
    }
  };

  // Fan triangulation from the first support point.
  auto fan = [&] {
    const Complex<Real> p0 = poly[0].point;
    for (std::size_t j = 1; j + 1 < poly.size(); ++j) {
      const Complex<Real> p1 = poly[j].point;
      const Complex<Real> p2 = poly[j + 1].point;
      const Real area = cross(p1 - p0, p2 - p0);
      if (area == Real(0)) continue;
      const Real l1 = cross(Complex<Real>(0) - p0, p2 - p0) / area;
      const Real l2 = cross(p1 - p0, Complex<Real>(0) - p0) / area;
      const Real l0 = Real(1) - l1 - l2;
      const Real slack = Real(-1e-12);
      if (l0 < slack || l1 < slack || l2 < slack) continue;
      const Real edge = l1 + l2;
      if (edge <= Real(0)) {
        consider(poly[0].vector);
        continue;
      }
      const Complex<Real> q = (l1 * p1 + l2 * p2) / edge;
      Vector<Real> wq = solve_two_dimensional<Real>(K, poly[j].vector, poly[j + 1].vector, q);
      consider(solve_two_dimensional<Real>(K, poly[0].vector, wq, Complex<Real>(0)));
    }
  };

  const Real target = Real(64) * std::numeric_limits<Real>::epsilon() * K.norm();
  for (int round = 0;; ++round) {
    fan();
    if (best_value <= target || round == refinements) break;
    // A negative support value separates 0 from W(K).
    Real lowest = poly[0].height;
    for (const auto& p : poly) lowest = std::min(lowest, p.height);
    if (lowest < -target) break;
    const std::size_t m = poly.size();
    std::size_t at = m;
    Real nearest = std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const Complex<Real> a = poly[j].point;
      const Complex<Real> ab = poly[(j + 1) % m].point - a;
      const Real len2 = std::norm(ab);
      const Real t = len2 > 0 ? std::clamp((-(std::conj(ab) * a)).real() / len2, Real(0), Real(1))
                              : Real(0);
      const Real d = abs(a + t * ab);
      if (d < nearest) {
        nearest = d;
        at = j;
      }
    }
    const Real t0 = poly[at].theta;
    const Real t1 = at + 1 == m ? poly[0].theta + two_pi<Real>() : poly[at + 1].theta;
    if (!(t1 - t0 > Real(1e-13))) break;
    poly.insert(poly.begin() + static_cast<std::ptrdiff_t>(at + 1), support(Real(0.5) * (t0 + t1)));
  }

  // Degenerate or boundary cases: project 0 onto each polygon edge.
  const std::size_t m = poly.size();
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t jn = (j + 1) % m;
    const Complex<Real> a = poly[j].point;
    const Complex<Real> ab = poly[jn].point - a;
    const Real len2 = std::norm(ab);
    Real t = len2 > 0 ? std::clamp((-(std::conj(ab) * a)).real() / len2, Real(0), Real(1))
                      : Real(0);
    consider(solve_two_dimensional<Real>(K, poly[j].vector, poly[jn].vector, a + t * ab));
  }
  return best.normalized();
}

}  // namespace semihilbert::detail
