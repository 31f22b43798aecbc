#include "semihilbert/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>
#include <utility>
#include <vector>

namespace semihilbert::harness {

namespace {

using Mat = Matrix<double>;
using Vec = Vector<double>;

/// Unit vector of C^r (r <= 3) modulo a global phase, from parameters in
/// [0, 1)^(2r - 2). |u_i|^2 is uniform on the simplex when the parameters are
/// uniform.
Vec sphere_point(int r, const std::vector<double>& p) {
  Vec u(r);
  if (r == 1) {
    u(0) = 1;
  } else if (r == 2) {
    const double t = std::clamp(p[0], 0.0, 1.0);
    u(0) = std::sqrt(1 - t);
    u(1) = std::polar(std::sqrt(t), 2 * M_PI * p[1]);
  } else {
    const double a = std::sqrt(std::clamp(p[0], 0.0, 1.0));
    const double t2 = std::clamp(p[1], 0.0, 1.0);
    u(0) = std::sqrt(std::max(0.0, 1 - a));
    u(1) = std::polar(std::sqrt(a * (1 - t2)), 2 * M_PI * p[2]);
    u(2) = std::polar(std::sqrt(a * t2), 2 * M_PI * p[3]);
  }
  return u;
}

/// Additive recurrence with the generalized golden ratio of the dimension.
std::vector<std::vector<double>> low_discrepancy(int dim, long count) {
  std::vector<std::vector<double>> pts;
  if (dim == 0) {
    pts.emplace_back();
    return pts;
  }
  double phi = 2.0;
  for (int i = 0; i < 64; ++i) phi = std::pow(1 + phi, 1.0 / (dim + 1));
  std::vector<double> alpha(dim);
  for (int j = 0; j < dim; ++j) alpha[j] = std::fmod(std::pow(1 / phi, j + 1), 1.0);
  pts.reserve(count);
  for (long k = 0; k < count; ++k) {
    std::vector<double> p(dim);
    for (int j = 0; j < dim; ++j) p[j] = std::fmod(0.5 + alpha[j] * double(k + 1), 1.0);
    pts.push_back(std::move(p));
  }
  return pts;
}

/// Hooke-Jeeves pattern search maximizing f over R^dim from p.
double pattern_search(const std::function<double(const std::vector<double>&)>& f,
                      std::vector<double> p, double step) {
  const int dim = static_cast<int>(p.size());
  int evals = 0;
  auto eval = [&](const std::vector<double>& q) {
    ++evals;
    return f(q);
  };
  auto better = [](double v, double best) {
    return v > best + 4 * std::numeric_limits<double>::epsilon() * std::abs(best);
  };
  auto explore = [&](std::vector<double> x, double fx) {
    for (int j = 0; j < dim; ++j)
      for (double s : {step, -step}) {
        std::vector<double> q = x;
        q[j] += s;
        const double v = eval(q);
        if (better(v, fx)) {
          x = std::move(q);
          fx = v;
          break;
        }
      }
    return std::pair{x, fx};
  };

  double best = eval(p);
  while (step > 1e-10 && evals < 20000) {
    auto [x, fx] = explore(p, best);
    if (!better(fx, best)) {
      step *= 0.5;
      continue;
    }
    // Pattern moves along the last successful displacement.
    while (evals < 20000) {
      std::vector<double> jump(dim);
      for (int j = 0; j < dim; ++j) jump[j] = 2 * x[j] - p[j];
      p = std::move(x);
      best = fx;
      const double fj = eval(jump);
      std::tie(x, fx) = explore(jump, fj);
      if (!better(fx, best)) break;
    }
  }
  return best;
}

/// Up to `count` high-valued samples, each at least `gap` away from the
/// others in the max norm with periodic phases, or in the moduli alone.
std::vector<long> diverse_starts(const std::vector<double>& values,
                                 const std::vector<std::vector<double>>& pts, int count, double gap,
                                 bool moduli_only) {
  std::vector<long> order(values.size());
  for (long k = 0; k < static_cast<long>(order.size()); ++k) order[k] = k;
  const long head = std::min<long>(order.size(), 512);
  std::partial_sort(order.begin(), order.begin() + head, order.end(),
                    [&](long a, long b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });
  std::vector<long> chosen;
  for (long i = 0; i < head && static_cast<int>(chosen.size()) < count; ++i) {
    const auto& p = pts[order[i]];
    const int clamped = static_cast<int>(p.size()) / 2;
    bool far = true;
    for (long c : chosen) {
      double d = 0;
      const std::size_t span = moduli_only ? static_cast<std::size_t>(clamped) : p.size();
      for (std::size_t j = 0; j < span; ++j) {
        double e = std::abs(p[j] - pts[c][j]);
        if (static_cast<int>(j) >= clamped) e = std::min(e, 1 - e);
        d = std::max(d, e);
      }
      far = far && d >= gap;
    }
    if (far) chosen.push_back(order[i]);
  }
  return chosen;
}

/// Largest eigenvalue of a Hermitian matrix of order <= 3 in closed form.
double hermitian_lambda_max(const Mat& G) {
  const Index r = G.rows();
  if (r == 1) return G(0, 0).real();
  if (r == 2) {
    const double a = G(0, 0).real();
    const double d = G(1, 1).real();
    return 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + std::norm(G(0, 1)));
  }
  const double p1 = std::norm(G(0, 1)) + std::norm(G(0, 2)) + std::norm(G(1, 2));
  const double q = (G(0, 0).real() + G(1, 1).real() + G(2, 2).real()) / 3;
  const double a0 = G(0, 0).real() - q;
  const double a1 = G(1, 1).real() - q;
  const double a2 = G(2, 2).real() - q;
  const double p2 = a0 * a0 + a1 * a1 + a2 * a2 + 2 * p1;
  if (p2 <= 0) return q;
  const double p = std::sqrt(p2 / 6);
  Mat Bm = G;
  for (int i = 0; i < 3; ++i) Bm(i, i) -= q;
  Bm /= p;
  const Complex<double> det = Bm(0, 0) * (Bm(1, 1) * Bm(2, 2) - Bm(1, 2) * Bm(2, 1)) -
                              Bm(0, 1) * (Bm(1, 0) * Bm(2, 2) - Bm(1, 2) * Bm(2, 0)) +
                              Bm(0, 2) * (Bm(1, 0) * Bm(2, 1) - Bm(1, 1) * Bm(2, 0));
  const double half = std::clamp(det.real() / 2, -1.0, 1.0);
  return q + 2 * p * std::cos(std::acos(half) / 3);
}

}  // namespace

OracleValues brute_oracle(const Operator<double>& T, const Operator<double>& S, int grid_density) {
  check_same_space(T, S);
  const Weight<double>& W = T.weight();
  const int r = static_cast<int>(W.rank());
  if (r > 3) throw Error(ErrorKind::RankTooLarge, "oracle needs rank A <= 3");
  if (grid_density < 2) throw Error(ErrorKind::InvalidArgument, "grid density must be >= 2");
  (void)T.reduced();
  (void)S.reduced();

  // A-unit vectors x = L u for unit u in C^r.
  const Mat L =
      W.range_basis() * W.range_eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex<double>>().asDiagonal();
  const Mat& A = W.matrix();
  const Mat TL = T.matrix() * L;
  const Mat SL = S.matrix() * L;

  struct Sample {
    double norm2;
    double snorm2;
    Complex<double> omega;
    Complex<double> pairing;
  };
  auto eval_unit = [&](const Vec& u) {
    const Vec x = L * u;
    const Vec tx = TL * u;
    const Vec sx = SL * u;
    const Vec atx = A * tx;
    return Sample{(tx.adjoint() * atx)(0).real(), (sx.adjoint() * A * sx)(0).real(),
                  (x.adjoint() * atx)(0), (sx.adjoint() * atx)(0)};
  };
  auto eval = [&](const std::vector<double>& p) { return eval_unit(sphere_point(r, p)); };
  std::vector<std::function<double(const Sample&)>> objectives{
      [](const Sample& s) { return std::sqrt(std::max(s.norm2, 0.0)); },
      [](const Sample& s) { return std::abs(s.omega); },
      [](const Sample& s) { return std::sqrt(std::norm(s.omega) + s.norm2 * s.norm2); },
      [](const Sample& s) { return std::abs(s.pairing); },
      [](const Sample& s) { return std::sqrt(std::max(s.snorm2, 0.0)); }};

  const int dim = 2 * r - 2;
  const long count = dim == 0 ? 1 : static_cast<long>(grid_density) * grid_density;
  const auto pts = low_discrepancy(dim, count);
  std::vector<std::vector<double>> values(objectives.size(), std::vector<double>(pts.size()));
  for (long k = 0; k < static_cast<long>(pts.size()); ++k) {
    const Sample s = eval(pts[k]);
    for (std::size_t q = 0; q < objectives.size(); ++q) values[q][k] = objectives[q](s);
  }
  std::vector<double> best(objectives.size(), 0.0);
  const double step = dim == 0 ? 0.0 : 2.0 / grid_density;
  // Local refinement in the chart u0 + c, c in C^r, which stays smooth where
  // the sampling parameters degenerate at the simplex faces.
  for (std::size_t q = 0; q < objectives.size(); ++q)
    for (bool moduli_only : {false, true})
      for (long k : diverse_starts(values[q], pts, 6, 0.2, moduli_only)) {
        best[q] = std::max(best[q], values[q][k]);
        if (dim == 0) continue;
        const Vec u0 = sphere_point(r, pts[k]);
        auto local = [&](const std::vector<double>& c) {
          Vec u = u0;
          for (int i = 0; i < r; ++i) u(i) += Complex<double>(c[2 * i], c[2 * i + 1]);
          const double nu = u.norm();
          return nu > 0 ? objectives[q](eval_unit(u / nu)) : 0.0;
        };
        best[q] = std::max(best[q], pattern_search(local, std::vector<double>(2 * r, 0.0), step));
      }

  OracleValues out;
  out.points = count;
  out.norm = best[0];
  out.omega = best[1];
  out.davis_wielandt = best[2];
  out.pairing = best[3];
  const double ns = best[4];

  // inf over gamma of lambda_max(G(gamma))^{1/2}, G(gamma) the Gram matrix
  // of (T + gamma S) L in the A-inner product.
  const Mat M1 = TL.adjoint() * A * TL;
  const Mat M2 = TL.adjoint() * A * SL;
  const Mat M3 = SL.adjoint() * A * SL;
  auto dist2 = [&](Complex<double> g) {
    const Mat G = M1 + g * M2 + std::conj(g) * M2.adjoint() + std::norm(g) * M3;
    return hermitian_lambda_max((G + G.adjoint()) * 0.5);
  };
  if (ns <= 0) {
    out.distance = out.norm;
    return out;
  }
  // dist2 is convex in gamma and exceeds dist2(0) outside |gamma| <= R.
  const double R = 2 * out.norm / ns;
  double bestd = dist2(0);
  for (int i = 0; i <= grid_density; ++i)
    for (int k = 0; k <= grid_density; ++k)
      bestd = std::min(bestd, dist2({-R + 2 * R * i / grid_density, -R + 2 * R * k / grid_density}));
  // Nested golden sections; the inner minimum is convex in the outer coordinate.
  auto golden = [&](const std::function<double(double)>& f) {
    const double g = 0.5 * (std::sqrt(5.0) - 1);
    double a = -R, b = R;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-10 * R) {
      if (fc <= fd) {
        b = d, d = c, fd = fc;
        c = b - g * (b - a), fc = f(c);
      } else {
        a = c, c = d, fc = fd;
        d = a + g * (b - a), fd = f(d);
      }
    }
    return std::min(fc, fd);
  };
  bestd = std::min(bestd, golden([&](double re) { return golden([&](double im) { return dist2({re, im}); }); }));
  out.distance = std::sqrt(std::max(bestd, 0.0));
  return out;
}

}  // namespace semihilbert::harness
