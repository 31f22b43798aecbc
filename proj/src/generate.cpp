#include "semihilbert/harness.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace semihilbert::harness {

namespace {

using Mat = Matrix<double>;
using Vec = Vector<double>;
using Rng = std::mt19937_64;

Mat gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) M(i, k) = Complex<double>(g(rng), g(rng));
  return M;
}

Mat unitary(Index n, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(gaussian(n, n, rng));
  Mat Q = qr.householderQ();
  const Mat R = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double a = std::abs(R(k, k));
    if (a > 0) Q.col(k) *= R(k, k) / a;
  }
  return Q;
}

double log_uniform(double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

Complex<double> unit_complex(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
  return std::polar(1.0, u(rng));
}

struct Draw {
  Mat T;
  Vec x;
  Vec y;
};

/// Operator part acting inside N(A); invisible to every A-quantity.
Mat kernel_part(const Weight<double>& A, Rng& rng) {
  const Index n = A.dim();
  const Mat Q = Mat::Identity(n, n) - A.projector();
  return Q * gaussian(n, n, rng) * Q;
}

Draw draw_family(Family family, const Weight<double>& A, const Mat& Araw, Rng& rng) {
  const Index n = A.dim();
  const Index r = A.rank();
  const Mat P = A.projector();
  const Mat Q = Mat::Identity(n, n) - P;
  Draw d;
  switch (family) {
    case Family::Generic: {
      const Mat X = gaussian(n, n, rng);
      d.T = X - P * X * Q;
      break;
    }
    case Family::Diagonal: {
      d.T = Mat::Zero(n, n);
      const Mat g = gaussian(n, 1, rng);
      for (Index i = 0; i < n; ++i) d.T(i, i) = g(i);
      (void)Araw;
      break;
    }
    case Family::ASelfadjoint: {
      const Mat H0 = gaussian(n, n, rng);
      const Mat H = P * (H0 + H0.adjoint()) * 0.5 * P;
      d.T = A.pinv() * H + kernel_part(A, rng);
      break;
    }
    case Family::ANormal: {
      const Mat U = unitary(r, rng);
      const Mat z = gaussian(r, 1, rng);
      const Mat B = U * z.col(0).asDiagonal() * U.adjoint();
      d.T = A.lift_matrix(B) + kernel_part(A, rng);
      break;
    }
    case Family::NilpotentReduced: {
      const Mat U = unitary(r, rng);
      const Mat N = gaussian(r, r, rng).template triangularView<Eigen::StrictlyUpper>();
      d.T = A.lift_matrix(U * N * U.adjoint()) + kernel_part(A, rng);
      break;
    }
    case Family::RankOne: {
      d.x = gaussian(n, 1, rng);
      d.y = gaussian(n, 1, rng);
      // A-orthogonality needs rank >= 2 to leave a nonzero operator.
      std::uniform_int_distribution<int> mode(0, r >= 2 ? 2 : 1);
      switch (mode(rng)) {
        case 1:  // A^{1/2}x and A^{1/2}y dependent.
          d.y = (Complex<double>(log_uniform(0.5, 2, rng)) * unit_complex(rng)) * d.x +
                Q * gaussian(n, 1, rng);
          break;
        case 2: {  // <x, y>_A = 0.
          const double nx2 = semi_norm(A, d.x) * semi_norm(A, d.x);
          if (nx2 > 0) d.y -= (semi_inner(A, d.y, d.x) / nx2) * d.x;
          break;
        }
        default:
          break;
      }
      d.T = d.x * (A.matrix() * d.y).adjoint();
      break;
    }
  }
  return d;
}

bool normaloid_family(Family f) {
  return f == Family::Diagonal || f == Family::ASelfadjoint || f == Family::ANormal;
}

/// Rescales so that ||T||_A is log-uniform in [1/2, 2]. A reduction that
/// vanishes up to rounding is made exactly zero instead of being blown up.
void normalize(Draw& d, const Weight<double>& A, Rng& rng) {
  const double target = log_uniform(0.5, 2.0, rng);
  const Operator<double> op(std::make_shared<const Weight<double>>(A), d.T);
  const double nt = reduced::norm<double>(op.reduced());
  const RealVector<double>& ev = A.range_eigenvalues();
  const double ceiling = std::sqrt(ev(0) / ev(ev.size() - 1)) * d.T.norm();
  if (!(nt > 1e-10 * ceiling)) {
    d.T.setZero();
    if (d.x.size() > 0) d.x.setZero();
    return;
  }
  d.T *= target / nt;
  if (d.x.size() > 0) d.x *= target / nt;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::Generic: return "generic";
    case Family::Diagonal: return "diagonal";
    case Family::ASelfadjoint: return "a_selfadjoint";
    case Family::ANormal: return "a_normal";
    case Family::NilpotentReduced: return "nilpotent_reduced";
    case Family::RankOne: return "rank_one";
  }
  return "unknown";
}

const char* to_string(PairMode m) {
  switch (m) {
    case PairMode::Independent: return "independent";
    case PairMode::Identity: return "identity";
    case PairMode::Sharp: return "sharp";
    case PairMode::Multiple: return "multiple";
  }
  return "unknown";
}

std::optional<Family> family_from_string(std::string_view s) {
  for (Family f : kFamilies)
    if (s == to_string(f)) return f;
  return std::nullopt;
}

std::optional<PairMode> pair_mode_from_string(std::string_view s) {
  for (PairMode m : kPairModes)
    if (s == to_string(m)) return m;
  return std::nullopt;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Instance generate(const InstanceSpec& spec) {
  if (spec.dim < 1 || spec.dim > 64 || spec.rank < 1 || spec.rank > spec.dim)
    throw Error(ErrorKind::BadSpec, "need 1 <= rank <= dim <= 64");
  if (!(spec.entry_scale > 0) || !std::isfinite(spec.entry_scale))
    throw Error(ErrorKind::BadSpec, "entry_scale must be positive");

  Rng rng(spec.seed);
  const Index n = spec.dim;
  const Index r = spec.rank;

  Mat Araw = Mat::Zero(n, n);
  if (spec.family == Family::Diagonal) {
    std::vector<Index> slots(n);
    for (Index i = 0; i < n; ++i) slots[i] = i;
    std::shuffle(slots.begin(), slots.end(), rng);
    for (Index i = 0; i < r; ++i)
      Araw(slots[i], slots[i]) = spec.entry_scale * log_uniform(1e-3, 1e3, rng);
  } else {
    const Mat V = unitary(n, rng);
    RealVector<double> d = RealVector<double>::Zero(n);
    for (Index i = 0; i < r; ++i) d(i) = spec.entry_scale * log_uniform(1e-3, 1e3, rng);
    Araw = V * d.cast<Complex<double>>().asDiagonal() * V.adjoint();
    Araw = (Araw + Araw.adjoint()) * 0.5;
  }

  Instance inst;
  inst.spec = spec;
  inst.weight = std::make_shared<const Weight<double>>(make_weight(Araw));
  const Weight<double>& A = *inst.weight;
  if (A.rank() != r) throw Error(ErrorKind::BadSpec, "generated weight lost rank");

  Draw t = draw_family(spec.family, A, Araw, rng);
  if (normaloid_family(spec.family)) {
    // Half of the normaloid draws are rotated so that ||T||_A is an
    // eigenvalue of T~, which makes the Daugavet equation hold.
    std::bernoulli_distribution coin(0.5);
    if (coin(rng)) {
      const Operator<double> op(inst.weight, t.T);
      Eigen::ComplexEigenSolver<Mat> es(op.reduced(), false);
      Index k = 0;
      es.eigenvalues().cwiseAbs().maxCoeff(&k);
      const Complex<double> lam = es.eigenvalues()(k);
      if (std::abs(lam) > 0) t.T *= std::conj(lam) / std::abs(lam);
    }
  }
  normalize(t, A, rng);
  inst.T = t.T;
  inst.x = t.x;
  inst.y = t.y;

  switch (spec.pair) {
    case PairMode::Independent: {
      Draw s = draw_family(spec.family, A, Araw, rng);
      normalize(s, A, rng);
      inst.S = s.T;
      break;
    }
    case PairMode::Identity:
      inst.S = Mat::Identity(n, n);
      break;
    case PairMode::Sharp:
      inst.S = A.pinv() * inst.T.adjoint() * A.matrix();
      break;
    case PairMode::Multiple:
      inst.S = (log_uniform(0.5, 2.0, rng) * unit_complex(rng)) * inst.T;
      break;
  }
  return inst;
}

}  // namespace semihilbert::harness
