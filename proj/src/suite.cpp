#include "semihilbert/harness.hpp"

#include "semihilbert/geometry.hpp"
#include "semihilbert/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <thread>

namespace semihilbert::harness {

namespace {

using Mat = Matrix<double>;
using Vec = Vector<double>;
using Op = Operator<double>;
using Rng = std::mt19937_64;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Inequality tolerance for the chains, and the agreement tolerance for
/// residuals of true verdicts in the equivalence clusters.
constexpr double kChainTol = 1e-8;
constexpr double kConsensusTol = 1e-6;
/// Relative perturbation size for the center-of-mass stability panel.
constexpr double kPerturbation = 1e-3;
/// Oracle constant C in |route - oracle| <= C / grid_density.
constexpr double kOracleConstant = 1.0;
/// Structural tolerance for generated families.
constexpr double kGenTol = 1e-9;

struct Outcome {
  std::string name;
  bool pass = true;
  double residual = 0;
  int verdict = -1;  // -1: not a decision, 0: false, 1: true
};

struct TrialResult {
  std::uint64_t seed = 0;
  Instance instance;
  int resamples = 0;
  std::vector<Outcome> outcomes;
};

class Recorder {
 public:
  explicit Recorder(const Tolerances<double>& tol) : tol_(tol) {}

  void check(const std::string& name, double residual, double tol, int verdict = -1) {
    const bool pass = std::isfinite(residual) && residual <= tol;
    out_.push_back({name, pass, residual, verdict});
  }
  void consensus(const std::string& name, bool pass, double residual, int verdict) {
    out_.push_back({name, pass, residual, verdict});
  }
  /// Flags the trial when a decision residual sits too close to its
  /// threshold for the verdict to be trusted.
  void watch(double residual, double tol) {
    if (residual > tol / 10 && residual < tol * 1e3) ambiguous_ = true;
  }
  void watch(const Certificate<double>& c) { watch(c.residual, c.tol); }
  /// Flags a nonzero difference operator small enough that a squared
  /// residual built from it passes the decision tolerance.
  void watch_difference(double relative, const Tolerances<double>& tol) {
    if (relative > tol.num && relative < 10 * std::sqrt(tol.decision)) ambiguous_ = true;
  }

  void run(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception&) {
      out_.push_back({name, false, kInf, -1});
    }
  }

  const Tolerances<double>& tol() const { return tol_; }
  bool ambiguous() const { return ambiguous_; }
  std::vector<Outcome> take() { return std::move(out_); }

 private:
  Tolerances<double> tol_;
  std::vector<Outcome> out_;
  bool ambiguous_ = false;
};

Mat gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) M(i, k) = Complex<double>(g(rng), g(rng));
  return M;
}

double max_excess(const std::vector<InequalityCheck<double>>& checks) {
  double worst = 0;
  for (const auto& c : checks) worst = std::max(worst, c.excess);
  return worst;
}

/// B_T0 with ||B_T0|| = 1 attained only at u and <B_T0 u, B_S u> = 0, so that
/// T0 _|_BJ S holds exactly.
Mat orthogonal_companion(const Mat& BS, Rng& rng) {
  const Index r = BS.rows();
  Vec u = gaussian(r, 1, rng);
  u.normalize();
  const Vec s = BS * u;
  Vec w = gaussian(r, 1, rng);
  if (s.norm() > 0) w -= (s.dot(w) / s.squaredNorm()) * s;
  w.normalize();
  const Mat Id = Mat::Identity(r, r);
  Mat R = (Id - w * w.adjoint()) * gaussian(r, r, rng) * (Id - u * u.adjoint());
  const double rn = reduced::norm<double>(R);
  std::uniform_real_distribution<double> shrink(0.3, 0.9);
  if (rn > 0) R *= shrink(rng) / rn;
  return w * u.adjoint() + R;
}

void weight_properties(const Instance& inst, Rng& rng, Recorder& rec) {
  const Weight<double>& A = *inst.weight;
  const Index n = A.dim();
  const Index r = A.rank();
  const double tol = rec.tol().num;

  rec.run("cauchy_schwarz", [&] {
    double worst = 0;
    for (int k = 0; k < 8; ++k) {
      const Vec x = gaussian(n, 1, rng);
      const Vec y = gaussian(n, 1, rng);
      const double lhs = std::abs(semi_inner(A, x, y));
      const double rhs = semi_norm(A, x) * semi_norm(A, y);
      worst = std::max(worst, inequality<double>("", lhs, rhs, A.norm() * x.norm() * y.norm()).excess);
    }
    rec.check("cauchy_schwarz", worst, tol);
  });

  rec.run("reduced_isometry", [&] {
    double worst = 0;
    for (int k = 0; k < 8; ++k) {
      const Vec x = gaussian(n, 1, rng);
      const double direct = std::sqrt(std::max(0.0, (x.adjoint() * A.matrix() * x)(0).real()));
      worst = std::max(worst, std::abs(semi_norm(A, x) - direct) / (std::sqrt(A.norm()) * x.norm()));
    }
    rec.check("reduced_isometry", worst, tol);
  });

  rec.run("kernel_detection", [&] {
    const Mat& P = A.projector();
    const Mat Q = Mat::Identity(n, n) - P;
    double worst = 0;
    if (r < n) {
      const Vec x0 = Q * gaussian(n, 1, rng);
      worst = semi_norm(A, x0) / (std::sqrt(A.norm()) * x0.norm());
    }
    const Vec x1 = P * gaussian(n, 1, rng);
    const double floor = std::sqrt(A.range_eigenvalues()(r - 1)) * x1.norm();
    worst = std::max(worst, std::max(0.0, floor - semi_norm(A, x1)) / floor);
    rec.check("kernel_detection", worst, tol);
  });

  rec.run("weight_rebuild", [&] {
    const auto W2 = make_weight(A.matrix());
    double worst = W2.rank() == r ? 0.0 : kInf;
    for (int k = 0; k < 4; ++k) {
      const Vec x = gaussian(n, 1, rng);
      const double a = semi_norm(A, x);
      worst = std::max(worst, std::abs(a - semi_norm(W2, x)) / (std::sqrt(A.norm()) * x.norm()));
    }
    rec.check("weight_rebuild", worst, tol);
  });
}

void operator_properties(const Instance& inst, const Op& T, const Op& S, Rng& rng, Recorder& rec) {
  const Weight<double>& A = *inst.weight;
  const Index n = A.dim();
  const Mat& BT = T.reduced();
  const Mat& BS = S.reduced();
  const double nt = reduced::norm<double>(BT);
  const double ns = reduced::norm<double>(BS);
  // Natural magnitude of products; generated operators have norms near 1
  // or exactly 0.
  const double unit = std::max(nt, 1.0) * std::max(ns, 1.0);
  const auto& tol = rec.tol();

  rec.run("adjoint_identity", [&] {
    const Op Ts = sharp_a(T);
    const double scale = A.norm() * (T.matrix().norm() + Ts.matrix().norm());
    double worst = 0;
    for (int k = 0; k < 8; ++k) {
      const Vec x = gaussian(n, 1, rng);
      const Vec y = gaussian(n, 1, rng);
      const Vec tx = T.matrix() * x;
      const Vec ty = Ts.matrix() * y;
      const Complex<double> lhs = semi_inner(A, tx, y);
      const Complex<double> rhs = semi_inner(A, x, ty);
      worst = std::max(worst, std::abs(lhs - rhs) / (scale * x.norm() * y.norm()));
    }
    rec.check("adjoint_identity", worst, tol.num);
  });

  rec.run("reduction_homomorphism", [&] {
    // Backward-error scales: the n x n products carry rounding of size
    // eps * cond(A)^(1/2) * ||T|| ||S|| into the reduction, and T# carries
    // a further cond(A)^(1/2).
    const RealVector<double>& d = A.range_eigenvalues();
    const double kappa = std::sqrt(d(0) / d(d.size() - 1));
    const double e1 = std::max(kappa * T.matrix().norm() * S.matrix().norm(), unit);
    const double e2 = std::max(kappa * kappa * T.matrix().norm(), std::max(nt, 1.0));
    const Mat prod = (T * S).reduced();
    const double r1 = (prod - BT * BS).norm() / e1;
    const double r2 = (sharp_a(T).reduced() - BT.adjoint()).norm() / e2;
    rec.check("reduction_homomorphism", std::max(r1, r2), tol.num);
  });

  rec.run("submultiplicativity", [&] {
    const auto prod = seminorm(T * S);
    const double lhs = prod ? *prod : kInf;
    rec.check("submultiplicativity", inequality<double>("", lhs, nt * ns, unit).excess, tol.num);
  });

  rec.run("dual_definition", [&] {
    // sup of |<Tx, y>_A| over A-unit pairs by Rayleigh-Ritz on an
    // A-orthonormal Krylov basis of T#T, using n x n matrices only.
    const Op Ts = sharp_a(T);
    const Mat G = Ts.matrix() * T.matrix();
    const auto xs = a_unit_sample(A, 16, rng());
    double sampled = 0;
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2)
      sampled = std::max(sampled, std::abs(semi_inner(A, Vec(T.matrix() * xs[k]), xs[k + 1])));
    std::vector<Vec> basis;
    Vec v = xs[0];
    for (Index k = 0; k < A.rank(); ++k) {
      for (int pass = 0; pass < 2; ++pass)
        for (const Vec& q : basis) v -= semi_inner(A, v, q) * q;
      const double vn = semi_norm(A, v);
      if (!(vn > 1e-10 * std::sqrt(A.norm()) * v.norm())) break;
      basis.push_back(v / vn);
      v = G * basis.back();
    }
    const Index k = static_cast<Index>(basis.size());
    Mat H(k, k);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j)
        H(i, j) = semi_inner(A, Vec(T.matrix() * basis[j]), Vec(T.matrix() * basis[i]));
    const double best =
        std::sqrt(std::max(0.0, detail::lambda_max<double>(Mat((H + H.adjoint()) * 0.5))));
    const double over = inequality<double>("", std::max(sampled, best), nt, std::max(nt, 1.0)).excess;
    const double under = nt > 0 ? std::max(0.0, nt - best) / nt : 0.0;
    rec.check("dual_definition", std::max(over, under), kConsensusTol);
  });

  rec.run("sharp_norms", [&] {
    const Op Ts = sharp_a(T);
    const double a = reduced::norm<double>(Ts.reduced());
    const double b = reduced::norm<double>((Ts * T).reduced());
    const double r1 = std::abs(a - nt) / std::max(nt, 1.0);
    const double r2 = std::abs(b - nt * nt) / std::max(nt * nt, 1.0);
    rec.check("sharp_norms", std::max(r1, r2), tol.num);
  });

  const double w = reduced::numerical_radius<double>(BT).value;
  rec.run("radius_ordering", [&] {
    const double rho = reduced::spectral_radius<double>(BT);
    const double worst = std::max({inequality<double>("", nt / 2, w, nt).excess,
                                   inequality<double>("", w, nt, nt).excess,
                                   inequality<double>("", rho, w, nt).excess});
    rec.check("radius_ordering", worst, kChainTol);
  });

  rec.run("dw_sandwich", [&] {
    const auto dw = reduced::davis_wielandt<double>(BT);
    const double lower = std::max(w, nt * nt);
    const double upper = std::sqrt(w * w + nt * nt * nt * nt);
    const double worst = std::max(inequality<double>("", lower, dw.value, upper).excess,
                                  inequality<double>("", dw.value, upper, upper).excess);
    rec.check("dw_sandwich", worst, kChainTol);
  });

  rec.run("power_inequality", [&] {
    const double w2 = reduced::numerical_radius<double>(Mat(BT * BT)).value;
    double worst = 0;
    for (int p = 1; p <= 3; ++p) {
      const double lhs = std::pow(w, 2 * p);
      const double rhs = 0.5 * (std::pow(w2, p) + std::pow(nt, 2 * p));
      worst = std::max(worst, inequality<double>("", lhs, rhs, std::pow(nt, 2 * p)).excess);
    }
    rec.check("power_inequality", worst, kChainTol);
  });
}

void cluster_properties(const Instance& inst, const Op& T, const Op& S, Rng& rng, Recorder& rec) {
  const auto& W = inst.weight;
  const Index r = W->rank();
  const auto& tol = rec.tol();
  const Mat& BT = T.reduced();
  const Mat& BS = S.reduced();
  const double nt = reduced::norm<double>(BT);
  const double ns = reduced::norm<double>(BS);
  const Mat Id = Mat::Identity(r, r);

  rec.run("normaloid_cluster", [&] {
    const auto certs = parallel_to_identity_suite(T, 3, tol);
    bool agree = true;
    double worst = 0;
    for (const auto& c : certs) {
      rec.watch(c);
      agree = agree && c.verdict == certs.front().verdict;
      worst = std::max(worst, c.residual);
    }
    const bool v = certs.front().verdict;
    const double residual = !agree ? kInf : (v ? worst : 0.0);
    rec.consensus("normaloid_cluster", agree && residual <= kConsensusTol, residual, v);
  });

  std::optional<ParallelismResult<double>> par;
  rec.run("parallel_routes", [&] {
    par = is_parallel(T, S, tol);
    for (double x : par->route_residuals) rec.watch(x, tol.decision);
    const bool v = par->certificate.verdict;
    const double worst = *std::max_element(par->route_residuals.begin(), par->route_residuals.end());
    const double residual = !par->routes_agree ? kInf : (v ? worst : 0.0);
    rec.consensus("parallel_routes", par->routes_agree && residual <= kConsensusTol, residual, v);
  });
  if (!par) return;

  rec.run("parallel_scaling", [&] {
    std::uniform_real_distribution<double> phase(0, 2 * M_PI);
    std::uniform_real_distribution<double> mag(-1, 1);
    std::bernoulli_distribution sign(0.5);
    const Complex<double> alpha = std::polar(std::pow(10.0, mag(rng)), phase(rng));
    const double beta = (sign(rng) ? 1 : -1) * std::pow(10.0, mag(rng));
    const double gamma = (sign(rng) ? 1 : -1) * std::pow(10.0, mag(rng));
    const auto p2 = is_parallel(alpha * T, alpha * S, tol);
    const auto p3 = is_parallel(beta * T, gamma * S, tol);
    rec.watch(p2.certificate);
    rec.watch(p3.certificate);
    const bool v = par->certificate.verdict;
    const bool agree = p2.certificate.verdict == v && p3.certificate.verdict == v;
    rec.consensus("parallel_scaling", agree, agree ? 0.0 : kInf, v);
  });

  rec.run("bj_five_way", [&] {
    const bool v1 = par->certificate.verdict;
    const Complex<double> lambda = par->certificate.witness_lambda.value_or(Complex<double>(1, 0));
    const Mat R = reduced::cancel_rounding<double>(ns * BT - lambda * nt * BS, nt * ns, tol.num);
    if (nt > 0 && ns > 0) rec.watch_difference(reduced::norm<double>(R) / (nt * ns), tol);
    const auto c2 = reduced::bj_orthogonal<double>(BT, R, tol.decision, false);
    const auto c3 = reduced::bj_orthogonal<double>(BS, Mat(-R), tol.decision, false);
    rec.watch(c2);
    rec.watch(c3);
    std::vector<bool> verdicts{v1, c2.verdict, c3.verdict};
    std::vector<double> residuals{par->certificate.residual, c2.residual, c3.residual};
    if (nt > 0 && ns > 0) {
      const Vec u = W->reduce(*par->certificate.witness_vector);
      const Vec su = BS * u;
      const Vec tu = BT * u;
      const double gap_s = relative_gap(su.norm(), ns);
      const double gap_t = relative_gap(tu.norm(), nt);
      const double r4 = std::max(gap_s, (tu - lambda * (nt / ns) * su).squaredNorm() / (nt * nt));
      const double r5 =
          std::max(gap_t, (su - std::conj(lambda) * (ns / nt) * tu).squaredNorm() / (ns * ns));
      rec.watch(r4, tol.decision);
      rec.watch(r5, tol.decision);
      verdicts.push_back(r4 <= tol.decision);
      verdicts.push_back(r5 <= tol.decision);
      residuals.push_back(r4);
      residuals.push_back(r5);
    }
    const bool agree = std::all_of(verdicts.begin(), verdicts.end(), [&](bool b) { return b == v1; });
    const double worst = *std::max_element(residuals.begin(), residuals.end());
    const double residual = !agree ? kInf : (v1 ? worst : 0.0);
    rec.consensus("bj_five_way", agree && residual <= kConsensusTol, residual, v1);
  });

  rec.run("bj_symmetry", [&] {
    const auto c1 = reduced::bj_orthogonal<double>(BT, Id, tol.decision, false);
    const auto c2 = reduced::bj_orthogonal<double>(Id, BT, tol.decision, false);
    rec.watch(c1);
    rec.watch(c2);
    const bool ok = !c1.verdict || c2.verdict;
    rec.consensus("bj_symmetry", ok, ok ? 0.0 : kInf, c1.verdict);
  });

  auto witness_check = [&](const Op& X, const Certificate<double>& c) {
    if (!c.verdict) return 0.0;
    if (!c.witness_vector) return kInf;
    const double nx = reduced::norm<double>(X.reduced());
    if (!(nx > 0)) return 0.0;
    const Vec& x = *c.witness_vector;
    const Vec tx = X.matrix() * x;
    const Vec sx = S.matrix() * x;
    const double g1 = relative_gap(semi_norm(*W, tx), nx);
    const double g2 = std::abs(semi_inner(*W, tx, sx)) / (nx * std::max(ns, 1e-300));
    const double g3 = std::abs(semi_norm(*W, x) - 1.0);
    return std::max({g1, g2, g3});
  };

  rec.run("bj_orthogonality", [&] {
    const auto c = is_bj_orthogonal(T, S, tol);
    rec.watch(c);
    rec.check("bj_orthogonality", witness_check(T, c), tol.cross, c.verdict);
  });

  if (r >= 2) {
    Rng local(rng());
    const Op T0(W, W->lift_matrix(orthogonal_companion(BS, local)));
    rec.run("bj_orthogonality", [&] {
      const auto c = is_bj_orthogonal(T0, S, tol);
      const double residual = c.verdict ? witness_check(T0, c) : kInf;
      rec.check("bj_orthogonality", residual, tol.cross, c.verdict);
    });
    rec.run("zamani_growth", [&] {
      rec.check("zamani_growth", max_excess(orthogonality_growth_grid(T0, S)), kChainTol);
    });
  }

  rec.run("daugavet_consensus", [&] {
    const auto d = daugavet_check(T, tol, 64);
    for (const auto* c : {&d.equation, &d.range_membership, &d.identity_orthogonal, &d.operator_orthogonal})
      rec.watch(*c);
    if (nt > 0) {
      const Mat Id = Mat::Identity(BT.rows(), BT.cols());
      rec.watch_difference(reduced::norm<double>(Mat(nt * Id - BT)) / nt, tol);
    }
    rec.consensus("daugavet_consensus", d.agree, d.agree ? 0.0 : kInf, d.equation.verdict);
  });

  rec.run("dw_lower_implication", [&] {
    const auto d = dw_lower_attainment_check(T, tol);
    rec.watch(d.attained);
    if (d.attained.verdict) {
      rec.watch(d.operator_orthogonal_to_identity);
      rec.watch(d.identity_orthogonal_to_operator);
    }
    rec.consensus("dw_lower_implication", d.implication_holds, d.implication_holds ? 0.0 : kInf,
                  d.attained.verdict);
  });
}

void distance_properties(const Instance& inst, const Op& T, const Op& S, Rng& rng, Recorder& rec) {
  const auto& W = inst.weight;
  const auto& tol = rec.tol();
  const Mat& BT = T.reduced();
  const Mat& BS = S.reduced();
  const double nt = reduced::norm<double>(BT);
  const double ns = reduced::norm<double>(BS);
  const double ms = reduced::min_modulus<double>(BS);
  const bool gate = ns > 0 && ms > tol.min_modulus_gate * ns;

  rec.run("distance_chain", [&] {
    rec.check("distance_chain", max_excess(distance_inequality_panel(T).checks), kChainTol);
  });

  rec.run("sup_form_cross", [&] {
    const auto ld = distance_to_line(T, S, tol);
    const double over = inequality<double>("", ld.distance, nt, nt).excess;
    if (ld.sup_form_skipped) {
      rec.check("sup_form_cross", over, tol.cross);
      return;
    }
    rec.check("sup_form_cross", std::max(over, ld.cross_residual), tol.cross);
  });

  if (gate) {
    const auto com = center_of_mass(T, S, tol);
    rec.run("center_limit_formula", [&] {
      double residual = com.formula_residual;
      if (com.pairing_with_witness) {
        const double scale = std::max({std::abs(com.value), nt, 1e-300});
        residual = std::max(residual, std::abs(*com.pairing_with_witness - com.value) / scale);
      }
      rec.check("center_limit_formula", residual, tol.formula + com.conditioning);
    });

    rec.run("center_stability", [&] {
      Mat G = gaussian(W->rank(), W->rank(), rng);
      const double eps = kPerturbation * std::max(nt, 1e-3);
      G *= eps / reduced::norm<double>(G);
      const Op T2(W, T.matrix() + W->lift_matrix(G));
      const auto com2 = center_of_mass(T2, S, tol);
      const double bound = 2 * std::sqrt(eps * (com.distance + eps)) / ms;
      const double moved = std::abs(com2.value - com.value);
      rec.check("center_stability", std::max(0.0, moved - bound) / bound, 1e-3);
    });
  }

  rec.run("disc_containment", [&] {
    const auto com = center_of_mass(T, identity(W), tol);
    double worst = 0;
    for (const auto& s : numerical_range_samples(T, 512))
      worst = std::max(worst, std::abs(s.point - com.value) - com.distance);
    rec.check("disc_containment", worst, 1e-7);
  });

  if (inst.spec.family == Family::ANormal) {
    const double mt = reduced::min_modulus<double>(BT);
    if (nt > 0 && mt > tol.min_modulus_gate * nt) {
      rec.run("a_normal_center", [&] {
        const auto com = center_of_mass(T, sharp_a(T), tol);
        rec.check("a_normal_center", std::max(0.0, std::abs(com.value) - 1.0), tol.cross);
      });
    }
  }
}

void rank_one_properties(const Instance& inst, const Op& T, Recorder& rec) {
  if (inst.spec.family != Family::RankOne) return;
  const auto& W = inst.weight;
  const auto& tol = rec.tol();
  const Vec& x = inst.x;
  const Vec& y = inst.y;
  const double nx = semi_norm(*W, x);
  const double ny = semi_norm(*W, y);
  const double p = std::abs(semi_inner(*W, x, y));
  const Mat& B = T.reduced();
  const double nt = reduced::norm<double>(B);
  const double w = reduced::numerical_radius<double>(B).value;
  const double scale = std::max(nx * ny, 1e-300);

  rec.run("rank_one_closed_forms", [&] {
    const double r1 = std::abs(nt - nx * ny) / scale;
    const double r2 = std::abs(w - 0.5 * (p + nx * ny)) / scale;
    rec.check("rank_one_closed_forms", std::max(r1, r2), kChainTol);
  });

  rec.run("rank_one_dependence", [&] {
    const auto rp = rank_one_parallel_identity(W, x, y, tol);
    rec.watch(rp.dependence);
    rec.watch(rp.parallel.certificate);
    rec.consensus("rank_one_dependence", rp.agree, rp.agree ? 0.0 : kInf, rp.dependence.verdict);
  });

  rec.run("rank_one_lower_remark", [&] {
    const auto dw = reduced::davis_wielandt<double>(B);
    const double gap = relative_gap(dw.value, nt * nt);
    rec.watch(gap, tol.decision);
    const bool attained = nt * nt >= w && gap <= tol.decision;
    const double residual = attained ? p / scale : 0.0;
    rec.check("rank_one_lower_remark", residual, 1e-3, attained);
  });
}

void family_properties(const Instance& inst, const Op& T, Recorder& rec) {
  rec.run("family_structure", [&] {
    const Weight<double>& A = *inst.weight;
    const Mat& B = T.reduced();
    const double nt = std::max(reduced::norm<double>(B), 1.0);
    const Mat& M = inst.T;
    double residual = 0;
    switch (inst.spec.family) {
      case Family::Generic:
        break;
      case Family::Diagonal: {
        const Mat off = M - Mat(M.diagonal().asDiagonal());
        const Mat aoff = A.matrix() - Mat(A.matrix().diagonal().asDiagonal());
        residual = std::max(off.norm() / std::max(M.norm(), 1.0), aoff.norm() / A.norm());
        break;
      }
      case Family::ASelfadjoint: {
        const Mat AT = A.matrix() * M;
        residual = (AT - AT.adjoint()).norm() / (A.norm() * std::max(M.norm(), 1.0));
        break;
      }
      case Family::ANormal:
        residual = (B * B.adjoint() - B.adjoint() * B).norm() / (nt * nt);
        break;
      case Family::NilpotentReduced: {
        Mat P = Mat::Identity(B.rows(), B.cols());
        for (Index k = 0; k < B.rows(); ++k) P = P * B;
        residual = P.norm() / std::pow(nt, static_cast<double>(B.rows()));
        break;
      }
      case Family::RankOne: {
        const Mat R = inst.x * (A.matrix() * inst.y).adjoint();
        residual = (R - M).norm() / std::max(M.norm(), 1.0);
        break;
      }
    }
    rec.check("family_structure", residual, kGenTol);
  });
}

void boundedness_properties(const Instance& inst, const Op& T, Rng& rng, Recorder& rec) {
  const auto& W = inst.weight;
  const Index n = W->dim();
  rec.run("boundedness_detection", [&] {
    const auto c = is_a_bounded(T, T.bounded_tol());
    rec.check("boundedness_detection", c.verdict ? 0.0 : kInf, 0.0, c.verdict);
    if (W->rank() == n) return;
    const Mat Q = Mat::Identity(n, n) - W->projector();
    Mat leak = W->projector() * gaussian(n, n, rng) * Q;
    leak *= std::max(T.matrix().norm(), 1.0) / leak.norm();
    const Op L(W, T.matrix() + leak);
    const auto cl = is_a_bounded(L, L.bounded_tol());
    rec.watch(cl);
    bool flagged = !cl.verdict && !seminorm(L).has_value();
    try {
      (void)L.reduced();
      flagged = false;
    } catch (const Error& e) {
      flagged = flagged && e.kind() == ErrorKind::NotABounded;
    }
    rec.check("boundedness_detection", flagged ? 0.0 : kInf, 0.0, cl.verdict);
  });
}

void oracle_properties(const Instance& inst, const Op& T, const Op& S, int density, Recorder& rec) {
  if (density <= 0 || inst.weight->rank() > 3) return;
  rec.run("oracle_agreement", [&] {
    const Mat& BT = T.reduced();
    const Mat& BS = S.reduced();
    const auto o = brute_oracle(T, S, density);
    reduced::LineDistanceOptions<double> opt;
    opt.witness = false;
    opt.sup_form = false;
    const double d = reduced::line_distance<double>(BT, BS, opt).distance;
    const double worst = std::max({std::abs(o.norm - reduced::norm<double>(BT)),
                                   std::abs(o.omega - reduced::numerical_radius<double>(BT).value),
                                   std::abs(o.davis_wielandt - reduced::davis_wielandt<double>(BT).value) / 2,
                                   std::abs(o.pairing - reduced::numerical_radius<double>(Mat(BS.adjoint() * BT)).value),
                                   std::abs(o.distance - d)});
    rec.check("oracle_agreement", worst * density, kOracleConstant);
  });
}

std::vector<Outcome> evaluate(const Instance& inst, const SuiteConfig& cfg, std::uint64_t seed,
                              bool& ambiguous) {
  Recorder rec(cfg.tol);
  Rng rng(mix_seed(seed, 0x70726f70ULL));
  const Op T(inst.weight, inst.T);
  const Op S(inst.weight, inst.S);
  weight_properties(inst, rng, rec);
  family_properties(inst, T, rec);
  boundedness_properties(inst, T, rng, rec);
  operator_properties(inst, T, S, rng, rec);
  cluster_properties(inst, T, S, rng, rec);
  distance_properties(inst, T, S, rng, rec);
  rank_one_properties(inst, T, rec);
  oracle_properties(inst, T, S, cfg.oracle_density, rec);
  ambiguous = rec.ambiguous();
  return rec.take();
}

constexpr int kMaxResamples = 50;

TrialResult run_trial(const SuiteConfig& cfg, long index) {
  const std::uint64_t base = mix_seed(cfg.seed, static_cast<std::uint64_t>(index));
  Rng pick(base);
  InstanceSpec spec;
  spec.dim = cfg.sizes[std::uniform_int_distribution<std::size_t>(0, cfg.sizes.size() - 1)(pick)];
  spec.rank = std::uniform_int_distribution<int>(1, spec.dim)(pick);
  spec.entry_scale = std::pow(10.0, std::uniform_real_distribution<double>(-1, 1)(pick));
  spec.family = kFamilies[index % kFamilies.size()];
  spec.pair = kPairModes[(index / kFamilies.size()) % kPairModes.size()];

  TrialResult out;
  for (int attempt = 0;; ++attempt) {
    spec.seed = mix_seed(base, static_cast<std::uint64_t>(attempt) + 1);
    bool ambiguous = false;
    std::vector<Outcome> outcomes;
    Instance inst;
    try {
      inst = generate(spec);
      outcomes = evaluate(inst, cfg, spec.seed, ambiguous);
    } catch (const std::exception&) {
      outcomes = {{"generate", false, kInf, -1}};
    }
    if (ambiguous && attempt + 1 < kMaxResamples) continue;
    out.seed = spec.seed;
    out.instance = std::move(inst);
    out.instance.spec = spec;
    out.resamples = attempt;
    out.outcomes = std::move(outcomes);
    return out;
  }
}

std::string write_reproducer(const SuiteConfig& cfg, long index, const TrialResult& t,
                             const Outcome& o) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.repro_dir, ec);
  const fs::path path = cfg.repro_dir / (o.name + "-trial" + std::to_string(index) + ".json");
  io::Json j;
  if (t.instance.weight) {
    io::Problem p;
    p.dim = static_cast<int>(t.instance.weight->dim());
    p.A = t.instance.weight->matrix();
    p.T = t.instance.T;
    p.S = t.instance.S;
    p.options.tol = cfg.tol;
    p.options.seed = t.seed;
    j = io::problem_to_json(p);
  }
  const auto& s = t.instance.spec;
  j["instance"] = {{"property", o.name},
                   {"residual", std::isfinite(o.residual) ? io::Json(o.residual) : io::Json("inf")},
                   {"suite_seed", cfg.seed},
                   {"trial", index},
                   {"instance_seed", s.seed},
                   {"dim", s.dim},
                   {"rank", s.rank},
                   {"entry_scale", s.entry_scale},
                   {"family", to_string(s.family)},
                   {"pair", to_string(s.pair)}};
  std::ofstream f(path);
  f << j.dump(2) << '\n';
  return path.string();
}

}  // namespace

long SuiteReport::failure_count() const {
  long n = static_cast<long>(coverage_gaps.size());
  for (const auto& p : properties) n += p.failures;
  return n;
}

int thread_budget(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int budget = requested > 0 ? requested : std::max(hw, 1);
  if (const char* env = std::getenv("SEMIHILBERT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) budget = std::min<long>(budget, cap);
  }
  return std::max(budget, 1);
}

SuiteReport run_suite(const SuiteConfig& config) {
  if (config.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (config.sizes.empty()) throw Error(ErrorKind::InvalidArgument, "sizes must not be empty");
  for (int n : config.sizes)
    if (n < 1 || n > 64) throw Error(ErrorKind::InvalidArgument, "sizes must lie in [1, 64]");

  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.config = config;
  report.trials = config.trials;
  report.threads_used = std::min(thread_budget(config.threads), config.trials);

  std::vector<TrialResult> results(config.trials);
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long k = next++; k < config.trials; k = next++) results[k] = run_trial(config, k);
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < report.threads_used; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Reduction in trial order keeps the report independent of scheduling.
  std::map<std::string, std::size_t> slot;
  for (long k = 0; k < config.trials; ++k) {
    const TrialResult& t = results[k];
    report.resamples += t.resamples;
    std::map<std::string, bool> reported;
    for (const Outcome& o : t.outcomes) {
      auto [it, fresh] = slot.try_emplace(o.name, report.properties.size());
      if (fresh) report.properties.push_back(PropertyStats{o.name});
      PropertyStats& p = report.properties[it->second];
      ++p.trials;
      if (o.pass) ++p.passes;
      else ++p.failures;
      if (o.residual > p.max_residual || (p.trials == 1 && o.residual >= p.max_residual)) {
        p.max_residual = o.residual;
        p.worst_seed = t.seed;
      }
      if (o.verdict >= 0) {
        p.decision = true;
        ++(o.verdict ? p.true_verdicts : p.false_verdicts);
      }
      if (!o.pass && !reported[o.name]) {
        reported[o.name] = true;
        report.failures.push_back({o.name, t.seed, o.residual, write_reproducer(config, k, t, o)});
      }
    }
  }
  if (config.trials >= 12) {
    for (const auto& p : report.properties)
      if (p.decision && (p.true_verdicts == 0 || p.false_verdicts == 0))
        report.coverage_gaps.push_back(p.name);
  }
  report.coverage_ok = report.coverage_gaps.empty();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace semihilbert::harness
