#include "semihilbert/report.hpp"

#include "semihilbert/geometry.hpp"
#include "semihilbert/operators.hpp"

#include <memory>

namespace semihilbert::io {

namespace {

using Op = Operator<double>;

Json daugavet_to_json(const DaugavetResult<double>& d) {
  return Json{{"verdict", d.equation.verdict},
              {"agree", d.agree},
              {"equation", certificate_to_json(d.equation)},
              {"range_membership", certificate_to_json(d.range_membership)},
              {"identity_orthogonal", certificate_to_json(d.identity_orthogonal)},
              {"operator_orthogonal", certificate_to_json(d.operator_orthogonal)}};
}

Json parallel_to_json(const ParallelismResult<double>& p) {
  Json j = certificate_to_json(p.certificate);
  j["lambda_star"] = complex_to_json(p.lambda_star);
  j["omega_check"] = p.omega_check;
  j["spectral_check"] = p.spectral_check;
  j["route_residuals"] = Json::array({p.route_residuals[0], p.route_residuals[1], p.route_residuals[2]});
  j["routes_agree"] = p.routes_agree;
  return j;
}

Json unbounded_diagnostic(const char* which, const Op& op) {
  const auto r = douglas_residuals(op);
  return Json{{"operator", which},
              {"range_residual", r.range},
              {"adjoint_residual", r.adjoint},
              {"tol", op.bounded_tol()}};
}

struct Setup {
  WeightPtr<double> weight;
  std::optional<Op> T;
  std::optional<Op> S;
};

Setup setup(const Problem& p) {
  Setup s;
  const auto& tol = p.options.tol;
  s.weight = std::make_shared<const Weight<double>>(make_weight(p.A, tol.rank, tol.hermiticity));
  s.T.emplace(s.weight, p.T, tol.num);
  s.S.emplace(s.weight, p.S.value_or(Matrix<double>::Identity(p.dim, p.dim)), tol.num);
  Json diag = Json::array();
  if (!s.T->bounded()) diag.push_back(unbounded_diagnostic("T", *s.T));
  if (!s.S->bounded()) diag.push_back(unbounded_diagnostic("S", *s.S));
  if (!diag.empty()) throw UnboundedError("operator is not A-bounded", diag);
  return s;
}

}  // namespace

std::string problem_hash(const Problem& problem) { return sha256_hex(problem_to_json(problem).dump()); }

Json analyze(const Problem& problem, const std::optional<std::string>& samples_path) {
  const Setup s = setup(problem);
  const Op& T = *s.T;
  const Op& S = *s.S;
  const Op I = identity(s.weight);
  const auto& tol = problem.options.tol;
  const std::uint64_t seed = problem.options.seed;
  const int grid = problem.options.grid;

  const double nt = *seminorm(T);
  const double ns = *seminorm(S);
  const auto w = numerical_radius(T);
  const auto dw = davis_wielandt_radius(T, seed);
  const auto line = distance_to_line(T, S, tol);
  const auto panel = distance_inequality_panel(T);

  Json scalars{{"rank", s.weight->rank()},
               {"norm", nt},
               {"norm_s", ns},
               {"omega", w.value},
               {"spectral_radius", spectral_radius(T)},
               {"davis_wielandt", dw.value},
               {"davis_wielandt_lower", dw.lower},
               {"davis_wielandt_upper", dw.upper},
               {"min_modulus", min_modulus(T)},
               {"min_modulus_s", min_modulus(S)},
               {"alpha", reduced::alpha<double>(T.reduced(), seed)},
               {"norm_of_shift", *seminorm(T + I)},
               {"distance_to_line", line.distance},
               {"distance_to_identity_line", panel.distance_to_identity_line},
               {"identity_distance_to_line", panel.identity_distance_to_line}};

  Json center;
  try {
    const auto c = center_of_mass(T, S, tol);
    scalars["center_of_mass"] = complex_to_json(c.value);
    center = Json{{"value", complex_to_json(c.value)},
                  {"limit_formula", complex_to_json(c.limit_formula)},
                  {"formula_residual", c.formula_residual},
                  {"conditioning", c.conditioning},
                  {"formula_ok", c.formula_ok}};
    if (c.pairing_with_witness) center["pairing_with_witness"] = complex_to_json(*c.pairing_with_witness);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MinModulusTooSmall) throw;
    scalars["center_of_mass"] = nullptr;
    center = Json{{"skipped", e.what()}};
  }

  Json line_json{{"distance", line.distance},
                 {"gamma_star", complex_to_json(line.gamma_star)},
                 {"witness_residual", line.witness_residual},
                 {"sup_form_skipped", line.sup_form_skipped}};
  if (line.sup_form_value) {
    line_json["sup_form_value"] = *line.sup_form_value;
    line_json["cross_residual"] = line.cross_residual;
  }

  Json cluster = Json::array();
  bool cluster_verdict = true;
  bool cluster_agree = true;
  const auto certs = parallel_to_identity_suite(T, 3, tol);
  for (const auto& c : certs) {
    cluster.push_back(certificate_to_json(c));
    cluster_agree = cluster_agree && c.verdict == certs.front().verdict;
  }
  if (!certs.empty()) cluster_verdict = certs.front().verdict;

  Json inequalities = Json::array();
  for (const auto& c : panel.checks)
    inequalities.push_back(Json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"excess", c.excess}});

  const auto lower = dw_lower_attainment_check(T, tol);
  Json certificates{
      {"a_bounded", certificate_to_json(is_a_bounded(T, tol.num))},
      {"parallel", parallel_to_json(is_parallel(T, S, tol))},
      {"parallel_to_identity", parallel_to_json(is_parallel(T, I, tol))},
      {"bj_orthogonal",
       Json{{"T_S", certificate_to_json(is_bj_orthogonal(T, S, tol))},
            {"S_T", certificate_to_json(is_bj_orthogonal(S, T, tol))}}},
      {"bj_identity",
       Json{{"T_I", certificate_to_json(is_bj_orthogonal(T, I, tol))},
            {"I_T", certificate_to_json(is_bj_orthogonal(I, T, tol))}}},
      {"daugavet", daugavet_to_json(daugavet_check(T, tol, grid))},
      {"normaloid_cluster",
       Json{{"verdict", cluster_verdict}, {"agree", cluster_agree}, {"conditions", cluster}}},
      {"dw_lower_attainment",
       Json{{"attained", certificate_to_json(lower.attained)},
            {"operator_orthogonal_to_identity", certificate_to_json(lower.operator_orthogonal_to_identity)},
            {"identity_orthogonal_to_operator", certificate_to_json(lower.identity_orthogonal_to_operator)},
            {"implication_holds", lower.implication_holds}}}};

  const Json input = problem_to_json(problem);
  Json provenance{{"tool", kToolName},
                  {"version", kToolVersion},
                  {"seed", seed},
                  {"grid", grid},
                  {"tolerances", tolerances_to_json(tol)},
                  {"input_sha256", sha256_hex(input.dump())},
                  {"input", input}};
  provenance["samples"] = samples_path ? Json(*samples_path) : Json(nullptr);

  return Json{{"scalars", scalars},
              {"certificates", certificates},
              {"line_distance", line_json},
              {"center_of_mass", center},
              {"inequalities", inequalities},
              {"provenance", provenance}};
}

std::string range_csv(const Problem& problem, int grid) {
  const Setup s = setup(problem);
  const Op& T = *s.T;
  const Op I = identity(s.weight);
  const auto samples = numerical_range_samples(T, grid);
  const auto c = center_of_mass(T, I, problem.options.tol);
  std::string out = "theta,re,im\n";
  for (const auto& p : samples)
    out += format_double(p.theta) + "," + format_double(p.point.real()) + "," +
           format_double(p.point.imag()) + "\n";
  out += "# center=" + format_double(c.value.real()) + "," + format_double(c.value.imag()) +
         " radius=" + format_double(c.distance) + "\n";
  return out;
}

Json suite_report_to_json(const harness::SuiteReport& report) {
  const auto& cfg = report.config;
  Json properties = Json::array();
  for (const auto& p : report.properties) {
    Json j{{"name", p.name},
           {"trials", p.trials},
           {"passes", p.passes},
           {"failures", p.failures},
           {"max_residual", p.max_residual},
           {"worst_seed", p.worst_seed}};
    if (p.decision) {
      j["true_verdicts"] = p.true_verdicts;
      j["false_verdicts"] = p.false_verdicts;
    }
    properties.push_back(std::move(j));
  }
  Json failures = Json::array();
  for (const auto& f : report.failures)
    failures.push_back(Json{{"property", f.property},
                            {"seed", f.seed},
                            {"residual", f.residual},
                            {"reproducer", f.reproducer}});
  Json config{{"trials", cfg.trials},
              {"seed", cfg.seed},
              {"sizes", cfg.sizes},
              {"oracle_density", cfg.oracle_density},
              {"tolerances", tolerances_to_json(cfg.tol)}};
  Json scalars{{"tool", kToolName},
               {"version", kToolVersion},
               {"config", config},
               {"trials", report.trials},
               {"resamples", report.resamples},
               {"failure_count", report.failure_count()},
               {"coverage_ok", report.coverage_ok},
               {"coverage_gaps", report.coverage_gaps},
               {"properties", properties},
               {"failures", failures}};
  return Json{{"scalars", scalars},
              {"timing", Json{{"wall_seconds", report.wall_seconds}, {"threads", report.threads_used}}}};
}

}  // namespace semihilbert::io
