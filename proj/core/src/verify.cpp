#include "ncwass/verify.hpp"

#include <algorithm>
#include <cmath>

#include "ncwass/errors.hpp"
#include "ncwass/fixtures.hpp"
#include "ncwass/metric.hpp"
#include "ncwass/projective.hpp"
#include "ncwass/sampling.hpp"
#include "ncwass/transport.hpp"

namespace ncwass {

namespace {

// criterion 1: primal/dual agreement on random finite metric spaces
SuiteResult suite_kantorovich_duality(uint64_t seed) {
  SuiteResult result;
  result.name = "kantorovich_duality";
  Rng rng = Rng(seed).derive("acc1");
  double worst = 0.0;
  const int instances = 200;
  for (int s = 0; s < instances; ++s) {
    int k = 2 + static_cast<int>(rng.next_u64() % 7);  // k <= 8
    FiniteMetricSpace space = random_metric_space(k, rng);
    ProbVector mu = random_prob(k, rng);
    ProbVector nu = random_prob(k, rng);
    double value = wasserstein_p(space, 1.0, mu, nu).value;
    double gap = duality_gap(space, mu, nu);
    worst = std::max(worst, gap / (1.0 + value));
  }
  result.pass = worst <= 1e-8;
  result.details = Json{{"instances", instances}, {"max_scaled_gap", worst},
                        {"tolerance", 1e-8}};
  return result;
}

// criterion 2: W_p <= W_q for p <= q
SuiteResult suite_p_monotonicity(uint64_t seed) {
  SuiteResult result;
  result.name = "p_monotonicity";
  Rng rng = Rng(seed).derive("acc2");
  const std::vector<double> ps{1.0, 1.5, 2.0, 4.0};
  double min_margin = kInf;
  const int instances = 100;
  for (int s = 0; s < instances; ++s) {
    int k = 2 + static_cast<int>(rng.next_u64() % 7);
    FiniteMetricSpace space = random_metric_space(k, rng);
    ProbVector mu = random_prob(k, rng);
    ProbVector nu = random_prob(k, rng);
    std::vector<double> values;
    for (double p : ps) values.push_back(wasserstein_p(space, p, mu, nu).value);
    for (size_t a = 0; a + 1 < ps.size(); ++a) {
      for (size_t b = a + 1; b < ps.size(); ++b) {
        min_margin = std::min(min_margin, values[b] - values[a]);
      }
    }
  }
  result.pass = min_margin >= -1e-9;
  result.details = Json{{"instances", instances}, {"min_margin", min_margin},
                        {"tolerance", 1e-9}};
  return result;
}

// criterion 3: W_{p,beta} >= W_{p,alpha} on the M_4 partition chain
SuiteResult suite_inclusion_monotonicity(uint64_t seed) {
  SuiteResult result;
  result.name = "inclusion_monotonicity";
  ContextDiagram diagram = fixtures::m4_chain_diagram(seed);
  LipGauge gauge = fixtures::m4_gauge(seed);
  Rng rng = Rng(seed).derive("acc3");
  std::vector<std::pair<DensityState, DensityState>> pairs;
  for (int s = 0; s < 50; ++s) {
    pairs.emplace_back(random_density(4, rng), random_density(4, rng));
  }
  double min_margin = kInf;
  bool pass = true;
  for (double p : {1.0, 2.0}) {
    MarginReport report =
        verify_inclusion_monotonicity(gauge, diagram, pairs, p, 1e-7);
    min_margin = std::min(min_margin, report.min_margin);
    pass = pass && report.pass;
  }
  result.pass = pass;
  result.details = Json{{"pairs", pairs.size()}, {"ps", Json::array({1.0, 2.0})},
                        {"min_margin", min_margin}, {"tolerance", 1e-7}};
  return result;
}

// criterion 4: triangle inequality through the gluing construction
SuiteResult suite_triangle_gluing(uint64_t seed) {
  SuiteResult result;
  result.name = "triangle_gluing";
  Rng rng = Rng(seed).derive("acc4");
  const std::vector<double> ps{1.0, 1.5, 2.0, 4.0};
  double worst_triangle = 0.0;
  double worst_glue = 0.0;
  const int instances = 100;
  for (int s = 0; s < instances; ++s) {
    int k = 2 + static_cast<int>(rng.next_u64() % 5);  // k <= 6
    double p = ps[s % ps.size()];
    FiniteMetricSpace space = random_metric_space(k, rng);
    ProbVector mu = random_prob(k, rng);
    ProbVector nu = random_prob(k, rng);
    ProbVector eta = random_prob(k, rng);
    TransportResult r1 = wasserstein_p(space, p, mu, nu);
    TransportResult r2 = wasserstein_p(space, p, nu, eta);
    TransportResult r3 = wasserstein_p(space, p, mu, eta);
    worst_triangle =
        std::max(worst_triangle, r3.value - (r1.value + r2.value));
    ThreeCoupling gamma = glue_couplings(*r1.coupling, *r2.coupling);
    double res12 = (gamma.project_12() - r1.coupling->pi()).cwiseAbs().maxCoeff();
    double res23 = (gamma.project_23() - r2.coupling->pi()).cwiseAbs().maxCoeff();
    worst_glue = std::max({worst_glue, res12, res23});
  }
  result.pass = worst_triangle <= 1e-8 && worst_glue <= 1e-9;
  result.details = Json{{"instances", instances},
                        {"max_triangle_excess", worst_triangle},
                        {"max_glue_residual", worst_glue},
                        {"tolerances", Json::array({1e-8, 1e-9})}};
  return result;
}

// criterion 5: qubit spectral distance against the closed form and a
// dense-sampling oracle on the gauge sphere
SuiteResult suite_qubit_spectral(uint64_t seed) {
  SuiteResult result;
  result.name = "qubit_spectral_closed_form";
  LipGauge gauge = fixtures::qubit_pauli_gauge();
  DensityState mu = fixtures::qubit_up();
  DensityState nu = fixtures::qubit_down();
  DistanceResult d = spectral_distance(gauge, mu, nu);

  Rng rng = Rng(seed).derive("acc5");
  Matrix delta = mu.rho() - nu.rho();
  double sampled = 0.0;
  const int samples = 100000;
  for (int s = 0; s < samples; ++s) {
    Matrix g(2, 2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    }
    Matrix f = 0.5 * (g + g.adjoint().eval());
    double lf = eval_gauge(gauge, f);
    if (lf < 1e-9) continue;
    sampled = std::max(sampled, std::abs((delta * f).trace().real()) / lf);
  }

  double closed_form_err = std::abs(d.value - 1.0);
  double oracle_err = std::abs(d.value - sampled);
  result.pass = closed_form_err <= 1e-6 && oracle_err <= 1e-4;
  result.details = Json{{"value", d.value},
                        {"closed_form_error", closed_form_err},
                        {"sampled_oracle", sampled},
                        {"oracle_error", oracle_err},
                        {"samples", samples},
                        {"tolerances", Json::array({1e-6, 1e-4})}};
  return result;
}

// criterion 6: d_{L,alpha}(delta_1, delta_2) = 1 / max_k ||[D_k, P_1]||
SuiteResult suite_point_metric_closed_form(uint64_t seed) {
  SuiteResult result;
  result.name = "point_metric_closed_form";
  LipGauge gauge = fixtures::qubit_pauli_gauge();
  Rng rng = Rng(seed).derive("acc6");
  double worst = 0.0;
  const int instances = 50;
  for (int s = 0; s < instances; ++s) {
    CommutativeContext ctx = random_maximal_context(2, rng);
    double norm = 0.0;
    for (const auto& dk : gauge.diracs()) {
      norm = std::max(norm, operator_norm(commutator(dk.entries(), ctx.projection(0))));
    }
    double analytic = 1.0 / norm;
    PointMetricResult pm = context_point_metric(gauge, ctx);
    worst = std::max(worst, std::abs(pm.space.dist()(0, 1) - analytic));
  }
  result.pass = worst <= 1e-6;
  result.details =
      Json{{"instances", instances}, {"max_error", worst}, {"tolerance", 1e-6}};
  return result;
}

// criterion 7: Kantorovich-Rubinstein identity on commutative fibers
SuiteResult suite_kr_identity(uint64_t seed) {
  SuiteResult result;
  result.name = "kr_identity";
  Rng rng = Rng(seed).derive("acc7");

  // finite-metric gauges: exact equality
  double worst_eq = 0.0;
  const int instances = 100;
  for (int s = 0; s < instances; ++s) {
    int k = 2 + static_cast<int>(rng.next_u64() % 7);
    FiniteMetricSpace space = random_metric_space(k, rng);
    LipGauge gauge = induced_point_gauge(space.dist());
    std::vector<std::pair<ProbVector, ProbVector>> pairs{
        {random_prob(k, rng), random_prob(k, rng)}};
    KrReport report =
        verify_kr_identity(gauge, gauge.base_context(), pairs, 1e-8, 50, seed);
    worst_eq = std::max(worst_eq, report.max_abs_diff);
  }

  // multi-commutator restrictions: both sides reported, >= asserted
  double min_diff = kInf;
  double max_diff_mc = 0.0;
  {
    LipGauge gauge = fixtures::qubit_pauli_gauge();
    std::vector<CommutativeContext> contexts{fixtures::qubit_sigma_z_context(),
                                             fixtures::qubit_sigma_x_context()};
    Rng crng = rng.derive("mc-contexts");
    for (int s = 0; s < 6; ++s) contexts.push_back(random_maximal_context(2, crng));
    for (const auto& ctx : contexts) {
      std::vector<std::pair<ProbVector, ProbVector>> pairs;
      for (int s = 0; s < 5; ++s) {
        pairs.emplace_back(random_prob(2, crng), random_prob(2, crng));
      }
      KrReport report = verify_kr_identity(gauge, ctx, pairs, 1e-6, 200, seed);
      min_diff = std::min(min_diff, report.min_diff);
      max_diff_mc = std::max(max_diff_mc, report.max_abs_diff);
    }
  }

  result.pass = worst_eq <= 1e-8 && min_diff >= -1e-7;
  result.details = Json{{"finite_metric_instances", instances},
                        {"max_equality_gap", worst_eq},
                        {"mc_min_w1_minus_dl", min_diff},
                        {"mc_max_abs_diff", max_diff_mc},
                        {"tolerances", Json::array({1e-8, 1e-7})}};
  return result;
}

struct CommonContextEval {
  std::vector<CommutativeContext> contexts;
  std::vector<PointMetricResult> metrics;
  double diam_max = 0.0;

  double sup_wasserstein(const DensityState& mu, const DensityState& nu,
                         double p) const {
    double best = 0.0;
    for (size_t c = 0; c < contexts.size(); ++c) {
      ProbVector a = restrict_state(mu, contexts[c]);
      ProbVector b = restrict_state(nu, contexts[c]);
      best = std::max(best, wasserstein_p(metrics[c].space, p, a, b).value);
    }
    return best;
  }
};

CommonContextEval build_qubit_context_set(uint64_t seed, int n_haar) {
  CommonContextEval eval;
  eval.contexts.push_back(fixtures::qubit_sigma_z_context());
  eval.contexts.push_back(fixtures::qubit_sigma_x_context());
  Rng rng = Rng(seed).derive("common-contexts");
  for (int s = 0; s < n_haar; ++s) {
    eval.contexts.push_back(random_maximal_context(2, rng));
  }
  LipGauge gauge = fixtures::qubit_pauli_gauge();
  for (const auto& ctx : eval.contexts) {
    eval.metrics.push_back(context_point_metric(gauge, ctx));
    const auto& pm = eval.metrics.back();
    for (int i = 0; i < pm.space.points(); ++i) {
      for (int j = i + 1; j < pm.space.points(); ++j) {
        eval.diam_max = std::max(eval.diam_max, pm.space.dist()(i, j));
      }
    }
  }
  return eval;
}

// criterion 8: sandwich inequality on a common sampled context set and
// agreement of the projective W_1 lower bound with the spectral distance
SuiteResult suite_projective_sandwich(uint64_t seed) {
  SuiteResult result;
  result.name = "projective_sandwich";
  LipGauge gauge = fixtures::qubit_pauli_gauge();
  CommonContextEval eval = build_qubit_context_set(seed, 256);

  std::vector<std::pair<DensityState, DensityState>> pairs;
  pairs.emplace_back(fixtures::qubit_up(), fixtures::qubit_down());
  Rng rng = Rng(seed).derive("acc8-states");
  pairs.emplace_back(random_density(2, rng), random_density(2, rng));
  pairs.emplace_back(random_density(2, rng), random_density(2, rng));

  double worst_lower = 0.0, worst_upper = 0.0;
  for (const auto& [mu, nu] : pairs) {
    double w1 = eval.sup_wasserstein(mu, nu, 1.0);
    for (double p : {1.0, 2.0, 4.0}) {
      double wp = eval.sup_wasserstein(mu, nu, p);
      worst_lower = std::max(worst_lower, w1 - wp);
      double cap = std::pow(eval.diam_max, (p - 1.0) / p) * std::pow(w1, 1.0 / p);
      worst_upper = std::max(worst_upper, wp - cap);
    }
  }

  // Dirac fixture: the sampled projective W_1 must reach d_L within 1e-3
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.extra_contexts = {fixtures::qubit_sigma_z_context(),
                        fixtures::qubit_sigma_x_context()};
  ProjectiveResult proj = projective_wasserstein(
      gauge, fixtures::qubit_up(), fixtures::qubit_down(), 1.0, cfg);
  DistanceResult dl =
      spectral_distance(gauge, fixtures::qubit_up(), fixtures::qubit_down());
  double dl_gap = std::abs(proj.value - dl.value);

  result.pass = worst_lower <= 1e-6 && worst_upper <= 1e-6 && dl_gap <= 1e-3;
  result.details = Json{{"contexts", eval.contexts.size()},
                        {"max_lower_violation", worst_lower},
                        {"max_upper_violation", worst_upper},
                        {"projective_w1", proj.value},
                        {"spectral_d_L", dl.value},
                        {"w1_vs_dL_gap", dl_gap},
                        {"tolerances", Json::array({1e-6, 1e-3})}};
  return result;
}

// criterion 9: sampled-diameter consistency and the power bound
SuiteResult suite_diameter_bound(uint64_t seed) {
  SuiteResult result;
  result.name = "diameter_bound";
  LipGauge gauge = fixtures::qubit_pauli_gauge();
  CommonContextEval eval = build_qubit_context_set(seed, 64);

  std::vector<std::pair<DensityState, DensityState>> pairs;
  pairs.emplace_back(fixtures::qubit_up(), fixtures::qubit_down());
  Rng rng = Rng(seed).derive("acc9-states");
  pairs.emplace_back(random_density(2, rng), random_density(2, rng));
  pairs.emplace_back(random_density(2, rng), random_density(2, rng));

  DiameterBoundReport report =
      verify_diameter_and_bound(gauge, eval.contexts, pairs, 2.0, 1e-6);

  // on the Pauli fixture context set the Dirac pair is tight:
  // W_2^2 = Diam * W_1 = 1 (the sup over all maximal contexts is larger,
  // sqrt(2), attained between the two Pauli frames; the power bound above
  // already covers the sampled set)
  CommonContextEval pauli = build_qubit_context_set(seed, 0);
  double w1 = pauli.sup_wasserstein(pairs[0].first, pairs[0].second, 1.0);
  double w2 = pauli.sup_wasserstein(pairs[0].first, pairs[0].second, 2.0);
  double equality_err =
      std::max(std::abs(w2 * w2 - pauli.diam_max * w1), std::abs(w2 * w2 - 1.0));

  // commutative sanity: diameter of the diagonal M_3 line gauge
  DiameterResult m3 = diameter(
      fixtures::diag_m3_line_gauge(),
      {fixtures::diag_m3_line_gauge().base_context()});
  double m3_err = std::abs(m3.max - 2.0);

  result.pass = report.pass && equality_err <= 1e-6 && m3_err <= 1e-9;
  result.details = Json{{"power_bound_min_margin", report.min_margin},
                        {"diam_max", eval.diam_max},
                        {"qubit_equality_error", equality_err},
                        {"diag_m3_diameter", m3.max},
                        {"tolerance", 1e-6}};
  return result;
}

// criterion 10: quasi-state layer and the Gleason witness
SuiteResult suite_quasi_state(uint64_t seed) {
  SuiteResult result;
  result.name = "quasi_state_gleason";
  Rng rng = Rng(seed).derive("acc10");

  double worst_residual = 0.0;
  bool all_extendable = true;
  double worst_recovery = 0.0;

  ContextDiagram qubit = fixtures::qubit_diagram();
  ContextDiagram m4 = fixtures::m4_chain_diagram(seed);
  for (int s = 0; s < 20; ++s) {
    QuasiState q = embed_state(random_density(2, rng), qubit);
    worst_residual = std::max(worst_residual, check_quasi_state(q).max_residual);
    ExtensionResult ext = linear_extension(q);
    all_extendable = all_extendable && ext.feasible;
    if (ext.feasible) {
      for (size_t c = 0; c < qubit.contexts().size(); ++c) {
        ProbVector back = restrict_state(*ext.state, qubit.contexts()[c]);
        worst_recovery = std::max(
            worst_recovery,
            (back.p() - q.value(static_cast<int>(c)).p()).cwiseAbs().maxCoeff());
      }
    }
  }
  for (int s = 0; s < 10; ++s) {
    QuasiState q = embed_state(random_density(4, rng), m4);
    worst_residual = std::max(worst_residual, check_quasi_state(q).max_residual);
    ExtensionResult ext = linear_extension(q);
    all_extendable = all_extendable && ext.feasible;
  }

  ExtensionResult gleason = linear_extension(fixtures::gleason_quasi_state());
  double bloch_norm = gleason.bloch ? gleason.bloch->norm() : 0.0;
  double witness_err = std::abs(bloch_norm - std::sqrt(2.0));

  result.pass = worst_residual <= 1e-12 && all_extendable &&
                worst_recovery <= 1e-8 && !gleason.feasible &&
                witness_err <= 1e-9;
  result.details = Json{{"max_embed_residual", worst_residual},
                        {"embedded_all_extendable", all_extendable},
                        {"max_restriction_recovery_error", worst_recovery},
                        {"gleason_feasible", gleason.feasible},
                        {"gleason_bloch_norm", bloch_norm},
                        {"gleason_certificate", gleason.certificate},
                        {"tolerance", 1e-9}};
  return result;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{
      "kantorovich_duality",      "p_monotonicity",
      "inclusion_monotonicity",   "triangle_gluing",
      "qubit_spectral_closed_form", "point_metric_closed_form",
      "kr_identity",              "projective_sandwich",
      "diameter_bound",           "quasi_state_gleason"};
  return names;
}

std::vector<SuiteResult> run_verify_suites(const std::string& which,
                                           uint64_t seed) {
  using SuiteFn = SuiteResult (*)(uint64_t);
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"kantorovich_duality", suite_kantorovich_duality},
      {"p_monotonicity", suite_p_monotonicity},
      {"inclusion_monotonicity", suite_inclusion_monotonicity},
      {"triangle_gluing", suite_triangle_gluing},
      {"qubit_spectral_closed_form", suite_qubit_spectral},
      {"point_metric_closed_form", suite_point_metric_closed_form},
      {"kr_identity", suite_kr_identity},
      {"projective_sandwich", suite_projective_sandwich},
      {"diameter_bound", suite_diameter_bound},
      {"quasi_state_gleason", suite_quasi_state}};

  std::vector<SuiteResult> results;
  bool matched = false;
  for (const auto& [name, fn] : suites) {
    if (which == "all" || which == name) {
      results.push_back(fn(seed));
      matched = true;
    }
  }
  if (!matched) {
    throw ValidationError("UnknownSuite", "no verify suite named " + which);
  }
  return results;
}

Json verify_report(const std::vector<SuiteResult>& results, uint64_t seed) {
  Json suites = Json::array();
  bool all_pass = true;
  for (const auto& r : results) {
    suites.push_back(Json{{"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    all_pass = all_pass && r.pass;
  }
  return Json{{"command", "verify"},
              {"seed", seed},
              {"pass", all_pass},
              {"suites", suites}};
}

}  // namespace ncwass
