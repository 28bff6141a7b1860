#include "ncwass/projective.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncwass/errors.hpp"
#include "ncwass/sampling.hpp"
#include "ncwass/serialize.hpp"

namespace ncwass {

namespace {

Matrix unitary_exp(const Matrix& hermitian, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (int i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(Complex(0.0, t * es.eigenvalues()(i)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

std::string padded(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04d", prefix, i);
  return buf;
}

}  // namespace

double context_wasserstein(const LipGauge& gauge, const CommutativeContext& alpha,
                           const ProbVector& mu_a, const ProbVector& nu_a,
                           double p) {
  PointMetricResult pm = context_point_metric(gauge, alpha);
  return wasserstein_p(pm.space, p, mu_a, nu_a).value;
}

namespace {

CertifiedWasserstein certified_from_metric(const PointMetricResult& pm, double p,
                                           const ProbVector& mu_a,
                                           const ProbVector& nu_a) {
  CertifiedWasserstein out;
  out.certified = pm.certified;
  TransportResult tr = wasserstein_p(pm.space, p, mu_a, nu_a);
  out.value = tr.value;
  if (!tr.coupling || is_infinite(tr.value)) return out;
  const RealMatrix& pi = tr.coupling->pi();
  double bound = 0.0;
  for (int i = 0; i < pm.space.points(); ++i) {
    for (int j = 0; j < pm.space.points(); ++j) {
      if (i == j || pi(i, j) <= 0.0) continue;
      double d = pm.space.dist()(i, j);
      double sensitivity =
          (p == 1.0 || out.value <= 0.0 || d <= 0.0)
              ? pi(i, j)
              : std::pow(out.value, 1.0 - p) * std::pow(d, p - 1.0) * pi(i, j);
      bound += pm.gaps(i, j) * sensitivity;
    }
  }
  out.error_bound = bound;
  return out;
}

}  // namespace

CertifiedWasserstein context_wasserstein_certified(const LipGauge& gauge,
                                                   const CommutativeContext& alpha,
                                                   const ProbVector& mu_a,
                                                   const ProbVector& nu_a,
                                                   double p) {
  PointMetricResult pm = context_point_metric(gauge, alpha);
  return certified_from_metric(pm, p, mu_a, nu_a);
}

double context_wasserstein(const LipGauge& gauge, const CommutativeContext& alpha,
                           const DensityState& mu, const DensityState& nu,
                           double p) {
  return context_wasserstein(gauge, alpha, restrict_state(mu, alpha),
                             restrict_state(nu, alpha), p);
}

ProjectiveResult projective_wasserstein(const LipGauge& gauge,
                                        const DensityState& mu,
                                        const DensityState& nu, double p,
                                        const SearchConfig& cfg) {
  const int n = gauge.dim();
  if (mu.dim() != n || nu.dim() != n) {
    throw ValidationError("DimensionMismatch",
                          "state dimension differs from gauge");
  }

  ProjectiveResult result;
  result.stats.seed = cfg.seed;

  struct Candidate {
    CommutativeContext context;
    std::string id;
  };
  std::vector<Candidate> candidates;
  for (size_t i = 0; i < cfg.extra_contexts.size(); ++i) {
    candidates.push_back(
        {cfg.extra_contexts[i], padded("extra:", static_cast<int>(i))});
  }

  const bool finite_metric = gauge.variant() == LipGauge::Variant::FiniteMetric;
  if (finite_metric) {
    // the base context carries the whole supremum: every other context
    // evaluates through the pullback of the same metric and cannot exceed it
    candidates.push_back({gauge.base_context(), "base:0000"});
  } else {
    int n_haar = cfg.n_haar >= 0 ? cfg.n_haar : (n <= 3 ? 256 : 64);
    Rng rng = Rng(cfg.seed).derive("projective-haar");
    for (int s = 0; s < n_haar; ++s) {
      candidates.push_back({random_maximal_context(n, rng), padded("haar:", s)});
    }
  }

  double best = -1.0;
  std::optional<CommutativeContext> best_context;
  std::string best_key;
  std::vector<CommutativeContext> probed_maximal;

  auto consider = [&](const CommutativeContext& ctx, const std::string& id) {
    CertifiedWasserstein cw = context_wasserstein_certified(
        gauge, ctx, restrict_state(mu, ctx), restrict_state(nu, ctx), p);
    result.per_context_values[id] = cw.value;
    result.budget_exceeded = result.budget_exceeded || !cw.certified;
    if (ctx.is_maximal()) probed_maximal.push_back(ctx);
    std::string key = context_key(ctx);
    bool better = cw.value > best ||
                  (cw.value == best && (!best_context || key < best_key));
    if (better) {
      best = cw.value;
      best_context = ctx;
      best_key = key;
      result.witness_error_bound = cw.error_bound;
    }
    ++result.stats.samples;
    return cw.value;
  };

  for (const auto& cand : candidates) consider(cand.context, cand.id);

  // local refinement of the best maximal frame
  if (!finite_metric && best_context && best_context->is_maximal() &&
      cfg.n_refine > 0) {
    const auto& basis = hermitian_basis(n);
    double step = cfg.step0;
    int accepted = 0;
    for (int sweep = 0; sweep < cfg.n_refine; ++sweep, step *= 0.5) {
      for (size_t a = 0; a < basis.size(); ++a) {
        for (double sign : {1.0, -1.0}) {
          Matrix u = best_context->frame() * unitary_exp(basis[a], sign * step);
          CommutativeContext ctx = CommutativeContext::maximal(u);
          ++result.stats.refine_steps;
          CertifiedWasserstein cw = context_wasserstein_certified(
              gauge, ctx, restrict_state(mu, ctx), restrict_state(nu, ctx), p);
          result.budget_exceeded = result.budget_exceeded || !cw.certified;
          if (cw.value > best) {
            std::string id = padded("refine:", accepted++);
            result.per_context_values[id] = cw.value;
            best = cw.value;
            best_context = ctx;
            best_key = context_key(ctx);
            result.witness_error_bound = cw.error_bound;
            probed_maximal.push_back(ctx);
          }
        }
      }
    }
  }

  result.value = std::max(best, 0.0);
  result.witness_context = best_context;

  if (!probed_maximal.empty()) {
    SolidityReport sr = solidity_probe(gauge, probed_maximal);
    bool ok = true;
    for (const auto& pc : sr.contexts) ok = ok && pc.finite && pc.separates;
    result.pseudo = !ok;
  }
  return result;
}

ProjectiveResult projective_wasserstein(const LipGauge& gauge, const QuasiState& mu,
                                        const QuasiState& nu, double p) {
  ProjectiveResult result;
  const auto& diagram = mu.diagram();
  if (diagram.contexts().size() != nu.diagram().contexts().size()) {
    throw ValidationError("ArityMismatch",
                          "quasi-states live on different diagrams");
  }
  double best = -1.0;
  std::optional<CommutativeContext> best_context;
  std::string best_key;
  std::vector<CommutativeContext> probed;
  for (int idx : diagram.maximal_indices()) {
    const auto& ctx = diagram.contexts()[idx];
    PointMetricResult pm = context_point_metric(gauge, ctx);
    CertifiedWasserstein cw =
        certified_from_metric(pm, p, mu.value(idx), nu.value(idx));
    result.per_context_values[padded("ctx:", idx)] = cw.value;
    result.budget_exceeded = result.budget_exceeded || !cw.certified;
    probed.push_back(ctx);
    std::string key = context_key(ctx);
    if (cw.value > best ||
        (cw.value == best && (!best_context || key < best_key))) {
      best = cw.value;
      best_context = ctx;
      best_key = key;
      result.witness_error_bound = cw.error_bound;
    }
    ++result.stats.samples;
  }
  if (best < 0.0) {
    throw ValidationError("BadDiagram",
                          "quasi-state diagram has no maximal context");
  }
  result.value = std::max(best, 0.0);
  result.witness_context = best_context;
  if (!probed.empty()) {
    SolidityReport sr = solidity_probe(gauge, probed);
    bool ok = true;
    for (const auto& pc : sr.contexts) ok = ok && pc.finite && pc.separates;
    result.pseudo = !ok;
  }
  return result;
}

namespace {

double safe_margin(double fine, double coarse) {
  if (is_infinite(fine)) return is_infinite(coarse) ? 0.0 : kInf;
  if (is_infinite(coarse)) return -kInf;
  return fine - coarse;
}

}  // namespace

MarginReport verify_inclusion_monotonicity(
    const LipGauge& gauge, const ContextDiagram& diagram,
    const std::vector<std::pair<DensityState, DensityState>>& pairs, double p,
    double tolerance) {
  MarginReport report;
  // point metrics are state-independent; compute once per context
  std::map<int, PointMetricResult> metrics;
  auto metric_of = [&](int idx) -> const PointMetricResult& {
    auto it = metrics.find(idx);
    if (it == metrics.end()) {
      it = metrics
               .emplace(idx,
                        context_point_metric(gauge, diagram.contexts()[idx]))
               .first;
    }
    return it->second;
  };

  for (const auto& inc : diagram.inclusions()) {
    const auto& coarse_ctx = diagram.contexts()[inc.coarse];
    const auto& fine_ctx = diagram.contexts()[inc.fine];
    for (size_t s = 0; s < pairs.size(); ++s) {
      double w_coarse = wasserstein_p(metric_of(inc.coarse).space, p,
                                      restrict_state(pairs[s].first, coarse_ctx),
                                      restrict_state(pairs[s].second, coarse_ctx))
                            .value;
      double w_fine = wasserstein_p(metric_of(inc.fine).space, p,
                                    restrict_state(pairs[s].first, fine_ctx),
                                    restrict_state(pairs[s].second, fine_ctx))
                          .value;
      double margin = safe_margin(w_fine, w_coarse);
      std::ostringstream label;
      label << "edge(" << inc.coarse << "<=" << inc.fine << ") pair " << s;
      report.items.push_back({label.str(), margin});
      report.min_margin = std::min(report.min_margin, margin);
    }
  }
  report.pass = report.min_margin >= -tolerance;
  return report;
}

MarginReport verify_p_monotonicity(
    const LipGauge& gauge, const std::vector<CommutativeContext>& contexts,
    const std::vector<std::pair<DensityState, DensityState>>& pairs,
    const std::vector<double>& ps, double tolerance) {
  MarginReport report;
  for (size_t c = 0; c < contexts.size(); ++c) {
    PointMetricResult pm = context_point_metric(gauge, contexts[c]);
    for (size_t s = 0; s < pairs.size(); ++s) {
      ProbVector mu = restrict_state(pairs[s].first, contexts[c]);
      ProbVector nu = restrict_state(pairs[s].second, contexts[c]);
      std::vector<double> values;
      values.reserve(ps.size());
      for (double p : ps) {
        values.push_back(wasserstein_p(pm.space, p, mu, nu).value);
      }
      for (size_t a = 0; a < ps.size(); ++a) {
        for (size_t b = a + 1; b < ps.size(); ++b) {
          double lo = ps[a] <= ps[b] ? values[a] : values[b];
          double hi = ps[a] <= ps[b] ? values[b] : values[a];
          double margin = safe_margin(hi, lo);
          std::ostringstream label;
          label << "ctx " << c << " pair " << s << " W_" << std::min(ps[a], ps[b])
                << "<=W_" << std::max(ps[a], ps[b]);
          report.items.push_back({label.str(), margin});
          report.min_margin = std::min(report.min_margin, margin);
        }
      }
    }
  }
  report.pass = report.min_margin >= -tolerance;
  return report;
}

DiameterBoundReport verify_diameter_and_bound(
    const LipGauge& gauge, const std::vector<CommutativeContext>& contexts,
    const std::vector<std::pair<DensityState, DensityState>>& pairs, double p,
    double tolerance) {
  DiameterBoundReport report;
  std::vector<PointMetricResult> metrics;
  metrics.reserve(contexts.size());
  for (const auto& ctx : contexts) {
    if (!ctx.is_maximal()) {
      throw ValidationError("NonMaximalContext",
                            "diameter bound requires maximal contexts");
    }
    metrics.push_back(context_point_metric(gauge, ctx));
    const auto& pm = metrics.back();
    double diam = 0.0;
    for (int i = 0; i < pm.space.points(); ++i) {
      for (int j = i + 1; j < pm.space.points(); ++j) {
        diam = std::max(diam, pm.space.dist()(i, j));
      }
    }
    report.per_context_diam.push_back(diam);
    report.diam_max = std::max(report.diam_max, diam);
  }

  for (size_t s = 0; s < pairs.size(); ++s) {
    double sup_w1 = 0.0, sup_wp = 0.0;
    for (size_t c = 0; c < contexts.size(); ++c) {
      ProbVector mu = restrict_state(pairs[s].first, contexts[c]);
      ProbVector nu = restrict_state(pairs[s].second, contexts[c]);
      sup_w1 = std::max(sup_w1, wasserstein_p(metrics[c].space, 1.0, mu, nu).value);
      sup_wp = std::max(sup_wp, wasserstein_p(metrics[c].space, p, mu, nu).value);
    }
    double lhs = std::pow(sup_wp, p);
    double rhs = std::pow(report.diam_max, p - 1.0) * sup_w1;
    double margin = rhs - lhs;
    std::ostringstream label;
    label << "pair " << s;
    report.items.push_back({label.str(), lhs, rhs, margin});
    report.min_margin = std::min(report.min_margin, margin);
  }
  report.pass = report.items.empty() || report.min_margin >= -tolerance;
  return report;
}

KrReport verify_kr_identity(const LipGauge& gauge, const CommutativeContext& alpha,
                            const std::vector<std::pair<ProbVector, ProbVector>>& pairs,
                            double tolerance, int lattice_samples, uint64_t seed) {
  KrReport report;
  RestrictedGauge rg = restrict_gauge(gauge, alpha);
  bool polyhedral = rg.kind() == RestrictedGauge::Kind::Polyhedral;
  report.lattice_hypothesis =
      polyhedral ||
      check_lattice_inequality(gauge, alpha, lattice_samples, seed).pass;
  report.equality_asserted = polyhedral || report.lattice_hypothesis;

  // both sides carry solver gaps; a tightened tolerance keeps the asserted
  // -1e-7 margin structural rather than lucky
  BallOptions tight;
  tight.tol = 1e-9;
  PointMetricResult pm = context_point_metric(gauge, alpha, tight);
  for (const auto& [mu, nu] : pairs) {
    double w1 = wasserstein_p(pm.space, 1.0, mu, nu).value;
    double dl = context_distance(gauge, alpha, mu, nu, tight).value;
    double diff = (is_infinite(w1) && is_infinite(dl)) ? 0.0 : w1 - dl;
    report.items.push_back({w1, dl, diff});
    report.min_diff = std::min(report.min_diff, diff);
    report.max_abs_diff = std::max(report.max_abs_diff, std::abs(diff));
    if (diff < -1e-7) report.pass = false;
    if (report.equality_asserted && std::abs(diff) > tolerance) report.pass = false;
  }
  return report;
}

}  // namespace ncwass
