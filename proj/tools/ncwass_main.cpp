// ncwass: spectral, per-context, and projective Wasserstein distances on
// finite-dimensional matrix algebras, with JSON reports.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ncwass/errors.hpp"
#include "ncwass/fixtures.hpp"
#include "ncwass/metric.hpp"
#include "ncwass/projective.hpp"
#include "ncwass/serialize.hpp"
#include "ncwass/transport.hpp"
#include "ncwass/verify.hpp"

namespace {

using ncwass::Json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerifyFailed = 4;

struct CommonOpts {
  std::string input;
  std::string output;
  std::string context_file;
  std::string method = "spectral";
  double p = 1.0;
  double tol = 1e-7;
  int n_haar = -1;
  uint64_t seed = 0;
  bool seed_given = false;
  bool debug_cuts = false;
};

struct Outcome {
  int code = kExitOk;
  Json report;
};

uint64_t default_seed() {
  if (const char* env = std::getenv("NCWASS_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

Json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw ncwass::ValidationError("IoError", "cannot open input file " + path);
  }
  Json j = Json::parse(f, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw ncwass::ValidationError("SchemaViolation",
                                  "input file " + path + " is not valid JSON");
  }
  return j;
}

Json distance_result_json(const ncwass::DistanceResult& d, bool debug_cuts) {
  Json j{{"value", ncwass::ext_to_json(d.value)},
         {"gap", d.certified_gap},
         {"certified", d.certified}};
  if (d.witness_element) {
    j["witness"] = ncwass::matrix_to_json(d.witness_element->entries());
  } else if (d.witness_vector) {
    j["witness"] = ncwass::vector_to_json(*d.witness_vector);
  }
  if (debug_cuts) {
    Json cuts = Json::array();
    for (const auto& c : d.cut_history) {
      cuts.push_back(Json{{"iteration", c.iteration},
                          {"map_index", c.map_index},
                          {"norm", c.norm},
                          {"upper_bound", c.upper_bound}});
    }
    j["cut_history"] = cuts;
  }
  return j;
}

Json projective_result_json(const ncwass::ProjectiveResult& r) {
  Json per = Json::object();
  for (const auto& [key, value] : r.per_context_values) {
    per[key] = ncwass::ext_to_json(value);
  }
  Json j{{"value", ncwass::ext_to_json(r.value)},
         {"witness_error_bound", r.witness_error_bound},
         {"per_context_values", per},
         {"search_stats",
          Json{{"samples", r.stats.samples},
               {"refinement_steps", r.stats.refine_steps},
               {"seed", r.stats.seed}}},
         {"pseudo", r.pseudo},
         {"budget_exceeded", r.budget_exceeded}};
  if (r.witness_context) {
    j["witness_context"] = ncwass::context_to_json(*r.witness_context);
  }
  return j;
}

Outcome run_distance(const CommonOpts& opts) {
  Json in = load_json(opts.input);
  ncwass::LipGauge gauge =
      ncwass::parse_gauge(ncwass::require_key(in, "gauge", ""), "/gauge");
  ncwass::DensityState mu =
      ncwass::parse_density(ncwass::require_key(in, "mu", ""), "/mu");
  ncwass::DensityState nu =
      ncwass::parse_density(ncwass::require_key(in, "nu", ""), "/nu");

  ncwass::BallOptions ball;
  ball.tol = opts.tol;
  ball.record_cuts = opts.debug_cuts;

  Json report{{"command", "distance"},
              {"method", opts.method},
              {"inputs_digest", ncwass::digest_hex(in)},
              {"seed", opts.seed}};

  if (opts.method == "spectral") {
    ncwass::DistanceResult d = ncwass::spectral_distance(gauge, mu, nu, ball);
    report["result"] = distance_result_json(d, opts.debug_cuts);
  } else if (opts.method == "context") {
    std::optional<ncwass::CommutativeContext> ctx;
    if (!opts.context_file.empty()) {
      ctx = ncwass::parse_context(load_json(opts.context_file), "/context");
    } else if (in.contains("context")) {
      ctx = ncwass::parse_context(in["context"], "/context");
    } else {
      throw ncwass::ValidationError(
          "SchemaViolation",
          "/context: required for --method context (inline or --context-file)");
    }
    ncwass::DistanceResult d = ncwass::context_distance(
        gauge, *ctx, restrict_state(mu, *ctx), restrict_state(nu, *ctx), ball);
    report["result"] = distance_result_json(d, opts.debug_cuts);
  } else if (opts.method == "projective") {
    ncwass::SearchConfig cfg;
    cfg.seed = opts.seed;
    cfg.n_haar = opts.n_haar;
    if (in.contains("search")) {
      const Json& s = in["search"];
      if (s.contains("n_haar")) {
        cfg.n_haar = ncwass::parse_int(s["n_haar"], "/search/n_haar");
      }
      if (s.contains("n_refine")) {
        cfg.n_refine = ncwass::parse_int(s["n_refine"], "/search/n_refine");
      }
      if (s.contains("step0")) {
        cfg.step0 = ncwass::parse_double(s["step0"], "/search/step0");
      }
      if (s.contains("seed") && !opts.seed_given) {
        cfg.seed =
            static_cast<uint64_t>(ncwass::parse_int(s["seed"], "/search/seed"));
      }
      if (s.contains("extra_contexts")) {
        const Json& extras = s["extra_contexts"];
        for (size_t i = 0; i < extras.size(); ++i) {
          cfg.extra_contexts.push_back(ncwass::parse_context(
              extras[i], "/search/extra_contexts/" + std::to_string(i)));
        }
      }
    }
    ncwass::ProjectiveResult r =
        ncwass::projective_wasserstein(gauge, mu, nu, opts.p, cfg);
    report["result"] = projective_result_json(r);
  } else {
    throw ncwass::ValidationError("SchemaViolation",
                                  "--method must be spectral|context|projective");
  }
  return {kExitOk, std::move(report)};
}

Outcome run_ot(const CommonOpts& opts) {
  Json in = load_json(opts.input);
  ncwass::FiniteMetricSpace space(
      ncwass::parse_rmatrix(ncwass::require_key(in, "dist", ""), "/dist"));
  ncwass::ProbVector mu =
      ncwass::parse_prob(ncwass::require_key(in, "mu", ""), "/mu");
  ncwass::ProbVector nu =
      ncwass::parse_prob(ncwass::require_key(in, "nu", ""), "/nu");
  double p = in.contains("p") ? ncwass::parse_double(in["p"], "/p") : opts.p;

  ncwass::TransportResult r = ncwass::wasserstein_p(space, p, mu, nu);
  Json report{{"command", "ot"},
              {"inputs_digest", ncwass::digest_hex(in)},
              {"p", p},
              {"seed", opts.seed},
              {"value", ncwass::ext_to_json(r.value)}};
  if (r.coupling) {
    report["coupling"] = ncwass::rmatrix_to_json(r.coupling->pi());
  }
  if (p == 1.0 && !space.extended()) {
    report["duality_gap"] = ncwass::duality_gap(space, mu, nu);
  }
  return {kExitOk, std::move(report)};
}

Outcome run_point_metric(const CommonOpts& opts) {
  Json in = load_json(opts.input);
  ncwass::LipGauge gauge =
      ncwass::parse_gauge(ncwass::require_key(in, "gauge", ""), "/gauge");
  ncwass::CommutativeContext ctx =
      ncwass::parse_context(ncwass::require_key(in, "context", ""), "/context");
  ncwass::BallOptions ball;
  ball.tol = opts.tol;
  ncwass::PointMetricResult pm = ncwass::context_point_metric(gauge, ctx, ball);
  Json report{{"command", "point-metric"},
              {"inputs_digest", ncwass::digest_hex(in)},
              {"seed", opts.seed},
              {"dist", ncwass::rmatrix_to_json(pm.space.dist())},
              {"gaps", ncwass::rmatrix_to_json(pm.gaps)},
              {"pseudo", pm.pseudo},
              {"extended", pm.extended}};
  return {kExitOk, std::move(report)};
}

Outcome run_gauge_check(const CommonOpts& opts, int samples) {
  Json in = load_json(opts.input);
  const Json& gj = in.contains("gauge") ? in["gauge"] : in;
  ncwass::LipGauge gauge = ncwass::parse_gauge(gj, "/gauge");
  ncwass::GaugeReport axioms = ncwass::check_axioms(gauge, samples, opts.seed);

  Json violations = Json::array();
  for (const auto& v : axioms.sampled_violations) {
    violations.push_back(Json{
        {"axiom", v.axiom}, {"witness", v.witness}, {"magnitude", v.magnitude}});
  }
  Json report{{"command", "gauge-check"},
              {"inputs_digest", ncwass::digest_hex(in)},
              {"seed", opts.seed},
              {"samples", samples},
              {"violations", violations},
              {"pass", violations.empty()}};
  if (gauge.variant() == ncwass::LipGauge::Variant::MultiCommutator) {
    ncwass::GaugeReport ns = ncwass::null_space(gauge);
    report["null_space_dim"] = ns.null_space_basis.size();
    report["is_only_constants"] = ns.is_only_constants;
  }
  return {kExitOk, std::move(report)};
}

Outcome run_gleason_demo(const CommonOpts& opts) {
  ncwass::QuasiState q =
      opts.input.empty() ? ncwass::fixtures::gleason_quasi_state()
                         : ncwass::parse_quasi_state(load_json(opts.input), "");
  ncwass::QuasiStateReport consistency = ncwass::check_quasi_state(q);
  ncwass::ExtensionResult ext = ncwass::linear_extension(q);

  Json report{{"command", "gleason-demo"},
              {"inputs_digest",
               ncwass::digest_hex(ncwass::quasi_state_to_json(q))},
              {"seed", opts.seed},
              {"consistent", consistency.pass},
              {"max_consistency_residual", consistency.max_residual},
              {"extendable", ext.feasible},
              {"residual", ext.residual},
              {"min_eigenvalue", ext.min_eigenvalue}};
  if (ext.bloch) {
    report["bloch"] = ncwass::vector_to_json(*ext.bloch);
    report["bloch_norm"] = ext.bloch->norm();
  }
  if (!ext.feasible) report["certificate"] = ext.certificate;
  if (ext.state) report["state"] = ncwass::matrix_to_json(ext.state->rho());
  return {kExitOk, std::move(report)};
}

Outcome run_verify(const CommonOpts& opts, const std::string& suite) {
  std::vector<ncwass::SuiteResult> results =
      ncwass::run_verify_suites(suite, opts.seed);
  Json report = ncwass::verify_report(results, opts.seed);
  int code = report["pass"].get<bool>() ? kExitOk : kExitVerifyFailed;
  return {code, std::move(report)};
}

Outcome run_emit_fixtures(const CommonOpts& opts, const std::string& dir) {
  Json manifest = ncwass::fixtures::emit_fixtures(dir, opts.seed);
  Json report{{"command", "emit-fixtures"},
              {"seed", opts.seed},
              {"directory", dir},
              {"manifest", manifest}};
  return {kExitOk, std::move(report)};
}

void emit_report(const CommonOpts& opts, const Json& report) {
  std::string text = report.dump(2);
  if (!opts.output.empty()) {
    std::ofstream f(opts.output, std::ios::binary);
    if (!f) {
      throw ncwass::ValidationError("IoError",
                                    "cannot write output file " + opts.output);
    }
    f << text << "\n";
  }
  std::cout << text << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective Wasserstein distances on matrix algebras"};
  app.require_subcommand(1);

  CommonOpts opts;
  opts.seed = default_seed();
  int gauge_samples = 200;
  std::string verify_suite = "all";
  std::string fixtures_dir = "fixtures";

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    auto* in = cmd->add_option("--input", opts.input, "input JSON file");
    if (needs_input) in->required();
    cmd->add_option("--output", opts.output, "write the report here as well");
    cmd->add_option("--seed", opts.seed,
                    "rng seed (env NCWASS_SEED overrides the default)")
        ->each([&](const std::string&) { opts.seed_given = true; });
    cmd->add_option("--tol", opts.tol, "solver tolerance");
  };

  CLI::App* distance =
      app.add_subcommand("distance", "spectral / context / projective distance");
  add_common(distance, true);
  distance->add_option("--method", opts.method, "spectral|context|projective");
  distance->add_option("--p", opts.p, "Wasserstein exponent");
  distance->add_option("--context-file", opts.context_file,
                       "context JSON for --method context");
  distance->add_option("--n-haar", opts.n_haar,
                       "Haar samples for the projective search");
  distance->add_flag("--debug-cuts", opts.debug_cuts,
                     "record cutting-plane history");

  CLI::App* ot = app.add_subcommand("ot", "exact transport on a finite metric space");
  add_common(ot, true);
  ot->add_option("--p", opts.p, "Wasserstein exponent (fallback when absent in input)");

  CLI::App* pm =
      app.add_subcommand("point-metric", "gauge-induced metric on a context spectrum");
  add_common(pm, true);

  CLI::App* gc = app.add_subcommand("gauge-check", "gauge axioms and null space");
  add_common(gc, true);
  gc->add_option("--samples", gauge_samples, "sample count");

  CLI::App* gd = app.add_subcommand("gleason-demo", "quasi-state extension demo");
  add_common(gd, false);

  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  add_common(verify, false);
  verify->add_option("--suite", verify_suite, "all or a suite name");

  CLI::App* ef =
      app.add_subcommand("emit-fixtures", "write the canonical fixture set");
  add_common(ef, false);
  ef->add_option("--dir", fixtures_dir, "target directory");

  CLI11_PARSE(app, argc, argv);

  auto started = std::chrono::steady_clock::now();
  try {
    Outcome out;
    if (distance->parsed()) {
      out = run_distance(opts);
    } else if (ot->parsed()) {
      out = run_ot(opts);
    } else if (pm->parsed()) {
      out = run_point_metric(opts);
    } else if (gc->parsed()) {
      out = run_gauge_check(opts, gauge_samples);
    } else if (gd->parsed()) {
      out = run_gleason_demo(opts);
    } else if (verify->parsed()) {
      out = run_verify(opts, verify_suite);
    } else if (ef->parsed()) {
      out = run_emit_fixtures(opts, fixtures_dir);
    }

    double elapsed = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    if (verify->parsed()) {
      // verify reports are the byte-determinism contract: wall time goes to
      // stderr instead of the report
      std::cerr << "wall_time_ms " << elapsed << "\n";
    } else {
      out.report["wall_time_ms"] = elapsed;
    }
    emit_report(opts, out.report);
    return out.code;
  } catch (const ncwass::ValidationError& e) {
    std::cerr << "validation error [" << e.code() << "]: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ncwass::NumericalError& e) {
    std::cerr << "numerical error [" << e.code() << "]: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
