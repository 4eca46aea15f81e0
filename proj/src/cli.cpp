#include "lsub/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <map>

#include <CLI11.hpp>

#include "lsub/catalog.hpp"
#include "lsub/errors.hpp"
#include "lsub/identities.hpp"
#include "lsub/report.hpp"
#include "lsub/sampling.hpp"
#include "lsub/theorems.hpp"
#include "lsub/weighted.hpp"

namespace lsub {

namespace {

constexpr double kDivergenceTol = 1e-6;
constexpr std::int64_t kDefaultFuzzSamples = 100000;

const char* const kWeightNote =
    "divergence checks use the weight exp(-|X|^2/2); the theorem statement prints exp(+|X|^2/2) but its proof "
    "and every application use the negative exponent";

const char* const kFamilyParams[] = {"n", "p", "r", "k", "h", "lambda", "tilt", "offset"};

struct Options {
  std::string family;
  std::map<std::string, double> values;
  std::map<std::string, CLI::Option*> given;
  int points = kDefaultIdentityPoints;
  double tol = std::numeric_limits<double>::quiet_NaN();
  CLI::Option* tol_opt = nullptr;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t samples = 0;
  CLI::Option* samples_opt = nullptr;
  std::string format = "json";
  std::string mode = "exact";
};

void add_family_options(CLI::App* cmd, Options& o, bool require_family = true) {
  auto* f = cmd->add_option("--family", o.family, "catalog family name");
  if (require_family) f->required();
  for (const char* key : kFamilyParams) {
    o.given[std::string(cmd->get_name()) + "/" + key] =
        cmd->add_option(std::string("--") + key, o.values[key], std::string("family parameter ") + key);
  }
}

FamilySpec family_spec(const CLI::App* cmd, const Options& o) {
  FamilySpec spec;
  spec.kind = family_kind_from_string(o.family);
  for (const char* key : kFamilyParams) {
    if (key == std::string("k") && cmd->get_parent()->get_name() == "verify" && cmd->get_name() == "theorems") {
      // --k on theorems selects the cylinder split; it is also a family parameter
      // for cylinders and products.
      if (spec.kind != FamilyKind::cylinder && spec.kind != FamilyKind::product &&
          spec.kind != FamilyKind::off_axis_cylinder)
        continue;
    }
    if (o.given.at(std::string(cmd->get_name()) + "/" + key)->count()) spec.params[key] = o.values.at(key);
  }
  return with_defaults(spec);
}

CatalogSurface build_surface(const FamilySpec& spec) {
  return is_non_example(spec.kind) ? non_example(spec) : instantiate(spec);
}

nlohmann::json error_result(const std::string& id, const std::string& what) {
  return nlohmann::json{{"type", "error"}, {"id", id}, {"passed", false}, {"message", what}};
}

bool all_passed(const nlohmann::json& results) {
  return std::all_of(results.begin(), results.end(), [](const nlohmann::json& r) { return r.value("passed", false); });
}

void catalog_list(RunReport& rep) {
  for (FamilyKind kind : all_family_kinds()) {
    const FamilySpec spec = with_defaults({kind, {}});
    nlohmann::json j{{"type", "family"}, {"id", to_string(kind)}, {"passed", true},
                     {"non_example", is_non_example(kind)}, {"defaults", spec.params}};
    j["expected_lambda"] = is_non_example(kind) ? nlohmann::json() : nlohmann::json(expected_lambda(spec));
    rep.results.push_back(j);
  }
}

void catalog_describe(RunReport& rep, const FamilySpec& spec) {
  const CatalogSurface s = build_surface(spec);
  const LambdaProfile lp = lambda_profile(s);
  nlohmann::json j{{"type", "family"}, {"id", to_string(spec.kind)}, {"label", spec.label()},
                   {"n", s.n()},       {"p", s.p()},                 {"N", s.N()},
                   {"compact", s.chart.compact()}, {"expected", s.expected}, {"lambda_profile", lp}};
  bool ok;
  if (is_non_example(spec.kind)) {
    ok = !lp.is_lambda;
  } else {
    const double lam = s.expected.lambda.value_or(0.0);
    ok = lp.is_lambda && std::abs(lp.mean_lambda - lam) <= kLambdaTol * (1.0 + lam);
  }
  j["passed"] = ok;
  rep.results.push_back(j);
  rep.tolerances["lambda_rel"] = kLambdaTol;
}

void verify_identities(RunReport& rep, const CatalogSurface& s, const Options& o) {
  const auto pts = random_admissible_points(s.chart, o.points, o.seed);
  const JetMode mode = o.mode == "fd" ? JetMode::finite_difference : JetMode::exact;
  auto reps = all_identities(s, pts, mode);
  const auto ineq = shape_inequalities(s, pts);
  reps.insert(reps.end(), ineq.begin(), ineq.end());
  if (o.tol_opt->count()) {
    for (auto& r : reps) {
      r.tol = o.tol;
      finalize(r);
    }
    rep.tolerances["override"] = o.tol;
  }
  for (const auto& r : reps) rep.results.push_back(r);
  rep.tolerances["second_order"] = kSecondOrderTol;
  rep.tolerances["derived_field"] = kDerivedFieldTol;
  rep.tolerances["inequality"] = kInequalityTol;
  rep.tolerances["lambda_rel"] = kLambdaTol;
  rep.tolerances["points"] = o.points;
  rep.tolerances["fd_step"] = kFieldFdStep;
}

void verify_divergence(RunReport& rep, const CatalogSurface& s, const Options& o) {
  const double tol = o.tol_opt->count() ? o.tol : kDivergenceTol;
  const auto fields = admissible_fields(s.N());
  for (const auto& d : divergence_residuals(s, fields)) {
    nlohmann::json j = d;
    j["tol"] = tol;
    j["passed"] = std::isfinite(d.residual) && d.residual <= tol;
    rep.results.push_back(j);
  }
  rep.tolerances["divergence"] = tol;
  rep.tolerances["tail_target"] = kTailTarget;
  rep.notes.push_back(kWeightNote);
}

void verify_theorems(RunReport& rep, const CatalogSurface& s, const Options& o, const CLI::App* cmd) {
  const int samples = o.samples_opt->count() ? static_cast<int>(o.samples) : kTheoremSamples;
  std::optional<int> k;
  if (o.given.at(std::string(cmd->get_name()) + "/k")->count()) k = static_cast<int>(o.values.at("k"));
  for (const auto& v : all_theorems(s, k, samples)) rep.results.push_back(v);
  rep.tolerances["hypothesis"] = kHypothesisTol;
  rep.tolerances["conclusion"] = kConclusionTol;
  rep.tolerances["samples"] = samples;
  rep.notes.push_back("hypotheses are tested on sampled extrema, not certified global bounds");
}

void fuzz_inequality(RunReport& rep, const Options& o, const CLI::App* cmd) {
  const auto& g = o.given;
  if (!g.at(std::string(cmd->get_name()) + "/n")->count() || !g.at(std::string(cmd->get_name()) + "/p")->count())
    throw UsageError("fuzz inequality needs --n and --p");
  const double n = o.values.at("n"), p = o.values.at("p");
  if (n != std::floor(n) || p != std::floor(p)) throw UsageError("--n and --p must be integers");
  const std::int64_t samples = o.samples_opt->count() ? o.samples : kDefaultFuzzSamples;
  for (const auto& r : fuzz_tensor_inequality(static_cast<int>(n), static_cast<int>(p), samples, o.seed))
    rep.results.push_back(r);
  rep.tolerances["inequality"] = kInequalityTol;
  rep.tolerances["samples"] = static_cast<double>(samples);
}

void growth(RunReport& rep, const CatalogSurface& s) {
  rep.results.push_back(growth_report(s));
  rep.tolerances["exponent_slack"] = kGrowthSlack;
}

std::string join(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) out += (out.empty() ? "" : " ") + a;
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"Verification engine for lambda-submanifolds of Gauss space", "lsub"};
  // --h is a family parameter, so help is long-form only.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));

  auto* catalog = app.add_subcommand("catalog", "inspect the family catalog")->require_subcommand(1);
  auto* cat_list = catalog->add_subcommand("list", "list families with default parameters");
  auto* cat_describe = catalog->add_subcommand("describe", "expectations and lambda profile of one family");
  add_family_options(cat_describe, o);

  auto* verify = app.add_subcommand("verify", "run verification suites")->require_subcommand(1);
  auto* v_ident = verify->add_subcommand("identities", "pointwise identities and shape inequalities");
  auto* v_div = verify->add_subcommand("divergence", "weighted divergence residuals");
  auto* v_thm = verify->add_subcommand("theorems", "halfspace, ball, cylinder and gap theorems");
  for (auto* c : {v_ident, v_div, v_thm}) add_family_options(c, o);
  v_ident->add_option("--points", o.points, "sample points")->check(CLI::PositiveNumber);
  v_ident->add_option("--seed", o.seed, "sampling seed");
  v_ident->add_option("--mode", o.mode, "jet mode")->check(CLI::IsMember({"exact", "fd"}));
  o.tol_opt = nullptr;
  CLI::Option* tol_ident = v_ident->add_option("--tol", o.tol, "override every tolerance");
  CLI::Option* tol_div = v_div->add_option("--tol", o.tol, "divergence tolerance");
  CLI::Option* samples_thm = v_thm->add_option("--samples", o.samples, "hypothesis samples")->check(CLI::PositiveNumber);

  auto* fuzz = app.add_subcommand("fuzz", "random tensor checks")->require_subcommand(1);
  auto* fuzz_ineq = fuzz->add_subcommand("inequality", "fuzz the algebraic tensor inequalities");
  add_family_options(fuzz_ineq, o, false);
  fuzz_ineq->add_option("--seed", o.seed, "fuzz seed");
  CLI::Option* samples_fuzz = fuzz_ineq->add_option("--samples", o.samples, "sample count")->check(CLI::PositiveNumber);

  auto* growth_cmd = app.add_subcommand("growth", "fit the volume growth exponent");
  add_family_options(growth_cmd, o);

  for (auto* c : {cat_list, cat_describe, v_ident, v_div, v_thm, fuzz_ineq, growth_cmd})
    c->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  RunReport rep;
  rep.tool_version = kToolVersion;
  rep.command = join(args);
  try {
    if (cat_list->parsed()) {
      catalog_list(rep);
    } else if (cat_describe->parsed()) {
      const auto spec = family_spec(cat_describe, o);
      rep.family = spec;
      catalog_describe(rep, spec);
    } else if (fuzz_ineq->parsed()) {
      o.samples_opt = samples_fuzz;
      rep.seed = o.seed;
      fuzz_inequality(rep, o, fuzz_ineq);
    } else {
      CLI::App* cmd = v_ident->parsed() ? v_ident : v_div->parsed() ? v_div : v_thm->parsed() ? v_thm : growth_cmd;
      const auto spec = family_spec(cmd, o);
      rep.family = spec;
      err << "lsub: " << cmd->get_name() << " on " << spec.label() << "\n";
      const CatalogSurface s = build_surface(spec);
      try {
        if (cmd == v_ident) {
          o.tol_opt = tol_ident;
          rep.seed = o.seed;
          verify_identities(rep, s, o);
        } else if (cmd == v_div) {
          o.tol_opt = tol_div;
          verify_divergence(rep, s, o);
        } else if (cmd == v_thm) {
          o.samples_opt = samples_thm;
          verify_theorems(rep, s, o, cmd);
        } else {
          growth(rep, s);
        }
      } catch (const NotALambdaSurface& e) {
        rep.results.push_back(error_result("lambda_profile", e.what()));
      } catch (const InvalidK&) {
        throw;
      } catch (const UsageError&) {
        throw;
      } catch (const Error& e) {
        rep.results.push_back(error_result("engine", e.what()));
      }
    }
  } catch (const InvalidFamilyParams& e) {
    err << "lsub: " << e.what() << "\n";
    return 2;
  } catch (const InvalidK& e) {
    err << "lsub: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "lsub: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "lsub: " << e.what() << "\n";
    return 2;
  }

  rep.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  if (o.format == "csv") {
    out << to_csv(rep);
  } else if (o.format == "text") {
    out << to_text(rep);
  } else {
    out << nlohmann::json(rep).dump(2) << "\n";
  }
  return all_passed(rep.results) ? 0 : 1;
}

}  // namespace lsub
