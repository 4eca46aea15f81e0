// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsub/catalog.hpp"
#include "lsub/identities.hpp"
#include "lsub/report.hpp"
#include "lsub/sampling.hpp"
#include "lsub/theorems.hpp"
#include "lsub/weighted.hpp"

using namespace lsub;
using nlohmann::json;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

struct Outcome {
  bool pass = true;
  json results = json::array();
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.empty()) detail = what;
    }
  }
};

CatalogSurface make(FamilyKind kind, std::map<std::string, double> params) { return instantiate({kind, params}); }

TheoremVerdict pick(const std::vector<TheoremVerdict>& vs, const std::string& id) {
  for (const auto& v : vs)
    if (v.theorem_id == id) return v;
  return {};
}

Outcome catalog_lambda() {
  Outcome o;
  for (const auto& spec : standard_families()) {
    const auto s = instantiate(spec);
    const auto lp = lambda_profile(s);
    const double lam = *s.expected.lambda;
    const bool ok = lp.is_lambda && std::abs(lp.mean_lambda - lam) <= 1e-8 * std::max(1.0, lam);
    o.require(ok, spec.label() + " mean lambda " + std::to_string(lp.mean_lambda));
    o.results.push_back({{"family", spec.label()}, {"profile", lp}});
  }
  for (const auto& spec : standard_non_examples()) {
    const auto lp = lambda_profile(non_example(spec));
    o.require(lp.max_dev > 1e-2, spec.label() + " looks constant");
    o.results.push_back({{"family", spec.label()}, {"profile", lp}});
  }
  return o;
}

Outcome identity_suite() {
  Outcome o;
  for (const auto& spec : standard_families()) {
    const auto s = instantiate(spec);
    const auto pts = random_admissible_points(s.chart, kDefaultIdentityPoints, kDefaultSeed);
    auto reps = all_identities(s, pts);
    const auto ineq = shape_inequalities(s, pts);
    reps.insert(reps.end(), ineq.begin(), ineq.end());
    for (const auto& r : reps) {
      o.require(r.passed, spec.label() + " " + r.identity_id);
      o.results.push_back({{"family", spec.label()}, {"report", r}});
    }
  }
  return o;
}

Outcome divergence() {
  Outcome o;
  const std::vector<CatalogSurface> surfaces{
      make(FamilyKind::centered_sphere, {{"n", 2}, {"r", 2.0}}),
      make(FamilyKind::centered_sphere, {{"n", 1}, {"r", 1.0}}),
      make(FamilyKind::cylinder, {{"r", kGolden}}),
      make(FamilyKind::cmc_in_sphere, {{"lambda", 1.0}}),
  };
  for (const auto& s : surfaces) {
    for (const auto& d : divergence_residuals(s, admissible_fields(s.N()))) {
      o.require(d.residual <= 1e-6, s.spec.label() + " " + d.field.label());
      o.results.push_back({{"family", s.spec.label()}, {"residual", d}});
    }
  }
  return o;
}

Outcome tensor_fuzz() {
  Outcome o;
  for (int n : {2, 3}) {
    for (int p : {1, 2, 3}) {
      const auto reps = fuzz_tensor_inequality(n, p, 100000, kDefaultSeed);
      for (const auto& r : reps) {
        if (r.identity_id == "fuzz.hf_cubic") continue;
        const std::string tag = "n=" + std::to_string(n) + " p=" + std::to_string(p) + " " + r.identity_id;
        o.require(r.passed, tag);
        if (p == 1 && r.identity_id == "fuzz.simons_li") o.require(r.metrics.at("max_ratio") == 1.0, tag + " ratio");
        o.results.push_back(r);
      }
    }
  }
  return o;
}

Outcome equality_cases() {
  Outcome o;
  auto record = [&](const TheoremVerdict& v, const std::string& tag) {
    o.results.push_back({{"case", tag}, {"verdict", v}});
    return v;
  };
  auto verified = [&](const TheoremVerdict& v, const std::string& tag) {
    record(v, tag);
    o.require(v.hypothesis_holds && v.conclusion_verified.value_or(false), tag);
    return v;
  };
  const auto s2 = make(FamilyKind::centered_sphere, {{"n", 2}, {"r", 2.0}});
  const auto s1 = make(FamilyKind::centered_sphere, {{"n", 2}, {"r", 1.0}});
  const auto outer = verified(pick(ball_check(s2), "ball.outer"), "S2(2) outer");
  o.require(std::abs(outer.diagnostics.at("r2") - 2.0) <= 1e-12, "r2 = 2");
  const auto inner = verified(pick(ball_check(s1), "ball.inner"), "S2(1) inner");
  o.require(std::abs(inner.diagnostics.at("r1") - 1.0) <= 1e-12, "r1 = 1");
  for (double r : {1.0, kGolden - 1.0}) {
    const auto v = verified(pick(cylinder_check(make(FamilyKind::cylinder, {{"r", r}}), 1), "cylinder.inner"),
                            "cylinder r=" + std::to_string(r));
    o.require(std::abs(v.hypothesis_margin) <= 1e-8, "inner cylinder margin");
  }
  const auto plane = verified(pick(gap_check(make(FamilyKind::plane, {{"h", 1.0}})), "gap.weighted_condition"),
                              "plane gap");
  o.require(plane.classification == "plane at distance lambda", "plane classification");
  const auto sph = verified(pick(gap_check(s2), "gap.weighted_condition"), "S2(2) gap");
  o.require(sph.classification.rfind("sphere", 0) == 0, "sphere classification");
  o.require(sph.diagnostics.at("eq_saturation_residual") <= 1e-8, "sphere saturation residual");
  const auto cyl = verified(pick(gap_check(make(FamilyKind::cylinder, {{"r", kGolden}})), "gap.codim1_bound"),
                            "golden cylinder gap");
  o.require(std::abs(cyl.diagnostics.at("sup_norm_A") - (std::sqrt(5.0) - 1.0) / 2.0) <= 1e-10, "golden |A|");
  o.require(std::abs(cyl.hypothesis_margin) <= 1e-10, "golden saturation");
  return o;
}

Outcome remark_sphere() {
  Outcome o;
  const auto s = make(FamilyKind::remark_sphere_G6, {});
  const auto lp = lambda_profile(s);
  o.require(lp.is_lambda && std::abs(lp.mean_lambda - 3.0) <= 1e-10, "lambda = 3");
  const auto vs = ball_check(s);
  for (const auto& id : {"ball.outer", "ball.inner"}) {
    const auto v = pick(vs, id);
    o.require(!v.hypothesis_holds, std::string(id) + " hypothesis should fail");
    o.results.push_back(v);
  }
  const auto& d = pick(vs, "ball.outer").diagnostics;
  o.require(std::abs(d.at("min_norm_X") - std::sqrt(13.0)) <= 1e-10, "min |X|");
  o.require(std::abs(d.at("max_norm_X") - std::sqrt(13.0)) <= 1e-10, "max |X|");
  o.require(std::abs(d.at("r1") - 1.0) <= 1e-10 && std::abs(d.at("r2") - 4.0) <= 1e-10, "radii");
  o.require(d.at("r1") < d.at("min_norm_X") && d.at("max_norm_X") < d.at("r2"), "strictly between");
  o.results.push_back({{"profile", lp}});
  return o;
}

Outcome growth() {
  Outcome o;
  struct Case {
    CatalogSurface s;
    double expected;
    bool equality;
  };
  const std::vector<Case> cases{{make(FamilyKind::plane, {{"h", 0.0}}), 2.0, false},
                                {make(FamilyKind::plane, {{"h", 1.0}}), 2.0, false},
                                {make(FamilyKind::cylinder, {{"r", 1.0}}), 1.0, true}};
  for (const auto& c : cases) {
    const auto g = growth_report(c.s);
    const std::string tag = c.s.spec.label();
    o.require(std::abs(g.fitted_exponent - c.expected) <= 0.05, tag + " exponent");
    o.require(g.fitted_exponent <= g.bound_exponent + 0.05, tag + " bound");
    if (c.equality) o.require(std::abs(g.fitted_exponent - g.bound_exponent) <= 0.05, tag + " equality");
    o.results.push_back({{"family", tag}, {"growth", g}});
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"catalog lambda values", catalog_lambda},
      {"identity suite on every lambda-family", identity_suite},
      {"weighted divergence residuals", divergence},
      {"tensor inequality fuzzing", tensor_fuzz},
      {"theorem equality cases", equality_cases},
      {"remark sphere in G6", remark_sphere},
      {"volume growth exponents", growth},
  };
  bool all = true;
  json first = json::array();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = criteria[i].second();
    first.push_back(o.results);
    all = all && o.pass;
    std::printf("criterion %zu: %s  %s%s%s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.empty() ? "" : "  first failure: ", o.detail.c_str());
  }
  json second = json::array();
  for (const auto& c : criteria) second.push_back(c.second().results);
  const bool same = first.dump() == second.dump();
  all = all && same;
  std::printf("criterion 8: %s  results of two consecutive runs are byte-identical (%zu bytes)\n",
              same ? "PASS" : "FAIL", first.dump().size());
  return all ? 0 : 1;
}
