#include "lsub/report.hpp"

#include <cmath>
#include <sstream>

namespace lsub {

namespace {

// nlohmann writes NaN as null; keep that explicit for optional margins.
nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

std::string num(const nlohmann::json& v, int precision = 17) {
  if (v.is_null()) return "nan";
  std::ostringstream os;
  os.precision(precision);
  os << v.get<double>();
  return os.str();
}

}  // namespace

void to_json(nlohmann::json& j, const IdentityReport& r) {
  j = nlohmann::json{{"type", "identity"},
                     {"id", r.identity_id},
                     {"passed", r.passed},
                     {"tol", r.tol},
                     {"max_residual", number_or_null(r.max_residual())},
                     {"worst_index", r.worst}};
  nlohmann::json res = nlohmann::json::array();
  for (double x : r.residuals) res.push_back(number_or_null(x));
  j["residuals"] = res;
  if (r.worst >= 0 && r.worst < static_cast<int>(r.points.size())) j["worst_point"] = r.points[r.worst].coords;
  if (!r.metrics.empty()) j["metrics"] = r.metrics;
  if (!r.witness.empty()) j["witness"] = r.witness;
  if (!r.notes.empty()) j["notes"] = r.notes;
}

void to_json(nlohmann::json& j, const TheoremVerdict& v) {
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [k, x] : v.diagnostics) diag[k] = number_or_null(x);
  j = nlohmann::json{{"type", "theorem"},
                     {"id", v.theorem_id},
                     {"passed", verdict_ok(v)},
                     {"hypothesis_holds", v.hypothesis_holds},
                     {"hypothesis_margin", number_or_null(v.hypothesis_margin)},
                     {"conclusion_claim", v.conclusion_claim},
                     {"conclusion_verified", v.conclusion_verified ? nlohmann::json(*v.conclusion_verified)
                                                                  : nlohmann::json()},
                     {"classification", v.classification},
                     {"diagnostics", diag},
                     {"worst_point", v.worst_point}};
  if (!v.notes.empty()) j["notes"] = v.notes;
}

void to_json(nlohmann::json& j, const GrowthReport& g) {
  j = nlohmann::json{{"type", "growth"},
                     {"id", "growth.volume"},
                     {"passed", g.passes},
                     {"radii", g.radii},
                     {"areas", g.areas},
                     {"fitted_exponent", g.fitted_exponent},
                     {"bound_exponent", g.bound_exponent},
                     {"beta", g.beta},
                     {"inf_H2", g.inf_H2},
                     {"lambda", g.lambda},
                     {"slack", kGrowthSlack}};
}

void to_json(nlohmann::json& j, const LambdaProfile& lp) {
  j = nlohmann::json{{"mean_lambda", lp.mean_lambda}, {"max_dev", lp.max_dev},   {"min_lambda", lp.min_lambda},
                     {"max_lambda", lp.max_lambda},   {"n_samples", lp.n_samples}, {"is_lambda", lp.is_lambda}};
}

void to_json(nlohmann::json& j, const Expectations& e) {
  j = nlohmann::json{{"lambda", e.lambda ? nlohmann::json(*e.lambda) : nlohmann::json()},
                     {"A2", e.A2},
                     {"H_norm", e.H_norm},
                     {"compact", e.compact},
                     {"graph", e.graph},
                     {"growth_exponent", e.growth_exponent ? nlohmann::json(*e.growth_exponent) : nlohmann::json()},
                     {"radius", e.radius ? nlohmann::json(*e.radius) : nlohmann::json()}};
}

void to_json(nlohmann::json& j, const DivergenceResidual& d) {
  j = nlohmann::json{{"type", "divergence"},
                     {"id", "divergence." + d.field.label()},
                     {"residual", number_or_null(d.residual)},
                     {"est_error", d.est_error}};
}

void to_json(nlohmann::json& j, const RunReport& r) {
  j = nlohmann::json{{"tool_version", r.tool_version},
                     {"command", r.command},
                     {"seed", r.seed ? nlohmann::json(*r.seed) : nlohmann::json()},
                     {"family", r.family ? nlohmann::json(*r.family) : nlohmann::json()},
                     {"tolerances", r.tolerances},
                     {"results", r.results},
                     {"wall_time_ms", r.wall_time_ms},
                     {"notes", r.notes}};
}

std::string to_csv(const RunReport& r) {
  std::ostringstream os;
  os << "kind,id,index,value,tol,passed\n";
  for (const auto& res : r.results) {
    const std::string type = res.value("type", "");
    const std::string id = res.value("id", "");
    const bool passed = res.value("passed", false);
    const std::string tol = res.contains("tol") ? num(res["tol"]) : "";
    if (type == "identity") {
      const auto& rs = res["residuals"];
      for (std::size_t i = 0; i < rs.size(); ++i)
        os << type << ',' << id << ',' << i << ',' << num(rs[i]) << ',' << tol << ',' << passed << '\n';
    } else if (type == "theorem") {
      os << type << ',' << id << ",0," << num(res["hypothesis_margin"]) << ",," << passed << '\n';
    } else if (type == "divergence") {
      os << type << ',' << id << ",0," << num(res["residual"]) << ',' << tol << ',' << passed << '\n';
    } else if (type == "growth") {
      os << type << ',' << id << ",0," << num(res["fitted_exponent"]) << ",," << passed << '\n';
    } else {
      os << type << ',' << id << ",0,,," << passed << '\n';
    }
  }
  return os.str();
}

std::string to_text(const RunReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << r.command << "\n";
  for (const auto& res : r.results) {
    const std::string type = res.value("type", "");
    os << (res.value("passed", false) ? "  ok   " : "  FAIL ") << res.value("id", type);
    if (type == "identity") {
      os << "  max " << num(res["max_residual"], 6) << " tol " << num(res["tol"], 6);
      if (res.contains("metrics") && res["metrics"].contains("max_ratio"))
        os << "  ratio " << num(res["metrics"]["max_ratio"], 6) << " bound " << num(res["metrics"]["bound"], 6);
    } else if (type == "theorem") {
      os << "  hypothesis " << (res["hypothesis_holds"].get<bool>() ? "holds" : "fails") << " margin "
         << num(res["hypothesis_margin"], 6);
      if (!res["conclusion_verified"].is_null())
        os << "  conclusion " << (res["conclusion_verified"].get<bool>() ? "verified" : "NOT verified");
      if (!res["classification"].get<std::string>().empty()) os << "  [" << res["classification"].get<std::string>() << "]";
    } else if (type == "divergence") {
      os << "  residual " << num(res["residual"], 6) << " tol " << num(res["tol"], 6);
    } else if (type == "growth") {
      os << "  exponent " << num(res["fitted_exponent"], 6) << " bound " << num(res["bound_exponent"], 6);
    } else if (res.contains("message")) {
      os << "  " << res["message"].get<std::string>();
    }
    os << "\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace lsub
