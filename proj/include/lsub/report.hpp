#pragma once

// JSON views of every result type. Field names are a stable contract.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsub/catalog.hpp"
#include "lsub/identities.hpp"
#include "lsub/theorems.hpp"
#include "lsub/weighted.hpp"

namespace lsub {

void to_json(nlohmann::json& j, const IdentityReport& r);
void to_json(nlohmann::json& j, const TheoremVerdict& v);
void to_json(nlohmann::json& j, const GrowthReport& g);
void to_json(nlohmann::json& j, const LambdaProfile& lp);
void to_json(nlohmann::json& j, const Expectations& e);
void to_json(nlohmann::json& j, const DivergenceResidual& d);

struct RunReport {
  std::string tool_version;
  std::string command;
  std::optional<std::uint64_t> seed;
  std::optional<FamilySpec> family;
  std::map<std::string, double> tolerances;
  nlohmann::json results = nlohmann::json::array();
  std::int64_t wall_time_ms = 0;
  std::vector<std::string> notes;
};

void to_json(nlohmann::json& j, const RunReport& r);

/// One row per residual or verdict: kind,id,index,value,tol,passed.
std::string to_csv(const RunReport& r);

/// Short human summary, one line per result.
std::string to_text(const RunReport& r);

}  // namespace lsub
