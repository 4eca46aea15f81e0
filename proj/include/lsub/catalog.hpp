#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsub/chart.hpp"

namespace lsub {

enum class FamilyKind {
  plane,
  centered_sphere,
  offset_sphere,
  cylinder,
  product,
  cmc_in_sphere,
  tilted_offset_sphere,
  off_axis_cylinder,
  remark_sphere_G6,
};

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);  // throws InvalidFamilyParams
std::vector<FamilyKind> all_family_kinds();
bool is_non_example(FamilyKind kind);

struct FamilySpec {
  FamilyKind kind = FamilyKind::plane;
  std::map<std::string, double> params;

  double get(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::string label() const;
};

void to_json(nlohmann::json& j, const FamilySpec& spec);
void from_json(const nlohmann::json& j, FamilySpec& spec);

struct Expectations {
  std::optional<double> lambda;  // none for non-examples
  double A2 = 0.0;
  double H_norm = 0.0;
  bool compact = false;
  std::optional<double> growth_exponent;
  bool graph = false;
  // Radius of the spherical factor, when there is one.
  std::optional<double> radius;
};

struct CatalogSurface {
  ImmersionChart chart;
  FamilySpec spec;
  Expectations expected;

  int n() const { return chart.intrinsic_dim(); }
  int p() const { return chart.codim(); }
  int N() const { return chart.ambient_dim(); }
};

/// Line parameters are sampled in [-kLineWindow, kLineWindow].
inline constexpr double kLineWindow = 4.0;
/// Pole margin for polar angles.
inline constexpr double kPoleMargin = 1e-2;

/// Fills missing parameters with the family defaults and validates them.
FamilySpec with_defaults(FamilySpec spec);

double expected_lambda(const FamilySpec& spec);
CatalogSurface instantiate(const FamilySpec& spec);
CatalogSurface non_example(const FamilySpec& spec);

/// Inner and outer sphere radii (-lambda +- sqrt(lambda^2 + 4n)) / 2 with sign s = -1 or +1.
double sphere_radius_for_lambda(double lambda, int n, int sign);

/// The lambda-families exercised by the verification suites.
std::vector<FamilySpec> standard_families();
/// The declared non-examples at their default parameters.
std::vector<FamilySpec> standard_non_examples();

}  // namespace lsub
