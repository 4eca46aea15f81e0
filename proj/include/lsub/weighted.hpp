#pragma once

// Gaussian-density quantities. Every integral uses the unnormalized weight
// exp(-|X|^2 / 2).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsub/catalog.hpp"
#include "lsub/geometry.hpp"

namespace lsub {

/// H + X^perp.
Eigen::VectorXd weighted_mean_curvature(const ShapeData& sd);

/// Delta u - <X, grad u> with chart-level finite differences.
double drift_laplacian(const ImmersionChart& chart, const ChartPoint& u, const ChartScalarFn& field);

inline constexpr double kLambdaTol = 1e-8;

struct LambdaProfile {
  double mean_lambda = 0.0;
  double max_dev = 0.0;
  double min_lambda = 0.0;
  double max_lambda = 0.0;
  int n_samples = 0;
  bool is_lambda = false;
};

/// |H_f| on Halton points of the admissible box.
LambdaProfile lambda_profile(const CatalogSurface& surface, int n_samples = 256);

/// Polynomial ambient fields admitted by the divergence check.
struct AmbientField {
  enum class Kind { coordinate, half_norm2, half_coord2 };
  Kind kind = Kind::coordinate;
  int index = 0;

  std::string label() const;
  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> g) const;
  // Ambient Hessian is diagonal for every admitted field.
  double hessian_diag(int a) const;

  static AmbientField coordinate(int i) { return {Kind::coordinate, i}; }
  static AmbientField half_norm2() { return {Kind::half_norm2, 0}; }
  static AmbientField half_coord2(int i) { return {Kind::half_coord2, i}; }
};

/// Every admitted field for ambient dimension N: x_i, |X|^2/2, x_i^2/2.
std::vector<AmbientField> admissible_fields(int N);

/// Exact Delta and drift Laplacian of ambient fields via the chain rule on the jet.
FieldLaplacians ambient_field_laplacians(const Jet3& jet, const MetricData& md,
                                         std::span<const AmbientField> fields);

struct QuadSpec {
  // Node counts per parameter kind; 0 picks the automatic resolution.
  int periodic_nodes = 0;
  int bounded_nodes = 0;
  int line_nodes = 0;
  std::optional<double> truncation_radius;  // line parameters; automatic when empty
  double rel_tol = 1e-6;
};

struct QuadRuleInfo {
  int periodic_nodes = 0;
  int bounded_nodes = 0;
  int line_nodes = 0;
  int total_nodes = 0;
  std::string description;
};

struct WeightedIntegral {
  double value = 0.0;
  double est_error = 0.0;
  double abs_value = 0.0;  // integral of |integrand| times the weight
  std::optional<double> truncation_radius;
  QuadRuleInfo rule;
};

/// Integrand at a node: chart point, its jet and metric; writes m values.
using NodeIntegrand =
    std::function<void(std::span<const double> u, const Jet3& jet, const MetricData& md, std::span<double> out)>;

/// Tensor quadrature of exp(-|X|^2/2) * integrand over the chart: periodic
/// trapezoid, Gauss-Legendre on bounded parameters and on line parameters
/// truncated to [-R, R]. The estimate compares against the half-resolution
/// rule and adds a rounding floor and the tail bound.
std::vector<WeightedIntegral> weighted_integrals(const CatalogSurface& surface, const NodeIntegrand& integrand,
                                                 int m, const QuadSpec& spec = {});

WeightedIntegral weighted_integral(const CatalogSurface& surface,
                                   const std::function<double(std::span<const double> u, const Jet3& jet)>& integrand,
                                   const QuadSpec& spec = {});

/// Tail target for the truncation radius.
inline constexpr double kTailTarget = 1e-12;

/// Solves C exp(-R^2/2) R^(d+n) = kTailTarget by bisection, with d the growth
/// bound exponent and C from a coarse area fit at radii 2, 4, 8, 16.
double truncation_radius(const CatalogSurface& surface);

struct DivergenceResidual {
  AmbientField field;
  double residual = 0.0;  // |int w Delta_f u| / int w
  double est_error = 0.0;
};

/// Normalized residual of int exp(-|X|^2/2) Delta_f u dV = 0 for each field.
std::vector<DivergenceResidual> divergence_residuals(const CatalogSurface& surface,
                                                     std::span<const AmbientField> fields,
                                                     const QuadSpec& spec = {});
double divergence_residual(const CatalogSurface& surface, const AmbientField& field, const QuadSpec& spec = {});

struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> areas;
  double fitted_exponent = 0.0;
  double bound_exponent = 0.0;
  double beta = 0.0;
  double inf_H2 = 0.0;
  double lambda = 0.0;
  bool passes = false;
};

inline constexpr double kGrowthSlack = 0.05;

/// Unweighted Area(B_r and Sigma) by quadrature; line parameters must be
/// ambient coordinates of the immersion (true for every catalog family).
double area_in_ball(const CatalogSurface& surface, double r);

GrowthReport growth_report(const CatalogSurface& surface, const std::vector<double>& radii = {8, 16, 32, 64});

/// Exponent n + lambda^2/2 - 2 beta - inf H^2 / 2 from sampled data.
struct GrowthBound {
  double bound_exponent = 0.0;
  double beta = 0.0;
  double inf_H2 = 0.0;
  double lambda = 0.0;
};
GrowthBound growth_bound(const CatalogSurface& surface, int n_samples = 256);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace lsub
