#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lsub/catalog.hpp"
#include "lsub/errors.hpp"
#include "lsub/sampling.hpp"
#include "lsub/weighted.hpp"

using namespace lsub;

namespace {

const double kPi = std::numbers::pi;
const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

CatalogSurface sphere(int n, double r) { return instantiate({FamilyKind::centered_sphere, {{"n", n}, {"r", r}}}); }
CatalogSurface cylinder(double r) { return instantiate({FamilyKind::cylinder, {{"n", 2}, {"k", 1}, {"r", r}}}); }
CatalogSurface plane(int n, int p, double h) { return instantiate({FamilyKind::plane, {{"n", n}, {"p", p}, {"h", h}}}); }

}  // namespace

TEST(WeightedMeanCurvature, Examples) {
  const auto pl = plane(2, 1, 0.7);
  const auto hf = weighted_mean_curvature(point_geometry(pl.chart, ChartPoint{{1.0, -2.0}}).shape);
  EXPECT_NEAR((hf - Eigen::Vector3d(0, 0, 0.7)).norm(), 0.0, 1e-15);

  const auto shrinker = sphere(2, std::sqrt(2.0));
  for (const auto& pt : random_admissible_points(shrinker.chart, 20, 1)) {
    EXPECT_LE(weighted_mean_curvature(point_geometry(shrinker.chart, pt).shape).norm(), 1e-10);
  }
  const auto g6 = instantiate({FamilyKind::remark_sphere_G6, {}});
  for (const auto& pt : random_admissible_points(g6.chart, 20, 1)) {
    EXPECT_NEAR(weighted_mean_curvature(point_geometry(g6.chart, pt).shape).norm(), 3.0, 1e-10);
  }
}

TEST(DriftLaplacian, PlaneCoordinate) {
  const auto pl = plane(2, 1, 1.0);
  const ChartPoint u{{0.3, 0.4}};
  const double v = drift_laplacian(pl.chart, u, [&](std::span<const double> w) { return pl.chart.position(w)[2]; });
  EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(DriftLaplacian, SphereCoordinateAndHalfNorm) {
  const auto s = sphere(2, 2.0);
  for (const auto& pt : random_admissible_points(s.chart, 20, 42)) {
    const auto x = s.chart.position(pt.coords);
    const double d3 = drift_laplacian(s.chart, pt, [&](std::span<const double> w) { return s.chart.position(w)[2]; });
    EXPECT_NEAR(d3, -x[2] + 0.5 * x[2], 1e-6);
    const double dn = drift_laplacian(s.chart, pt, [&](std::span<const double> w) {
      const auto y = s.chart.position(w);
      return 0.5 * (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    });
    EXPECT_NEAR(dn, 0.0, 1e-6);
  }
}

TEST(AmbientFieldLaplacians, AgreeWithChartFiniteDifferences) {
  for (const auto& spec : standard_families()) {
    const auto s = instantiate(spec);
    const auto fields = admissible_fields(s.N());
    const ChartVectorFn f = [&](std::span<const double> u, std::span<double> out) {
      const auto x = s.chart.position(u);
      for (std::size_t c = 0; c < fields.size(); ++c) out[c] = fields[c].value(x);
    };
    for (const auto& pt : random_admissible_points(s.chart, 5, 17)) {
      const auto jet = eval_jet(s.chart, pt);
      const auto exact = ambient_field_laplacians(jet, metric(jet), fields);
      const auto fd = chart_laplacians(s.chart, pt, f, static_cast<int>(fields.size()));
      for (std::size_t c = 0; c < fields.size(); ++c) {
        EXPECT_NEAR(exact.laplacian[c], fd.laplacian[c], 1e-6) << spec.label() << " " << fields[c].label();
        EXPECT_NEAR(exact.drift[c], fd.drift[c], 1e-6) << spec.label() << " " << fields[c].label();
      }
    }
  }
}

TEST(LambdaProfile, CatalogFamiliesAreLambdaSurfaces) {
  for (const auto& spec : standard_families()) {
    const auto s = instantiate(spec);
    const auto prof = lambda_profile(s);
    EXPECT_TRUE(prof.is_lambda) << spec.label();
    EXPECT_NEAR(prof.mean_lambda, *s.expected.lambda, 1e-8 * (1.0 + *s.expected.lambda)) << spec.label();
  }
}

TEST(LambdaProfile, GoldenCylinder) {
  const auto prof = lambda_profile(cylinder(kGolden));
  EXPECT_NEAR(prof.mean_lambda, 1.0, 1e-10);
  EXPECT_TRUE(prof.is_lambda);
}

TEST(LambdaProfile, NonExamplesAreDetected) {
  for (const auto& spec : standard_non_examples()) {
    const auto prof = lambda_profile(non_example(spec));
    EXPECT_FALSE(prof.is_lambda) << spec.label();
    EXPECT_GT(prof.max_dev, 1e-2) << spec.label();
  }
  const auto untilted = non_example({FamilyKind::tilted_offset_sphere, {{"tilt", 0.0}}});
  EXPECT_TRUE(lambda_profile(untilted).is_lambda);
  ASSERT_TRUE(untilted.expected.lambda);
  EXPECT_NEAR(lambda_profile(untilted).mean_lambda, *untilted.expected.lambda, 1e-10);
}

TEST(LambdaProfile, NeedsTwentySamples) {
  EXPECT_THROW(lambda_profile(sphere(2, 2.0), 10), std::invalid_argument);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  std::vector<double> x, w;
  gauss_legendre(7, x, w);
  double s0 = 0, s12 = 0;
  for (int i = 0; i < 7; ++i) {
    s0 += w[i];
    s12 += w[i] * std::pow(x[i], 12);
  }
  EXPECT_NEAR(s0, 2.0, 1e-15);
  EXPECT_NEAR(s12, 2.0 / 13.0, 1e-15);
  EXPECT_TRUE(std::is_sorted(x.begin(), x.end()));
}

TEST(WeightedIntegral, ClosedFormAreas) {
  auto one = [](std::span<const double>, const Jet3&) { return 1.0; };
  const auto c1 = weighted_integral(sphere(1, 1.0), one);
  EXPECT_NEAR(c1.value, 2.0 * kPi * std::exp(-0.5), 1e-10);
  EXPECT_FALSE(c1.truncation_radius);

  const auto s2 = weighted_integral(sphere(2, 2.0), one);
  EXPECT_NEAR(s2.value, 16.0 * kPi * std::exp(-2.0), 1e-9);

  const auto cyl = weighted_integral(cylinder(1.0), one);
  ASSERT_TRUE(cyl.truncation_radius);
  EXPECT_GT(*cyl.truncation_radius, 6.0);
  EXPECT_NEAR(cyl.value, 2.0 * kPi * std::exp(-0.5) * std::sqrt(2.0 * kPi), 1e-8);
  EXPECT_GE(cyl.est_error, 0.0);
}

TEST(WeightedIntegral, DoublingResolutionStaysWithinEstimate) {
  auto f = [](std::span<const double>, const Jet3& jet) { return jet.x(0) * jet.x(0) + jet.x(1); };
  for (const auto& s : {sphere(2, 2.0), cylinder(kGolden), instantiate({FamilyKind::cmc_in_sphere, {}})}) {
    const auto base = weighted_integral(s, f);
    QuadSpec dbl;
    dbl.periodic_nodes = 2 * base.rule.periodic_nodes;
    dbl.bounded_nodes = 2 * base.rule.bounded_nodes;
    dbl.line_nodes = 2 * base.rule.line_nodes;
    dbl.truncation_radius = base.truncation_radius;
    const auto finer = weighted_integral(s, f, dbl);
    EXPECT_LE(std::abs(finer.value - base.value), base.est_error) << s.spec.label();
  }
}

TEST(WeightedIntegral, UnderResolvedRuleIsRejected) {
  QuadSpec crude;
  crude.periodic_nodes = 4;
  crude.bounded_nodes = 4;
  auto f = [](std::span<const double>, const Jet3& jet) { return std::pow(jet.x(0), 6); };
  EXPECT_THROW(weighted_integral(sphere(2, 2.0), f, crude), QuadratureNotConverged);
}

TEST(DivergenceResidual, Examples) {
  EXPECT_LE(divergence_residual(sphere(1, 1.0), AmbientField::coordinate(0)), 1e-10);
  EXPECT_LE(divergence_residual(sphere(2, 2.0), AmbientField::half_norm2()), 1e-8);
  EXPECT_LE(divergence_residual(cylinder(kGolden), AmbientField::half_coord2(0)), 1e-6);
}

TEST(DivergenceResidual, EveryFamilyAndField) {
  for (const auto& spec : standard_families()) {
    const auto s = instantiate(spec);
    const auto fields = admissible_fields(s.N());
    for (const auto& r : divergence_residuals(s, fields)) {
      EXPECT_LE(r.residual, 1e-6) << spec.label() << " " << r.field.label();
    }
  }
}

TEST(Growth, PlaneThroughOrigin) {
  const auto rep = growth_report(plane(2, 1, 0.0));
  EXPECT_NEAR(rep.fitted_exponent, 2.0, 0.02);
  EXPECT_NEAR(rep.bound_exponent, 2.0, 1e-12);
  EXPECT_TRUE(rep.passes);
  EXPECT_NEAR(rep.areas[0], kPi * 64.0, 1e-6);
}

TEST(Growth, CylinderSaturatesTheBound) {
  const auto rep = growth_report(cylinder(1.0));
  EXPECT_NEAR(rep.fitted_exponent, 1.0, 0.02);
  EXPECT_NEAR(rep.beta, 0.25, 1e-12);
  EXPECT_NEAR(rep.inf_H2, 1.0, 1e-12);
  EXPECT_NEAR(rep.bound_exponent, 1.0, 1e-10);
  EXPECT_TRUE(rep.passes);
  EXPECT_NEAR(rep.areas[1], 2.0 * kPi * 2.0 * std::sqrt(255.0), 1e-6);
}

TEST(Growth, OffsetPlane) {
  const auto rep = growth_report(plane(2, 1, 1.0));
  EXPECT_NEAR(rep.bound_exponent, 2.0, 1e-12);
  EXPECT_NEAR(rep.fitted_exponent, 2.0, 0.02);
  EXPECT_TRUE(rep.passes);
  EXPECT_NEAR(rep.areas[0], kPi * 63.0, 1e-6);
}

TEST(Growth, AllNonCompactFamiliesPass) {
  for (const auto& spec : standard_families()) {
    const auto s = instantiate(spec);
    if (s.chart.compact()) continue;
    const auto rep = growth_report(s);
    EXPECT_TRUE(rep.passes) << spec.label() << " fitted " << rep.fitted_exponent << " bound " << rep.bound_exponent;
    ASSERT_TRUE(s.expected.growth_exponent);
    EXPECT_NEAR(rep.fitted_exponent, *s.expected.growth_exponent, 0.05) << spec.label();
  }
}

TEST(Growth, Preconditions) {
  EXPECT_THROW(growth_report(sphere(2, 2.0)), std::invalid_argument);
  EXPECT_THROW(growth_report(plane(2, 1, 0.0), {8, 16, 32}), std::invalid_argument);
  EXPECT_THROW(growth_report(plane(2, 1, 0.0), {8, 16, 16, 32}), std::invalid_argument);
}
