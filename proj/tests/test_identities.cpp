#include <cmath>

#include <gtest/gtest.h>

#include "lsub/catalog.hpp"
#include "lsub/errors.hpp"
#include "lsub/identities.hpp"
#include "lsub/sampling.hpp"
#include "lsub/weighted.hpp"

using namespace lsub;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

CatalogSurface sphere(double r) { return instantiate({FamilyKind::centered_sphere, {{"n", 2}, {"r", r}}}); }
CatalogSurface golden_cylinder() { return instantiate({FamilyKind::cylinder, {{"r", kGolden}}}); }

std::vector<ChartPoint> pts(const CatalogSurface& s, int count = 20) {
  return random_admissible_points(s.chart, count, kDefaultSeed);
}

const IdentityReport& find(const std::vector<IdentityReport>& reps, const std::string& id) {
  for (const auto& r : reps)
    if (r.identity_id == id) return r;
  throw std::runtime_error("missing report " + id);
}

}  // namespace

TEST(IdentityReport, FinalizeTracksWorst) {
  IdentityReport r;
  r.tol = 1.0;
  r.residuals = {0.1, 0.7, 0.3};
  finalize(r);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.worst, 1);
  r.residuals.push_back(std::nan(""));
  finalize(r);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.worst, 3);
}

TEST(CoordinateIdentities, PlaneIsExact) {
  // Linear fields difference exactly; quadratic ones keep a rounding floor of
  // order eps |X|^2 / h^2 over the sampling window.
  const auto s = instantiate({FamilyKind::plane, {{"h", 1.0}}});
  const auto reps = coordinate_identities(s, pts(s));
  ASSERT_EQ(reps.size(), 6u);
  for (const auto& r : reps) {
    EXPECT_TRUE(r.passed) << r.identity_id;
    const bool linear = r.identity_id == "coord.laplacian_x" || r.identity_id == "coord.drift_x";
    EXPECT_LE(r.max_residual(), linear ? 1e-10 : 1e-9) << r.identity_id;
  }
}

TEST(CoordinateIdentities, SphereAndGoldenCylinder) {
  for (const auto& s : {sphere(2.0), golden_cylinder()}) {
    for (const auto& r : coordinate_identities(s, pts(s))) {
      EXPECT_EQ(r.residuals.size(), 20u);
      EXPECT_LE(r.max_residual(), 1e-6) << s.spec.label() << " " << r.identity_id;
    }
  }
}

TEST(CoordinateIdentities, PrintedVariantsFail) {
  // Delta x_i = -x_i |e_i^perp|^2 + lambda_i and Delta_f x_i^2/2 = ... - x_i^2/2
  // are off by terms that do not vanish on these surfaces.
  const auto s = sphere(2.0);
  const ChartPoint u{{0.7, 0.4}};
  const auto pg = point_geometry(s.chart, u);
  const auto& sd = pg.shape;
  const double x3 = sd.X(2);
  const double eperp2 = 1.0 - pg.frame.tangent.col(2).squaredNorm();
  const double lap = chart_laplacian(s.chart, u, [&](std::span<const double> w) { return s.chart.position(w)[2]; });
  EXPECT_GT(std::abs(lap - (-x3 * eperp2 + sd.lambda_coord(2))), 0.1);

  const auto pl = instantiate({FamilyKind::plane, {{"h", 1.0}}});
  const ChartPoint v{{0.3, -0.2}};
  const double d = drift_laplacian(pl.chart, v, [&](std::span<const double> w) {
    const double x = pl.chart.position(w)[2];
    return 0.5 * x * x;
  });
  EXPECT_NEAR(d, 1.0 * 1.0 - 1.0, 1e-10);  // |e_3^T|^2 + lambda x_3 - x_3^2
  EXPECT_GT(std::abs(d - (0.0 + 1.0 - 0.5)), 0.4);
}

TEST(CoordinateIdentities, RejectsNonExamples) {
  const auto s = non_example({FamilyKind::off_axis_cylinder, {}});
  EXPECT_THROW(coordinate_identities(s, pts(s)), NotALambdaSurface);
  EXPECT_THROW(all_identities(s, pts(s)), NotALambdaSurface);
}

TEST(LambdaStructure, SphereNormalComponent) {
  const auto s = sphere(2.0);
  const auto reps = lambda_structure(s, pts(s));
  EXPECT_LE(find(reps, "lambda.normal_components").max_residual(), 1e-10);
  const auto pg = point_geometry(s.chart, pts(s)[0]);
  EXPECT_NEAR(pg.shape.H_alpha(0), -1.0, 1e-12);
  EXPECT_NEAR(pg.frame.normal.row(0).dot(pg.shape.X), 2.0, 1e-12);
}

TEST(LambdaStructure, HomogeneousFamiliesHaveVanishingGradient) {
  for (const auto& s : {sphere(2.0), golden_cylinder(), instantiate({FamilyKind::cmc_in_sphere, {}})}) {
    const auto reps = lambda_structure(s, pts(s));
    const auto& r = find(reps, "lambda.grad_H");
    EXPECT_LE(r.max_residual(), 1e-8) << s.spec.label();
    EXPECT_LE(r.metrics.at("max_abs_side"), 1e-8) << s.spec.label();
  }
}

TEST(LambdaStructure, SelfShrinkerPlane) {
  const auto s = instantiate({FamilyKind::plane, {{"h", 0.0}}});
  for (const auto& r : lambda_structure(s, pts(s))) EXPECT_LE(r.max_residual(), 1e-10) << r.identity_id;
}

TEST(SimonsH2, SphereAndGoldenCylinder) {
  for (const auto& s : {sphere(2.0), golden_cylinder()}) {
    for (const auto& r : simons_H2(s, pts(s))) {
      EXPECT_TRUE(r.passed) << s.spec.label() << " " << r.identity_id << " " << r.max_residual();
    }
  }
  const auto s = sphere(2.0);
  EXPECT_LE(find(simons_H2(s, pts(s)), "simons.drift_H2").max_residual(), 1e-6);
}

TEST(SimonsA2, SphereClosedForm) {
  // S^2(2): |A|^2 = 1/2, sum S^2 = 1/4, <H_f, A_ik><A_jk, A_ij> = lambda_3 tr(A^3) = 1 * (-1/8) = -1/4.
  const auto s = sphere(2.0);
  const auto pg = point_geometry(s.chart, ChartPoint{{1.0, 2.0}});
  const auto na = covariant_shape_derivative(pg);
  EXPECT_NEAR(pg.shape.A2, 0.5, 1e-12);
  EXPECT_NEAR(pg.shape.S.squaredNorm(), 0.25, 1e-12);
  EXPECT_NEAR(hf_cubic_term(2, 1, pg.shape.h, pg.shape.lambda_alpha), -0.25, 1e-12);
  EXPECT_NEAR(drift_A2_rhs(pg.shape, na), 0.0, 1e-10);
  for (const auto& r : simons_A2(s, pts(s))) EXPECT_LE(r.max_residual(), 1e-5) << r.identity_id;
}

TEST(SimonsA2, GeneralIdentityOnRandomGraph) {
  // The unweighted identity holds on any submanifold when H_{,ij} is taken
  // by differentiating H directly.
  ParamSpec a{"u", ParamKind::line, -1.0, 1.0}, b{"v", ParamKind::line, -1.0, 1.0};
  const ImmersionChart chart(4, {a, b}, make_chart_function([](auto u, auto x) {
                               x[0] = u[0];
                               x[1] = u[1];
                               x[2] = u[0] * u[0] * u[1] + u[1] * u[1] * u[1];
                               x[3] = u[0] * u[1];
                             }));
  for (const auto& pt : random_admissible_points(chart, 10, 5)) {
    const auto pg = point_geometry(chart, pt);
    const auto na = covariant_shape_derivative(pg);
    const auto Hij = hessian_H_fd(pg, mean_curvature_derivatives(chart, pt));
    const double lhs = chart_laplacian(chart, pt, [&](std::span<const double> w) {
      const Jet3 jet = eval_jet(chart, ChartPoint{{w.begin(), w.end()}});
      return squared_norm_A(jet, metric(jet));
    });
    const double rhs = laplacian_A2_rhs(pg.shape, na, Hij);
    EXPECT_NEAR(lhs, rhs, 1e-5 * (1.0 + std::abs(lhs)));
    EXPECT_GT(std::abs(lhs), 1e-2);
  }
}

TEST(Identities, EveryCatalogFamilyPasses) {
  for (const auto& spec : standard_families()) {
    const auto s = instantiate(spec);
    const auto reps = all_identities(s, pts(s));
    EXPECT_EQ(reps.size(), 13u);
    for (const auto& r : reps) {
      EXPECT_TRUE(r.passed) << spec.label() << " " << r.identity_id << " max " << r.max_residual();
      EXPECT_EQ(r.residuals.size(), 20u);
    }
  }
}

TEST(ShapeInequalities, CodimensionOneIsEquality) {
  const auto s = golden_cylinder();
  const auto pg = point_geometry(s.chart, ChartPoint{{0.3, 1.0}});
  const auto reps = shape_inequalities(pg.shape, nullptr);
  ASSERT_EQ(reps.size(), 2u);
  EXPECT_EQ(reps[1].identity_id, "ineq.simons_li");
  EXPECT_NEAR(reps[1].metrics.at("slack"), 0.0, 1e-14);
  for (const auto& r : reps) EXPECT_TRUE(r.passed);
}

TEST(ShapeInequalities, ZeroTensor) {
  const auto s = instantiate({FamilyKind::plane, {{"p", 2}, {"h", 0.5}}});
  const auto pg = point_geometry(s.chart, ChartPoint{{0.3, 1.0}});
  for (const auto& r : shape_inequalities(pg.shape, nullptr)) {
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.metrics.at("slack"), 0.0);
  }
}

TEST(ShapeInequalities, SphereSaturatesCubicBound) {
  // H_f and the rank-one h are aligned, but tr(A^3) < 0, so the signed cubic
  // term sits at -lambda |A|^3.
  const auto s = sphere(2.0);
  const auto pg = point_geometry(s.chart, ChartPoint{{1.0, 2.0}});
  const auto reps = shape_inequalities(pg.shape, nullptr);
  const double A3 = std::pow(0.5, 1.5);
  EXPECT_NEAR(reps[0].metrics.at("slack"), A3 + 0.25, 1e-12);
}

TEST(ShapeInequalities, SimonsTypeOnConstantNormFamilies) {
  for (const auto& spec : standard_families()) {
    const auto s = instantiate(spec);
    const auto reps = shape_inequalities(s, pts(s));
    for (const auto& r : reps) EXPECT_TRUE(r.passed) << spec.label() << " " << r.identity_id;
    const auto& st = find(reps, "ineq.simons_type");
    // Delta_f |A|^2 = 0 on these families, so the right side itself is <= 0.
    EXPECT_GE(st.metrics.at("min_slack"), -1e-6) << spec.label();
  }
}

TEST(Fuzz, CodimensionOneRatioIsExactlyOne) {
  for (std::uint64_t seed : {1u, 42u, 777u}) {
    const auto reps = fuzz_tensor_inequality(3, 1, 2000, seed);
    EXPECT_EQ(reps[0].identity_id, "fuzz.simons_li");
    EXPECT_EQ(reps[0].metrics.at("max_ratio"), 1.0);
    EXPECT_TRUE(reps[0].passed);
  }
}

TEST(Fuzz, LiLiBoundHolds) {
  const auto reps = fuzz_tensor_inequality(3, 2, 100000, 42);
  ASSERT_EQ(reps.size(), 3u);
  EXPECT_EQ(reps[1].identity_id, "fuzz.li_li");
  EXPECT_LE(reps[1].metrics.at("max_ratio"), 1.5);
  for (const auto& r : reps) EXPECT_TRUE(r.passed) << r.identity_id;

  const auto r23 = fuzz_tensor_inequality(2, 3, 100000, 7);
  EXPECT_LE(r23[1].metrics.at("max_ratio"), 1.5);
  EXPECT_LE(r23[0].metrics.at("max_ratio"), 2.0 - 1.0 / 3.0);
}

TEST(Fuzz, WitnessIsReproducible) {
  const auto reps = fuzz_tensor_inequality(2, 2, 5000, 99);
  const auto k = static_cast<std::uint64_t>(reps[0].metrics.at("argmax"));
  const auto s = random_tensor_sample(2, 2, 99, k);
  EXPECT_EQ(s.h, reps[0].witness);
  const auto t = tensor_invariants(2, 2, s.h);
  EXPECT_EQ((t.comm2 + t.S2) / (t.A2 * t.A2), reps[0].metrics.at("max_ratio"));
  for (int al = 0; al < 2; ++al)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_EQ(s.hij(al, i, j), s.hij(al, j, i));
}

TEST(Fuzz, Preconditions) {
  EXPECT_THROW(fuzz_tensor_inequality(0, 1, 10, 1), std::invalid_argument);
  EXPECT_THROW(fuzz_tensor_inequality(2, 1, 0, 1), std::invalid_argument);
}
