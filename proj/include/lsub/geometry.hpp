#pragma once

// Induced metric, adapted frames and the second fundamental form of a chart
// immersion, plus chart-level Laplacians of scalar fields.
//
// Sign convention: A_ij = (D_{e_i} e_j)^perp, h^a_ij = <A_ij, e_a>, so a
// centered sphere of radius r with outward normal has H = -n/r.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lsub/chart.hpp"
#include "lsub/finite_difference.hpp"

namespace lsub {

struct MetricData {
  int n = 0;
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  double sqrt_det = 0.0;
  std::vector<double> christoffel;  // Gamma^k_ij at (k*n + i)*n + j

  double gamma(int k, int i, int j) const { return christoffel[(k * n + i) * n + j]; }
};

MetricData metric(const Jet3& jet);

struct FrameData {
  Eigen::MatrixXd tangent;         // n x N, row i is e_i
  Eigen::MatrixXd tangent_coeffs;  // n x n, e_i = sum_a E(i,a) dX/du_a
  Eigen::MatrixXd normal;          // p x N, row alpha is e_{n+alpha}
  bool hf_aligned = false;         // last normal row is H_f / |H_f|
  std::vector<int> pivots;         // ambient axes that seeded the other normals
};

/// Gram-Schmidt tangents in chart order; normals seeded by the candidate (when
/// its norm exceeds 1e-10) and then by ambient axes with the largest residual.
FrameData frames(const Jet3& jet, const MetricData& md,
                 const std::optional<Eigen::VectorXd>& hf_candidate);

struct ShapeData {
  int n = 0;
  int p = 0;
  int N = 0;
  std::vector<double> h;  // h^alpha_ij at (alpha*n + i)*n + j
  Eigen::VectorXd H_alpha;
  Eigen::VectorXd H_vec;
  Eigen::VectorXd Hf_vec;
  Eigen::VectorXd lambda_alpha;
  Eigen::VectorXd lambda_coord;
  double A2 = 0.0;
  Eigen::MatrixXd S;
  double comm2 = 0.0;
  Eigen::VectorXd X;
  Eigen::VectorXd X_perp;
  Eigen::VectorXd X_tan;

  double hij(int alpha, int i, int j) const { return h[(alpha * n + i) * n + j]; }
  double lambda() const { return Hf_vec.norm(); }
};

ShapeData shape(const Jet3& jet, const MetricData& md, const FrameData& fd);

/// Everything computed at one chart point.
struct PointGeometry {
  Jet3 jet;
  MetricData metric;
  FrameData frame;
  ShapeData shape;
};

PointGeometry point_geometry(const ImmersionChart& chart, const ChartPoint& u,
                             JetMode mode = JetMode::exact);

struct NablaA {
  int n = 0;
  int p = 0;
  std::vector<double> h1;  // h^alpha_ijk at ((alpha*n + i)*n + j)*n + k
  double nablaA2 = 0.0;
  double nablaH2 = 0.0;
  Eigen::MatrixXd H_alpha_k;  // p x n

  double at(int alpha, int i, int j, int k) const { return h1[((alpha * n + i) * n + j) * n + k]; }
};

NablaA covariant_shape_derivative(const ImmersionChart& chart, const ChartPoint& u);
NablaA covariant_shape_derivative(const PointGeometry& pg);

/// Frame-free normal projection v - g^{ab}<v, X_a> X_b.
Eigen::VectorXd normal_part(const Jet3& jet, const MetricData& md, const Eigen::VectorXd& v);

/// Frame-free mean curvature vector g^{ab} (X_ab)^perp.
Eigen::VectorXd mean_curvature_vector(const Jet3& jet, const MetricData& md);

struct FieldLaplacians {
  std::vector<double> laplacian;
  std::vector<double> drift;
};

/// Delta and drift Laplacian of m chart fields at u. Chart derivatives of the
/// fields come from central differences with Richardson extrapolation; the
/// metric comes from the exact jet.
FieldLaplacians chart_laplacians(const ImmersionChart& chart, const ChartPoint& u,
                                 const ChartVectorFn& fields, int m);

/// Same from precomputed chart derivatives of the fields.
FieldLaplacians laplacians_from_derivatives(const Jet3& jet, const MetricData& md, const FdFirstSecond& d);

using ChartScalarFn = std::function<double(std::span<const double>)>;

double chart_laplacian(const ImmersionChart& chart, const ChartPoint& u, const ChartScalarFn& field);

namespace detail {
PointGeometry point_geometry_unchecked(const ImmersionChart& chart, std::span<const double> u,
                                       JetMode mode = JetMode::exact);
}  // namespace detail

}  // namespace lsub
