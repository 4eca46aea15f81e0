#pragma once

// Pointwise identities of lambda-submanifolds and the algebraic tensor
// inequalities behind the gap theorems.
//
// Left sides use chart-level finite differences of frame-free fields (H, |H|^2,
// |A|^2, ambient polynomials); right sides are assembled from ShapeData and
// NablaA. The two paths share only the jet engine.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsub/catalog.hpp"
#include "lsub/geometry.hpp"

namespace lsub {

struct IdentityReport {
  std::string identity_id;
  std::vector<ChartPoint> points;
  std::vector<double> residuals;
  double tol = 0.0;
  bool passed = false;
  std::string notes;
  std::map<std::string, double> metrics;
  std::vector<double> witness;  // fuzz reports: the arg-max tensor sample
  int worst = -1;               // index of the largest residual

  double max_residual() const;
};

/// Sets `passed` and `worst` from the residuals.
void finalize(IdentityReport& report);

inline constexpr double kSecondOrderTol = 1e-6;
inline constexpr double kDerivedFieldTol = 1e-5;
inline constexpr double kInequalityTol = 1e-10;
inline constexpr int kDefaultIdentityPoints = 20;
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Profiles lambda and throws NotALambdaSurface when |H_f| is not constant.
double require_lambda_surface(const CatalogSurface& surface);

/// Lambda_alpha in the aligned frame: lambda on the last normal when the
/// frame is aligned with H_f, zero elsewhere.
Eigen::VectorXd aligned_lambda(const FrameData& frame, int p, double lambda);

/// The six coordinate identities:
///   coord.laplacian_x          Delta x_i = -<X, e_i^perp> + lambda_i
///   coord.drift_x              Delta_f x_i = -x_i + lambda_i
///   coord.laplacian_half_norm2 Delta |X|^2/2 = n + sum lambda_i x_i - |X^perp|^2
///   coord.drift_half_norm2     Delta_f |X|^2/2 = n + sum lambda_i x_i - |X|^2
///   coord.laplacian_half_x2    Delta x_i^2/2 = |e_i^T|^2 + lambda_i x_i - x_i <X, e_i^perp>
///   coord.drift_half_x2        Delta_f x_i^2/2 = |e_i^T|^2 + lambda_i x_i - x_i^2
/// Residuals are maxima over i.
std::vector<IdentityReport> coordinate_identities(const CatalogSurface& surface,
                                                  const std::vector<ChartPoint>& points);

/// lambda.normal_components, lambda.grad_H, lambda.hessian_H.
std::vector<IdentityReport> lambda_structure(const CatalogSurface& surface, const std::vector<ChartPoint>& points);

/// simons.laplacian_H2, simons.drift_H2.
std::vector<IdentityReport> simons_H2(const CatalogSurface& surface, const std::vector<ChartPoint>& points);

/// simons.laplacian_A2, simons.drift_A2.
std::vector<IdentityReport> simons_A2(const CatalogSurface& surface, const std::vector<ChartPoint>& points);

/// Every identity group above in one pass, in the order listed. `mode`
/// selects how the chart jets behind the right-hand sides are computed.
std::vector<IdentityReport> all_identities(const CatalogSurface& surface, const std::vector<ChartPoint>& points,
                                           JetMode mode = JetMode::exact);

// Assembly pieces, exposed for tests.

/// Chart derivatives of the frame-free mean curvature vector at u.
struct MeanCurvatureDerivatives {
  int n = 0;
  int N = 0;
  std::vector<Eigen::VectorXd> d1;  // n
  std::vector<Eigen::VectorXd> d2;  // n*n
};
MeanCurvatureDerivatives mean_curvature_derivatives(const ImmersionChart& chart, const ChartPoint& u);

/// Frame-free |A|^2 from a jet.
double squared_norm_A(const Jet3& jet, const MetricData& md);

/// H^alpha_{,i} by differentiating H: <(D_{e_i} H)^perp, e_alpha>, p x n.
Eigen::MatrixXd grad_H_fd(const PointGeometry& pg, const MeanCurvatureDerivatives& dH);

/// H^alpha_{,ij} = (nabla_{e_j} nabla H)(e_i), at (alpha*n + i)*n + j.
std::vector<double> hessian_H_fd(const PointGeometry& pg, const MeanCurvatureDerivatives& dH);

/// H^alpha_{,ij} from the lambda-structure: sum_k h_ijk <X, e_k> + h_ij
/// + sum (lambda_beta - H^beta) h^alpha_ik h^beta_kj.
std::vector<double> hessian_H_lambda(const ShapeData& sd, const NablaA& na, const FrameData& frame,
                                     const Eigen::VectorXd& lambda_alpha);

/// 2|nabla A|^2 + 2<H_{,ij}, A_ij> + 2<A_ik, H><A_il, A_kl> - 2 comm2 - 2 sum S^2,
/// the Laplacian of |A|^2 on any submanifold of Euclidean space.
double laplacian_A2_rhs(const ShapeData& sd, const NablaA& na, const std::vector<double>& hessian_H);

/// 2|nabla A|^2 + 2|A|^2 + 2<H_f, A_ik><A_jk, A_ij> - 2 comm2 - 2 sum S^2.
double drift_A2_rhs(const ShapeData& sd, const NablaA& na);

/// sum_a lambda_a tr(A^a Q) with Q = sum_b (A^b)^2, i.e. <H_f, A_ik><A_jk, A_ij>.
double hf_cubic_term(int n, int p, const std::vector<double>& h, const Eigen::VectorXd& lambda_alpha);

// Tensor inequalities.

struct TensorSample {
  int n = 0;
  int p = 0;
  std::vector<double> h;  // (alpha*n + i)*n + j, symmetric in i, j
  Eigen::VectorXd lambda_alpha;

  double hij(int alpha, int i, int j) const { return h[(alpha * n + i) * n + j]; }
};

struct TensorInvariants {
  double A2 = 0.0;
  double S2 = 0.0;  // sum over alpha, beta of S_ab^2
  double comm2 = 0.0;
};
TensorInvariants tensor_invariants(int n, int p, const std::vector<double>& h);

/// Sample `index` of stream `seed`: entries uniform in [-1, 1], symmetrized in i, j.
TensorSample random_tensor_sample(int n, int p, std::uint64_t seed, std::uint64_t index);

/// Pointwise inequalities: ineq.hf_cubic, ineq.simons_li, ineq.li_li (p >= 2)
/// and, when `drift_A2` is given, ineq.simons_type (lambda-families only).
std::vector<IdentityReport> shape_inequalities(const ShapeData& sd, const NablaA* nabla,
                                               const double* drift_A2 = nullptr);

/// The same at several points of a surface.
std::vector<IdentityReport> shape_inequalities(const CatalogSurface& surface, const std::vector<ChartPoint>& points);

/// fuzz.simons_li, fuzz.li_li (p >= 2), fuzz.hf_cubic on random tensors.
/// Metrics: max_ratio, argmax, seed, n_samples; witness is the arg-max sample.
std::vector<IdentityReport> fuzz_tensor_inequality(int n, int p, std::int64_t n_samples, std::uint64_t seed);

}  // namespace lsub
