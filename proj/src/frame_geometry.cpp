#include <algorithm>
#include <cmath>

#include "frame_builder.hpp"
#include "lsub/errors.hpp"
#include "lsub/geometry.hpp"

namespace lsub {

namespace {

using detail::FrameCore;

FrameCore<double> double_core(const Jet3& jet) {
  FrameCore<double> fc;
  fc.n = jet.n;
  fc.N = jet.N;
  fc.X = jet.value;
  fc.dX.assign(jet.n, std::vector<double>(jet.N));
  fc.ddX.assign(jet.n * jet.n, std::vector<double>(jet.N));
  for (int i = 0; i < jet.n; ++i) {
    for (int a = 0; a < jet.N; ++a) fc.dX[i][a] = jet.dx(i, a);
    for (int j = 0; j < jet.n; ++j)
      for (int a = 0; a < jet.N; ++a) fc.ddX[i * jet.n + j][a] = jet.ddx(i, j, a);
  }
  detail::build_metric_and_tangents(fc);
  detail::build_mean_curvature(fc);
  return fc;
}

// Same quantities as double_core with first derivatives along every chart axis.
FrameCore<Dual> dual_core(const Jet3& jet) {
  const int n = jet.n, N = jet.N;
  FrameCore<Dual> fc;
  fc.n = n;
  fc.N = N;
  fc.X.assign(N, Dual(0.0));
  fc.dX.assign(n, std::vector<Dual>(N));
  fc.ddX.assign(n * n, std::vector<Dual>(N));
  for (int a = 0; a < N; ++a) {
    Dual x(jet.x(a));
    for (int c = 0; c < n; ++c) x.set_d(c, jet.dx(c, a));
    fc.X[a] = x;
  }
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < N; ++a) {
      Dual d(jet.dx(i, a));
      for (int c = 0; c < n; ++c) d.set_d(c, jet.ddx(i, c, a));
      fc.dX[i][a] = d;
      for (int j = 0; j < n; ++j) {
        Dual dd(jet.ddx(i, j, a));
        for (int c = 0; c < n; ++c) dd.set_d(c, jet.dddx(i, j, c, a));
        fc.ddX[i * n + j][a] = dd;
      }
    }
  }
  detail::build_metric_and_tangents(fc);
  detail::build_mean_curvature(fc);
  return fc;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

FrameData frame_from_core(const FrameCore<double>& fc) {
  FrameData fd;
  const int n = fc.n, N = fc.N, p = fc.p();
  fd.tangent.resize(n, N);
  fd.tangent_coeffs.resize(n, n);
  fd.normal.resize(p, N);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < N; ++a) fd.tangent(i, a) = fc.tangent[i][a];
    for (int a = 0; a < n; ++a) fd.tangent_coeffs(i, a) = fc.E[i][a];
  }
  for (int al = 0; al < p; ++al)
    for (int a = 0; a < N; ++a) fd.normal(al, a) = fc.normal[al][a];
  fd.hf_aligned = fc.aligned;
  fd.pivots = fc.pivots;
  return fd;
}

}  // namespace

MetricData metric(const Jet3& jet) {
  detail::check_rank(jet);
  const int n = jet.n, N = jet.N;
  MetricData md;
  md.n = n;
  md.g.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < N; ++a) s += jet.dx(i, a) * jet.dx(j, a);
      md.g(i, j) = md.g(j, i) = s;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(md.g);
  if (llt.info() != Eigen::Success) throw RankDeficientJet("induced metric is not positive definite");
  md.g_inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  md.g_inv = 0.5 * (md.g_inv + md.g_inv.transpose());
  const Eigen::MatrixXd L = llt.matrixL();
  md.sqrt_det = L.diagonal().prod();

  // Gamma^k_ij = g^{kl} <X_ij, X_l>
  md.christoffel.assign(n * n * n, 0.0);
  std::vector<double> low(n * n * n);  // <X_ij, X_l> at (l*n + i)*n + j
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < N; ++a) s += jet.ddx(i, j, a) * jet.dx(l, a);
        low[(l * n + i) * n + j] = low[(l * n + j) * n + i] = s;
      }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += md.g_inv(k, l) * low[(l * n + i) * n + j];
        md.christoffel[(k * n + i) * n + j] = md.christoffel[(k * n + j) * n + i] = s;
      }
  return md;
}

FrameData frames(const Jet3& jet, const MetricData& md,
                 const std::optional<Eigen::VectorXd>& hf_candidate) {
  (void)md;
  auto fc = double_core(jet);
  if (hf_candidate) {
    std::vector<double> cand(hf_candidate->data(), hf_candidate->data() + hf_candidate->size());
    detail::build_normals(fc, &cand, static_cast<const FrameCore<double>*>(nullptr));
  } else {
    detail::build_normals<double>(fc, nullptr, nullptr);
  }
  return frame_from_core(fc);
}

ShapeData shape(const Jet3& jet, const MetricData& md, const FrameData& fd) {
  (void)md;
  const int n = jet.n, N = jet.N, p = N - n;
  ShapeData sd;
  sd.n = n;
  sd.p = p;
  sd.N = N;

  // b^alpha_ab = <X_ab, e_alpha>, then h^alpha_ij = E_ia E_jb b^alpha_ab.
  std::vector<double> b(p * n * n, 0.0);
  for (int al = 0; al < p; ++al)
    for (int a = 0; a < n; ++a)
      for (int c = a; c < n; ++c) {
        double s = 0.0;
        for (int x = 0; x < N; ++x) s += jet.ddx(a, c, x) * fd.normal(al, x);
        b[(al * n + a) * n + c] = b[(al * n + c) * n + a] = s;
      }
  const auto& E = fd.tangent_coeffs;
  sd.h.assign(p * n * n, 0.0);
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c) s += E(i, a) * E(j, c) * b[(al * n + a) * n + c];
        sd.h[(al * n + i) * n + j] = sd.h[(al * n + j) * n + i] = s;
      }

  sd.X = to_eigen(jet.value);
  sd.X_tan = Eigen::VectorXd::Zero(N);
  for (int i = 0; i < n; ++i) sd.X_tan += fd.tangent.row(i).dot(sd.X) * fd.tangent.row(i).transpose();
  sd.X_perp = sd.X - sd.X_tan;

  sd.H_alpha.resize(p);
  sd.H_vec = Eigen::VectorXd::Zero(N);
  for (int al = 0; al < p; ++al) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += sd.hij(al, i, i);
    sd.H_alpha(al) = tr;
    sd.H_vec += tr * fd.normal.row(al).transpose();
  }
  sd.Hf_vec = sd.H_vec + sd.X_perp;
  sd.lambda_alpha.resize(p);
  for (int al = 0; al < p; ++al) sd.lambda_alpha(al) = fd.normal.row(al).dot(sd.Hf_vec);
  sd.lambda_coord = sd.Hf_vec;

  sd.S.resize(p, p);
  for (int al = 0; al < p; ++al)
    for (int be = al; be < p; ++be) {
      double s = 0.0;
      for (int k = 0; k < n * n; ++k) s += sd.h[al * n * n + k] * sd.h[be * n * n + k];
      sd.S(al, be) = sd.S(be, al) = s;
    }
  sd.A2 = sd.S.trace();

  sd.comm2 = 0.0;
  for (int al = 0; al < p; ++al)
    for (int be = 0; be < p; ++be) {
      if (al == be) continue;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double c = 0.0;
          for (int k = 0; k < n; ++k) c += sd.hij(al, i, k) * sd.hij(be, k, j) - sd.hij(be, i, k) * sd.hij(al, k, j);
          sd.comm2 += c * c;
        }
    }
  return sd;
}

namespace detail {

PointGeometry point_geometry_unchecked(const ImmersionChart& chart, std::span<const double> u,
                                       JetMode mode) {
  PointGeometry pg;
  pg.jet = eval_jet_unchecked(chart, u, mode);
  pg.metric = metric(pg.jet);
  auto fc = double_core(pg.jet);
  const auto hf = fc.Hf;
  build_normals(fc, &hf, static_cast<const FrameCore<double>*>(nullptr));
  pg.frame = frame_from_core(fc);
  pg.shape = shape(pg.jet, pg.metric, pg.frame);
  return pg;
}

}  // namespace detail

PointGeometry point_geometry(const ImmersionChart& chart, const ChartPoint& u, JetMode mode) {
  require_admissible(chart, u);
  return detail::point_geometry_unchecked(chart, u.coords, mode);
}

NablaA covariant_shape_derivative(const PointGeometry& pg) {
  const Jet3& jet = pg.jet;
  const int n = jet.n, N = jet.N, p = N - n;

  auto ref = double_core(jet);
  const auto hf = ref.Hf;
  detail::build_normals(ref, &hf, static_cast<const FrameCore<double>*>(nullptr));

  auto dc = dual_core(jet);
  const auto dhf = dc.Hf;
  detail::build_normals(dc, &dhf, &ref);

  // b^alpha_ab as Dual: value and chart derivative along each c.
  std::vector<Dual> b(p * n * n);
  for (int al = 0; al < p; ++al)
    for (int a = 0; a < n; ++a)
      for (int c = a; c < n; ++c)
        b[(al * n + a) * n + c] = b[(al * n + c) * n + a] = detail::dot(dc.ddX[a * n + c], dc.normal[al]);

  // Normal connection <d_c e_beta, e_alpha> at (c*p + beta)*p + alpha.
  std::vector<double> conn(n * p * p, 0.0);
  for (int c = 0; c < n; ++c)
    for (int be = 0; be < p; ++be)
      for (int al = 0; al < p; ++al) {
        double s = 0.0;
        for (int x = 0; x < N; ++x) s += dc.normal[be][x].d(c) * dc.normal[al][x].value();
        conn[(c * p + be) * p + al] = s;
      }

  const MetricData& md = pg.metric;
  auto bv = [&](int al, int a, int c) { return b[(al * n + a) * n + c].value(); };
  // (nabla_c b)^alpha_ab in chart components at ((alpha*n + a)*n + b)*n + c.
  std::vector<double> nb(p * n * n * n, 0.0);
  for (int al = 0; al < p; ++al)
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb)
        for (int c = 0; c < n; ++c) {
          double s = b[(al * n + a) * n + bb].d(c);
          for (int l = 0; l < n; ++l) s -= md.gamma(l, c, a) * bv(al, l, bb) + md.gamma(l, c, bb) * bv(al, a, l);
          for (int be = 0; be < p; ++be) s += bv(be, a, bb) * conn[(c * p + be) * p + al];
          nb[((al * n + a) * n + bb) * n + c] = s;
        }

  const auto& E = pg.frame.tangent_coeffs;
  NablaA na;
  na.n = n;
  na.p = p;
  na.h1.assign(p * n * n * n, 0.0);
  for (int al = 0; al < p; ++al)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            for (int bb = 0; bb < n; ++bb)
              for (int c = 0; c < n; ++c) s += E(i, a) * E(j, bb) * E(k, c) * nb[((al * n + a) * n + bb) * n + c];
          na.h1[((al * n + i) * n + j) * n + k] = s;
        }

  na.nablaA2 = 0.0;
  for (double x : na.h1) na.nablaA2 += x * x;
  na.H_alpha_k = Eigen::MatrixXd::Zero(p, n);
  for (int al = 0; al < p; ++al)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += na.at(al, i, i, k);
      na.H_alpha_k(al, k) = s;
    }
  na.nablaH2 = na.H_alpha_k.squaredNorm();
  return na;
}

NablaA covariant_shape_derivative(const ImmersionChart& chart, const ChartPoint& u) {
  return covariant_shape_derivative(point_geometry(chart, u));
}

Eigen::VectorXd normal_part(const Jet3& jet, const MetricData& md, const Eigen::VectorXd& v) {
  const int n = jet.n, N = jet.N;
  std::vector<double> proj(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < N; ++x) proj[a] += v(x) * jet.dx(a, x);
  Eigen::VectorXd r = v;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      const double w = md.g_inv(a, c) * proj[a];
      for (int x = 0; x < N; ++x) r(x) -= w * jet.dx(c, x);
    }
  return r;
}

Eigen::VectorXd mean_curvature_vector(const Jet3& jet, const MetricData& md) {
  const int n = jet.n, N = jet.N;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(N);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int x = 0; x < N; ++x) acc(x) += md.g_inv(a, c) * jet.ddx(a, c, x);
  return normal_part(jet, md, acc);
}

FieldLaplacians laplacians_from_derivatives(const Jet3& jet, const MetricData& md, const FdFirstSecond& d) {
  const int n = jet.n, N = jet.N, m = d.m;
  std::vector<double> xdot(n, 0.0);  // <X, X_i>
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < N; ++a) xdot[i] += jet.x(a) * jet.dx(i, a);

  FieldLaplacians out;
  out.laplacian.assign(m, 0.0);
  out.drift.assign(m, 0.0);
  for (int c = 0; c < m; ++c) {
    double lap = 0.0, grad_x = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double t = d.d2(i, j, c);
        for (int k = 0; k < n; ++k) t -= md.gamma(k, i, j) * d.d1(k, c);
        lap += md.g_inv(i, j) * t;
        grad_x += md.g_inv(i, j) * d.d1(j, c) * xdot[i];
      }
    out.laplacian[c] = lap;
    out.drift[c] = lap - grad_x;
  }
  return out;
}

FieldLaplacians chart_laplacians(const ImmersionChart& chart, const ChartPoint& u,
                                 const ChartVectorFn& fields, int m) {
  require_admissible(chart, u);
  const Jet3 jet = detail::eval_jet_unchecked(chart, u.coords);
  return laplacians_from_derivatives(jet, metric(jet), fd_first_second(chart, fields, m, u.coords));
}

double chart_laplacian(const ImmersionChart& chart, const ChartPoint& u, const ChartScalarFn& field) {
  const ChartVectorFn f = [&field](std::span<const double> v, std::span<double> out) { out[0] = field(v); };
  return chart_laplacians(chart, u, f, 1).laplacian[0];
}

}  // namespace lsub
