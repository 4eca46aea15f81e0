#include "lsub/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lsub/errors.hpp"
#include "lsub/parallel.hpp"
#include "lsub/sampling.hpp"

namespace lsub {

Eigen::VectorXd weighted_mean_curvature(const ShapeData& sd) { return sd.H_vec + sd.X_perp; }

double drift_laplacian(const ImmersionChart& chart, const ChartPoint& u, const ChartScalarFn& field) {
  const ChartVectorFn f = [&field](std::span<const double> v, std::span<double> out) { out[0] = field(v); };
  return chart_laplacians(chart, u, f, 1).drift[0];
}

LambdaProfile lambda_profile(const CatalogSurface& surface, int n_samples) {
  if (n_samples < 20) throw std::invalid_argument("lambda profile needs at least 20 samples");
  const auto pts = halton_points(surface.chart, n_samples);
  std::vector<double> lam(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { lam[i] = point_geometry(surface.chart, pts[i]).shape.lambda(); });

  LambdaProfile prof;
  prof.n_samples = n_samples;
  double sum = 0.0;
  for (double v : lam) sum += v;
  prof.mean_lambda = sum / n_samples;
  prof.min_lambda = *std::min_element(lam.begin(), lam.end());
  prof.max_lambda = *std::max_element(lam.begin(), lam.end());
  prof.max_dev = std::max(prof.max_lambda - prof.mean_lambda, prof.mean_lambda - prof.min_lambda);
  prof.is_lambda = prof.max_dev <= kLambdaTol * (1.0 + prof.mean_lambda);
  return prof;
}

// ---------------------------------------------------------------------------
// Ambient fields

std::string AmbientField::label() const {
  switch (kind) {
    case Kind::coordinate: return "x" + std::to_string(index + 1);
    case Kind::half_norm2: return "|X|^2/2";
    case Kind::half_coord2: return "x" + std::to_string(index + 1) + "^2/2";
  }
  return "?";
}

double AmbientField::value(std::span<const double> x) const {
  switch (kind) {
    case Kind::coordinate: return x[index];
    case Kind::half_norm2: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return 0.5 * s;
    }
    case Kind::half_coord2: return 0.5 * x[index] * x[index];
  }
  return 0.0;
}

void AmbientField::gradient(std::span<const double> x, std::span<double> g) const {
  std::fill(g.begin(), g.end(), 0.0);
  switch (kind) {
    case Kind::coordinate: g[index] = 1.0; break;
    case Kind::half_norm2: std::copy(x.begin(), x.end(), g.begin()); break;
    case Kind::half_coord2: g[index] = x[index]; break;
  }
}

double AmbientField::hessian_diag(int a) const {
  switch (kind) {
    case Kind::coordinate: return 0.0;
    case Kind::half_norm2: return 1.0;
    case Kind::half_coord2: return a == index ? 1.0 : 0.0;
  }
  return 0.0;
}

std::vector<AmbientField> admissible_fields(int N) {
  std::vector<AmbientField> out;
  for (int i = 0; i < N; ++i) out.push_back(AmbientField::coordinate(i));
  out.push_back(AmbientField::half_norm2());
  for (int i = 0; i < N; ++i) out.push_back(AmbientField::half_coord2(i));
  return out;
}

FieldLaplacians ambient_field_laplacians(const Jet3& jet, const MetricData& md,
                                         std::span<const AmbientField> fields) {
  const int n = jet.n, N = jet.N;
  const int m = static_cast<int>(fields.size());
  std::vector<double> xdot(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < N; ++a) xdot[i] += jet.x(a) * jet.dx(i, a);

  FieldLaplacians out;
  out.laplacian.assign(m, 0.0);
  out.drift.assign(m, 0.0);
  std::vector<double> g(N), f1(n);
  for (int c = 0; c < m; ++c) {
    const auto& fld = fields[c];
    fld.gradient(jet.value, g);
    for (int i = 0; i < n; ++i) {
      f1[i] = 0.0;
      for (int a = 0; a < N; ++a) f1[i] += g[a] * jet.dx(i, a);
    }
    double lap = 0.0, grad_x = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double fij = 0.0;
        for (int a = 0; a < N; ++a) fij += fld.hessian_diag(a) * jet.dx(i, a) * jet.dx(j, a) + g[a] * jet.ddx(i, j, a);
        for (int k = 0; k < n; ++k) fij -= md.gamma(k, i, j) * f1[k];
        lap += md.g_inv(i, j) * fij;
        grad_x += md.g_inv(i, j) * f1[j] * xdot[i];
      }
    out.laplacian[c] = lap;
    out.drift[c] = lap - grad_x;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw std::invalid_argument("Gauss-Legendre needs at least one node");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  const unsigned n = static_cast<unsigned>(count);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double pn = std::legendre(n, x), pm = n > 0 ? std::legendre(n - 1, x) : 0.0;
      dp = count * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double pn = std::legendre(n, x), pm = std::legendre(n - 1, x);
    dp = count * (x * pn - pm) / (x * x - 1.0);
    nodes[count - 1 - i] = x;
    weights[count - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

Rule1D periodic_rule(double lo, double hi, int count) {
  Rule1D r;
  const double h = (hi - lo) / count;
  for (int j = 0; j < count; ++j) {
    r.x.push_back(lo + j * h);
    r.w.push_back(h);
  }
  return r;
}

Rule1D gl_rule(double lo, double hi, int count) {
  std::vector<double> t, w;
  gauss_legendre(count, t, w);
  Rule1D r;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int j = 0; j < count; ++j) {
    r.x.push_back(mid + half * t[j]);
    r.w.push_back(half * w[j]);
  }
  return r;
}

struct Resolution {
  int periodic, bounded, line;
};

constexpr double kNoiseFloor = 1e-12;

Resolution auto_resolution(int n) {
  if (n <= 2) return {64, 48, 96};
  if (n == 3) return {32, 24, 64};
  return {16, 20, 48};
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

struct TensorResult {
  std::vector<double> value;
  std::vector<double> abs_value;
  double mass = 0.0;  // integral of the weight alone
  int nodes = 0;
};

TensorResult tensor_quadrature(const CatalogSurface& surface, const NodeIntegrand& integrand, int m,
                               const Resolution& res, double R) {
  const auto& chart = surface.chart;
  const int n = chart.intrinsic_dim();
  std::vector<Rule1D> rules;
  for (int i = 0; i < n; ++i) {
    const auto& ps = chart.param(i);
    switch (ps.kind) {
      case ParamKind::periodic: rules.push_back(periodic_rule(ps.lo, ps.hi, res.periodic)); break;
      case ParamKind::bounded: rules.push_back(gl_rule(ps.lo, ps.hi, res.bounded)); break;
      case ParamKind::line: rules.push_back(gl_rule(-R, R, res.line)); break;
    }
  }
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.x.size();

  std::vector<double> vals(total * m), wts(total);
  parallel_for(total, [&](std::size_t idx) {
    std::vector<double> u(n);
    double w = 1.0;
    std::size_t rest = idx;
    for (int i = 0; i < n; ++i) {
      const std::size_t sz = rules[i].x.size();
      const std::size_t k = rest % sz;
      rest /= sz;
      u[i] = rules[i].x[k];
      w *= rules[i].w[k];
    }
    const Jet3 jet = detail::eval_jet_unchecked(chart, u);
    const MetricData md = metric(jet);
    double r2 = 0.0;
    for (double x : jet.value) r2 += x * x;
    w *= std::exp(-0.5 * r2) * md.sqrt_det;
    wts[idx] = w;
    std::span<double> out(vals.data() + idx * m, static_cast<std::size_t>(m));
    integrand(u, jet, md, out);
    for (auto& v : out) v *= w;
  });

  TensorResult tr;
  tr.nodes = static_cast<int>(total);
  tr.value.assign(m, 0.0);
  tr.abs_value.assign(m, 0.0);
  CompensatedSum ms;
  for (double w : wts) ms.add(w);
  tr.mass = ms.value();
  for (int c = 0; c < m; ++c) {
    CompensatedSum s, a;
    for (std::size_t idx = 0; idx < total; ++idx) {
      s.add(vals[idx * m + c]);
      a.add(std::abs(vals[idx * m + c]));
    }
    tr.value[c] = s.value();
    tr.abs_value[c] = a.value();
  }
  return tr;
}

}  // namespace

std::vector<WeightedIntegral> weighted_integrals(const CatalogSurface& surface, const NodeIntegrand& integrand,
                                                 int m, const QuadSpec& spec) {
  const int n = surface.chart.intrinsic_dim();
  Resolution res = auto_resolution(n);
  if (spec.periodic_nodes > 0) res.periodic = spec.periodic_nodes;
  if (spec.bounded_nodes > 0) res.bounded = spec.bounded_nodes;
  if (spec.line_nodes > 0) res.line = spec.line_nodes;
  if (res.periodic < 4 || res.bounded < 4 || res.line < 4) {
    throw std::invalid_argument("quadrature resolution must be at least 4 nodes per parameter");
  }
  const Resolution coarse{res.periodic / 2, res.bounded / 2, res.line / 2};

  const bool compact = surface.chart.compact();
  std::optional<double> R;
  if (!compact) R = spec.truncation_radius ? *spec.truncation_radius : truncation_radius(surface);

  const auto fine = tensor_quadrature(surface, integrand, m, res, R.value_or(0.0));
  const auto crude = tensor_quadrature(surface, integrand, m, coarse, R.value_or(0.0));

  QuadRuleInfo info;
  info.periodic_nodes = res.periodic;
  info.bounded_nodes = res.bounded;
  info.line_nodes = res.line;
  info.total_nodes = fine.nodes;
  info.description = "trapezoid(periodic) x Gauss-Legendre(bounded, line on [-R,R]); error vs half resolution";

  std::vector<WeightedIntegral> out(m);
  for (int c = 0; c < m; ++c) {
    auto& wi = out[c];
    wi.value = fine.value[c];
    wi.abs_value = fine.abs_value[c];
    const double diff = std::abs(fine.value[c] - crude.value[c]);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * fine.abs_value[c];
    wi.est_error = diff + floor + (compact ? 0.0 : kTailTarget);
    wi.truncation_radius = R;
    wi.rule = info;
    // Integrands that vanish up to rounding only need to agree at the noise floor.
    if (diff > spec.rel_tol * fine.abs_value[c] + kNoiseFloor * fine.mass) {
      throw QuadratureNotConverged("quadrature levels disagree by " + std::to_string(diff) + " (L1 mass " +
                                   std::to_string(fine.abs_value[c]) + ")");
    }
  }
  return out;
}

WeightedIntegral weighted_integral(const CatalogSurface& surface,
                                   const std::function<double(std::span<const double> u, const Jet3& jet)>& integrand,
                                   const QuadSpec& spec) {
  const NodeIntegrand f = [&integrand](std::span<const double> u, const Jet3& jet, const MetricData&,
                                       std::span<double> out) { out[0] = integrand(u, jet); };
  return weighted_integrals(surface, f, 1, spec)[0];
}

std::vector<DivergenceResidual> divergence_residuals(const CatalogSurface& surface,
                                                     std::span<const AmbientField> fields, const QuadSpec& spec) {
  const int m = static_cast<int>(fields.size());
  for (const auto& f : fields) {
    if (f.kind != AmbientField::Kind::half_norm2 && (f.index < 0 || f.index >= surface.N())) {
      throw std::invalid_argument("field index outside the ambient dimension");
    }
  }
  const NodeIntegrand integrand = [&](std::span<const double>, const Jet3& jet, const MetricData& md,
                                      std::span<double> out) {
    out[0] = 1.0;
    const auto lap = ambient_field_laplacians(jet, md, fields);
    for (int c = 0; c < m; ++c) out[c + 1] = lap.drift[c];
  };
  const auto ints = weighted_integrals(surface, integrand, m + 1, spec);
  const double area = ints[0].value;
  std::vector<DivergenceResidual> out(m);
  for (int c = 0; c < m; ++c) {
    out[c].field = fields[c];
    out[c].residual = std::abs(ints[c + 1].value) / area;
    out[c].est_error = ints[c + 1].est_error / area;
  }
  return out;
}

double divergence_residual(const CatalogSurface& surface, const AmbientField& field, const QuadSpec& spec) {
  const AmbientField f[] = {field};
  return divergence_residuals(surface, f, spec)[0].residual;
}

// ---------------------------------------------------------------------------
// Growth

GrowthBound growth_bound(const CatalogSurface& surface, int n_samples) {
  const auto pts = halton_points(surface.chart, n_samples);
  std::vector<double> lam(pts.size()), xp2(pts.size()), h2(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const auto pg = point_geometry(surface.chart, pts[i]);
    lam[i] = pg.shape.lambda();
    xp2[i] = pg.shape.X_perp.squaredNorm();
    h2[i] = pg.shape.H_vec.squaredNorm();
  });
  GrowthBound gb;
  double sum = 0.0;
  for (double v : lam) sum += v;
  gb.lambda = sum / n_samples;
  gb.beta = 0.25 * *std::min_element(xp2.begin(), xp2.end());
  gb.inf_H2 = *std::min_element(h2.begin(), h2.end());
  gb.bound_exponent = surface.n() + 0.5 * gb.lambda * gb.lambda - 2.0 * gb.beta - 0.5 * gb.inf_H2;
  return gb;
}

namespace {

constexpr int kGrowthLineNodes = 48;
constexpr int kGoldenIters = 90;
constexpr int kBisectIters = 80;

class BallArea {
 public:
  BallArea(const CatalogSurface& s, double r) : chart_(s.chart), r_(r), bracket_(r + 1.0) {
    for (int i = 0; i < chart_.intrinsic_dim(); ++i) {
      if (chart_.param(i).kind == ParamKind::line)
        line_.push_back(i);
      else
        compact_.push_back(i);
    }
    gauss_legendre(kGrowthLineNodes, t_, tw_);
  }

  double compute() {
    const Resolution res = auto_resolution(chart_.intrinsic_dim());
    std::vector<Rule1D> rules;
    for (int i : compact_) {
      const auto& ps = chart_.param(i);
      rules.push_back(ps.kind == ParamKind::periodic ? periodic_rule(ps.lo, ps.hi, res.periodic)
                                                     : gl_rule(ps.lo, ps.hi, res.bounded));
    }
    std::size_t total = 1;
    for (const auto& r : rules) total *= r.x.size();
    std::vector<double> part(total);
    parallel_for(total, [&](std::size_t idx) {
      std::vector<double> u(chart_.intrinsic_dim(), 0.0);
      double w = 1.0;
      std::size_t rest = idx;
      for (std::size_t c = 0; c < compact_.size(); ++c) {
        const std::size_t sz = rules[c].x.size();
        const std::size_t k = rest % sz;
        rest /= sz;
        u[compact_[c]] = rules[c].x[k];
        w *= rules[c].w[k];
      }
      part[idx] = w * line_integral(u, 0);
    });
    CompensatedSum s;
    for (double v : part) s.add(v);
    return s.value();
  }

 private:
  double norm2(const std::vector<double>& u) const {
    const auto x = chart_.position(u);
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }

  // Minimum of |X|^2 over line parameters lvl.. with earlier ones fixed in u.
  double min_norm2(std::vector<double>& u, std::size_t lvl, double* argmin = nullptr) const {
    if (lvl == line_.size()) return norm2(u);
    const int idx = line_[lvl];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = -bracket_, b = bracket_;
    double c = b - g * (b - a), d = a + g * (b - a);
    auto f = [&](double v) {
      u[idx] = v;
      return min_norm2(u, lvl + 1);
    };
    double fc = f(c), fd = f(d);
    for (int it = 0; it < kGoldenIters; ++it) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    const double vmin = 0.5 * (a + b);
    const double fmin = f(vmin);
    if (argmin) *argmin = vmin;
    return fmin;
  }

  double line_integral(std::vector<double>& u, std::size_t lvl) const {
    if (lvl == line_.size()) {
      const Jet3 jet = detail::eval_jet_unchecked(chart_, u);
      return metric(jet).sqrt_det;
    }
    const int idx = line_[lvl];
    double vstar = 0.0;
    const double fmin = min_norm2(u, lvl, &vstar);
    if (fmin > r_ * r_) return 0.0;
    auto phi = [&](double v) {
      u[idx] = v;
      return min_norm2(u, lvl + 1) - r_ * r_;
    };
    auto edge = [&](double inside, double outside) {
      for (int it = 0; it < kBisectIters; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (phi(mid) <= 0.0)
          inside = mid;
        else
          outside = mid;
      }
      return 0.5 * (inside + outside);
    };
    const double lo = edge(vstar, -bracket_), hi = edge(vstar, bracket_);
    // v = mid - half cos(t) removes the square-root behaviour at the ends.
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    CompensatedSum s;
    for (int j = 0; j < kGrowthLineNodes; ++j) {
      const double t = 0.5 * std::numbers::pi * (t_[j] + 1.0);
      const double wt = 0.5 * std::numbers::pi * tw_[j];
      u[idx] = mid - half * std::cos(t);
      s.add(wt * half * std::sin(t) * line_integral(u, lvl + 1));
    }
    return s.value();
  }

  const ImmersionChart& chart_;
  double r_;
  double bracket_;
  std::vector<int> line_;
  std::vector<int> compact_;
  std::vector<double> t_, tw_;
};

double loglog_slope(const std::vector<double>& r, const std::vector<double>& a) {
  const std::size_t m = r.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(r[i]), y = std::log(a[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

double area_in_ball(const CatalogSurface& surface, double r) {
  if (surface.chart.compact()) throw std::invalid_argument("ball areas are only computed for non-compact charts");
  return BallArea(surface, r).compute();
}

GrowthReport growth_report(const CatalogSurface& surface, const std::vector<double>& radii) {
  if (surface.chart.compact()) throw std::invalid_argument("growth report needs a non-compact surface");
  if (radii.size() < 4) throw std::invalid_argument("growth report needs at least 4 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("radii must be increasing");

  GrowthReport rep;
  rep.radii = radii;
  for (double r : radii) {
    const double a = area_in_ball(surface, r);
    if (!(a > 0.0)) throw std::invalid_argument("ball of radius " + std::to_string(r) + " misses the surface");
    rep.areas.push_back(a);
  }
  rep.fitted_exponent = loglog_slope(rep.radii, rep.areas);
  const auto gb = growth_bound(surface);
  rep.bound_exponent = gb.bound_exponent;
  rep.beta = gb.beta;
  rep.inf_H2 = gb.inf_H2;
  rep.lambda = gb.lambda;
  rep.passes = rep.fitted_exponent <= rep.bound_exponent + kGrowthSlack;
  return rep;
}

double truncation_radius(const CatalogSurface& surface) {
  const double d = growth_bound(surface, 64).bound_exponent;
  const int n = surface.n();
  double C = 0.0;
  for (double r : {2.0, 4.0, 8.0, 16.0}) {
    const double a = area_in_ball(surface, r);
    if (a > 0.0) C = std::max(C, a / std::pow(r, d));
  }
  if (!(C > 0.0)) C = 1.0;
  const double k = d + n;
  auto f = [&](double R) { return std::log(C) - 0.5 * R * R + k * std::log(R) - std::log(kTailTarget); };
  double lo = std::max(1.0, std::sqrt(std::max(k, 0.0))), hi = 200.0;
  if (f(lo) <= 0.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace lsub
