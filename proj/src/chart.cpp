#include "lsub/chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsub/errors.hpp"
#include "lsub/finite_difference.hpp"

namespace lsub {

ImmersionChart::ImmersionChart(int ambient_dim, std::vector<ParamSpec> params,
                               std::shared_ptr<const ChartFunction> fn)
    : ambient_dim_(ambient_dim), params_(std::move(params)), fn_(std::move(fn)) {
  const int n = intrinsic_dim();
  if (n < 1 || n > kMaxChartDim) {
    throw std::invalid_argument("chart dimension must be in [1, " +
                                std::to_string(kMaxChartDim) + "]");
  }
  if (n >= ambient_dim_) {
    throw std::invalid_argument("chart dimension must be below the ambient dimension");
  }
  if (!fn_) throw std::invalid_argument("chart evaluator missing");
  for (const auto& p : params_) {
    if (!(p.hi > p.lo)) throw std::invalid_argument("parameter '" + p.name + "' has empty range");
    if (p.kind == ParamKind::bounded && !(p.admissible_hi() > p.admissible_lo())) {
      throw std::invalid_argument("parameter '" + p.name + "' margin swallows its range");
    }
  }
}

bool ImmersionChart::compact() const { return line_param_count() == 0; }

int ImmersionChart::line_param_count() const {
  return static_cast<int>(std::count_if(params_.begin(), params_.end(),
                                        [](const ParamSpec& p) { return p.kind == ParamKind::line; }));
}

bool ImmersionChart::admissible(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != intrinsic_dim()) return false;
  for (int i = 0; i < intrinsic_dim(); ++i) {
    const auto& p = params_[i];
    if (!(u[i] >= p.admissible_lo() && u[i] <= p.admissible_hi())) return false;
  }
  return true;
}

bool ImmersionChart::in_eval_domain(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != intrinsic_dim()) return false;
  for (int i = 0; i < intrinsic_dim(); ++i) {
    if (!(u[i] >= params_[i].eval_lo && u[i] <= params_[i].eval_hi)) return false;
  }
  return true;
}

void ImmersionChart::position(std::span<const double> u, std::span<double> x) const {
  fn_->eval(u, x);
}

std::vector<double> ImmersionChart::position(std::span<const double> u) const {
  std::vector<double> x(ambient_dim_);
  fn_->eval(u, x);
  return x;
}

void ImmersionChart::position(std::span<const Taylor3> u, std::span<Taylor3> x) const {
  fn_->eval(u, x);
}

void require_admissible(const ImmersionChart& chart, const ChartPoint& u) {
  if (chart.admissible(u.coords)) return;
  std::ostringstream os;
  os << "point (";
  for (std::size_t i = 0; i < u.coords.size(); ++i) os << (i ? ", " : "") << u.coords[i];
  os << ") is outside the admissible box of a " << chart.intrinsic_dim() << "-dimensional chart";
  throw PointOutsideChart(os.str());
}

namespace {

Jet3 empty_jet(int n, int N) {
  Jet3 jet;
  jet.n = n;
  jet.N = N;
  jet.value.assign(N, 0.0);
  jet.d1.assign(n * N, 0.0);
  jet.d2.assign(n * n * N, 0.0);
  jet.d3.assign(n * n * n * N, 0.0);
  return jet;
}

Jet3 exact_jet(const ImmersionChart& chart, std::span<const double> u) {
  const int n = chart.intrinsic_dim(), N = chart.ambient_dim();
  std::vector<Taylor3> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back(Taylor3::variable(n, i, u[i]));
  std::vector<Taylor3> x(N);
  chart.position(vars, x);

  Jet3 jet = empty_jet(n, N);
  for (int a = 0; a < N; ++a) {
    jet.value[a] = x[a].value();
    for (int i = 0; i < n; ++i) {
      jet.d1[i * N + a] = x[a].d1(i);
      for (int j = 0; j < n; ++j) {
        jet.d2[(i * n + j) * N + a] = x[a].d2(i, j);
        for (int k = 0; k < n; ++k) jet.d3[((i * n + j) * n + k) * N + a] = x[a].d3(i, j, k);
      }
    }
  }
  return jet;
}

Jet3 fd_jet(const ImmersionChart& chart, std::span<const double> u) {
  const int n = chart.intrinsic_dim(), N = chart.ambient_dim();
  const FdSteps steps;
  const ChartVectorFn f = [&chart](std::span<const double> v, std::span<double> out) {
    chart.position(v, out);
  };
  Jet3 jet = empty_jet(n, N);
  chart.position(u, jet.value);
  for (int i = 0; i < n; ++i) {
    const int dirs1[] = {i};
    const auto d = fd_partial(chart, f, N, u, dirs1, steps.first);
    std::copy(d.begin(), d.end(), jet.d1.begin() + i * N);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int dirs2[] = {i, j};
      const auto d = fd_partial(chart, f, N, u, dirs2, steps.second);
      for (int a = 0; a < N; ++a) {
        jet.d2[(i * n + j) * N + a] = d[a];
        jet.d2[(j * n + i) * N + a] = d[a];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        const int dirs3[] = {i, j, k};
        const auto d = fd_partial(chart, f, N, u, dirs3, steps.third);
        const int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
        for (const auto& p : perms) {
          for (int a = 0; a < N; ++a) jet.d3[((p[0] * n + p[1]) * n + p[2]) * N + a] = d[a];
        }
      }
    }
  }
  return jet;
}

}  // namespace

namespace detail {

void check_rank(const Jet3& jet) {
  // Cholesky of the Gram matrix of the normalized d1 rows. Normalizing keeps
  // charts whose rows are merely short (near a pole) apart from charts whose
  // rows are dependent.
  constexpr double kRankFloor = 1e-12;
  const int n = jet.n, N = jet.N;
  std::vector<double> len(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < N; ++a) len[i] += jet.dx(i, a) * jet.dx(i, a);
    len[i] = std::sqrt(len[i]);
    if (!(len[i] > 0.0)) throw RankDeficientJet("first-derivative row " + std::to_string(i) + " vanishes");
  }
  std::vector<double> g(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < N; ++a) s += jet.dx(i, a) * jet.dx(j, a);
      g[i * n + j] = s / (len[i] * len[j]);
    }
  for (int k = 0; k < n; ++k) {
    double d = g[k * n + k];
    for (int s = 0; s < k; ++s) d -= g[k * n + s] * g[k * n + s];
    if (!(d > kRankFloor)) {
      throw RankDeficientJet("first-derivative matrix has rank below " + std::to_string(n));
    }
    const double l = std::sqrt(d);
    g[k * n + k] = l;
    for (int i = k + 1; i < n; ++i) {
      double v = g[i * n + k];
      for (int s = 0; s < k; ++s) v -= g[i * n + s] * g[k * n + s];
      g[i * n + k] = v / l;
    }
  }
}

Jet3 eval_jet_unchecked(const ImmersionChart& chart, std::span<const double> u, JetMode mode) {
  if (static_cast<int>(u.size()) != chart.intrinsic_dim()) {
    throw PointOutsideChart("point dimension does not match the chart");
  }
  Jet3 jet = mode == JetMode::exact ? exact_jet(chart, u) : fd_jet(chart, u);
  check_rank(jet);
  return jet;
}

}  // namespace detail

Jet3 eval_jet(const ImmersionChart& chart, const ChartPoint& u, JetMode mode) {
  require_admissible(chart, u);
  return detail::eval_jet_unchecked(chart, u.coords, mode);
}

}  // namespace lsub
