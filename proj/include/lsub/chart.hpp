#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsub/taylor.hpp"

namespace lsub {

/// How a chart parameter is sampled and integrated.
///  - periodic: angle on [lo, hi) with hi - lo one full period (trapezoid rule)
///  - bounded:  closed interval [lo, hi] (Gauss-Legendre); admissible box is
///              shrunk by `margin` at both ends to stay off coordinate poles
///  - line:     unbounded Euclidean coordinate; [lo, hi] is only the sampling
///              window, integration truncates symmetrically at a radius R
enum class ParamKind { periodic, bounded, line };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::line;
  double lo = 0.0;
  double hi = 0.0;
  double margin = 0.0;
  // Where the evaluator is defined. Stencils must stay inside.
  double eval_lo = -std::numeric_limits<double>::infinity();
  double eval_hi = std::numeric_limits<double>::infinity();

  double admissible_lo() const { return kind == ParamKind::bounded ? lo + margin : lo; }
  double admissible_hi() const { return kind == ParamKind::bounded ? hi - margin : hi; }
};

/// Immersion evaluator. Implementations must be built from the primitive set
/// supported by `Taylor3` (arithmetic, sin, cos, exp, sqrt, integer powers)
/// so that both instantiations describe the same map.
class ChartFunction {
 public:
  virtual ~ChartFunction() = default;
  virtual void eval(std::span<const double> u, std::span<double> x) const = 0;
  virtual void eval(std::span<const Taylor3> u, std::span<Taylor3> x) const = 0;
};

template <class F>
class GenericChartFunction final : public ChartFunction {
 public:
  explicit GenericChartFunction(F f) : f_(std::move(f)) {}
  void eval(std::span<const double> u, std::span<double> x) const override { f_(u, x); }
  void eval(std::span<const Taylor3> u, std::span<Taylor3> x) const override { f_(u, x); }

 private:
  F f_;
};

/// Wraps a generic lambda `[](auto u, auto x) { ... }` as a chart evaluator.
template <class F>
std::shared_ptr<const ChartFunction> make_chart_function(F f) {
  return std::make_shared<GenericChartFunction<F>>(std::move(f));
}

class ImmersionChart {
 public:
  ImmersionChart() = default;
  ImmersionChart(int ambient_dim, std::vector<ParamSpec> params,
                 std::shared_ptr<const ChartFunction> fn);

  int intrinsic_dim() const { return static_cast<int>(params_.size()); }
  int ambient_dim() const { return ambient_dim_; }
  int codim() const { return ambient_dim_ - intrinsic_dim(); }
  const std::vector<ParamSpec>& params() const { return params_; }
  const ParamSpec& param(int i) const { return params_[i]; }
  bool compact() const;
  int line_param_count() const;

  bool admissible(std::span<const double> u) const;
  bool in_eval_domain(std::span<const double> u) const;

  void position(std::span<const double> u, std::span<double> x) const;
  std::vector<double> position(std::span<const double> u) const;
  void position(std::span<const Taylor3> u, std::span<Taylor3> x) const;

 private:
  int ambient_dim_ = 0;
  std::vector<ParamSpec> params_;
  std::shared_ptr<const ChartFunction> fn_;
};

struct ChartPoint {
  std::vector<double> coords;
};

/// Throws PointOutsideChart unless `u` has the chart's dimension and lies in
/// the admissible box.
void require_admissible(const ImmersionChart& chart, const ChartPoint& u);

/// Value and chart derivatives of X up to third order. Layout: ambient index
/// fastest, i.e. d2[(i*n + j)*N + a].
struct Jet3 {
  int n = 0;
  int N = 0;
  std::vector<double> value;
  std::vector<double> d1;
  std::vector<double> d2;
  std::vector<double> d3;

  double x(int a) const { return value[a]; }
  double dx(int i, int a) const { return d1[i * N + a]; }
  double ddx(int i, int j, int a) const { return d2[(i * n + j) * N + a]; }
  double dddx(int i, int j, int k, int a) const { return d3[((i * n + j) * n + k) * N + a]; }
};

enum class JetMode { exact, finite_difference };

/// Base steps of the finite-difference oracle; the step along parameter i is
/// base * (1 + |u_i|), refined once by halving with Richardson extrapolation.
/// Third derivatives use a coarser base: rounding error grows like eps / h^3.
struct FdSteps {
  double first = 1e-3;
  double second = 1e-3;
  double third = 1e-2;
};

Jet3 eval_jet(const ImmersionChart& chart, const ChartPoint& u, JetMode mode = JetMode::exact);

namespace detail {
// Same as eval_jet without the admissible-box check (quadrature nodes may sit
// between the pole margin and the pole). Still rejects rank-deficient jets.
Jet3 eval_jet_unchecked(const ImmersionChart& chart, std::span<const double> u,
                        JetMode mode = JetMode::exact);
void check_rank(const Jet3& jet);
}  // namespace detail

}  // namespace lsub
