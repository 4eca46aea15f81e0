#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lsub {

class ImmersionChart;

/// Vector-valued function of chart coordinates, writing `out.size()` values.
using ChartVectorFn = std::function<void(std::span<const double> u, std::span<double> out)>;

/// Central-difference derivatives with one Richardson level (steps h, h/2).
/// The stencil reaches +-h along every axis and +-h on both axes of each
/// mixed pair; it must stay in the chart's evaluation domain.
struct FdFirstSecond {
  int n = 0;
  int m = 0;
  std::vector<double> value;  // m
  std::vector<double> grad;   // n*m
  std::vector<double> hess;   // n*n*m

  double d1(int i, int c) const { return grad[i * m + c]; }
  double d2(int i, int j, int c) const { return hess[(i * n + j) * m + c]; }
};

/// Per-axis step h_i = base * (1 + |u_i|).
std::vector<double> fd_steps(std::span<const double> u, double base);

/// Base step for chart-level field derivatives. Richardson leaves an h^4
/// truncation term against eps / h^2 rounding, balanced near eps^(1/6); the
/// larger step also tames the 1/sin^2 amplification next to polar margins.
inline constexpr double kFieldFdStep = 4e-3;

FdFirstSecond fd_first_second(const ImmersionChart& chart, const ChartVectorFn& f, int m,
                              std::span<const double> u, double base_step = kFieldFdStep);

/// Partial derivative along the multiset `dirs` (1 to 3 axes) using tensor
/// products of 1-D central stencils; reach is 2h for third order.
std::vector<double> fd_partial(const ImmersionChart& chart, const ChartVectorFn& f, int m,
                               std::span<const double> u, std::span<const int> dirs,
                               double base_step);

}  // namespace lsub
