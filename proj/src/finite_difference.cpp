#include "lsub/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lsub/chart.hpp"
#include "lsub/errors.hpp"

namespace lsub {

namespace {

struct Stencil1D {
  std::vector<int> offsets;
  std::vector<double> coeffs;
};

// Second-order accurate central stencils in units of h; divide by h^order.
const Stencil1D& central_stencil(int order) {
  static const Stencil1D s1{{-1, 1}, {-0.5, 0.5}};
  static const Stencil1D s2{{-1, 0, 1}, {1.0, -2.0, 1.0}};
  static const Stencil1D s3{{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
  switch (order) {
    case 1: return s1;
    case 2: return s2;
    default: return s3;
  }
}

void evaluate_checked(const ImmersionChart& chart, const ChartVectorFn& f,
                      std::span<const double> v, std::span<double> out) {
  if (!chart.in_eval_domain(v)) {
    throw StencilOutsideChart("finite-difference stencil leaves the chart's evaluation domain");
  }
  f(v, out);
}

// Tensor-product central difference at a single step scale.
std::vector<double> tensor_difference(const ImmersionChart& chart, const ChartVectorFn& f, int m,
                                      std::span<const double> u,
                                      const std::vector<std::pair<int, int>>& axes,
                                      std::span<const double> h) {
  std::vector<double> acc(m, 0.0), val(m);
  std::vector<double> v(u.begin(), u.end());
  std::vector<std::size_t> idx(axes.size(), 0);
  double denom = 1.0;
  for (const auto& [axis, order] : axes) denom *= std::pow(h[axis], order);

  while (true) {
    double w = 1.0;
    std::copy(u.begin(), u.end(), v.begin());
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& st = central_stencil(axes[a].second);
      w *= st.coeffs[idx[a]];
      v[axes[a].first] += st.offsets[idx[a]] * h[axes[a].first];
    }
    evaluate_checked(chart, f, v, val);
    for (int c = 0; c < m; ++c) acc[c] += w * val[c];

    std::size_t a = 0;
    for (; a < axes.size(); ++a) {
      if (++idx[a] < central_stencil(axes[a].second).offsets.size()) break;
      idx[a] = 0;
    }
    if (a == axes.size()) break;
  }
  for (auto& x : acc) x /= denom;
  return acc;
}

}  // namespace

std::vector<double> fd_steps(std::span<const double> u, double base) {
  std::vector<double> h(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) h[i] = base * (1.0 + std::abs(u[i]));
  return h;
}

std::vector<double> fd_partial(const ImmersionChart& chart, const ChartVectorFn& f, int m,
                               std::span<const double> u, std::span<const int> dirs,
                               double base_step) {
  std::map<int, int> mult;
  for (int d : dirs) ++mult[d];
  const std::vector<std::pair<int, int>> axes(mult.begin(), mult.end());

  const auto h = fd_steps(u, base_step);
  std::vector<double> h2(h);
  for (auto& x : h2) x *= 0.5;
  const auto coarse = tensor_difference(chart, f, m, u, axes, h);
  const auto fine = tensor_difference(chart, f, m, u, axes, h2);
  std::vector<double> out(m);
  for (int c = 0; c < m; ++c) out[c] = (4.0 * fine[c] - coarse[c]) / 3.0;
  return out;
}

FdFirstSecond fd_first_second(const ImmersionChart& chart, const ChartVectorFn& f, int m,
                              std::span<const double> u, double base_step) {
  const int n = static_cast<int>(u.size());
  FdFirstSecond r;
  r.n = n;
  r.m = m;
  r.value.assign(m, 0.0);
  r.grad.assign(n * m, 0.0);
  r.hess.assign(n * n * m, 0.0);

  const auto h = fd_steps(u, base_step);
  std::vector<double> v(u.begin(), u.end());
  evaluate_checked(chart, f, v, r.value);

  // Axis samples at +-h and +-h/2: [scale][sign] -> m values.
  std::vector<double> fp(m), fm(m), fp2(m), fm2(m);
  for (int i = 0; i < n; ++i) {
    auto eval_at = [&](double off, std::vector<double>& out) {
      std::copy(u.begin(), u.end(), v.begin());
      v[i] += off;
      evaluate_checked(chart, f, v, out);
    };
    eval_at(h[i], fp);
    eval_at(-h[i], fm);
    eval_at(0.5 * h[i], fp2);
    eval_at(-0.5 * h[i], fm2);
    const double hh = h[i], hh2 = 0.5 * h[i];
    for (int c = 0; c < m; ++c) {
      const double d1c = (fp[c] - fm[c]) / (2.0 * hh);
      const double d1f = (fp2[c] - fm2[c]) / (2.0 * hh2);
      r.grad[i * m + c] = (4.0 * d1f - d1c) / 3.0;
      const double d2c = (fp[c] - 2.0 * r.value[c] + fm[c]) / (hh * hh);
      const double d2f = (fp2[c] - 2.0 * r.value[c] + fm2[c]) / (hh2 * hh2);
      r.hess[(i * n + i) * m + c] = (4.0 * d2f - d2c) / 3.0;
    }
  }

  std::vector<double> fpp(m), fpm(m), fmp(m), fmm(m);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> est(2 * m);
      for (int s = 0; s < 2; ++s) {
        const double hi = s == 0 ? h[i] : 0.5 * h[i];
        const double hj = s == 0 ? h[j] : 0.5 * h[j];
        auto eval_at = [&](double oi, double oj, std::vector<double>& out) {
          std::copy(u.begin(), u.end(), v.begin());
          v[i] += oi;
          v[j] += oj;
          evaluate_checked(chart, f, v, out);
        };
        eval_at(hi, hj, fpp);
        eval_at(hi, -hj, fpm);
        eval_at(-hi, hj, fmp);
        eval_at(-hi, -hj, fmm);
        for (int c = 0; c < m; ++c) est[s * m + c] = (fpp[c] - fpm[c] - fmp[c] + fmm[c]) / (4.0 * hi * hj);
      }
      for (int c = 0; c < m; ++c) {
        const double d = (4.0 * est[m + c] - est[c]) / 3.0;
        r.hess[(i * n + j) * m + c] = d;
        r.hess[(j * n + i) * m + c] = d;
      }
    }
  }
  return r;
}

}  // namespace lsub
