#pragma once

// Frame construction shared by the double pass and the first-order Dual pass.
// The Dual pass replays the pivots chosen by the double pass so that both
// describe the same smooth local frame.

#include <cmath>
#include <vector>

#include "lsub/errors.hpp"
#include "lsub/taylor.hpp"

namespace lsub::detail {

template <class T>
using Vec = std::vector<T>;

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double sqrt_of(double x) { return std::sqrt(x); }
inline Dual sqrt_of(const Dual& x) { return sqrt(x); }

template <class T>
struct FrameCore {
  int n = 0;
  int N = 0;
  Vec<T> X;
  Vec<Vec<T>> dX;   // n rows
  Vec<Vec<T>> ddX;  // n*n rows
  Vec<Vec<T>> g;
  Vec<Vec<T>> ginv;
  Vec<Vec<T>> tangent;  // n rows
  Vec<Vec<T>> E;        // n x n
  Vec<T> H;
  Vec<T> Xperp;
  Vec<T> Hf;
  Vec<Vec<T>> normal;  // p rows
  bool aligned = false;
  std::vector<int> pivots;

  int p() const { return N - n; }
};

// Inverse of a small symmetric positive definite matrix without pivoting.
template <class T>
Vec<Vec<T>> spd_inverse(const Vec<Vec<T>>& a) {
  const int n = static_cast<int>(a.size());
  Vec<Vec<T>> m = a, inv(n, Vec<T>(n, T(0.0)));
  for (int i = 0; i < n; ++i) inv[i][i] = T(1.0);
  for (int c = 0; c < n; ++c) {
    const T piv = m[c][c];
    for (int j = 0; j < n; ++j) {
      m[c][j] = m[c][j] / piv;
      inv[c][j] = inv[c][j] / piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const T f = m[r][c];
      for (int j = 0; j < n; ++j) {
        m[r][j] -= f * m[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

template <class T>
void orthogonalize(Vec<T>& v, const Vec<Vec<T>>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const T c = dot(v, b);
      for (std::size_t a = 0; a < v.size(); ++a) v[a] -= c * b[a];
    }
  }
}

template <class T>
void build_metric_and_tangents(FrameCore<T>& fc) {
  const int n = fc.n;
  fc.g.assign(n, Vec<T>(n, T(0.0)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) fc.g[i][j] = fc.g[j][i] = dot(fc.dX[i], fc.dX[j]);
  fc.ginv = spd_inverse(fc.g);

  // Modified Gram-Schmidt with coefficient tracking: tangent[i] = sum_a E[i][a] dX[a].
  fc.tangent.clear();
  fc.E.assign(n, Vec<T>(n, T(0.0)));
  for (int i = 0; i < n; ++i) {
    Vec<T> v = fc.dX[i];
    Vec<T> c(n, T(0.0));
    c[i] = T(1.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) {
        const T s = dot(v, fc.tangent[j]);
        for (int a = 0; a < fc.N; ++a) v[a] -= s * fc.tangent[j][a];
        for (int a = 0; a < n; ++a) c[a] -= s * fc.E[j][a];
      }
    }
    const T len = sqrt_of(dot(v, v));
    if (!(value_of(len) > 0.0)) throw RankDeficientJet("tangent vectors are linearly dependent");
    for (auto& x : v) x = x / len;
    for (auto& x : c) x = x / len;
    fc.tangent.push_back(std::move(v));
    fc.E[i] = std::move(c);
  }
}

template <class T>
Vec<T> perp(const FrameCore<T>& fc, const Vec<T>& v) {
  Vec<T> r = v;
  for (const auto& t : fc.tangent) {
    const T c = dot(v, t);
    for (int a = 0; a < fc.N; ++a) r[a] -= c * t[a];
  }
  return r;
}

template <class T>
void build_mean_curvature(FrameCore<T>& fc) {
  const int n = fc.n;
  Vec<T> acc(fc.N, T(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < fc.N; ++c) acc[c] += fc.ginv[a][b] * fc.ddX[a * n + b][c];
  fc.H = perp(fc, acc);
  fc.Xperp = perp(fc, fc.X);
  fc.Hf.resize(fc.N);
  for (int c = 0; c < fc.N; ++c) fc.Hf[c] = fc.H[c] + fc.Xperp[c];
}

inline constexpr double kAlignThreshold = 1e-10;
inline constexpr double kPivotFloor = 1e-13;

// When `replay` is set, its alignment flag and pivots are reused.
template <class T>
void build_normals(FrameCore<T>& fc, const Vec<T>* candidate, const FrameCore<double>* replay) {
  const int p = fc.p();
  Vec<Vec<T>> basis = fc.tangent;
  Vec<T> aligned_vec;
  bool aligned;
  if (replay) {
    aligned = replay->aligned;
  } else {
    aligned = false;
    if (candidate) {
      double s = 0.0;
      for (const auto& x : *candidate) s += value_of(x) * value_of(x);
      aligned = std::sqrt(s) > kAlignThreshold;
    }
  }
  if (aligned) {
    aligned_vec = *candidate;
    orthogonalize(aligned_vec, basis);
    const T len = sqrt_of(dot(aligned_vec, aligned_vec));
    if (!(value_of(len) > kPivotFloor)) throw DegenerateFrame("aligned normal candidate is tangent");
    for (auto& x : aligned_vec) x = x / len;
    basis.push_back(aligned_vec);
  }

  const int free_count = aligned ? p - 1 : p;
  std::vector<bool> used(fc.N, false);
  fc.normal.clear();
  fc.pivots.clear();
  for (int s = 0; s < free_count; ++s) {
    int best = -1;
    if (replay) {
      best = replay->pivots[s];
    } else {
      double best_res = -1.0;
      for (int a = 0; a < fc.N; ++a) {
        if (used[a]) continue;
        double r2 = 1.0;
        for (const auto& b : basis) r2 -= value_of(b[a]) * value_of(b[a]);
        const double res = std::sqrt(std::max(r2, 0.0));
        if (res > best_res) {
          best_res = res;
          best = a;
        }
      }
      if (best < 0 || best_res < kPivotFloor) throw DegenerateFrame("no ambient axis left to seed a normal");
    }
    used[best] = true;
    Vec<T> v(fc.N, T(0.0));
    v[best] = T(1.0);
    orthogonalize(v, basis);
    const T len = sqrt_of(dot(v, v));
    if (!(value_of(len) > kPivotFloor)) throw DegenerateFrame("normal pivot residual below threshold");
    for (auto& x : v) x = x / len;
    basis.push_back(v);
    fc.normal.push_back(std::move(v));
    fc.pivots.push_back(best);
  }
  if (aligned) fc.normal.push_back(std::move(aligned_vec));
  fc.aligned = aligned;
}

}  // namespace lsub::detail
