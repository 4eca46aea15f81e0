#pragma once

/// \file taylor.hpp
/// Forward-mode derivative scalars.
///
/// `Taylor3` carries a value together with all partial derivatives up to
/// third order in `dim()` chart variables. Only the canonical entries
/// (i <= j <= k) are stored and computed, so the symmetric views returned by
/// `d2`/`d3` are bitwise symmetric by construction.
///
/// `Dual` is the first-order counterpart used to differentiate frame fields.

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace lsub {

inline constexpr int kMaxChartDim = 6;

namespace detail {

constexpr int pair_index(int i, int j) { return j * (j + 1) / 2 + i; }  // i <= j
constexpr int triple_index(int i, int j, int k) {                      // i <= j <= k
  return k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i;
}

inline constexpr int kPairCount = kMaxChartDim * (kMaxChartDim + 1) / 2;
inline constexpr int kTripleCount = kMaxChartDim * (kMaxChartDim + 1) * (kMaxChartDim + 2) / 6;

inline void sort3(int& i, int& j, int& k) {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
}

}  // namespace detail

class Taylor3 {
 public:
  Taylor3() = default;
  // Implicit on purpose: chart formulas mix literals and jets freely.
  Taylor3(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  static Taylor3 variable(int dim, int index, double value) {
    Taylor3 t(value);
    t.dim_ = dim;
    t.g_[index] = 1.0;
    return t;
  }

  int dim() const { return dim_; }
  double value() const { return v_; }
  double d1(int i) const { return g_[i]; }
  double d2(int i, int j) const {
    if (i > j) std::swap(i, j);
    return h_[detail::pair_index(i, j)];
  }
  double d3(int i, int j, int k) const {
    detail::sort3(i, j, k);
    return t_[detail::triple_index(i, j, k)];
  }

  Taylor3 operator-() const {
    Taylor3 r = *this;
    r.v_ = -r.v_;
    for (auto& x : r.g_) x = -x;
    for (auto& x : r.h_) x = -x;
    for (auto& x : r.t_) x = -x;
    return r;
  }

  friend Taylor3 operator+(const Taylor3& a, const Taylor3& b) {
    Taylor3 r;
    r.dim_ = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    r.v_ = a.v_ + b.v_;
    for (int i = 0; i < kMaxChartDim; ++i) r.g_[i] = a.g_[i] + b.g_[i];
    for (int i = 0; i < detail::kPairCount; ++i) r.h_[i] = a.h_[i] + b.h_[i];
    for (int i = 0; i < detail::kTripleCount; ++i) r.t_[i] = a.t_[i] + b.t_[i];
    return r;
  }
  friend Taylor3 operator-(const Taylor3& a, const Taylor3& b) { return a + (-b); }

  friend Taylor3 operator*(const Taylor3& a, const Taylor3& b) {
    using detail::pair_index;
    using detail::triple_index;
    Taylor3 c;
    const int n = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    c.dim_ = n;
    c.v_ = a.v_ * b.v_;
    for (int i = 0; i < n; ++i) c.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i <= j; ++i) {
        const int p = pair_index(i, j);
        c.h_[p] = a.h_[p] * b.v_ + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i] + a.v_ * b.h_[p];
      }
    }
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j <= k; ++j) {
        for (int i = 0; i <= j; ++i) {
          const int ij = pair_index(i, j), ik = pair_index(i, k), jk = pair_index(j, k);
          const int t = triple_index(i, j, k);
          c.t_[t] = a.t_[t] * b.v_ + a.h_[ij] * b.g_[k] + a.h_[ik] * b.g_[j] + a.h_[jk] * b.g_[i] +
                    a.g_[i] * b.h_[jk] + a.g_[j] * b.h_[ik] + a.g_[k] * b.h_[ij] + a.v_ * b.t_[t];
        }
      }
    }
    return c;
  }

  friend Taylor3 operator/(const Taylor3& a, const Taylor3& b) { return a * reciprocal(b); }

  Taylor3& operator+=(const Taylor3& b) { return *this = *this + b; }
  Taylor3& operator-=(const Taylor3& b) { return *this = *this - b; }
  Taylor3& operator*=(const Taylor3& b) { return *this = *this * b; }

  // Composition with a univariate function given its derivatives f0..f3 at value().
  Taylor3 compose(double f0, double f1, double f2, double f3) const {
    using detail::pair_index;
    using detail::triple_index;
    Taylor3 c;
    const int n = dim_;
    c.dim_ = n;
    c.v_ = f0;
    for (int i = 0; i < n; ++i) c.g_[i] = f1 * g_[i];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i <= j; ++i) {
        const int p = pair_index(i, j);
        c.h_[p] = f2 * g_[i] * g_[j] + f1 * h_[p];
      }
    }
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j <= k; ++j) {
        for (int i = 0; i <= j; ++i) {
          const int t = triple_index(i, j, k);
          c.t_[t] = f3 * g_[i] * g_[j] * g_[k] +
                    f2 * (h_[pair_index(i, j)] * g_[k] + h_[pair_index(i, k)] * g_[j] +
                          h_[pair_index(j, k)] * g_[i]) +
                    f1 * t_[t];
        }
      }
    }
    return c;
  }

  friend Taylor3 reciprocal(const Taylor3& a) {
    const double x = a.v_;
    const double r = 1.0 / x;
    return a.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
  }

 private:
  int dim_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxChartDim> g_{};
  std::array<double, detail::kPairCount> h_{};
  std::array<double, detail::kTripleCount> t_{};
};

inline Taylor3 sin(const Taylor3& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}
inline Taylor3 cos(const Taylor3& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}
inline Taylor3 exp(const Taylor3& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}
inline Taylor3 sqrt(const Taylor3& a) {
  const double s = std::sqrt(a.value());
  const double inv = 1.0 / s;
  return a.compose(s, 0.5 * inv, -0.25 * inv * inv * inv, 0.375 * inv * inv * inv * inv * inv);
}
// Integer power; m may be negative when the value is non-zero.
inline Taylor3 pow(const Taylor3& a, int m) {
  const double x = a.value();
  auto ipow = [](double b, int e) {
    if (e == 0) return 1.0;
    if (e < 0) return 1.0 / std::pow(b, -e);
    return std::pow(b, e);
  };
  const double md = m;
  return a.compose(ipow(x, m), md * ipow(x, m - 1), md * (md - 1) * ipow(x, m - 2),
                   md * (md - 1) * (md - 2) * ipow(x, m - 3));
}

// ---------------------------------------------------------------------------

class Dual {
 public:
  Dual() = default;
  Dual(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  double value() const { return v_; }
  double d(int i) const { return g_[i]; }
  void set_d(int i, double x) {
    g_[i] = x;
    if (i + 1 > dim_) dim_ = i + 1;
  }
  int dim() const { return dim_; }

  Dual operator-() const {
    Dual r = *this;
    r.v_ = -r.v_;
    for (auto& x : r.g_) x = -x;
    return r;
  }
  friend Dual operator+(const Dual& a, const Dual& b) {
    Dual r;
    r.dim_ = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    r.v_ = a.v_ + b.v_;
    for (int i = 0; i < r.dim_; ++i) r.g_[i] = a.g_[i] + b.g_[i];
    return r;
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    Dual r;
    r.dim_ = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    r.v_ = a.v_ - b.v_;
    for (int i = 0; i < r.dim_; ++i) r.g_[i] = a.g_[i] - b.g_[i];
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.dim_ = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    r.v_ = a.v_ * b.v_;
    for (int i = 0; i < r.dim_; ++i) r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    r.dim_ = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    r.v_ = a.v_ / b.v_;
    const double inv = 1.0 / (b.v_ * b.v_);
    for (int i = 0; i < r.dim_; ++i) r.g_[i] = (a.g_[i] * b.v_ - a.v_ * b.g_[i]) * inv;
    return r;
  }
  Dual& operator+=(const Dual& b) { return *this = *this + b; }
  Dual& operator-=(const Dual& b) { return *this = *this - b; }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }

  friend Dual sqrt(const Dual& a) {
    Dual r;
    r.dim_ = a.dim_;
    r.v_ = std::sqrt(a.v_);
    const double f = 0.5 / r.v_;
    for (int i = 0; i < r.dim_; ++i) r.g_[i] = f * a.g_[i];
    return r;
  }

 private:
  int dim_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxChartDim> g_{};
};

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value(); }
inline double value_of(const Taylor3& x) { return x.value(); }

}  // namespace lsub
