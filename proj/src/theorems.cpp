#include "lsub/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lsub/errors.hpp"
#include "lsub/geometry.hpp"
#include "lsub/identities.hpp"
#include "lsub/parallel.hpp"
#include "lsub/sampling.hpp"

namespace lsub {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Sample {
  std::vector<double> u;
  PointGeometry pg;
  double norm_X = 0.0;
  double norm_X_perp = 0.0;
  double norm_A = 0.0;
  double norm_H = 0.0;
};

struct Samples {
  std::vector<Sample> s;
  double lambda = 0.0;
  int n = 0;
  int p = 0;
  int N = 0;
  bool compact = false;
};

Samples sample_surface(const CatalogSurface& surface, int n_samples) {
  if (n_samples < 1) throw std::invalid_argument("theorem checks need at least one sample");
  Samples out;
  out.lambda = require_lambda_surface(surface);
  out.n = surface.n();
  out.p = surface.p();
  out.N = surface.N();
  out.compact = surface.chart.compact();
  const auto pts = halton_points(surface.chart, n_samples);
  out.s.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    Sample& s = out.s[i];
    s.u = pts[i].coords;
    s.pg = point_geometry(surface.chart, pts[i]);
    s.norm_X = s.pg.shape.X.norm();
    s.norm_X_perp = s.pg.shape.X_perp.norm();
    s.norm_A = std::sqrt(s.pg.shape.A2);
    s.norm_H = s.pg.shape.H_vec.norm();
  });
  return out;
}

struct Extremum {
  double value;
  int index;
};

template <class F>
Extremum min_over(const Samples& S, F f) {
  Extremum e{std::numeric_limits<double>::infinity(), -1};
  for (std::size_t i = 0; i < S.s.size(); ++i) {
    const double v = f(S.s[i]);
    if (v < e.value) e = {v, static_cast<int>(i)};
  }
  return e;
}

template <class F>
Extremum max_over(const Samples& S, F f) {
  const auto e = min_over(S, [&](const Sample& s) { return -f(s); });
  return {-e.value, e.index};
}

TheoremVerdict start(const std::string& id, const std::string& claim, const Samples& S, Extremum margin) {
  TheoremVerdict v;
  v.theorem_id = id;
  v.conclusion_claim = claim;
  v.hypothesis_margin = margin.value;
  v.hypothesis_holds = margin.value >= -kHypothesisTol;
  if (margin.index >= 0) v.worst_point = S.s[margin.index].u;
  v.diagnostics["lambda"] = S.lambda;
  return v;
}

TheoremVerdict not_applicable(const std::string& id, const std::string& claim, const Samples& S,
                              const std::string& why) {
  TheoremVerdict v;
  v.theorem_id = id;
  v.conclusion_claim = claim;
  v.hypothesis_margin = kNaN;
  v.hypothesis_holds = false;
  v.diagnostics["lambda"] = S.lambda;
  v.notes = why;
  return v;
}

// Records the conclusion when the hypothesis holds. `worst` names the sample
// with the largest deviation from the claim.
void conclude(TheoremVerdict& v, const Samples& S, Extremum deviation, bool extra_ok = true) {
  v.diagnostics["conclusion_deviation"] = deviation.value;
  if (!v.hypothesis_holds) return;
  const bool ok = deviation.value <= kConclusionTol && extra_ok;
  v.conclusion_verified = ok;
  if (!ok && deviation.index >= 0) v.worst_point = S.s[deviation.index].u;
}

double u_norm(const Sample& s, int k) { return s.pg.shape.X.head(k + 1).norm(); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// Number of non-zero principal curvatures of A^alpha.
int shape_rank(const ShapeData& sd, int alpha) {
  Eigen::MatrixXd M(sd.n, sd.n);
  for (int i = 0; i < sd.n; ++i)
    for (int j = 0; j < sd.n; ++j) M(i, j) = sd.hij(alpha, i, j);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  int k = 0;
  for (int i = 0; i < sd.n; ++i)
    if (std::abs(es.eigenvalues()(i)) > kConclusionTol) ++k;
  return k;
}

}  // namespace

std::vector<TheoremVerdict> halfspace_check(const CatalogSurface& surface, int n_samples) {
  const Samples S = sample_surface(surface, n_samples);
  const double lam = S.lambda;
  const int last = S.N - 1;
  std::vector<TheoremVerdict> out;

  {
    // Test hyperplane <X, s e_N> = lambda with the sign giving the larger margin.
    const auto up = min_over(S, [&](const Sample& s) { return s.pg.shape.X(last) - lam; });
    const auto down = min_over(S, [&](const Sample& s) { return -s.pg.shape.X(last) - lam; });
    const double sign = up.value >= down.value ? 1.0 : -1.0;
    auto v = start("halfspace.hyperplane", "Sigma lies in the hyperplane x_N = " + fmt(sign * lam), S,
                   sign > 0 ? up : down);
    v.diagnostics["min_x_N"] = min_over(S, [&](const Sample& s) { return s.pg.shape.X(last); }).value;
    v.diagnostics["max_x_N"] = max_over(S, [&](const Sample& s) { return s.pg.shape.X(last); }).value;
    v.diagnostics["side"] = sign;
    conclude(v, S, max_over(S, [&](const Sample& s) { return std::abs(sign * s.pg.shape.X(last) - lam); }));
    out.push_back(v);
  }

  const auto plane_deviation = [&](const Sample& s) {
    return std::max(s.norm_A, std::abs(s.norm_X_perp - lam));
  };
  {
    // v_j = +-e_{N-p+1}, ..., +-e_N, each sign picked like the hyperplane
    // test. The two-sided |<X, v_j>| >= lambda is vacuous at lambda = 0.
    Extremum m{std::numeric_limits<double>::infinity(), -1};
    for (int a = S.N - S.p; a < S.N; ++a) {
      const auto up = min_over(S, [&](const Sample& s) { return s.pg.shape.X(a) - lam; });
      const auto down = min_over(S, [&](const Sample& s) { return -s.pg.shape.X(a) - lam; });
      const auto e = up.value >= down.value ? up : down;
      if (e.value < m.value) m = e;
    }
    auto v = start("halfspace.orthonormal_vectors", "Sigma is an n-plane at distance " + fmt(lam), S, m);
    v.notes = "test vectors are the last p ambient axes, one side each";
    conclude(v, S, max_over(S, plane_deviation));
    out.push_back(v);
  }

  if (!surface.expected.graph) {
    out.push_back(not_applicable("halfspace.bernstein", "Sigma is an n-plane", S,
                                 "applies to entire graphs over the first n coordinates only"));
  } else {
    std::vector<Extremum> mins;
    for (int a = S.n; a < S.N; ++a)
      mins.push_back(min_over(S, [&](const Sample& s) { return std::abs(s.pg.shape.X(a)) - lam; }));
    std::sort(mins.begin(), mins.end(), [](const Extremum& a, const Extremum& b) { return a.value > b.value; });
    // The (p-1) largest must reach lambda; for p = 1 the hypothesis is vacuous.
    const Extremum m = S.p == 1 ? Extremum{0.0, -1} : mins[S.p - 2];
    auto v = start("halfspace.bernstein", "Sigma is an n-plane", S, m);
    if (S.p == 1) v.notes = "no component bound is required when p = 1";
    conclude(v, S, max_over(S, [](const Sample& s) { return s.norm_A; }));
    out.push_back(v);
  }
  return out;
}

std::vector<TheoremVerdict> ball_check(const CatalogSurface& surface, int n_samples) {
  const Samples S = sample_surface(surface, n_samples);
  const double lam = S.lambda;
  const double r1 = sphere_radius_for_lambda(lam, S.n, -1), r2 = sphere_radius_for_lambda(lam, S.n, +1);
  const auto min_X = min_over(S, [](const Sample& s) { return s.norm_X; });
  const auto max_X = max_over(S, [](const Sample& s) { return s.norm_X; });
  auto add_diag = [&](TheoremVerdict& v) {
    v.diagnostics["r1"] = r1;
    v.diagnostics["r2"] = r2;
    v.diagnostics["min_norm_X"] = min_X.value;
    v.diagnostics["max_norm_X"] = max_X.value;
  };
  const std::string in_sphere = S.p == 1 ? "Sigma = S^n(" : "Sigma is compact and minimal in S^(n+p-1)(";
  std::vector<TheoremVerdict> out;

  auto outer = start("ball.outer", in_sphere + fmt(r2) + ")", S, {min_X.value - r2, min_X.index});
  add_diag(outer);
  conclude(outer, S, max_over(S, [&](const Sample& s) { return std::abs(s.norm_X - r2); }), S.compact);
  out.push_back(outer);

  auto inner = start("ball.inner", in_sphere + fmt(r1) + ")", S, {r1 - max_X.value, max_X.index});
  add_diag(inner);
  conclude(inner, S, max_over(S, [&](const Sample& s) { return std::abs(s.norm_X - r1); }), S.compact);
  inner.notes = "the enclosing ball has radius r1, matching the conclusion";
  out.push_back(inner);

  const auto min_perp = min_over(S, [](const Sample& s) { return s.norm_X_perp; });
  auto cor = start("ball.sphere_corollary", "|H - H_f| = " + fmt(r2) + " and Sigma is minimal in S^(n+p-1)(" +
                                               fmt(r2) + ")",
                   S, {min_perp.value - r2, min_perp.index});
  add_diag(cor);
  cor.diagnostics["min_norm_X_perp"] = min_perp.value;
  conclude(cor, S, max_over(S, [&](const Sample& s) {
             return std::max(std::abs(s.norm_X_perp - r2), std::abs(s.norm_X - r2));
           }));
  out.push_back(cor);
  return out;
}

std::vector<TheoremVerdict> cylinder_check(const CatalogSurface& surface, int k, int n_samples) {
  const int n = surface.n(), p = surface.p();
  if (k < 1 || k > n + p - 2) {
    throw InvalidK("k = " + std::to_string(k) + " is outside 1.." + std::to_string(n + p - 2));
  }
  const Samples S = sample_surface(surface, n_samples);
  const double lam = S.lambda;
  const auto min_u = min_over(S, [&](const Sample& s) { return u_norm(s, k); });
  const auto max_u = max_over(S, [&](const Sample& s) { return u_norm(s, k); });
  const int q = n + p - k - 1;
  auto add_diag = [&](TheoremVerdict& v, double r) {
    v.diagnostics["k"] = k;
    v.diagnostics["q"] = q;
    v.diagnostics["radius"] = r;
    v.diagnostics["min_norm_u"] = min_u.value;
    v.diagnostics["max_norm_u"] = max_u.value;
  };
  std::vector<TheoremVerdict> out;

  const double r_in = (-lam + std::sqrt(lam * lam + 4.0 * (n - q))) / 2.0;
  const std::string claim_in = "Sigma lies in S^" + std::to_string(k) + "(" + fmt(r_in) + ") x R^" + std::to_string(q);
  if (k < p) {
    auto v = not_applicable("cylinder.inner", claim_in, S, "the inner cylinder theorem needs p <= k");
    add_diag(v, r_in);
    out.push_back(v);
  } else {
    auto v = start("cylinder.inner", claim_in, S, {r_in - max_u.value, max_u.index});
    add_diag(v, r_in);
    conclude(v, S, max_over(S, [&](const Sample& s) { return std::abs(u_norm(s, k) - r_in); }));
    out.push_back(v);
  }

  const double r_out = sphere_radius_for_lambda(lam, n, +1);
  auto v = start("cylinder.outer",
                 "Sigma lies in S^" + std::to_string(k) + "(" + fmt(r_out) + ") x R^" + std::to_string(q), S,
                 {min_u.value - r_out, min_u.index});
  add_diag(v, r_out);
  conclude(v, S, max_over(S, [&](const Sample& s) { return std::abs(u_norm(s, k) - r_out); }));
  out.push_back(v);
  return out;
}

std::vector<TheoremVerdict> gap_check(const CatalogSurface& surface, int n_samples) {
  const Samples S = sample_surface(surface, n_samples);
  const double lam = S.lambda;
  const int last = S.p - 1;
  const bool positive = lam > kHypothesisTol;
  const auto sup_A = max_over(S, [](const Sample& s) { return s.norm_A; });
  const auto inf_A = min_over(S, [](const Sample& s) { return s.norm_A; });
  auto add_diag = [&](TheoremVerdict& v) {
    v.diagnostics["sup_norm_A"] = sup_A.value;
    v.diagnostics["inf_norm_A"] = inf_A.value;
  };
  const std::string need_positive = "the gap theorems assume lambda > 0";
  std::vector<TheoremVerdict> out;

  {
    const std::string claim = "Sigma is a plane at distance lambda, a round sphere or a round cylinder";
    const auto m = min_over(S, [](const Sample& s) { return s.norm_H - s.pg.shape.A2 * s.norm_X_perp; });
    // |H^{n+p}| - |A|^2 |H^{n+p} - lambda| in the H_f-aligned frame.
    const auto saturation = max_over(S, [&](const Sample& s) {
      const auto& sd = s.pg.shape;
      if (!s.pg.frame.hf_aligned) return std::abs(s.norm_H - sd.A2 * s.norm_X_perp);
      const double h = sd.H_alpha(last);
      return std::abs(std::abs(h) - sd.A2 * std::abs(h - lam));
    });
    TheoremVerdict v = positive ? start("gap.weighted_condition", claim, S, m)
                                : not_applicable("gap.weighted_condition", claim, S, need_positive);
    if (!positive) v.hypothesis_margin = m.value;
    add_diag(v);
    v.diagnostics["eq_saturation_residual"] = saturation.value;
    if (v.hypothesis_holds) {
      if (sup_A.value <= kConclusionTol) {
        v.classification = "plane at distance lambda";
        conclude(v, S, max_over(S, [&](const Sample& s) { return std::abs(s.norm_X_perp - lam); }));
      } else {
        const auto& sd0 = S.s[0].pg.shape;
        const int k = shape_rank(sd0, last);
        const double r = k / S.s[0].norm_H;
        // Offset of the (n+1)-plane holding Sigma: X^perp minus its H component.
        const Eigen::VectorXd Hhat = sd0.H_vec / sd0.H_vec.norm();
        const Eigen::VectorXd off = sd0.X_perp - sd0.X_perp.dot(Hhat) * Hhat;
        const double h = off.norm();
        const double mu = std::sqrt(std::max(lam * lam - h * h, 0.0));
        const double ra = (mu + std::sqrt(mu * mu + 4.0 * k)) / 2.0, rb = (-mu + std::sqrt(mu * mu + 4.0 * k)) / 2.0;
        const double radius_res = std::min(std::abs(r - ra), std::abs(r - rb));
        v.classification = k == S.n ? "sphere S^" + std::to_string(k) + "(" + fmt(r) + ")"
                                    : "cylinder S^" + std::to_string(k) + "(" + fmt(r) + ") x R^" +
                                          std::to_string(S.n - k);
        v.diagnostics["radius"] = r;
        v.diagnostics["plane_offset"] = h;
        v.diagnostics["radius_residual"] = radius_res;
        const auto other = max_over(S, [&](const Sample& s) {
          double m2 = 0.0;
          for (int al = 0; al < last; ++al) m2 = std::max({m2, std::abs(s.pg.shape.H_alpha(al)), s.pg.shape.S(al, al)});
          return m2;
        });
        v.diagnostics["max_other_normal_component"] = other.value;
        const auto dev = max_over(S, [&](const Sample& s) {
          return std::max({std::abs(s.norm_A - sup_A.value), std::abs(s.norm_H - S.s[0].norm_H)});
        });
        const bool extra = other.value <= kConclusionTol && saturation.value <= kConclusionTol &&
                           radius_res <= kConclusionTol;
        conclude(v, S, dev, extra);
      }
    }
    out.push_back(v);
  }

  {
    const double b = (-lam + std::sqrt(lam * lam + 4.0)) / 2.0;
    const double r = (lam + std::sqrt(lam * lam + 4.0)) / 2.0;
    const std::string claim = "Sigma is a hyperplane or S^1(" + fmt(r) + ") x R^(n-1)";
    TheoremVerdict v;
    if (S.p != 1) {
      v = not_applicable("gap.codim1_bound", claim, S, "needs codimension 1");
    } else if (!positive) {
      v = not_applicable("gap.codim1_bound", claim, S, need_positive);
    } else {
      v = start("gap.codim1_bound", claim, S, {b - sup_A.value, sup_A.index});
    }
    add_diag(v);
    v.diagnostics["bound"] = b;
    if (v.hypothesis_holds) {
      if (sup_A.value <= kConclusionTol) {
        v.classification = "hyperplane";
        conclude(v, S, sup_A);
      } else {
        const auto& sd0 = S.s[0].pg.shape;
        const bool rank1 = shape_rank(sd0, 0) == 1;
        v.classification = "cylinder S^1(" + fmt(1.0 / sup_A.value) + ") x R^" + std::to_string(S.n - 1);
        v.diagnostics["radius"] = 1.0 / sup_A.value;
        v.diagnostics["saturation"] = b - inf_A.value;
        conclude(v, S, max_over(S, [&](const Sample& s) { return std::abs(s.norm_A - b); }),
                 rank1 && std::abs(1.0 / sup_A.value - r) <= kConclusionTol);
      }
    }
    out.push_back(v);
  }

  {
    const double c = (-lam + std::sqrt(lam * lam + 6.0)) / 3.0;
    TheoremVerdict v;
    if (S.p < 2) {
      v = not_applicable("gap.higher_codim_bound", "Sigma is an n-plane", S, "needs codimension at least 2");
    } else if (!positive) {
      v = not_applicable("gap.higher_codim_bound", "Sigma is an n-plane", S, need_positive);
    } else {
      v = start("gap.higher_codim_bound", "Sigma is an n-plane", S, {c - sup_A.value, sup_A.index});
    }
    add_diag(v);
    v.diagnostics["bound"] = c;
    if (v.hypothesis_holds) {
      v.classification = "n-plane";
      conclude(v, S, sup_A);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<TheoremVerdict> all_theorems(const CatalogSurface& surface, std::optional<int> k, int n_samples) {
  std::vector<TheoremVerdict> out = halfspace_check(surface, n_samples);
  for (auto&& group : {ball_check(surface, n_samples), gap_check(surface, n_samples)})
    out.insert(out.end(), group.begin(), group.end());
  const int n = surface.n(), p = surface.p();
  int kk = k ? *k : (surface.spec.params.count("k") ? surface.spec.get_int("k") : p);
  if (!k && kk > n + p - 2) kk = n + p - 2;
  if (k || kk >= 1) {
    const auto cyl = cylinder_check(surface, kk, n_samples);
    out.insert(out.end(), cyl.begin(), cyl.end());
  }
  return out;
}

}  // namespace lsub
