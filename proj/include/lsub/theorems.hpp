#pragma once

// Hypothesis and conclusion checks for the halfspace, ball, cylinder and gap
// theorems on lambda-submanifolds. Hypotheses are tested on deterministic
// Halton samples of the admissible box, so extrema are sampled, not certified.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsub/catalog.hpp"

namespace lsub {

struct TheoremVerdict {
  std::string theorem_id;
  bool hypothesis_holds = false;
  // Signed distance to the hypothesis boundary; NaN when the theorem does
  // not apply to the surface at all.
  double hypothesis_margin = 0.0;
  std::string conclusion_claim;
  std::optional<bool> conclusion_verified;  // empty when the hypothesis fails
  std::string classification;
  std::map<std::string, double> diagnostics;
  std::vector<double> worst_point;  // chart point deciding the margin or the failed conclusion
  std::string notes;
};

inline constexpr double kHypothesisTol = 1e-8;
inline constexpr double kConclusionTol = 1e-8;
inline constexpr int kTheoremSamples = 256;

/// halfspace.hyperplane, halfspace.orthonormal_vectors, halfspace.bernstein.
std::vector<TheoremVerdict> halfspace_check(const CatalogSurface& surface, int n_samples = kTheoremSamples);

/// ball.outer, ball.inner, ball.sphere_corollary.
std::vector<TheoremVerdict> ball_check(const CatalogSurface& surface, int n_samples = kTheoremSamples);

/// cylinder.inner, cylinder.outer with X = (u, v), u the first k+1
/// coordinates. Throws InvalidK unless 1 <= k <= n+p-2; the inner theorem
/// additionally needs k >= p.
std::vector<TheoremVerdict> cylinder_check(const CatalogSurface& surface, int k, int n_samples = kTheoremSamples);

/// gap.weighted_condition, gap.codim1_bound, gap.higher_codim_bound.
std::vector<TheoremVerdict> gap_check(const CatalogSurface& surface, int n_samples = kTheoremSamples);

/// Every check above. The cylinder check uses `k` when given, else the
/// family's k parameter, else p; it is skipped when no k is admissible.
std::vector<TheoremVerdict> all_theorems(const CatalogSurface& surface, std::optional<int> k = std::nullopt,
                                         int n_samples = kTheoremSamples);

/// Soundness: a verdict fails only when its hypothesis holds and its
/// conclusion does not.
inline bool verdict_ok(const TheoremVerdict& v) { return !v.hypothesis_holds || v.conclusion_verified.value_or(false); }

}  // namespace lsub
