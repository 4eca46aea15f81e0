#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lsub/chart.hpp"

namespace lsub {

/// Engine for stream `index` under `seed`; streams are independent of how
/// many other streams were drawn.
std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform points in the admissible box (point i uses stream i).
std::vector<ChartPoint> random_admissible_points(const ImmersionChart& chart, int count,
                                                 std::uint64_t seed);

/// Radical inverse of `i` in `base`.
double radical_inverse(std::uint64_t i, int base);

/// Halton points (bases 2, 3, 5, ...) mapped to the admissible box, skipping index 0.
std::vector<ChartPoint> halton_points(const ImmersionChart& chart, int count);

}  // namespace lsub
