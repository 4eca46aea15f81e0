#include "lsub/sampling.hpp"

namespace lsub {

std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::vector<ChartPoint> random_admissible_points(const ImmersionChart& chart, int count,
                                                 std::uint64_t seed) {
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  const int n = chart.intrinsic_dim();
  for (int i = 0; i < count; ++i) {
    auto eng = seeded_stream(seed, static_cast<std::uint64_t>(i));
    ChartPoint pt;
    pt.coords.resize(n);
    for (int a = 0; a < n; ++a) {
      const auto& ps = chart.param(a);
      std::uniform_real_distribution<double> dist(ps.admissible_lo(), ps.admissible_hi());
      pt.coords[a] = dist(eng);
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

std::vector<ChartPoint> halton_points(const ImmersionChart& chart, int count) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const int n = chart.intrinsic_dim();
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  for (int i = 1; i <= count; ++i) {
    ChartPoint pt;
    pt.coords.resize(n);
    for (int a = 0; a < n; ++a) {
      const auto& ps = chart.param(a);
      const double t = radical_inverse(static_cast<std::uint64_t>(i), kPrimes[a]);
      pt.coords[a] = ps.admissible_lo() + t * (ps.admissible_hi() - ps.admissible_lo());
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

}  // namespace lsub
