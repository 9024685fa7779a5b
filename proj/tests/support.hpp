#pragma once

// Seeded generators and independent brute-force oracles shared by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace testing {

/// splitmix64; small, seedable, good enough for property sweeps.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
};

/// min(|v_j - v_i|, |v_k - v_j|) maximised over i <= j <= k with t_k - t_i <= width.
inline double brute_triple_max(const std::vector<double>& t, const std::vector<double>& v,
                               double width) {
  double best = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        if (t[k] - t[i] > width + 1e-9) continue;
        best = std::max(best, std::min(std::abs(v[j] - v[i]), std::abs(v[k] - v[j])));
      }
  return best;
}

inline std::vector<double> grid01(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

/// Discrete second differences of y on x, divided by the local spacing.
inline double min_second_difference(const std::vector<double>& x, const std::vector<double>& y) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double left = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    const double right = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    worst = std::min(worst, right - left);
  }
  return worst;
}

}  // namespace testing
