#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "psk/stats.hpp"
#include "support.hpp"

using namespace psk;

namespace {

double binomial_cdf(std::size_t k, std::size_t n, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                            i * std::log(p) + (n - i) * std::log1p(-p);
    acc += std::exp(log_term);
  }
  return acc;
}

// Upper bound p with P(X <= k; p) = 1 - conf, by bisection.
double upper_by_bisection(std::size_t k, std::size_t n, double conf) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binomial_cdf(k, n, mid) > 1.0 - conf ? lo : hi) = mid;
  }
  return hi;
}

double ad_statistic(std::vector<double> x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::sort(x.begin(), x.end());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 0.5 * std::erfc(-(x[i] - mean) / sd / std::sqrt(2.0));
    const double g = 0.5 * std::erfc(-(x[x.size() - 1 - i] - mean) / sd / std::sqrt(2.0));
    s += (2.0 * i + 1.0) * (std::log(f) + std::log(1.0 - g));
  }
  return -n - s / n;
}

}  // namespace

TEST_CASE("Clopper-Pearson upper bound") {
  CHECK(clopper_pearson_upper(0, 100, 0.99) ==
        doctest::Approx(1.0 - std::pow(0.01, 1.0 / 100.0)).epsilon(1e-12));
  CHECK(clopper_pearson_upper(7, 7, 0.95) == 1.0);
  for (auto [k, n] : {std::pair<std::size_t, std::size_t>{1, 10}, {25, 100}, {3, 1000}, {499, 500}}) {
    CHECK(clopper_pearson_upper(k, n, 0.99) ==
          doctest::Approx(upper_by_bisection(k, n, 0.99)).epsilon(1e-9));
    CHECK(clopper_pearson_upper(k, n, 0.99) >= static_cast<double>(k) / n);
    CHECK(clopper_pearson_upper(k, n, 0.99) > clopper_pearson_upper(k, n, 0.9));
  }
  CHECK_THROWS_AS(clopper_pearson_upper(1, 0, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(clopper_pearson_upper(3, 2, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(clopper_pearson_upper(1, 2, 1.0), std::invalid_argument);
}

TEST_CASE("mean estimate") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const auto e = mean_estimate(x);
  CHECK(e.mean == 2.5);
  CHECK(e.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(e.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(mean_estimate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("Anderson-Darling normality") {
  testing::Rng rng(2024);
  int rejected = 0;
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> x(400);
    for (auto& v : x) v = 3.0 + 2.0 * rng.normal();
    const auto t = anderson_darling_normal(x);
    CHECK(t.statistic == doctest::Approx(ad_statistic(x)).epsilon(1e-10));
    if (t.p_value < 0.01) ++rejected;
  }
  CHECK(rejected <= 3);

  std::vector<double> expo(400);
  for (auto& v : expo) v = -std::log(1.0 - rng.uniform());
  CHECK(anderson_darling_normal(expo).p_value < 0.01);
  std::vector<double> unif(400);
  for (auto& v : unif) v = rng.uniform();
  CHECK(anderson_darling_normal(unif).p_value < 0.01);

  CHECK_THROWS_AS(anderson_darling_normal(std::vector<double>(5, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(anderson_darling_normal(std::vector<double>(20, 1.0)), std::invalid_argument);
}
