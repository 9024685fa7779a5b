#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "psk/entropy.hpp"
#include "support.hpp"

using namespace psk;

namespace {

SemiDistanceGrid power_q(std::size_t n, double a) {
  return SemiDistanceGrid::from_function(testing::grid01(n), [a](double r, double t) {
    return std::pow(std::abs(r - t), a);
  });
}

// Smallest number of closed q-balls covering the grid points and the gaps
// between neighbours, by exhaustive search over center subsets (tiny grids).
std::size_t exhaustive_interval_cover(const SemiDistanceGrid& q, double eps) {
  const std::size_t n = q.size();
  const double tol = eps * (1 + 1e-9) + 1e-12;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      // A gap (i, i+1) is covered when one ball contains both endpoints.
      bool ok = true;
      for (std::size_t i = 0; i + 1 < n && ok; ++i) {
        bool gap = false;
        for (std::size_t c = 0; c < n && !gap; ++c) {
          gap = pick[c] && q(c, i) <= tol && q(c, i + 1) <= tol;
        }
        ok = gap;
      }
      if (ok) return k;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return n;
}

}  // namespace

TEST_CASE("covering numbers of |r - t|") {
  const auto q = power_q(1001, 1.0);
  CHECK(q.interval_structure());
  for (double eps : {0.25, 0.1, 0.05, 0.01}) {
    const auto c = covering_number(q, eps);
    CHECK(c.count == static_cast<std::size_t>(std::ceil(1.0 / (2.0 * eps) - 1e-9)));
    CHECK(c.exact);
    CHECK(verify_cover(q, c));
  }
  const auto two = covering_number(q, 0.25);
  CHECK(q.times()[two.centers[0]] == doctest::Approx(0.25).epsilon(0.01));
  CHECK(q.times()[two.centers[1]] == doctest::Approx(0.75).epsilon(0.01));
  CHECK(metric_entropy(q, 0.1) == doctest::Approx(std::log(5.0)));
  CHECK(metric_entropy(q, 0.25) == doctest::Approx(std::log(2.0)));
  CHECK(covering_number(q, 2.0).count == 1);
  CHECK(metric_entropy(q, 2.0) == 0.0);
}

TEST_CASE("covering numbers of |r - t|^2") {
  const auto q = power_q(1001, 2.0);
  for (double eps : {0.25, 0.04, 0.01, 0.0025}) {
    const auto expected = static_cast<std::size_t>(std::ceil(1.0 / (2.0 * std::sqrt(eps)) - 1e-9));
    CHECK(covering_number(q, eps).count == expected);
  }
}

TEST_CASE("interval cover matches exhaustive search on small grids") {
  testing::Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng.below(8);
    const double a = rng.uniform(0.3, 3.0);
    const auto q = power_q(n, a);
    const double eps = rng.uniform(0.01, 0.6);
    CHECK(covering_number(q, eps).count == exhaustive_interval_cover(q, eps));
  }
}

TEST_CASE("covering count is nonincreasing in epsilon and certified") {
  testing::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    // A random symmetric pair function without triangle inequality or interval structure.
    const std::size_t n = 30;
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i] = rng.uniform();
    const SemiDistanceGrid q(testing::grid01(n), m);
    std::size_t prev = n + 1;
    for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8, 1.0}) {
      const auto c = covering_number(q, eps);
      CHECK(verify_cover(q, c));
      CHECK(c.count <= prev);
      CHECK_FALSE(c.exact);
      prev = c.count;
    }
    CHECK(prev == 1);
  }
}

TEST_CASE("sigma modulus") {
  const auto sq = power_q(1001, 2.0);
  CHECK(sigma_modulus(sq, 0.1) == doctest::Approx(0.4));
  CHECK(sigma_modulus(sq, 0.001) == doctest::Approx(0.004));
  const auto lin = power_q(1001, 1.0);
  CHECK(sigma_modulus(lin, 0.1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(sigma_modulus(lin, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sigma_modulus(lin, 0.6), std::invalid_argument);

  const std::vector<double> hs{0.1, 0.03, 0.01, 0.003};
  CHECK(sigma_report(sq, hs).vanishing);
  CHECK_FALSE(sigma_report(lin, hs).vanishing);
}

TEST_CASE("semi-distance validation and text form") {
  CHECK_THROWS_AS(SemiDistanceGrid({0.0, 1.0}, {0.0, 1.0, 2.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SemiDistanceGrid({0.0, 1.0}, {0.0, -1.0, -1.0, 0.0}), std::invalid_argument);
  const auto q = power_q(5, 1.5);
  std::stringstream io;
  write_semidistance(io, q);
  const auto back = read_semidistance(io);
  REQUIRE(back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(back(i, j) == q(i, j));
}
