#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "psk/gls.hpp"
#include "psk/reference.hpp"
#include "support.hpp"

using namespace psk;

namespace {

std::vector<double> rademacher(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i % 2 == 0 ? 1.0 : -1.0;
  return v;
}

std::vector<double> gaussian(std::size_t n, double scale, std::uint64_t seed) {
  testing::Rng rng(seed);
  std::vector<double> v(n);
  for (auto& e : v) e = scale * rng.normal();
  return v;
}

PsiFunction sqrt_psi() { return PsiFunction::tabulate([](double p) { return std::sqrt(p); }); }

PhiFunction half_square(double end = 10.0) {
  return PhiFunction::tabulate([](double l) { return l * l / 2.0; }, kInf, end, 2001);
}

// E|Z|^p for a standard normal Z.
double gaussian_abs_moment(double p) {
  return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(M_PI);
}

double binary_entropy_conjugate(double u) {
  return 0.5 * ((1.0 + u) * std::log1p(u) + (1.0 - u) * std::log1p(-u));
}

}  // namespace

TEST_CASE("G(psi) norm of simple samples") {
  const EmpiricalSample signs(rademacher(10));
  CHECK(gls_norm(signs, sqrt_psi()) == doctest::Approx(1.0));
  CHECK(gls_norm(signs, PsiFunction::degenerate(2.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(EmpiricalSample({}), std::invalid_argument);
}

TEST_CASE("degenerate psi gives the plain L_l norm") {
  testing::Rng rng(3);
  for (double l : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    std::vector<double> x(200);
    for (auto& e : x) e = rng.uniform(-4, 4);
    double acc = 0.0;
    for (double e : x) acc += std::pow(std::abs(e), l);
    const double direct = std::pow(acc / 200.0, 1.0 / l);
    CHECK(gls_norm(EmpiricalSample(x), PsiFunction::degenerate(l)) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("G(psi) norm of a large Gaussian sample") {
  const auto psi = sqrt_psi();
  // The exact ratio E^{1/p}|Z|^p / sqrt(p) on the same grid.
  double exact = 0.0;
  for (double p : psi.grid()) {
    exact = std::max(exact, std::pow(gaussian_abs_moment(p), 1.0 / p) / std::sqrt(p));
  }
  CHECK(exact == doctest::Approx(std::sqrt(2.0 / M_PI)));
  const double est = gls_norm(EmpiricalSample(gaussian(100000, 1.0, 11)), psi);
  CHECK(est == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("B(phi) norm") {
  CHECK(bphi_norm(EmpiricalSample(std::vector<double>(5, 0.0)), half_square()) == 0.0);

  // cosh(l) <= exp(phi(l tau)) holds exactly when tau >= sqrt(2 ln cosh l) / l.
  const auto phi = half_square(6.0);
  double oracle = 0.0;
  for (double l : phi.grid()) {
    if (l > 0.0) oracle = std::max(oracle, std::sqrt(2.0 * std::log(std::cosh(l))) / l);
  }
  const double tau = bphi_norm(EmpiricalSample(rademacher(1000)), phi);
  CHECK(tau <= 1.0);
  CHECK(tau == doctest::Approx(oracle).epsilon(1e-9));

  std::vector<double> shifted = rademacher(1000);
  for (auto& e : shifted) e += 0.5;
  CHECK_THROWS_AS(bphi_norm(EmpiricalSample(shifted), phi), std::invalid_argument);

  const PhiFunction flat({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0});
  CHECK_THROWS_AS(bphi_norm(EmpiricalSample(rademacher(10)), flat), not_in_space);
}

TEST_CASE("norms are positively homogeneous") {
  const auto x = gaussian(2000, 1.0, 5);
  const EmpiricalSample base(x);
  for (double c : {0.25, 3.0, 10.0}) {
    std::vector<double> y(x);
    for (auto& e : y) e *= c;
    const EmpiricalSample scaled(y);
    CHECK(gls_norm(scaled, sqrt_psi()) == doctest::Approx(c * gls_norm(base, sqrt_psi())));
  }
  // The exponential-moment norm is a sup over a finite lambda table, so scaling
  // is exact only up to where the constraint binds; for signs it binds near 0.
  const EmpiricalSample signs(rademacher(1000));
  const double unit = bphi_norm(signs, half_square(40.0));
  for (double c : {0.25, 3.0, 10.0}) {
    std::vector<double> y = rademacher(1000);
    for (auto& e : y) e *= c;
    CHECK(bphi_norm(EmpiricalSample(y), half_square(40.0)) ==
          doctest::Approx(c * unit).epsilon(1e-2));
  }
}

TEST_CASE("natural phi") {
  const auto grid = linspace(0.0, 3.0, 61);
  const std::vector<EmpiricalSample> signs{EmpiricalSample(rademacher(1000))};
  const auto nat = natural_phi(signs, grid);
  CHECK_FALSE(nat.truncated);
  CHECK(nat.phi(0.0) == 0.0);
  CHECK(nat.phi.convex_on_grid());
  for (double l : {0.5, 1.0, 2.0, 3.0}) {
    CHECK(nat.phi(l) == doctest::Approx(std::log(std::cosh(l))).epsilon(1e-9));
  }

  const std::vector<EmpiricalSample> zero{EmpiricalSample(std::vector<double>(10, 0.0))};
  for (double l : grid) CHECK(natural_phi(zero, grid).phi(l) == 0.0);

  const std::vector<EmpiricalSample> two{EmpiricalSample(gaussian(100000, 1.0, 21)),
                                         EmpiricalSample(gaussian(100000, 2.0, 22))};
  const auto g = natural_phi(two, linspace(0.0, 1.0, 21));
  for (double l : {0.25, 0.5, 0.75, 1.0}) CHECK(g.phi(l) == doctest::Approx(2 * l * l).epsilon(0.05));
}

TEST_CASE("Young-Fenchel transform closed forms") {
  const auto x = linspace(-5.0, 5.0, 1001);
  FunctionTable quad{x, {}};
  for (double e : x) quad.y.push_back(e * e / 2.0);
  const std::vector<double> nodes(x.begin() + 100, x.end() - 100);
  const auto conj = young_fenchel(quad, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CHECK(std::abs(conj.y[i] - nodes[i] * nodes[i] / 2.0) <= 1e-8);
  }
  CHECK(young_fenchel(quad, std::vector<double>{1.0}).y[0] == doctest::Approx(0.5));

  const auto s = linspace(-2.0, 2.0, 401);
  FunctionTable absval{s, {}};
  for (double e : s) absval.y.push_back(std::abs(e));
  const auto a = young_fenchel(absval, std::vector<double>{-1.0, -0.3, 0.0, 0.7, 1.0, 1.5});
  for (std::size_t i = 0; i < 5; ++i) CHECK(a.y[i] == doctest::Approx(0.0));
  CHECK(a.y[5] == doctest::Approx(1.0));

  const auto l = linspace(-20.0, 20.0, 40001);
  FunctionTable lc{l, {}};
  for (double e : l) lc.y.push_back(std::log(std::cosh(e)));
  const std::vector<double> us{-0.9, -0.5, 0.0, 0.3, 0.6, 0.95};
  const auto h = young_fenchel(lc, us);
  for (std::size_t i = 0; i < us.size(); ++i) {
    CHECK(h.y[i] == doctest::Approx(binary_entropy_conjugate(us[i])).epsilon(1e-6));
  }
}

TEST_CASE("double conjugation of random convex tables") {
  testing::Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20 + rng.below(200);
    std::vector<double> x(n), y(n);
    x[0] = rng.uniform(-3, 0);
    for (std::size_t i = 1; i < n; ++i) x[i] = x[i - 1] + rng.uniform(0.01, 0.2);
    double slope = rng.uniform(-5, 0);
    y[0] = rng.uniform(-1, 1);
    for (std::size_t i = 1; i < n; ++i) {
      slope += rng.uniform(0.0, 0.5);
      y[i] = y[i - 1] + slope * (x[i] - x[i - 1]);
    }
    const FunctionTable f{x, y};
    const auto star = young_fenchel(f);
    CHECK(testing::min_second_difference(star.x, star.y) >= -1e-9);
    const auto back = young_fenchel(star, x);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(back.y[i] - y[i]));
    CHECK(err <= 1e-6);
    // Hull route agrees with direct maximisation.
    const auto direct = reference::young_fenchel(f, star.x);
    for (std::size_t i = 0; i < star.size(); ++i) {
      CHECK(star.y[i] == doctest::Approx(direct.y[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("tail from phi") {
  const auto phi = half_square();
  CHECK(tail_from_phi(phi, 1.0, 0.0) == 1.0);
  CHECK(tail_from_phi(phi, 1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
  double prev = 1.0;
  for (double x = 0.0; x <= 8.0; x += 0.5) {
    const double t = tail_from_phi(phi, 1.0, x);
    CHECK(t <= prev);
    prev = t;
  }
  CHECK(prev < 1e-12);
  CHECK_THROWS_AS(tail_from_phi(phi, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("moment and tail equivalence") {
  testing::Rng rng(99);
  std::vector<double> bounded(20000);
  for (auto& e : bounded) e = rng.uniform(-1, 1);
  const auto b = moment_tail_equivalence(EmpiricalSample(bounded), 2.0, 0.0);
  CHECK(b.both_finite);

  const auto r = moment_tail_equivalence(EmpiricalSample(rademacher(1000)), 2.0, 0.0);
  CHECK(r.moment_sup == doctest::Approx(1.0));
  CHECK(r.moment_argmax == doctest::Approx(1.0));

  // Symmetric Pareto with tail index 2: |xi|_p is infinite for p >= 2.
  std::vector<double> heavy(100000);
  for (auto& e : heavy) e = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::pow(1.0 - rng.uniform(), -0.5);
  const auto h = moment_tail_equivalence(EmpiricalSample(heavy), 1.0, 0.0);
  CHECK_FALSE(h.moment_finite);
  CHECK_FALSE(h.both_finite);
}
