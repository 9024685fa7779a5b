#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "psk/reference.hpp"
#include "psk/simulate.hpp"
#include "support.hpp"

using namespace psk;

namespace {

ProcessSpec compound(double rate, std::size_t grid) {
  ProcessSpec s;
  s.kind = ProcessKind::compound_poisson;
  s.rate = rate;
  s.grid_size = grid;
  return s;
}

std::vector<double> pair_matrix(const std::vector<double>& t, double power) {
  const std::size_t n = t.size();
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) w[i * n + k] = std::pow(std::abs(t[k] - t[i]), power);
  return w;
}

// min sum(d) s.t. sum_{j in [i, k)} d_j >= w(i, k), d >= 0, solved through its
// dual max w.y s.t. A^T y <= 1, y >= 0, whose origin is feasible.
double minimal_envelope_total(const std::vector<double>& t, const std::vector<double>& w) {
  const std::size_t n = t.size();
  const std::size_t steps = n - 1;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) pairs.emplace_back(i, k);
  const std::size_t vars = pairs.size() + steps;
  // Rows: one per step; last column is the right-hand side.
  std::vector<std::vector<double>> tab(steps, std::vector<double>(vars + 1, 0.0));
  std::vector<double> cost(vars + 1, 0.0);
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    const auto [i, k] = pairs[c];
    for (std::size_t j = i; j < k; ++j) tab[j][c] = 1.0;
    cost[c] = w[i * n + k];
  }
  for (std::size_t j = 0; j < steps; ++j) {
    tab[j][pairs.size() + j] = 1.0;
    tab[j][vars] = 1.0;
  }
  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t enter = vars;
    for (std::size_t c = 0; c < vars; ++c) {
      if (cost[c] > 1e-12) {
        enter = c;
        break;
      }
    }
    if (enter == vars) break;
    std::size_t leave = steps;
    double best = 1e300;
    for (std::size_t r = 0; r < steps; ++r) {
      if (tab[r][enter] > 1e-12) {
        const double ratio = tab[r][vars] / tab[r][enter];
        if (ratio < best - 1e-15) {
          best = ratio;
          leave = r;
        }
      }
    }
    REQUIRE(leave < steps);
    const double piv = tab[leave][enter];
    for (auto& v : tab[leave]) v /= piv;
    for (std::size_t r = 0; r < steps; ++r) {
      if (r == leave) continue;
      const double f = tab[r][enter];
      for (std::size_t c = 0; c <= vars; ++c) tab[r][c] -= f * tab[leave][c];
    }
    const double f = cost[enter];
    for (std::size_t c = 0; c <= vars; ++c) cost[c] -= f * tab[leave][c];
  }
  return -cost[vars];
}

std::uint32_t poisson_draw(testing::Rng& rng, double mean) {
  const double limit = std::exp(-mean);
  double prod = rng.uniform();
  std::uint32_t k = 0;
  while (prod > limit) {
    prod *= rng.uniform();
    ++k;
  }
  return k;
}

PathSet two_jump_paths(std::size_t count) {
  PathSet ps;
  ps.times = uniform_grid(11);
  for (std::size_t i = 0; i < count; ++i)
    for (double t : ps.times) ps.values.push_back(t < 0.3 ? 0.0 : (t < 0.6 ? 1.0 : 2.0));
  return ps;
}

}  // namespace

TEST_CASE("process specs") {
  CHECK(parse_process_kind("brownian") == ProcessKind::brownian);
  CHECK(process_kind_name(ProcessKind::step_uniform_jump) == "step-uniform-jump");
  CHECK_THROWS_AS(parse_process_kind("levy"), std::invalid_argument);
  ProcessSpec bad = compound(-1.0, 8);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = compound(1.0, 1);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(compound(0.0, 8).validate());
}

TEST_CASE("zero rate gives constant paths") {
  const auto ps = generate_paths(compound(0.0, 32), 50, 3);
  for (double v : ps.values) CHECK(v == 0.0);
  const auto m = estimate_delta_moments(ps, std::vector<double>{2.0, 4.0});
  for (double v : m.nu) CHECK(v == 0.0);
}

TEST_CASE("generation is deterministic and thread-count independent") {
  ProcessSpec s = compound(5.0, 40);
  const auto a = generate_paths(s, 300, 11);
  const auto b = generate_paths(s, 300, 11);
  CHECK(a.values == b.values);
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto c = generate_paths(s, 300, 11);
  omp_set_num_threads(threads);
  CHECK(a.values == c.values);
  CHECK(generate_paths(s, 300, 12).values != a.values);

  s.kind = ProcessKind::brownian;
  CHECK(generate_paths(s, 20, 1).values == generate_paths(s, 20, 1).values);
}

TEST_CASE("compound Poisson jump counts have the configured mean") {
  const std::size_t n = 100000;
  const auto ps = generate_paths(compound(5.0, 2), n, 7);
  REQUIRE(ps.jump_counts.size() == n);
  double sum = 0.0;
  for (auto c : ps.jump_counts) sum += c;
  const double mean = sum / static_cast<double>(n);
  CHECK(std::abs(mean - 5.0) < 3.0 * std::sqrt(5.0 / static_cast<double>(n)));
}

TEST_CASE("marginal laws") {
  ProcessSpec e;
  e.kind = ProcessKind::empirical_process;
  e.sample_size = 50;
  e.grid_size = 5;
  const auto ps = generate_paths(e, 4000, 2);
  for (std::size_t i = 0; i < ps.count(); ++i) {
    CHECK(ps.row(i)[0] == 0.0);
    CHECK(std::abs(ps.row(i)[4]) < 1e-12);
  }
  // Var at t = 0.5 is 1/4.
  double s2 = 0.0;
  for (std::size_t i = 0; i < ps.count(); ++i) s2 += ps.row(i)[2] * ps.row(i)[2];
  CHECK(s2 / 4000.0 == doctest::Approx(0.25).epsilon(0.08));

  ProcessSpec b;
  b.kind = ProcessKind::brownian;
  b.scale = 2.0;
  b.grid_size = 3;
  const auto bp = generate_paths(b, 20000, 4);
  double v = 0.0;
  for (std::size_t i = 0; i < bp.count(); ++i) v += bp.row(i)[2] * bp.row(i)[2];
  CHECK(v / 20000.0 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("single-jump paths have vanishing moments and tails") {
  ProcessSpec s;
  s.kind = ProcessKind::step_uniform_jump;
  s.grid_size = 24;
  const auto ps = generate_paths(s, 200, 5);
  const auto m = estimate_delta_moments(ps, std::vector<double>{2.0, 8.0}, 1);
  for (double v : m.nu) CHECK(v == 0.0);
  const auto stats = path_statistics(ps, Statistic::delta);
  const std::vector<double> u{1e-6, 0.5};
  const auto tail = empirical_tail(stats, u, 0.99);
  CHECK(tail.frequency[0] == 0.0);
  CHECK(tail.frequency[1] == 0.0);
}

TEST_CASE("moment estimator agrees with the serial reference") {
  for (auto kind : {ProcessKind::compound_poisson, ProcessKind::brownian, ProcessKind::poisson}) {
    ProcessSpec s;
    s.kind = kind;
    s.grid_size = 21;
    const auto ps = generate_paths(s, 150, 9);
    const std::vector<double> p{2.0, 3.5, 8.0, 40.0};
    const auto m = estimate_delta_moments(ps, p, 2);
    const auto ref = reference::delta_moments(ps, m.indices, p);
    REQUIRE(m.nu.size() == ref.nu.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      CHECK(m.nu[i] == doctest::Approx(ref.nu[i]).epsilon(1e-10));
    REQUIRE(m.w.size() == ref.w.size());
    for (std::size_t i = 0; i < m.w.size(); ++i)
      CHECK(m.w[i] == doctest::Approx(ref.w[i]).epsilon(1e-9));
    // Lyapunov: sample L_p norms do not decrease in p.
    for (std::size_t i = 1; i < m.nu.size(); ++i) CHECK(m.nu[i] >= m.nu[i - 1] * (1 - 1e-12));
  }
}

TEST_CASE("second moment of the triple minimum against a nested Monte Carlo oracle") {
  const auto ps = generate_paths(compound(5.0, 17), 20000, 21);
  const auto m = estimate_delta_moments(ps, std::vector<double>{2.0}, 1);
  // Independent halves: increments over [0, 1/2] and [1/2, 1], each a Gaussian
  // mixture with Poisson(2.5) many unit-variance jumps.
  testing::Rng rng(99);
  const std::size_t n = 200000;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::sqrt(static_cast<double>(poisson_draw(rng, 2.5))) * rng.normal();
    const double y = std::sqrt(static_cast<double>(poisson_draw(rng, 2.5))) * rng.normal();
    const double v = std::min(std::abs(x), std::abs(y));
    acc += v * v;
  }
  const double oracle = acc / static_cast<double>(n);
  CHECK(m.nu[0] * m.nu[0] == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("envelope fitting") {
  const auto t = uniform_grid(8);
  {
    const std::vector<double> zero(64, 0.0);
    const auto g = fit_g_envelope(t, zero);
    CHECK(g.total() == 0.0);
  }
  {
    const auto w = pair_matrix(t, 1.0);
    const auto g = fit_g_envelope(t, w);
    CHECK(envelope_shortfall(t, w, g) <= 0.0);
    for (double x : t) CHECK(g(x) == doctest::Approx(x).epsilon(1e-12));
  }
  {
    const auto w = pair_matrix(t, 0.5);
    const auto g = fit_g_envelope(t, w);
    CHECK(envelope_shortfall(t, w, g) <= 0.0);
    const double lp = minimal_envelope_total(t, w);
    CHECK(lp >= 1.0 - 1e-12);
    CHECK(g.total() >= lp * (1.0 - 1e-12));
    CHECK(g.total() <= 2.0 * lp);
  }
  // Random nonnegative symmetric matrices always get a certificate.
  testing::Rng rng(4);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 3 + rng.below(12);
    const auto tt = uniform_grid(n);
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k) w[i * n + k] = w[k * n + i] = rng.uniform(0, 3);
    const auto g = fit_g_envelope(tt, w);
    CHECK(envelope_shortfall(tt, w, g) <= 0.0);
    for (std::size_t i = 1; i < n; ++i) CHECK(g(tt[i]) >= g(tt[i - 1]));
    CHECK(g(0.0) == 0.0);
    CHECK(g.total() <= 2.0 * minimal_envelope_total(tt, w) * static_cast<double>(n));
  }
}

TEST_CASE("empirical tails") {
  const auto ps = two_jump_paths(25);
  const auto stats = path_statistics(ps, Statistic::delta);
  const std::vector<double> u{0.5, 0.999, 1.0, 1.5};
  const auto tail = empirical_tail(stats, u, 0.99);
  CHECK(tail.frequency == std::vector<double>{1.0, 1.0, 0.0, 0.0});
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(tail.upper[i] >= tail.frequency[i]);
  CHECK(tail.trials == 25);

  const auto kap = path_statistics(ps, Statistic::kappa, 0.2);
  for (double k : kap) CHECK(k == 0.0);

  const auto zero = generate_paths(compound(0.0, 16), 40, 1);
  const auto zt = empirical_tail(path_statistics(zero, Statistic::delta), u, 0.99);
  for (double f : zt.frequency) CHECK(f == 0.0);
}

TEST_CASE("boundary functionals of a single uniform jump") {
  ProcessSpec s;
  s.kind = ProcessKind::step_uniform_jump;
  s.grid_size = 101;
  const auto ps = generate_paths(s, 40000, 8);
  const std::vector<double> beta{0.01, 0.05, 0.1};
  const auto rep = boundary_functionals(ps, beta);
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const double expect = std::numbers::pi / 4.0 * beta[i];
    CHECK(std::abs(rep.z0[i] - expect) <= 3.0 * rep.z0_se[i]);
    CHECK(std::abs(rep.z1[i] - expect) <= 3.0 * rep.z1_se[i]);
  }
  CHECK(rep.vanishing);

  const auto flat = boundary_functionals(generate_paths(compound(0.0, 16), 10, 1), beta);
  for (double z : flat.z0) CHECK(z == 0.0);
  CHECK_THROWS_AS(boundary_functionals(ps, std::vector<double>{0.7}), std::invalid_argument);
}

TEST_CASE("CLT partial sums") {
  const ProcessSpec base = compound(5.0, 5);
  for (std::size_t n : {4u, 64u}) {
    const auto ps = clt_partial_sums(base, n, 6000, 13);
    // Var S_n(1/2) = Var xi(1/2) = 5 * 0.5.
    double m2 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < ps.count(); ++i) {
      const double v = ps.row(i)[2];
      m2 += v * v;
      m4 += v * v * v * v;
    }
    const double k = static_cast<double>(ps.count());
    m2 /= k;
    m4 /= k;
    const double se = std::sqrt((m4 - m2 * m2) / k);
    CHECK(std::abs(m2 - 2.5) <= 3.0 * se);
  }
  ProcessSpec poisson = base;
  poisson.kind = ProcessKind::poisson;
  CHECK_THROWS_AS(clt_partial_sums(poisson, 4, 10, 1), std::invalid_argument);
  CHECK(clt_partial_sums(base, 3, 10, 5).values == clt_partial_sums(base, 3, 10, 5).values);
}

TEST_CASE("domination reports") {
  const auto ps = two_jump_paths(20);
  const auto stats = path_statistics(ps, Statistic::delta);
  const std::vector<double> u{0.25, 0.5, 2.0};
  const auto tail = empirical_tail(stats, u, 0.99);
  TailCurve ones, zeros;
  for (double x : u) {
    ones.push(x, 1.0);
    zeros.push(x, 0.0);
  }
  CHECK(domination_report(ones, tail).pass);
  const auto bad = domination_report(zeros, tail, "zero");
  CHECK_FALSE(bad.pass);
  CHECK(bad.failures == std::vector<double>{0.25, 0.5});
  CHECK(bad.rows[2].pass);
  CHECK(bad.label == "zero");

  TailCurve shifted;
  for (double x : u) shifted.push(x * 1.1, 1.0);
  CHECK_THROWS_AS(domination_report(shifted, tail), std::invalid_argument);
}
