#include "psk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "psk/stats.hpp"

namespace psk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5851F42D4C957F2DULL)));
}

/// Adds one draw of the process (times `t`) into `out`, scaled by `weight`.
/// Returns the number of jumps drawn.
std::uint32_t add_draw(const ProcessSpec& spec, std::span<const double> t, std::mt19937_64& rng,
                       double weight, std::span<double> out) {
  const std::size_t n = t.size();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (spec.kind) {
    case ProcessKind::compound_poisson:
    case ProcessKind::poisson: {
      std::poisson_distribution<std::uint32_t> count(spec.rate);
      const std::uint32_t jumps = spec.rate > 0.0 ? count(rng) : 0;
      std::vector<std::pair<double, double>> events(jumps);
      std::normal_distribution<double> size(0.0, spec.scale);
      for (auto& e : events) {
        e.first = unif(rng);
        e.second = spec.kind == ProcessKind::poisson ? 1.0 : size(rng);
      }
      std::sort(events.begin(), events.end());
      double level = 0.0;
      std::size_t next = 0;
      for (std::size_t i = 0; i < n; ++i) {
        while (next < events.size() && events[next].first <= t[i]) level += events[next++].second;
        out[i] += weight * level;
      }
      return jumps;
    }
    case ProcessKind::brownian: {
      std::normal_distribution<double> step(0.0, 1.0);
      double level = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        level += spec.scale * std::sqrt(t[i] - t[i - 1]) * step(rng);
        out[i] += weight * level;
      }
      return 0;
    }
    case ProcessKind::empirical_process: {
      std::vector<double> u(spec.sample_size);
      for (double& v : u) v = unif(rng);
      std::sort(u.begin(), u.end());
      const double m = static_cast<double>(spec.sample_size);
      std::size_t below = 0;
      for (std::size_t i = 0; i < n; ++i) {
        while (below < u.size() && u[below] <= t[i]) ++below;
        out[i] += weight * std::sqrt(m) * (static_cast<double>(below) / m - t[i]);
      }
      return static_cast<std::uint32_t>(spec.sample_size);
    }
    case ProcessKind::step_uniform_jump: {
      const double at = unif(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (t[i] >= at) out[i] += weight;
      }
      return 1;
    }
  }
  return 0;
}

}  // namespace

void ProcessSpec::validate() const {
  if (grid_size < 2) throw std::invalid_argument("process: grid size must be at least 2");
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("process: rate must be finite and nonnegative");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("process: scale must be positive");
  }
  if (kind == ProcessKind::empirical_process && sample_size == 0) {
    throw std::invalid_argument("process: sample size must be positive");
  }
}

bool ProcessSpec::centered() const {
  return kind == ProcessKind::compound_poisson || kind == ProcessKind::brownian ||
         kind == ProcessKind::empirical_process;
}

std::string ProcessSpec::name() const { return process_kind_name(kind); }

ProcessKind parse_process_kind(const std::string& name) {
  if (name == "compound-poisson") return ProcessKind::compound_poisson;
  if (name == "poisson") return ProcessKind::poisson;
  if (name == "brownian") return ProcessKind::brownian;
  if (name == "empirical-process") return ProcessKind::empirical_process;
  if (name == "step-uniform-jump") return ProcessKind::step_uniform_jump;
  throw std::invalid_argument("unknown process kind '" + name + "'");
}

std::string process_kind_name(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::compound_poisson: return "compound-poisson";
    case ProcessKind::poisson: return "poisson";
    case ProcessKind::brownian: return "brownian";
    case ProcessKind::empirical_process: return "empirical-process";
    case ProcessKind::step_uniform_jump: return "step-uniform-jump";
  }
  return "unknown";
}

std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need at least two points");
  std::vector<double> t(n);
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / last;
  return t;
}

namespace {

PathSet simulate_sums(const ProcessSpec& spec, std::size_t copies, std::size_t n_paths,
                      std::uint64_t seed) {
  spec.validate();
  PathSet set;
  set.times = uniform_grid(spec.grid_size);
  set.values.assign(n_paths * spec.grid_size, 0.0);
  set.jump_counts.assign(n_paths, 0);
  const double weight = 1.0 / std::sqrt(static_cast<double>(copies));
  const auto count = static_cast<std::ptrdiff_t>(n_paths);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    auto rng = path_rng(seed, idx);
    std::uint32_t jumps = 0;
    for (std::size_t c = 0; c < copies; ++c) {
      jumps += add_draw(spec, set.times, rng, weight, set.row(idx));
    }
    set.jump_counts[idx] = jumps;
  }
  return set;
}

}  // namespace

PathSet generate_paths(const ProcessSpec& spec, std::size_t n_paths, std::uint64_t seed) {
  return simulate_sums(spec, 1, n_paths, seed);
}

PathSet clt_partial_sums(const ProcessSpec& spec, std::size_t n, std::size_t n_paths,
                         std::uint64_t seed) {
  if (!spec.centered()) {
    throw std::invalid_argument("clt_partial_sums: process '" + spec.name() +
                                "' is not centered");
  }
  if (n == 0) throw std::invalid_argument("clt_partial_sums: n must be positive");
  return simulate_sums(spec, n, n_paths, seed);
}

std::size_t default_stride(std::size_t grid_size) {
  if (grid_size <= 64) return 1;
  // Keep the thinned grid at about 65 points so the triple cube stays small.
  const std::size_t needed = (grid_size - 1 + 63) / 64;
  return std::max<std::size_t>(4, needed);
}

namespace {

struct RunLayout {
  /// Per path: offsets into starts/levels.
  std::vector<std::size_t> offset;
  /// First thinned index of each run of constant value.
  std::vector<std::uint32_t> starts;
  std::vector<double> levels;
};

RunLayout decompose_runs(const PathSet& paths, const std::vector<std::size_t>& idx,
                         double* range_max) {
  RunLayout lay;
  lay.offset.push_back(0);
  *range_max = 0.0;
  for (std::size_t i = 0; i < paths.count(); ++i) {
    const auto row = paths.row(i);
    double lo = row[idx[0]], hi = row[idx[0]];
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double v = row[idx[j]];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (j == 0 || v != lay.levels.back()) {
        lay.starts.push_back(static_cast<std::uint32_t>(j));
        lay.levels.push_back(v);
      }
    }
    *range_max = std::max(*range_max, hi - lo);
    lay.offset.push_back(lay.starts.size());
  }
  return lay;
}

/// Sums of nonnegative terms over the grid triples i <= j <= k < e, filled by
/// box updates on a difference array. Terms are bucketed by binary magnitude
/// and accumulated as 128-bit integers, so the inclusion-exclusion cancels
/// exactly and small sums keep full relative accuracy next to large ones.
class BandedTriangle {
 public:
  explicit BandedTriangle(std::size_t e) : e_(e), base_(e * e, 0) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < e; ++i) {
      for (std::size_t j = i; j < e; ++j) {
        base_[i * e + j] = off - j;
        off += e - j;
      }
    }
    cells_ = off;
    single_max_.assign(cells_, -kInf);
    single_sum_.assign(cells_, 0.0);
  }

  /// Adds exp(log_x) to every triple in [i0, i1) x [j0, j1) x [k0, k1); the
  /// boxes must satisfy i1 <= j0 and j1 <= k0.
  void add_box(double log_x, std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1,
               std::size_t k0, std::size_t k1) {
    if (i1 == i0 + 1 && j1 == j0 + 1 && k1 == k0 + 1) {
      // Single cell: no cancellation, so a running log-sum-exp suffices.
      const std::size_t c = at(i0, j0, k0);
      double& top = single_max_[c];
      if (log_x > top) {
        single_sum_[c] = single_sum_[c] * std::exp(top - log_x) + 1.0;
        top = log_x;
      } else {
        single_sum_[c] += std::exp(log_x - top);
      }
      return;
    }
    const double bits = -log_x / std::numbers::ln2;
    const auto band = static_cast<std::size_t>(std::max(0.0, std::floor(bits / kBandBits)));
    // Mantissa scaled into [2^52, 2^(52 + kBandBits)); an exact integer.
    const double scaled = std::exp(log_x + static_cast<double>(shift(band)) * std::numbers::ln2);
    const auto q = static_cast<Int>(scaled);
    auto& cube = band_cube(band);
    cube[at(i0, j0, k0)] += q;
    cube[at(i1, j0, k0)] -= q;
    cube[at(i0, j1, k0)] -= q;
    cube[at(i0, j0, k1)] -= q;
    cube[at(i1, j1, k0)] += q;
    cube[at(i1, j0, k1)] += q;
    cube[at(i0, j1, k1)] += q;
    cube[at(i1, j1, k1)] -= q;
  }

  void prefix_sums() {
    for (auto& cube : bands_) {
      if (cube.empty()) continue;
      for (std::size_t i = 0; i < e_; ++i)
        for (std::size_t j = i; j < e_; ++j)
          for (std::size_t k = j + 1; k < e_; ++k) cube[at(i, j, k)] += cube[at(i, j, k - 1)];
      for (std::size_t i = 0; i < e_; ++i)
        for (std::size_t j = i + 1; j < e_; ++j)
          for (std::size_t k = j; k < e_; ++k) cube[at(i, j, k)] += cube[at(i, j - 1, k)];
      for (std::size_t i = 1; i < e_; ++i)
        for (std::size_t j = i; j < e_; ++j)
          for (std::size_t k = j; k < e_; ++k) cube[at(i, j, k)] += cube[at(i - 1, j, k)];
    }
  }

  /// log of the accumulated sum at (i, j, k); -inf when it is zero.
  double log_value(std::size_t i, std::size_t j, std::size_t k) const {
    const std::size_t c = at(i, j, k);
    std::size_t lead = bands_.size();
    for (std::size_t b = 0; b < bands_.size(); ++b) {
      if (!bands_[b].empty() && bands_[b][c] != 0) {
        lead = b;
        break;
      }
    }
    const double single =
        single_max_[c] == -kInf ? -kInf : single_max_[c] + std::log(single_sum_[c]);
    if (lead == bands_.size()) return single;
    double sum = 0.0;
    for (std::size_t b = lead; b < bands_.size() && b < lead + 4; ++b) {
      if (bands_[b].empty()) continue;
      sum += std::ldexp(static_cast<double>(bands_[b][c]),
                        -static_cast<int>((b - lead) * kBandBits));
    }
    const double banded = std::log(sum) - static_cast<double>(shift(lead)) * std::numbers::ln2;
    if (single == -kInf) return banded;
    const double hi = std::max(banded, single);
    return hi + std::log1p(std::exp(std::min(banded, single) - hi));
  }

 private:
  using Int = __int128;
  static constexpr std::size_t kBandBits = 40;

  static std::size_t shift(std::size_t band) { return (band + 1) * kBandBits + 52; }

  std::size_t at(std::size_t i, std::size_t j, std::size_t k) const {
    return base_[i * e_ + j] + k;
  }

  std::vector<Int>& band_cube(std::size_t band) {
    if (band >= bands_.size()) bands_.resize(band + 1);
    if (bands_[band].empty()) bands_[band].assign(cells_, 0);
    return bands_[band];
  }

  std::size_t e_;
  std::vector<std::size_t> base_;
  std::size_t cells_ = 0;
  std::vector<std::vector<Int>> bands_;
  std::vector<double> single_max_;
  std::vector<double> single_sum_;
};

}  // namespace

MomentTable estimate_delta_moments(const PathSet& paths, std::span<const double> p_grid,
                                   std::size_t stride) {
  if (paths.count() == 0) throw std::invalid_argument("estimate_delta_moments: no paths");
  if (p_grid.empty()) throw std::invalid_argument("estimate_delta_moments: empty p grid");
  for (double p : p_grid) {
    if (!(p > 0.0)) throw std::invalid_argument("estimate_delta_moments: p must be positive");
  }
  const std::size_t n = paths.grid_size();
  if (stride == 0) stride = default_stride(n);
  MomentTable table;
  for (std::size_t i = 0; i < n; i += stride) table.indices.push_back(i);
  if (table.indices.back() != n - 1) table.indices.push_back(n - 1);
  for (std::size_t i : table.indices) table.times.push_back(paths.times[i]);
  const std::size_t m = table.indices.size();
  const double trials = static_cast<double>(paths.count());

  double scale = 0.0;
  const auto runs = decompose_runs(paths, table.indices, &scale);

  const std::size_t np = p_grid.size();
  std::vector<double> nu(np, 0.0);
  std::vector<char> dropped(np, 0);
  std::vector<std::vector<double>> ratio(np);
  if (scale > 0.0) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t pi = 0; pi < static_cast<std::ptrdiff_t>(np); ++pi) {
      const double p = p_grid[static_cast<std::size_t>(pi)];
      BandedTriangle sums(m + 1);
      std::vector<double> log_gap;
      // Each run triple a < b < c contributes its triple minimum to the whole
      // box of grid triples whose points fall in those runs.
      for (std::size_t path = 0; path < paths.count(); ++path) {
        const std::size_t first = runs.offset[path];
        const std::size_t count = runs.offset[path + 1] - first;
        if (count < 3) continue;
        const auto start = [&](std::size_t r) {
          return r < count ? static_cast<std::size_t>(runs.starts[first + r]) : m;
        };
        log_gap.assign(count * count, -kInf);
        for (std::size_t a = 0; a < count; ++a) {
          for (std::size_t b = a + 1; b < count; ++b) {
            log_gap[a * count + b] =
                std::log(std::abs(runs.levels[first + b] - runs.levels[first + a]) / scale);
          }
        }
        for (std::size_t a = 0; a + 2 < count; ++a) {
          const std::size_t i0 = start(a), i1 = start(a + 1);
          for (std::size_t b = a + 1; b + 1 < count; ++b) {
            const double left = log_gap[a * count + b];
            const std::size_t j0 = start(b), j1 = start(b + 1);
            for (std::size_t c = b + 1; c < count; ++c) {
              const double lv = std::min(left, log_gap[b * count + c]);
              if (lv == -kInf) continue;
              sums.add_box(p * lv, i0, i1, j0, j1, start(c), start(c + 1));
            }
          }
        }
      }
      sums.prefix_sums();

      const double log_trials = std::log(trials);
      std::vector<double> log_pair(m * m, -kInf);
      double log_top = -kInf;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = i; k < m; ++k) {
          double best = -kInf;
          for (std::size_t j = i; j <= k; ++j) best = std::max(best, sums.log_value(i, j, k));
          log_pair[i * m + k] = best;
          log_top = std::max(log_top, best);
        }
      }
      const auto idx = static_cast<std::size_t>(pi);
      if (log_top == -kInf) {
        nu[idx] = 0.0;
        continue;
      }
      nu[idx] = scale * std::exp((log_top - log_trials) / p);
      if (!(nu[idx] > 0.0) || !std::isfinite(nu[idx])) {
        dropped[idx] = 1;
        continue;
      }
      auto& r = ratio[idx];
      r.assign(m * m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = i + 1; k < m; ++k) {
          r[i * m + k] = std::exp((log_pair[i * m + k] - log_top) / p);
        }
      }
    }
  }
  table.w.assign(m * m, 0.0);
  for (std::size_t pi = 0; pi < np; ++pi) {
    if (dropped[pi]) {
      table.dropped_p.push_back(p_grid[pi]);
      continue;
    }
    table.p.push_back(p_grid[pi]);
    table.nu.push_back(nu[pi]);
    if (ratio[pi].empty()) continue;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = i + 1; k < m; ++k) {
        const double v = std::max(table.w[i * m + k], ratio[pi][i * m + k]);
        table.w[i * m + k] = table.w[k * m + i] = v;
      }
    }
  }
  return table;
}

GFunction fit_g_envelope(std::span<const double> times, std::span<const double> w) {
  const std::size_t n = times.size();
  if (n < 2 || w.size() != n * n) throw std::invalid_argument("fit_g_envelope: w must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i * n + i] != 0.0) throw std::invalid_argument("fit_g_envelope: nonzero diagonal");
    for (std::size_t k = 0; k < n; ++k) {
      if (!(w[i * n + k] >= 0.0) || w[i * n + k] != w[k * n + i]) {
        throw std::invalid_argument("fit_g_envelope: w must be symmetric and nonnegative");
      }
    }
  }
  // Step j (between grid points j and j + 1) gets the largest per-step share
  // w(i, k) / (k - i) among the pairs i <= j < k that straddle it.
  std::vector<double> step(n - 1, 0.0);
  std::vector<double> reach(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double best = 0.0;
    for (std::size_t k = n - 1; k > i; --k) {
      best = std::max(best, w[i * n + k] / static_cast<double>(k - i));
      reach[k - 1] = best;  // max over k' > k - 1 of the share
    }
    for (std::size_t j = i; j + 1 < n; ++j) step[j] = std::max(step[j], reach[j]);
  }
  std::vector<double> g(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) g[j + 1] = g[j] + step[j];
  // Rounding in the cumulative sum can leave a pair a hair short; lift it.
  for (int pass = 0; pass < 16; ++pass) {
    bool lifted = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        const double deficit = w[i * n + k] - (g[k] - g[i]);
        if (deficit > 0.0) {
          const double lift = deficit + 4.0 * std::numeric_limits<double>::epsilon() * g[k];
          for (std::size_t q = k; q < n; ++q) g[q] += lift;
          lifted = true;
        }
      }
    }
    if (!lifted) break;
  }
  GFunction out(std::vector<double>(times.begin(), times.end()), std::move(g));
  if (envelope_shortfall(times, w, out) > 0.0) {
    throw std::logic_error("fit_g_envelope: domination certificate failed");
  }
  return out;
}

double envelope_shortfall(std::span<const double> times, std::span<const double> w,
                          const GFunction& g) {
  const std::size_t n = times.size();
  const auto& gv = g.values();
  if (gv.size() != n) throw std::invalid_argument("envelope_shortfall: grid mismatch");
  double worst = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      worst = std::max(worst, w[i * n + k] - (gv[k] - gv[i]));
    }
  }
  return n > 1 ? worst : 0.0;
}

std::vector<double> path_statistics(const PathSet& paths, Statistic stat, double h) {
  if (stat == Statistic::kappa && !(h >= 0.0 && h <= 1.0)) {
    throw std::invalid_argument("path_statistics: h must lie in [0, 1]");
  }
  std::vector<double> out(paths.count());
  const auto count = static_cast<std::ptrdiff_t>(paths.count());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto row = paths.row(static_cast<std::size_t>(i));
    out[static_cast<std::size_t>(i)] =
        stat == Statistic::delta ? global_delta(row) : ps_module(paths.times, row, h);
  }
  return out;
}

TailEstimate empirical_tail(std::span<const double> statistics, std::span<const double> u_grid,
                            double confidence) {
  if (statistics.empty()) throw std::invalid_argument("empirical_tail: no observations");
  std::vector<double> sorted(statistics.begin(), statistics.end());
  std::sort(sorted.begin(), sorted.end());
  TailEstimate est;
  est.trials = sorted.size();
  est.confidence = confidence;
  for (double u : u_grid) {
    const auto above = static_cast<std::size_t>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), u));
    est.u.push_back(u);
    est.count.push_back(above);
    est.frequency.push_back(static_cast<double>(above) / static_cast<double>(est.trials));
    est.upper.push_back(clopper_pearson_upper(above, est.trials, confidence));
  }
  return est;
}

BoundaryReport boundary_functionals(const PathSet& paths, std::span<const double> beta_grid) {
  if (paths.count() == 0) throw std::invalid_argument("boundary_functionals: no paths");
  BoundaryReport rep;
  const auto& t = paths.times;
  const std::size_t n = t.size();
  std::vector<double> start(paths.count()), end(paths.count());
  for (double beta : beta_grid) {
    if (!(beta > 0.0 && beta < 0.5)) {
      throw std::invalid_argument("boundary_functionals: beta must lie in (0, 1/2)");
    }
    for (std::size_t i = 0; i < paths.count(); ++i) {
      const auto row = paths.row(i);
      double s0 = 0.0, s1 = 0.0;
      for (std::size_t j = 0; j < n && within(t[j], beta); ++j) {
        s0 = std::max(s0, std::abs(row[j] - row[0]));
      }
      for (std::size_t j = n; j-- > 0 && within(1.0 - t[j], beta);) {
        s1 = std::max(s1, std::abs(row[j] - row[n - 1]));
      }
      start[i] = std::atan(s0);
      end[i] = std::atan(s1);
    }
    const auto e0 = mean_estimate(start);
    const auto e1 = mean_estimate(end);
    rep.beta.push_back(beta);
    rep.z0.push_back(e0.mean);
    rep.z0_se.push_back(e0.standard_error);
    rep.z1.push_back(e1.mean);
    rep.z1_se.push_back(e1.standard_error);
  }
  // Order by beta and compare the smallest against the largest.
  if (!rep.beta.empty()) {
    const auto lo = static_cast<std::size_t>(
        std::min_element(rep.beta.begin(), rep.beta.end()) - rep.beta.begin());
    const auto hi = static_cast<std::size_t>(
        std::max_element(rep.beta.begin(), rep.beta.end()) - rep.beta.begin());
    const auto shrinks = [&](const std::vector<double>& z, const std::vector<double>& se) {
      if (z[hi] == 0.0) return true;
      return z[lo] + 3.0 * se[lo] < z[hi] || z[lo] <= 0.5 * z[hi];
    };
    rep.vanishing = lo != hi ? shrinks(rep.z0, rep.z0_se) && shrinks(rep.z1, rep.z1_se)
                             : rep.z0[lo] == 0.0 && rep.z1[lo] == 0.0;
  }
  return rep;
}

DominationReport domination_report(const TailCurve& bound, const TailEstimate& estimate,
                                   std::string label) {
  if (bound.u.size() != estimate.u.size()) {
    throw std::invalid_argument("domination_report: bound and estimate grids differ in length");
  }
  DominationReport rep;
  rep.label = std::move(label);
  for (std::size_t i = 0; i < bound.u.size(); ++i) {
    const double u = bound.u[i];
    if (std::abs(u - estimate.u[i]) > 1e-12 * std::max(1.0, std::abs(u))) {
      throw std::invalid_argument("domination_report: bound and estimate grids differ");
    }
    DominationRow row{u, bound.prob[i], estimate.frequency[i], estimate.upper[i],
                      bound.prob[i] - estimate.upper[i], false};
    row.pass = row.bound >= row.upper || estimate.count[i] == 0;
    if (!row.pass) {
      rep.pass = false;
      rep.failures.push_back(u);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace psk
