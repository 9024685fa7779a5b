#pragma once

// Seeded simulation of jump processes on a grid of [0, 1] and Monte Carlo
// estimation of moments, envelopes, tails and boundary functionals.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "psk/bounds.hpp"
#include "psk/path.hpp"

namespace psk {

enum class ProcessKind { compound_poisson, poisson, brownian, empirical_process, step_uniform_jump };

struct ProcessSpec {
  ProcessKind kind = ProcessKind::compound_poisson;
  /// Jump intensity for the Poisson kinds.
  double rate = 5.0;
  /// Jump standard deviation (compound Poisson) or diffusion scale (Brownian).
  double scale = 1.0;
  /// Number of uniforms behind the empirical process.
  std::size_t sample_size = 100;
  std::size_t grid_size = 64;

  void validate() const;
  /// Mean-zero marginals at every t.
  bool centered() const;
  std::string name() const;
};

/// Parses "compound-poisson", "poisson", "brownian", "empirical-process" or
/// "step-uniform-jump".
ProcessKind parse_process_kind(const std::string& name);
std::string process_kind_name(ProcessKind kind);

/// Uniform grid i / (n - 1).
std::vector<double> uniform_grid(std::size_t n);

/// Independent paths; path i uses a generator seeded from (seed, i), so the
/// output does not depend on the number of threads.
PathSet generate_paths(const ProcessSpec& spec, std::size_t n_paths, std::uint64_t seed);

/// Each path is n^{-1/2} times the sum of n independent copies. Throws
/// std::invalid_argument for a non-centered process.
PathSet clt_partial_sums(const ProcessSpec& spec, std::size_t n, std::size_t n_paths,
                         std::uint64_t seed);

/// Grid thinning used by estimate_delta_moments when no stride is given.
std::size_t default_stride(std::size_t grid_size);

struct MomentTable {
  std::vector<double> p;
  /// max over grid triples of the sample L_p norm of the triple minimum.
  std::vector<double> nu;
  /// Thinned grid the triples were enumerated on.
  std::vector<double> times;
  std::vector<std::size_t> indices;
  /// w(r, t) = max over s and p of |delta(r, s, t)|_p / nu(p), row-major on `times`.
  std::vector<double> w;
  /// p values dropped because the moments underflowed or overflowed.
  std::vector<double> dropped_p;

  FunctionTable nu_table() const { return {p, nu}; }
};

/// Moment estimates over all triples of the thinned grid (stride 0 = default).
MomentTable estimate_delta_moments(const PathSet& paths, std::span<const double> p_grid,
                                   std::size_t stride = 0);

/// Cumulative envelope with G(t) - G(r) >= w(r, t) on every grid pair.
GFunction fit_g_envelope(std::span<const double> times, std::span<const double> w);

/// Largest shortfall w(r, t) - (G(t) - G(r)) over grid pairs (<= 0 when dominated).
double envelope_shortfall(std::span<const double> times, std::span<const double> w,
                          const GFunction& g);

enum class Statistic { delta, kappa };

/// Delta or kappa(h) of every path, computed in parallel.
std::vector<double> path_statistics(const PathSet& paths, Statistic stat, double h = 1.0);

struct TailEstimate {
  std::vector<double> u;
  std::vector<std::size_t> count;
  std::vector<double> frequency;
  /// Exact binomial upper confidence bound of P(statistic > u).
  std::vector<double> upper;
  std::size_t trials = 0;
  double confidence = 0.0;
};

TailEstimate empirical_tail(std::span<const double> statistics, std::span<const double> u_grid,
                            double confidence);

struct BoundaryReport {
  std::vector<double> beta;
  std::vector<double> z0, z0_se;
  std::vector<double> z1, z1_se;
  /// Both curves trend to zero as beta decreases.
  bool vanishing = false;
};

/// E arctan sup_{t <= beta} |x(t) - x(0)| and E arctan sup_{t >= 1 - beta} |x(t) - x(1)|.
BoundaryReport boundary_functionals(const PathSet& paths, std::span<const double> beta_grid);

struct DominationRow {
  double u;
  double bound;
  double frequency;
  double upper;
  /// bound - upper.
  double margin;
  bool pass;
};

struct DominationReport {
  std::string label;
  std::vector<DominationRow> rows;
  bool pass = true;
  std::vector<double> failures;
};

/// Passes at u when the bound is at least the upper confidence bound, or when
/// no path exceeded u at all.
DominationReport domination_report(const TailCurve& bound, const TailEstimate& estimate,
                                   std::string label = {});

}  // namespace psk
