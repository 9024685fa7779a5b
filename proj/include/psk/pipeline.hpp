#pragma once

// End-to-end experiments: simulate a process, estimate its moment function and
// envelope, evaluate the moment bounds and test them against Monte Carlo tails.

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <vector>

#include "psk/bounds.hpp"
#include "psk/simulate.hpp"
#include "psk/stats.hpp"

namespace psk {

struct VerifyConfig {
  ProcessSpec process;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  /// Empty: 24 log-spaced orders on [2, 64].
  std::vector<double> p_grid;
  /// Empty: 20 log-spaced thresholds below the largest observed Delta.
  std::vector<double> u_grid;
  std::vector<double> h_grid{0.05, 0.1};
  double confidence = 0.99;
  std::size_t stride = 0;
};

/// Moment orders used by the pipelines when none are configured.
std::vector<double> pipeline_p_grid();

/// 20 log-spaced thresholds from max/100 to 0.999 max; [0.01, 1] when max is 0.
std::vector<double> automatic_u_grid(std::span<const double> statistics);

struct KappaCheck {
  double h;
  TailCurve bound;
  TailEstimate tail;
  DominationReport report;
};

struct VerifyResult {
  MomentTable moments;
  GFunction envelope{{0.0, 1.0}, {0.0, 0.0}};
  std::vector<double> u;
  TailCurve delta_bound;
  TailEstimate delta_tail;
  DominationReport delta_report;
  std::vector<KappaCheck> kappa;
  bool pass = true;
};

VerifyResult run_verify(const VerifyConfig& config, const PathSet& paths);
VerifyResult run_verify(const VerifyConfig& config);

struct MarginalCheck {
  double t;
  double mean;
  double variance;
  double variance_se;
  NormalityTest normality;
};

struct CltLevel {
  std::size_t n;
  TailEstimate delta_tail;
  DominationReport report;
  std::vector<MarginalCheck> marginals;
};

struct CltConfig {
  ProcessSpec process;
  std::vector<std::size_t> n_values{1, 4, 64};
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  std::vector<double> p_grid;
  std::vector<double> u_grid;
  double h = 0.05;
  double confidence = 0.99;
  std::vector<double> marginal_times{0.25, 0.5, 0.75};
  /// Forces the Rosenthal factor to 1.
  bool unit_rosenthal = false;
};

struct CltResult {
  MomentTable base_moments;
  GFunction envelope{{0.0, 1.0}, {0.0, 0.0}};
  std::vector<double> u;
  CltBounds bounds;
  std::vector<CltLevel> levels;
  bool pass = true;
};

CltResult run_clt(const CltConfig& config);

/// Seed used for the partial sums of size n in a CLT run.
std::uint64_t clt_level_seed(std::uint64_t seed, std::size_t n);

MarginalCheck marginal_check(const PathSet& paths, double t);

nlohmann::ordered_json to_json(const DominationReport& report);
nlohmann::ordered_json verify_summary(const VerifyConfig& config, const VerifyResult& result);
nlohmann::ordered_json clt_summary(const CltConfig& config, const CltResult& result);

/// moments.csv, envelope.csv, tail_delta.csv, tail_kappa_<i>.csv, report.json.
void write_verify_outputs(const std::filesystem::path& dir, const VerifyConfig& config,
                          const VerifyResult& result);
/// moments.csv, envelope.csv, tail_n<n>.csv, report.json.
void write_clt_outputs(const std::filesystem::path& dir, const CltConfig& config,
                       const CltResult& result);
/// paths.csv: header "path" then grid times; one row per path.
void write_paths_csv(const std::filesystem::path& file, const PathSet& paths);
void write_moments_csv(const std::filesystem::path& file, const MomentTable& moments);

}  // namespace psk
