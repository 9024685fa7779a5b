#include "psk/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "psk/io.hpp"

namespace psk {

namespace {

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

void write_envelope_csv(const std::filesystem::path& file, const GFunction& g) {
  auto out = open_output(file);
  CsvWriter csv(out, {"t", "G"});
  for (std::size_t i = 0; i < g.times().size(); ++i) csv.row({g.times()[i], g.values()[i]});
}

void write_tail_csv(const std::filesystem::path& file, const TailCurve& bound,
                    const TailEstimate& tail) {
  auto out = open_output(file);
  CsvWriter csv(out, {"u", "count", "frequency", "upper", "bound", "bound_raw", "bound_p"});
  for (std::size_t i = 0; i < tail.u.size(); ++i) {
    csv.row({tail.u[i], static_cast<double>(tail.count[i]), tail.frequency[i], tail.upper[i],
             bound.prob[i], bound.raw[i], bound.param[i]});
  }
}

nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json process_json(const ProcessSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = spec.name();
  j["rate"] = spec.rate;
  j["scale"] = spec.scale;
  j["sample_size"] = spec.sample_size;
  j["grid"] = spec.grid_size;
  return j;
}

}  // namespace

std::vector<double> pipeline_p_grid() { return logspace(2.0, 64.0, 24); }

std::vector<double> automatic_u_grid(std::span<const double> statistics) {
  const double top = statistics.empty() ? 0.0 : *std::max_element(statistics.begin(),
                                                                    statistics.end());
  if (!(top > 0.0)) return logspace(0.01, 1.0, 20);
  return logspace(top / 100.0, top * 0.999, 20);
}

VerifyResult run_verify(const VerifyConfig& config, const PathSet& paths) {
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  VerifyResult r;
  const auto p_grid = config.p_grid.empty() ? pipeline_p_grid() : config.p_grid;
  r.moments = estimate_delta_moments(paths, p_grid, config.stride);
  r.envelope = fit_g_envelope(r.moments.times, r.moments.w);
  const auto delta = path_statistics(paths, Statistic::delta);
  r.u = config.u_grid.empty() ? automatic_u_grid(delta) : config.u_grid;
  r.delta_bound = prop41_bound(r.moments.nu_table(), r.envelope, kInf, r.u);
  r.delta_tail = empirical_tail(delta, r.u, config.confidence);
  r.delta_report = domination_report(r.delta_bound, r.delta_tail, "delta");
  r.pass = r.delta_report.pass;
  for (double h : config.h_grid) {
    KappaCheck k;
    k.h = h;
    const auto stats = path_statistics(paths, Statistic::kappa, h);
    k.bound = prop42_kappa_bound(r.moments.nu_table(), r.envelope, kInf, h, r.u);
    k.tail = empirical_tail(stats, r.u, config.confidence);
    k.report = domination_report(k.bound, k.tail, "kappa(h=" + format_double(h) + ")");
    r.pass = r.pass && k.report.pass;
    r.kappa.push_back(std::move(k));
  }
  return r;
}

VerifyResult run_verify(const VerifyConfig& config) {
  config.process.validate();
  if (config.n_paths == 0) throw std::invalid_argument("need at least one path");
  const auto paths = generate_paths(config.process, config.n_paths, config.seed);
  return run_verify(config, paths);
}

std::uint64_t clt_level_seed(std::uint64_t seed, std::size_t n) {
  return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(n) + 1));
}

MarginalCheck marginal_check(const PathSet& paths, double t) {
  const auto it = std::upper_bound(paths.times.begin(), paths.times.end(), t + kGridTol);
  const auto col = static_cast<std::size_t>(it - paths.times.begin()) - 1;
  std::vector<double> x(paths.count()), sq(paths.count());
  for (std::size_t i = 0; i < paths.count(); ++i) x[i] = paths.row(i)[col];
  const auto est = mean_estimate(x);
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - est.mean) * (x[i] - est.mean);
  const auto var = mean_estimate(sq);
  MarginalCheck m{t, est.mean, est.stddev * est.stddev, var.standard_error, {}};
  if (est.stddev > 0.0 && x.size() >= 8) m.normality = anderson_darling_normal(x);
  return m;
}

CltResult run_clt(const CltConfig& config) {
  config.process.validate();
  if (!config.process.centered()) {
    throw std::invalid_argument("clt: process '" + config.process.name() + "' is not centered");
  }
  if (config.n_paths == 0) throw std::invalid_argument("need at least one path");
  CltResult r;
  const auto base = generate_paths(config.process, config.n_paths, config.seed);
  const auto p_grid = config.p_grid.empty() ? pipeline_p_grid() : config.p_grid;
  r.base_moments = estimate_delta_moments(base, p_grid);
  r.envelope = fit_g_envelope(r.base_moments.times, r.base_moments.w);

  std::vector<PathSet> sums;
  std::vector<double> largest;
  for (std::size_t n : config.n_values) {
    sums.push_back(clt_partial_sums(config.process, n, config.n_paths, clt_level_seed(config.seed, n)));
    const auto d = path_statistics(sums.back(), Statistic::delta);
    largest.push_back(d.empty() ? 0.0 : *std::max_element(d.begin(), d.end()));
  }
  r.u = config.u_grid.empty() ? automatic_u_grid(largest) : config.u_grid;
  r.bounds = clt_bounds(r.base_moments.nu_table(), r.envelope, kInf, config.h, r.u,
                        config.unit_rosenthal);
  for (std::size_t i = 0; i < config.n_values.size(); ++i) {
    CltLevel level;
    level.n = config.n_values[i];
    const auto d = path_statistics(sums[i], Statistic::delta);
    level.delta_tail = empirical_tail(d, r.u, config.confidence);
    level.report = domination_report(r.bounds.delta, level.delta_tail,
                                     "delta(n=" + std::to_string(level.n) + ")");
    for (double t : config.marginal_times) level.marginals.push_back(marginal_check(sums[i], t));
    r.pass = r.pass && level.report.pass;
    r.levels.push_back(std::move(level));
  }
  return r;
}

nlohmann::ordered_json to_json(const DominationReport& report) {
  nlohmann::ordered_json j;
  j["label"] = report.label;
  j["pass"] = report.pass;
  j["failures"] = report.failures;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["u"] = row.u;
    r["bound"] = row.bound;
    r["frequency"] = row.frequency;
    r["upper"] = row.upper;
    r["margin"] = row.margin;
    r["pass"] = row.pass;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

nlohmann::ordered_json verify_summary(const VerifyConfig& config, const VerifyResult& result) {
  nlohmann::ordered_json j;
  j["command"] = "verify";
  j["pass"] = result.pass;
  j["process"] = process_json(config.process);
  j["paths"] = config.n_paths;
  j["seed"] = config.seed;
  j["confidence"] = config.confidence;
  j["thinned_grid"] = result.moments.times.size();
  j["dropped_p"] = result.moments.dropped_p;
  j["G1"] = result.envelope.total();
  j["reports"] = nlohmann::ordered_json::array();
  j["reports"].push_back(to_json(result.delta_report));
  for (const auto& k : result.kappa) {
    auto kj = to_json(k.report);
    kj["h"] = k.h;
    kj["omega_G_2h"] = result.envelope.modulus(2.0 * k.h);
    j["reports"].push_back(std::move(kj));
  }
  return j;
}

nlohmann::ordered_json clt_summary(const CltConfig& config, const CltResult& result) {
  nlohmann::ordered_json j;
  j["command"] = "clt";
  j["pass"] = result.pass;
  j["process"] = process_json(config.process);
  j["paths"] = config.n_paths;
  j["seed"] = config.seed;
  j["confidence"] = config.confidence;
  j["unit_rosenthal"] = config.unit_rosenthal;
  j["B1"] = result.envelope.total();
  j["levels"] = nlohmann::ordered_json::array();
  for (const auto& level : result.levels) {
    nlohmann::ordered_json lj;
    lj["n"] = level.n;
    lj["domination"] = to_json(level.report);
    auto marg = nlohmann::ordered_json::array();
    for (const auto& m : level.marginals) {
      nlohmann::ordered_json mj;
      mj["t"] = m.t;
      mj["mean"] = m.mean;
      mj["variance"] = m.variance;
      mj["variance_se"] = m.variance_se;
      mj["anderson_darling"] = m.normality.adjusted;
      mj["p_value"] = number_or_null(m.normality.p_value);
      marg.push_back(std::move(mj));
    }
    lj["marginals"] = std::move(marg);
    j["levels"].push_back(std::move(lj));
  }
  return j;
}

void write_paths_csv(const std::filesystem::path& file, const PathSet& paths) {
  auto out = open_output(file);
  std::vector<std::string> header{"path"};
  for (double t : paths.times) header.push_back(format_double(t));
  CsvWriter csv(out, header);
  for (std::size_t i = 0; i < paths.count(); ++i) {
    std::vector<double> row{static_cast<double>(i)};
    const auto r = paths.row(i);
    row.insert(row.end(), r.begin(), r.end());
    csv.row(row);
  }
}

void write_moments_csv(const std::filesystem::path& file, const MomentTable& moments) {
  auto out = open_output(file);
  CsvWriter csv(out, {"p", "nu"});
  for (std::size_t i = 0; i < moments.p.size(); ++i) csv.row({moments.p[i], moments.nu[i]});
}

void write_verify_outputs(const std::filesystem::path& dir, const VerifyConfig& config,
                          const VerifyResult& result) {
  std::filesystem::create_directories(dir);
  write_moments_csv(dir / "moments.csv", result.moments);
  write_envelope_csv(dir / "envelope.csv", result.envelope);
  write_tail_csv(dir / "tail_delta.csv", result.delta_bound, result.delta_tail);
  for (std::size_t i = 0; i < result.kappa.size(); ++i) {
    write_tail_csv(dir / ("tail_kappa_" + std::to_string(i) + ".csv"), result.kappa[i].bound,
                   result.kappa[i].tail);
  }
  auto out = open_output(dir / "report.json");
  out << verify_summary(config, result).dump(2) << '\n';
}

void write_clt_outputs(const std::filesystem::path& dir, const CltConfig& config,
                       const CltResult& result) {
  std::filesystem::create_directories(dir);
  write_moments_csv(dir / "moments.csv", result.base_moments);
  write_envelope_csv(dir / "envelope.csv", result.envelope);
  for (const auto& level : result.levels) {
    write_tail_csv(dir / ("tail_n" + std::to_string(level.n) + ".csv"), result.bounds.delta,
                   level.delta_tail);
  }
  auto out = open_output(dir / "report.json");
  out << clt_summary(config, result).dump(2) << '\n';
}

}  // namespace psk
