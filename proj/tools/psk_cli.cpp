// psk: command-line front end for the path statistics, bounds and simulations.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "psk/bounds.hpp"
#include "psk/entropy.hpp"
#include "psk/gls.hpp"
#include "psk/io.hpp"
#include "psk/path.hpp"
#include "psk/pipeline.hpp"
#include "psk/simulate.hpp"

namespace {

using namespace psk;

constexpr int kExitFailure = 1;  // a bound was not dominating
constexpr int kExitInvalid = 2;  // bad flags, config or input values
constexpr int kExitIo = 3;       // unreadable or unwritable files

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> list_or(const std::string& text, std::vector<double> fallback) {
  return text.empty() ? fallback : parse_number_list(text);
}

FunctionTable load_table(const std::string& file) {
  if (!std::filesystem::exists(file)) throw IoError("cannot read '" + file + "'");
  return read_two_column(std::filesystem::path(file));
}

/// Output stream: the --out file when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& file) {
    if (!file.empty()) {
      file_ = std::make_unique<std::ofstream>(file, std::ios::binary);
      if (!*file_) throw IoError("cannot write '" + file + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// ---- config files -----------------------------------------------------------

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number()) return format_double(v.get<double>());
  throw std::invalid_argument("config: unsupported value " + v.dump());
}

/// Flat JSON object of option names to values. Values fill only the options
/// that were not given on the command line.
void apply_config(CLI::App* sub, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read config '" + file + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config '" + file + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a flat JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    auto* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw std::invalid_argument("config: unknown key '" + key + "' for '" + sub->get_name() +
                                  "'");
    }
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_array()) {
      for (const auto& item : value) text += (text.empty() ? "" : ",") + json_scalar(item);
    } else {
      text = json_scalar(value);
    }
    opt->add_result(text);
    opt->run_callback();
  }
}

// ---- shared option groups ---------------------------------------------------

struct ProcessOptions {
  std::string kind = "compound-poisson";
  double rate = 5.0;
  double scale = 1.0;
  std::size_t sample_size = 100;
  std::size_t grid = 64;
  std::size_t paths = 10000;
  std::uint64_t seed = 1;
  std::string p_grid;
  std::string u_grid;
  std::string h_grid = "0.05,0.1";
  double confidence = 0.99;
  std::size_t stride = 0;
  std::string out;
  std::string config;
};

void add_process_options(CLI::App* sub, ProcessOptions& o) {
  sub->add_option("--process", o.kind,
                  "compound-poisson | poisson | brownian | empirical-process | step-uniform-jump")
      ->capture_default_str();
  sub->add_option("--rate", o.rate, "jump intensity of the Poisson kinds")->capture_default_str();
  sub->add_option("--scale", o.scale, "jump sd (compound Poisson) or diffusion scale")
      ->capture_default_str();
  sub->add_option("--sample-size", o.sample_size, "uniforms per empirical-process path")
      ->capture_default_str();
  sub->add_option("--grid", o.grid, "grid points on [0, 1]")->capture_default_str();
  sub->add_option("--paths", o.paths, "number of simulated paths")->capture_default_str();
  sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  sub->add_option("--p-grid", o.p_grid, "moment orders, comma separated (default 24 on [2, 64])");
  sub->add_option("--u-grid", o.u_grid, "thresholds, comma separated (default automatic)");
  sub->add_option("--confidence", o.confidence, "level of the binomial upper bounds")
      ->capture_default_str();
  sub->add_option("--stride", o.stride,
                  "use every stride-th grid point for the moment triples (0: automatic)")
      ->capture_default_str();
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--config", o.config, "JSON file of option values; flags take precedence");
}

ProcessSpec to_spec(const ProcessOptions& o) {
  ProcessSpec spec;
  spec.kind = parse_process_kind(o.kind);
  spec.rate = o.rate;
  spec.scale = o.scale;
  spec.sample_size = o.sample_size;
  spec.grid_size = o.grid;
  spec.validate();
  if (o.paths == 0) throw std::invalid_argument("--paths must be at least 1");
  if (!(o.confidence > 0.0 && o.confidence < 1.0)) {
    throw std::invalid_argument("--confidence must lie in (0, 1)");
  }
  return spec;
}

/// Increment envelope: a two-column table, or G(t) = scale * t.
struct EnvelopeOptions {
  std::string table;
  double scale = 1.0;
};

void add_envelope_options(CLI::App* sub, EnvelopeOptions& o, const std::string& letter) {
  sub->add_option("--" + letter + "-table", o.table,
                  "two-column table of the nondecreasing envelope " + letter + "(t)");
  sub->add_option("--" + letter + "-scale", o.scale,
                  "use the linear envelope " + letter + "(t) = scale * t")
      ->capture_default_str();
}

GFunction to_envelope(const EnvelopeOptions& o) {
  if (!o.table.empty()) {
    const auto t = load_table(o.table);
    return GFunction(t.x, t.y);
  }
  if (!(o.scale >= 0.0)) throw std::invalid_argument("envelope scale must be nonnegative");
  return GFunction({0.0, 1.0}, {0.0, o.scale});
}

/// Moment function: a two-column table, or c * p^k on the p grid.
struct MomentOptions {
  std::string table;
  std::string power = "1,0.5";
  std::string p_grid;
  double b = kInf;
};

void add_moment_options(CLI::App* sub, MomentOptions& o, const std::string& name) {
  sub->add_option("--" + name + "-table", o.table, "two-column table p, " + name + "(p)");
  sub->add_option("--" + name + "-power", o.power, "c,k for " + name + "(p) = c p^k")
      ->capture_default_str();
  sub->add_option("--p-grid", o.p_grid, "moment orders (default 200 log-spaced on [2, 256))");
  sub->add_option("--b", o.b, "upper end of the admissible orders [2, b)");
}

FunctionTable to_moments(const MomentOptions& o) {
  if (!o.table.empty()) return load_table(o.table);
  const auto ck = parse_number_list(o.power);
  if (ck.size() != 2) throw std::invalid_argument("power form needs two numbers c,k");
  FunctionTable t;
  t.x = list_or(o.p_grid, default_p_grid(o.b, 2.0));
  for (double p : t.x) t.y.push_back(ck[0] * std::pow(p, ck[1]));
  return t;
}

void write_curve(std::ostream& out, const TailCurve& c, const std::string& param,
                 const std::string& param2 = {}) {
  std::vector<std::string> header{"u", "bound", "raw", param};
  if (!param2.empty()) header.push_back(param2);
  CsvWriter csv(out, header);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<double> row{c.u[i], c.prob[i], c.raw[i], c.param[i]};
    if (!param2.empty()) row.push_back(c.param2[i]);
    csv.row(row);
  }
}

// ---- subcommands ------------------------------------------------------------

struct KappaOptions {
  std::string path;
  std::string deltas;
  std::string out;
  std::string config;
};

int run_kappa(const KappaOptions& o) {
  std::ifstream in(o.path);
  if (!in) throw IoError("cannot read path file '" + o.path + "'");
  const auto path = read_path(in);
  Sink sink(o.out);
  auto& out = sink.stream();
  if (o.deltas.empty()) {
    out << format_double(global_delta(path)) << '\n';
    return 0;
  }
  const auto deltas = parse_number_list(o.deltas);
  if (deltas.size() == 1) {
    out << format_double(ps_module(path, deltas[0])) << '\n';
    return 0;
  }
  CsvWriter csv(out, {"delta", "kappa"});
  for (double d : deltas) csv.row({d, ps_module(path, d)});
  return 0;
}

struct EntropyOptions {
  std::string matrix;
  double power = 1.0;
  std::size_t grid = 1024;
  std::string eps = "0.25,0.1,0.05,0.01";
  std::string sigma_h;
  std::string out;
  std::string config;
};

int run_entropy(const EntropyOptions& o) {
  std::optional<SemiDistanceGrid> q;
  if (!o.matrix.empty()) {
    std::ifstream in(o.matrix);
    if (!in) throw IoError("cannot read matrix '" + o.matrix + "'");
    q = read_semidistance(in);
  } else {
    if (!(o.power > 0.0)) throw std::invalid_argument("--q-power must be positive");
    const double a = o.power;
    q = SemiDistanceGrid::from_function(uniform_grid(o.grid), [a](double r, double t) {
      return std::pow(std::abs(t - r), a);
    });
  }
  Sink sink(o.out);
  auto& out = sink.stream();
  CsvWriter csv(out, {"epsilon", "N", "H", "exact", "certified"});
  for (double e : parse_number_list(o.eps)) {
    const auto cover = covering_number(*q, e);
    csv.row(std::vector<std::string>{format_double(e), std::to_string(cover.count),
                                     format_double(std::log(static_cast<double>(cover.count))),
                                     cover.exact ? "1" : "0",
                                     verify_cover(*q, cover) ? "1" : "0"});
  }
  if (!o.sigma_h.empty()) {
    const auto rep = sigma_report(*q, parse_number_list(o.sigma_h));
    out << '\n';
    CsvWriter s(out, {"h", "sigma"});
    for (std::size_t i = 0; i < rep.h.size(); ++i) s.row({rep.h[i], rep.sigma[i]});
    out << "# sigma vanishing as h -> 0: " << (rep.vanishing ? "yes" : "no") << '\n';
  }
  return 0;
}

struct ConjugateOptions {
  std::string table;
  std::string u_grid;
  std::string out;
  std::string config;
};

int run_conjugate(const ConjugateOptions& o) {
  const auto f = load_table(o.table);
  const auto result = o.u_grid.empty() ? young_fenchel(f)
                                       : young_fenchel(f, parse_number_list(o.u_grid));
  Sink sink(o.out);
  CsvWriter csv(sink.stream(), {"u", "conjugate"});
  for (std::size_t i = 0; i < result.size(); ++i) csv.row({result.x[i], result.y[i]});
  return 0;
}

int run_simulate(const ProcessOptions& o, bool write_paths) {
  const auto spec = to_spec(o);
  const auto paths = generate_paths(spec, o.paths, o.seed);
  const auto moments = estimate_delta_moments(paths, list_or(o.p_grid, pipeline_p_grid()), o.stride);
  const auto g = fit_g_envelope(moments.times, moments.w);
  const auto delta = path_statistics(paths, Statistic::delta);
  const auto u = list_or(o.u_grid, automatic_u_grid(delta));
  const auto tail = empirical_tail(delta, u, o.confidence);
  const std::filesystem::path dir = o.out.empty() ? "." : o.out;
  std::filesystem::create_directories(dir);
  if (write_paths) write_paths_csv(dir / "paths.csv", paths);
  write_moments_csv(dir / "moments.csv", moments);
  {
    std::ofstream out(dir / "envelope.csv", std::ios::binary);
    CsvWriter csv(out, {"t", "G"});
    for (std::size_t i = 0; i < g.times().size(); ++i) csv.row({g.times()[i], g.values()[i]});
  }
  {
    std::ofstream out(dir / "tail_delta.csv", std::ios::binary);
    CsvWriter csv(out, {"u", "count", "frequency", "upper"});
    for (std::size_t i = 0; i < tail.u.size(); ++i) {
      csv.row({tail.u[i], static_cast<double>(tail.count[i]), tail.frequency[i], tail.upper[i]});
    }
  }
  double jumps = 0.0;
  for (auto c : paths.jump_counts) jumps += c;
  nlohmann::ordered_json j;
  j["command"] = "simulate";
  j["process"] = spec.name();
  j["paths"] = o.paths;
  j["seed"] = o.seed;
  j["grid"] = spec.grid_size;
  j["mean_jumps"] = jumps / static_cast<double>(paths.count());
  j["G1"] = g.total();
  j["dropped_p"] = moments.dropped_p;
  std::ofstream rep(dir / "report.json", std::ios::binary);
  rep << j.dump(2) << '\n';
  std::cout << "wrote " << (dir / "report.json").string() << '\n';
  return 0;
}

std::vector<double> parse_h_grid(const std::string& text) {
  auto h = parse_number_list(text);
  for (double v : h) {
    if (!(v > 0.0 && v <= 0.5)) throw std::invalid_argument("--h values must lie in (0, 1/2]");
  }
  return h;
}

int run_verify_cmd(const ProcessOptions& o, bool write_paths) {
  VerifyConfig cfg;
  cfg.process = to_spec(o);
  cfg.n_paths = o.paths;
  cfg.seed = o.seed;
  cfg.p_grid = list_or(o.p_grid, {});
  cfg.u_grid = list_or(o.u_grid, {});
  cfg.h_grid = parse_h_grid(o.h_grid);
  cfg.confidence = o.confidence;
  cfg.stride = o.stride;
  const auto paths = generate_paths(cfg.process, cfg.n_paths, cfg.seed);
  const auto result = run_verify(cfg, paths);
  const std::filesystem::path dir = o.out.empty() ? "." : o.out;
  write_verify_outputs(dir, cfg, result);
  if (write_paths) write_paths_csv(dir / "paths.csv", paths);
  const auto summary = verify_summary(cfg, result);
  if (!result.pass) {
    std::cerr << "domination failure\n" << summary.dump(2) << '\n';
    return kExitFailure;
  }
  std::cout << "verify: all bounds dominate (" << (dir / "report.json").string() << ")\n";
  return 0;
}

struct CltOptions {
  ProcessOptions process;
  std::string n_values = "1,4,64";
  double h = 0.05;
  bool unit_rosenthal = false;
};

int run_clt_cmd(const CltOptions& o) {
  CltConfig cfg;
  cfg.process = to_spec(o.process);
  cfg.n_paths = o.process.paths;
  cfg.seed = o.process.seed;
  cfg.p_grid = list_or(o.process.p_grid, {});
  cfg.u_grid = list_or(o.process.u_grid, {});
  cfg.confidence = o.process.confidence;
  cfg.h = parse_h_grid(format_double(o.h)).front();
  cfg.unit_rosenthal = o.unit_rosenthal;
  cfg.n_values.clear();
  for (double n : parse_number_list(o.n_values)) {
    if (!(n >= 1.0) || n != std::floor(n)) throw std::invalid_argument("--n values must be positive integers");
    cfg.n_values.push_back(static_cast<std::size_t>(n));
  }
  const auto result = run_clt(cfg);
  const std::filesystem::path dir = o.process.out.empty() ? "." : o.process.out;
  write_clt_outputs(dir, cfg, result);
  if (!result.pass) {
    std::cerr << "domination failure\n" << clt_summary(cfg, result).dump(2) << '\n';
    return kExitFailure;
  }
  std::cout << "clt: bounds dominate at every n (" << (dir / "report.json").string() << ")\n";
  return 0;
}

// ---- bound subcommands ------------------------------------------------------

struct BoundOptions {
  // shared
  std::string u_grid;
  std::string out;
  std::string config;
  double h = 0.05;
  // K constant and power-law bounds
  std::string alpha = "2";
  std::string beta = "1";
  std::string mode = "closed";
  EnvelopeOptions g;
  // entropy series
  std::string preset;
  double cover_const = 1.0;
  double gamma = 0.5;
  double gamma1 = 0.0;
  double series_beta = 1.0;
  double s = 0.1;
  double theta = 0.6;
  double nu = 2.0;
  double u = 1.0;
  // moment bounds
  MomentOptions moments;
  // envelopes
  double c1 = 1.0;
  double m = 1.0;
  double log_power = 0.0;
  // min tail
  std::string samples;
  std::size_t uniform_pairs = 0;
  std::uint64_t seed = 1;
  double v = 1.0;
  std::string p1_grid;
  std::string p2_grid;
  int d = 1;
  // pizier
  std::string d_power = "1,0.5";
  double r = 0.0;
  double s_time = 0.25;
  double t = 0.5;
  std::string s_grid;
  // (l, Z, V) kappa bound
  double l = 2.0;
  double z = 1.0;
  double b = kInf;
  std::string range = "as-printed";
  EnvelopeOptions venv;
  // Rosenthal
  double p = 2.0;
  bool unit_rosenthal = false;
};

KMode parse_mode(const std::string& mode) {
  if (mode == "closed") return KMode::closed;
  if (mode == "optimized") return KMode::optimized;
  throw std::invalid_argument("--mode must be closed or optimized");
}

std::vector<AlphaBeta> parse_pairs(const BoundOptions& o) {
  const auto a = parse_number_list(o.alpha);
  const auto b = parse_number_list(o.beta);
  if (a.size() != b.size()) throw std::invalid_argument("--alpha and --beta lists differ in length");
  std::vector<AlphaBeta> set;
  for (std::size_t i = 0; i < a.size(); ++i) set.push_back({a[i], b[i]});
  return set;
}

std::vector<double> bound_u_grid(const BoundOptions& o) {
  return list_or(o.u_grid, default_u_grid());
}

int bound_k_constant(const BoundOptions& o) {
  const auto pairs = parse_pairs(o);
  Sink sink(o.out);
  auto& out = sink.stream();
  const auto mode = parse_mode(o.mode);
  if (pairs.size() == 1 && mode == KMode::closed) {
    out << format_double(k_constant(pairs[0].alpha, pairs[0].beta)) << '\n';
    return 0;
  }
  CsvWriter csv(out, {"alpha", "beta", "K", "theta"});
  for (const auto& ab : pairs) {
    if (mode == KMode::closed) {
      csv.row({ab.alpha, ab.beta, k_constant(ab.alpha, ab.beta), std::pow(2.0, (1.0 - ab.alpha) / (4.0 * ab.beta))});
    } else {
      const auto m = k_constant_theta(ab.alpha, ab.beta);
      csv.row({ab.alpha, ab.beta, m.value, m.argmin});
    }
  }
  return 0;
}

int bound_prop30(const BoundOptions& o, bool kappa) {
  const auto pairs = parse_pairs(o);
  const auto g = to_envelope(o.g);
  const auto u = bound_u_grid(o);
  const auto curve = kappa ? prop30_kappa_bound(pairs, g, o.h, u, parse_mode(o.mode))
                           : prop30_delta_bound(pairs, g, u, parse_mode(o.mode));
  Sink sink(o.out);
  write_curve(sink.stream(), curve, "alpha", "beta");
  return 0;
}

int bound_entropy_series(const BoundOptions& o) {
  double c = o.cover_const, gamma = o.gamma, gamma1 = o.gamma1, beta = o.series_beta;
  std::vector<SequencePair> family;
  if (o.preset == "geometric" || o.preset.empty()) {
    family.push_back(geometric_sequences(o.s, o.theta));
  } else if (o.preset == "polynomial") {
    family.push_back(polynomial_sequences(o.nu));
  } else {
    throw std::invalid_argument("--sequences must be geometric or polynomial");
  }
  std::function<double(double)> covering;
  if (gamma1 > 0.0) {
    covering = [c, gamma1](double e) { return c / e * std::pow(std::abs(std::log(e)), -gamma1); };
  } else {
    covering = [c, gamma](double e) { return c * std::pow(e, -gamma); };
  }
  const auto lambda = [beta](double x) { return std::pow(x, 2.0 * beta); };
  const auto r = entropy_q_bound(covering, lambda, family, o.u);
  Sink sink(o.out);
  auto& out = sink.stream();
  nlohmann::ordered_json j;
  j["available"] = r.available;
  j["u"] = o.u;
  j["value"] = r.available ? nlohmann::ordered_json(r.value) : nlohmann::ordered_json(nullptr);
  j["coefficient"] = r.available ? nlohmann::ordered_json(r.value * std::pow(o.u, 2.0 * beta))
                                 : nlohmann::ordered_json(nullptr);
  j["partial"] = r.partial;
  j["remainder"] = std::isfinite(r.remainder) ? nlohmann::ordered_json(r.remainder)
                                              : nlohmann::ordered_json(nullptr);
  j["terms"] = r.terms;
  j["theta_sum"] = r.theta_sum;
  j["theta_sum_ok"] = r.theta_ok;
  j["message"] = r.message;
  out << j.dump(2) << '\n';
  return 0;
}

int bound_gls(const BoundOptions& o, bool kappa) {
  const auto nu = to_moments(o.moments);
  const auto g = to_envelope(o.g);
  const auto u = bound_u_grid(o);
  const auto curve = kappa ? prop42_kappa_bound(nu, g, o.moments.b, o.h, u)
                           : prop41_bound(nu, g, o.moments.b, u);
  Sink sink(o.out);
  write_curve(sink.stream(), curve, "p");
  return 0;
}

void write_envelopes(std::ostream& out, const Envelopes& env) {
  out << "# C_delta=" << format_double(env.c_delta) << " C_kappa=" << format_double(env.c_kappa)
      << " omega=" << format_double(env.omega) << '\n';
  CsvWriter csv(out, {"u", "delta_envelope", "delta_in_range", "kappa_envelope",
                      "kappa_in_range"});
  for (std::size_t i = 0; i < env.delta.size(); ++i) {
    csv.row({env.delta.u[i], env.delta.prob[i], env.delta_in_range[i] ? 1.0 : 0.0,
             env.kappa.prob[i], env.kappa_in_range[i] ? 1.0 : 0.0});
  }
}

int bound_exp_envelope(const BoundOptions& o) {
  const auto env = exp_tail_envelopes(o.c1, o.m, to_envelope(o.g), o.h, bound_u_grid(o),
                                      list_or(o.moments.p_grid, {}));
  Sink sink(o.out);
  write_envelopes(sink.stream(), env);
  return 0;
}

int bound_clt_envelope(const BoundOptions& o) {
  const auto env = clt_envelopes(o.c1, o.m, o.log_power, to_envelope(o.g), o.h, bound_u_grid(o),
                                 list_or(o.moments.p_grid, {}));
  Sink sink(o.out);
  write_envelopes(sink.stream(), env);
  return 0;
}

int bound_min_tail_2d(const BoundOptions& o) {
  std::vector<double> x, y;
  if (!o.samples.empty()) {
    const auto t = load_table(o.samples);
    x = t.x;
    y = t.y;
  } else if (o.uniform_pairs > 0) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < o.uniform_pairs; ++i) {
      x.push_back(unif(rng));
      y.push_back(unif(rng));
    }
  } else {
    throw std::invalid_argument("min-tail-2d needs --samples or --uniform-pairs");
  }
  const auto p1 = list_or(o.p1_grid, logspace(0.05, 8.0, 60));
  const auto p2 = list_or(o.p2_grid, p1);
  const auto r = min_tail_2d([&](double a, double b) { return joint_moment(x, y, a, b); }, o.u,
                             o.v, p1, p2);
  std::size_t joint = 0;
  for (std::size_t i = 0; i < x.size(); ++i) joint += (std::abs(x[i]) > o.u && std::abs(y[i]) > o.v);
  Sink sink(o.out);
  nlohmann::ordered_json j;
  j["bound"] = r.bound;
  j["raw"] = r.raw;
  j["p1"] = r.p1;
  j["p2"] = r.p2;
  j["grid_edge"] = r.grid_edge;
  j["no_finite_moment"] = r.no_finite_moment;
  j["empirical_joint_tail"] = static_cast<double>(joint) / static_cast<double>(x.size());
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

int bound_min_tail_fenchel(const BoundOptions& o) {
  FunctionTable psi = to_moments(o.moments);
  if (o.moments.table.empty()) {
    // Power form on [1, b).
    psi.x = list_or(o.moments.p_grid, default_p_grid(o.moments.b, 1.0));
    const auto ck = parse_number_list(o.moments.power);
    psi.y.clear();
    for (double p : psi.x) psi.y.push_back(ck[0] * std::pow(p, ck[1]));
  }
  const auto r = min_tail_fenchel(psi, o.d, o.u);
  Sink sink(o.out);
  nlohmann::ordered_json j;
  j["via_transform"] = r.via_transform;
  j["direct"] = r.direct;
  j["argmax_p"] = r.argmax_p;
  j["grid_edge"] = r.grid_edge;
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

int bound_pizier(const BoundOptions& o) {
  const auto ca = parse_number_list(o.d_power);
  if (ca.size() != 2) throw std::invalid_argument("--d-power needs c,a");
  const double c = ca[0], a = ca[1];
  const IncrementDistance d = [c, a](double, double r, double t) {
    return c * std::pow(std::abs(t - r), a);
  };
  const auto p = list_or(o.moments.p_grid, logspace(0.05, 64.0, 200));
  const auto r = o.s_grid.empty()
                     ? pizier_min_bound(d, o.r, o.s_time, o.t, o.u, p)
                     : pizier_min_bound_sup(d, o.r, parse_number_list(o.s_grid), o.t, o.u, p);
  Sink sink(o.out);
  nlohmann::ordered_json j;
  j["bound"] = r.bound;
  j["raw"] = r.raw;
  j["p"] = r.p1;
  if (!o.s_grid.empty()) j["worst_s"] = r.p2;
  j["grid_edge"] = r.grid_edge;
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

int bound_kappa_516(const BoundOptions& o) {
  KappaRange range;
  if (o.range == "as-printed") {
    range = KappaRange::as_printed;
  } else if (o.range == "lp-gt-one") {
    range = KappaRange::lp_gt_one;
  } else {
    throw std::invalid_argument("--range must be as-printed or lp-gt-one");
  }
  const double zc = o.z;
  const auto v = to_envelope(o.venv);
  const auto p = list_or(o.moments.p_grid, default_p_grid(o.b, 2.0));
  const auto r = kappa_bound_516([zc](double) { return zc; }, v, o.l, o.b, o.h, o.u, p, range,
                                 parse_mode(o.mode));
  Sink sink(o.out);
  nlohmann::ordered_json j;
  j["available"] = r.available;
  j["bound"] = r.bound;
  j["raw"] = std::isfinite(r.raw) ? nlohmann::ordered_json(r.raw) : nlohmann::ordered_json(nullptr);
  j["p"] = std::isfinite(r.p) ? nlohmann::ordered_json(r.p) : nlohmann::ordered_json(nullptr);
  j["message"] = r.message;
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

int bound_rosenthal(const BoundOptions& o) {
  Sink sink(o.out);
  sink.stream() << format_double(rosenthal_constant(o.p)) << '\n';
  return 0;
}

int bound_clt(const BoundOptions& o) {
  const auto y = to_moments(o.moments);
  const auto b = to_envelope(o.g);
  const auto u = bound_u_grid(o);
  const auto r = clt_bounds(y, b, o.moments.b, o.h, u, o.unit_rosenthal);
  Sink sink(o.out);
  CsvWriter csv(sink.stream(), {"u", "delta_bound", "delta_p", "kappa_bound", "kappa_p"});
  for (std::size_t i = 0; i < u.size(); ++i) {
    csv.row({u[i], r.delta.prob[i], r.delta.param[i], r.kappa.prob[i], r.kappa.param[i]});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psk: regularity statistics of step paths, tail bounds and Monte Carlo checks"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, std::string*>> config_targets;
  const auto add_config = [&](CLI::App* sub, std::string& target, bool add_flag = true) {
    if (add_flag) sub->add_option("--config", target, "JSON file of option values; flags take precedence");
    config_targets.emplace_back(sub, &target);
  };

  // kappa
  KappaOptions ko;
  auto* kappa = app.add_subcommand(
      "kappa",
      "Path statistics. Without --delta prints Delta = max over grid triples r<=s<=t of "
      "min(|f(s)-f(r)|, |f(t)-f(s)|); with --delta prints kappa(delta), the same maximum "
      "restricted to triples with t - r <= delta.");
  kappa->add_option("path", ko.path, "two-column file: time value")->required();
  kappa->add_option("--delta", ko.deltas, "window width(s) in [0, 1], comma separated");
  kappa->add_option("--out", ko.out, "output file (default stdout)");
  add_config(kappa, ko.config);

  // entropy
  EntropyOptions eo;
  auto* entropy = app.add_subcommand(
      "entropy",
      "Covering numbers N(eps): fewest closed balls {q(x, .) <= eps} covering [0, 1], and "
      "H = ln N. With --sigma-h also sigma(h) = max{q(r,t) : |r-t| <= 2h} / h.");
  entropy->add_option("--q-matrix", eo.matrix, "dense matrix file (header row of times)");
  entropy->add_option("--q-power", eo.power, "use q(r,t) = |r-t|^a")->capture_default_str();
  entropy->add_option("--grid", eo.grid, "grid points for --q-power")->capture_default_str();
  entropy->add_option("--eps", eo.eps, "radii, comma separated")->capture_default_str();
  entropy->add_option("--sigma-h", eo.sigma_h, "h values for sigma(h)");
  entropy->add_option("--out", eo.out, "output file (default stdout)");
  add_config(entropy, eo.config);

  // conjugate
  ConjugateOptions co;
  auto* conjugate = app.add_subcommand(
      "conjugate",
      "Young-Fenchel transform f*(u) = max over the table of (x u - f(x)). Without --u-grid "
      "the transform is evaluated at the chord slopes of the lower convex hull.");
  conjugate->add_option("table", co.table, "two-column file: x f(x)")->required();
  conjugate->add_option("--u-grid", co.u_grid, "points u, comma separated");
  conjugate->add_option("--out", co.out, "output file (default stdout)");
  add_config(conjugate, co.config);

  // simulate / verify
  ProcessOptions so;
  bool sim_paths = true;
  auto* simulate = app.add_subcommand(
      "simulate",
      "Simulates paths and writes paths.csv, moments.csv (nu(p) = max over triples of the "
      "L_p norm of the triple minimum), envelope.csv (G with w(r,t) <= G(t) - G(r)), "
      "tail_delta.csv (P(Delta > u) with binomial upper bounds) and report.json.");
  add_process_options(simulate, so);
  simulate->add_flag("--paths-csv,!--no-paths-csv", sim_paths, "write paths.csv")
      ->capture_default_str();
  add_config(simulate, so.config, false);

  ProcessOptions vo;
  bool verify_paths = false;
  auto* verify = app.add_subcommand(
      "verify",
      "Domination check: P(Delta > u) <= inf_p (3 nu(p) G(1) / u)^p and P(kappa(h) > u) <= "
      "2 inf_p (3 nu(p) G(1) / u)^p omega_G(2h)^(p-1), each compared with the upper "
      "confidence bound of the simulated tail. Exit 1 when any u fails.");
  add_process_options(verify, vo);
  verify->add_option("--window", vo.h_grid, "window widths h, comma separated")->capture_default_str();
  verify->add_flag("--paths-csv", verify_paths, "also write paths.csv");
  add_config(verify, vo.config, false);

  CltOptions clo;
  auto* clt = app.add_subcommand(
      "clt",
      "Normalised sums S_n = n^(-1/2) (xi_1 + ... + xi_n): checks sup_n P(Delta[S_n] > u) <= "
      "inf_p (3 K_R(p) y(p) B(1) / u)^p with K_R(p) = 0.6535 p / ln p, and tests the "
      "marginals of S_n for normality.");
  add_process_options(clt, clo.process);
  clt->add_option("--n", clo.n_values, "summand counts, comma separated")->capture_default_str();
  clt->add_option("--window", clo.h, "window width for the kappa bound")->capture_default_str();
  clt->add_flag("--unit-rosenthal", clo.unit_rosenthal, "use K_R(p) = 1");
  add_config(clt, clo.process.config, false);

  // bound
  BoundOptions bo;
  auto* bound = app.add_subcommand("bound", "Evaluates one tail bound by name.");
  bound->require_subcommand(1);
  const auto common = [&](CLI::App* sub, bool u_grid = true) {
    if (u_grid) sub->add_option("--u-grid", bo.u_grid, "thresholds (default 200 on [0.01, 100])");
    sub->add_option("--out", bo.out, "output file (default stdout)");
    add_config(sub, bo.config);
  };
  const auto alpha_beta = [&](CLI::App* sub) {
    sub->add_option("--alpha", bo.alpha, "alpha values (> 1), comma separated")->capture_default_str();
    sub->add_option("--beta", bo.beta, "beta values (> 0), comma separated")->capture_default_str();
    sub->add_option("--mode", bo.mode, "closed | optimized")->capture_default_str();
  };

  auto* bk = bound->add_subcommand(
      "k-constant",
      "K(a,b) = (1 - 2^((1-a)/(4b)))^(-2b) / (2^((a-1)/2) - 1) (closed), or the minimum over "
      "theta in (2^((1-a)/(2b)), 1) of 2^((1-a)/(2b)) theta^(-2b) (1-theta)^(-2b) / "
      "(1 - 2^(1-a) theta^(-2b)) (optimized).");
  alpha_beta(bk);
  common(bk, false);

  auto* b30d = bound->add_subcommand(
      "prop30-delta", "P(Delta > u) <= min over (a,b) of K(a,b) u^(-2b) (G(1) - G(0))^a.");
  alpha_beta(b30d);
  add_envelope_options(b30d, bo.g, "g");
  common(b30d);

  auto* b30k = bound->add_subcommand(
      "prop30-kappa",
      "P(kappa(h) > u) <= min over (a,b) of 2 K(a,b) u^(-2b) (G(1) - G(0))^a omega_G(2h)^(a-1).");
  alpha_beta(b30k);
  add_envelope_options(b30k, bo.g, "g");
  b30k->add_option("--window", bo.h, "window width in (0, 1/2]")->capture_default_str();
  common(b30k);

  auto* bes = bound->add_subcommand(
      "entropy-series",
      "Q(u) = sum_k N(eps(k+1)) eps(k) / lambda(u theta(k)) with lambda(x) = x^(2 beta) and "
      "N(eps) = C eps^(-gamma) (or C eps^(-1) |ln eps|^(-gamma1)). Bounds P(Delta > 2u).");
  bes->add_option("--sequences", bo.preset,
                  "geometric: eps(k) = s^(k-1), theta(k) = (1-theta) theta^k; polynomial: "
                  "eps(k) = e^(1-k), theta(k) = k^(-nu) / zeta(nu)");
  bes->add_option("--cover-const", bo.cover_const, "C")->capture_default_str();
  bes->add_option("--gamma", bo.gamma, "covering exponent gamma")->capture_default_str();
  bes->add_option("--gamma1", bo.gamma1, "log exponent gamma1 (> 0 selects the log form)");
  bes->add_option("--beta", bo.series_beta, "lambda exponent beta")->capture_default_str();
  bes->add_option("--s", bo.s, "geometric radius ratio s")->capture_default_str();
  bes->add_option("--theta", bo.theta, "geometric weight ratio theta")->capture_default_str();
  bes->add_option("--nu", bo.nu, "polynomial weight exponent nu")->capture_default_str();
  bes->add_option("--u", bo.u, "threshold u")->capture_default_str();
  common(bes, false);

  auto* bgd = bound->add_subcommand(
      "gls-delta", "P(Delta > u) <= inf over p in [2, b) of (3 nu(p) G(1) / u)^p.");
  add_moment_options(bgd, bo.moments, "nu");
  add_envelope_options(bgd, bo.g, "g");
  common(bgd);

  auto* bgk = bound->add_subcommand(
      "gls-kappa",
      "P(kappa(h) > u) <= 2 inf over p in [2, b) of (3 nu(p) (G(1) - G(0)) / u)^p "
      "omega_G(2h)^(p-1).");
  add_moment_options(bgk, bo.moments, "nu");
  add_envelope_options(bgk, bo.g, "g");
  bgk->add_option("--window", bo.h, "window width in (0, 1/2]")->capture_default_str();
  common(bgk);

  auto* bee = bound->add_subcommand(
      "exp-envelope",
      "For nu(p) <= c1 p^m: exp(-C2 u^(1/m)) for u >= 1 and 2/w exp(-C3 u^(1/m) w) for u >= "
      "(w |ln w|)^(-m), w = omega_G(2h); C2, C3 fitted to the moment infimum.");
  bee->add_option("--c1", bo.c1, "c1")->capture_default_str();
  bee->add_option("--m", bo.m, "m")->capture_default_str();
  bee->add_option("--window", bo.h, "window width in (0, 1/2]")->capture_default_str();
  bee->add_option("--p-grid", bo.moments.p_grid, "moment orders");
  add_envelope_options(bee, bo.g, "g");
  common(bee);

  auto* b2d = bound->add_subcommand(
      "min-tail-2d",
      "P(|x| > u, |y| > v) <= inf over (p1, p2) of E|x|^p1 |y|^p2 / (u^p1 v^p2).");
  b2d->add_option("--samples", bo.samples, "two-column file of (x, y) draws");
  b2d->add_option("--uniform-pairs", bo.uniform_pairs, "draw this many independent U(0,1) pairs");
  b2d->add_option("--seed", bo.seed, "seed for --uniform-pairs")->capture_default_str();
  b2d->add_option("--u", bo.u, "u")->capture_default_str();
  b2d->add_option("--v", bo.v, "v")->capture_default_str();
  b2d->add_option("--p1-grid", bo.p1_grid, "p1 values (default 60 on [0.05, 8])");
  b2d->add_option("--p2-grid", bo.p2_grid, "p2 values (default: p1 grid)");
  common(b2d, false);

  auto* bft = bound->add_subcommand(
      "min-tail-fenchel",
      "P(min_j |x_j| > u) <= exp(-psi1*(d ln u)) with psi1(p) = p ln psi(p) on [1, b), "
      "psi(p) the L_p norm of the product of the |x_j|; u > 1.");
  add_moment_options(bft, bo.moments, "psi");
  bft->add_option("--d", bo.d, "number of factors d")->capture_default_str();
  bft->add_option("--u", bo.u, "threshold u > 1")->capture_default_str();
  common(bft, false);

  auto* bpz = bound->add_subcommand(
      "pizier",
      "P(delta(r,s,t) > u) <= inf over p of d_2p(r,s)^p d_2p(s,t)^p / u^(2p), with the "
      "distance d_2p(r,t) = c |t - r|^a; --s-grid takes the sup over s.");
  bpz->add_option("--d-power", bo.d_power, "c,a")->capture_default_str();
  bpz->add_option("--r", bo.r, "r")->capture_default_str();
  bpz->add_option("--s", bo.s_time, "s")->capture_default_str();
  bpz->add_option("--t", bo.t, "t")->capture_default_str();
  bpz->add_option("--s-grid", bo.s_grid, "s values for the sup form");
  bpz->add_option("--u", bo.u, "u")->capture_default_str();
  bpz->add_option("--p-grid", bo.moments.p_grid, "orders p (default 200 on [0.05, 64])");
  common(bpz, false);

  auto* b516 = bound->add_subcommand(
      "kappa-516",
      "When d_p(r,s) d_p(s,t) <= Z(p) |V(t) - V(r)|^l: P(kappa(h) > u) <= inf over p of "
      "2 K(lp, p) Z(2p)^(1/l) V(1)^(lp) u^(-2p) omega_V(2h)^(lp-1). --range as-printed uses "
      "p in [2, min(b, 1/l)); lp-gt-one uses p in [2, b) with lp > 1.");
  b516->add_option("--z", bo.z, "constant Z")->capture_default_str();
  b516->add_option("--l", bo.l, "exponent l")->capture_default_str();
  b516->add_option("--b", bo.b, "upper end b (> 2)");
  b516->add_option("--window", bo.h, "window width in (0, 1/2]")->capture_default_str();
  b516->add_option("--u", bo.u, "u")->capture_default_str();
  b516->add_option("--range", bo.range, "as-printed | lp-gt-one")->capture_default_str();
  b516->add_option("--mode", bo.mode, "K mode: closed | optimized")->capture_default_str();
  b516->add_option("--p-grid", bo.moments.p_grid, "orders p");
  add_envelope_options(b516, bo.venv, "v");
  common(b516, false);

  auto* bro = bound->add_subcommand("rosenthal", "K_R(p) = 0.6535 p / ln p, p >= 2.");
  bro->add_option("--p", bo.p, "p >= 2")->capture_default_str();
  common(bro, false);

  auto* bcl = bound->add_subcommand(
      "clt",
      "sup_n P(Delta[S_n] > u) <= inf over p of (3 K_R(p) y(p) B(1) / u)^p, and the kappa(h) "
      "form 2 inf_p (3 K_R(p) y(p) B(1) / u)^p omega_B(2h)^(p-1).");
  add_moment_options(bcl, bo.moments, "y");
  add_envelope_options(bcl, bo.g, "B");
  bcl->add_option("--window", bo.h, "window width in (0, 1/2]")->capture_default_str();
  bcl->add_flag("--unit-rosenthal", bo.unit_rosenthal, "use K_R(p) = 1");
  common(bcl);

  auto* bce = bound->add_subcommand(
      "clt-envelope",
      "For y(p) <= c1 p^(1/m) ln^s p: exp(-C2 g(u)) for u >= e and 2/w exp(-C3 g(u/w)) for "
      "u > e w |ln w|^(1 + 1/m), g(x) = x^(m/(m+1)) |ln x|^(m(s-1)/(m+1)), w = omega_B(2h).");
  bce->add_option("--c1", bo.c1, "c1")->capture_default_str();
  bce->add_option("--m", bo.m, "m")->capture_default_str();
  bce->add_option("--s", bo.log_power, "log exponent s")->capture_default_str();
  bce->add_option("--window", bo.h, "window width in (0, 1/2]")->capture_default_str();
  bce->add_option("--p-grid", bo.moments.p_grid, "moment orders");
  add_envelope_options(bce, bo.g, "B");
  common(bce);

  if (argc > 1 && argv[1][0] != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == argv[1];
    if (!known) {
      std::cerr << "unknown subcommand '" << argv[1] << "'; run with --help for the list\n";
      return kExitInvalid;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }

  try {
    for (auto& [sub, target] : config_targets) {
      if (sub->parsed() && !target->empty()) apply_config(sub, *target);
    }
    if (kappa->parsed()) return run_kappa(ko);
    if (entropy->parsed()) return run_entropy(eo);
    if (conjugate->parsed()) return run_conjugate(co);
    if (simulate->parsed()) return run_simulate(so, sim_paths);
    if (verify->parsed()) return run_verify_cmd(vo, verify_paths);
    if (clt->parsed()) return run_clt_cmd(clo);
    if (bk->parsed()) return bound_k_constant(bo);
    if (b30d->parsed()) return bound_prop30(bo, false);
    if (b30k->parsed()) return bound_prop30(bo, true);
    if (bes->parsed()) return bound_entropy_series(bo);
    if (bgd->parsed()) return bound_gls(bo, false);
    if (bgk->parsed()) return bound_gls(bo, true);
    if (bee->parsed()) return bound_exp_envelope(bo);
    if (b2d->parsed()) return bound_min_tail_2d(bo);
    if (bft->parsed()) return bound_min_tail_fenchel(bo);
    if (bpz->parsed()) return bound_pizier(bo);
    if (b516->parsed()) return bound_kappa_516(bo);
    if (bro->parsed()) return bound_rosenthal(bo);
    if (bcl->parsed()) return bound_clt(bo);
    if (bce->parsed()) return bound_clt_envelope(bo);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    std::cerr << "invalid config value: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitInvalid;
}
