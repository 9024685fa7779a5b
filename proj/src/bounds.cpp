#include "psk/bounds.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "psk/gls.hpp"

namespace psk {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLn3 = 1.0986122886681098;

double safe_log(double v) { return v > 0.0 ? std::log(v) : -kInf; }

void check_alpha_beta(double alpha, double beta) {
  if (!(alpha > 1.0)) throw std::invalid_argument("K(alpha, beta): alpha must exceed 1");
  if (!(beta > 0.0)) throw std::invalid_argument("K(alpha, beta): beta must be positive");
}

void check_u_grid(std::span<const double> u_grid) {
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    if (!(u_grid[i] > 0.0)) throw std::invalid_argument("threshold grid must be positive");
    if (i > 0 && !(u_grid[i] > u_grid[i - 1])) {
      throw std::invalid_argument("threshold grid must be increasing");
    }
  }
}

void check_h(double h) {
  if (!(h > 0.0) || h > 0.5) throw std::invalid_argument("h must lie in (0, 1/2]");
}

double log_theta_objective(double alpha, double beta, double theta) {
  const double floor_term = 1.0 - std::exp((1.0 - alpha) * kLn2 - 2.0 * beta * std::log(theta));
  if (!(floor_term > 0.0)) return kInf;
  return (1.0 - alpha) / (2.0 * beta) * kLn2 - 2.0 * beta * std::log(theta) -
         2.0 * beta * std::log1p(-theta) - std::log(floor_term);
}

double log_k_constant(double alpha, double beta, KMode mode) {
  check_alpha_beta(alpha, beta);
  if (mode == KMode::optimized) return std::log(k_constant_theta(alpha, beta).value);
  const double inner = -std::expm1((1.0 - alpha) / (4.0 * beta) * kLn2);
  return -2.0 * beta * std::log(inner) - std::log(std::expm1((alpha - 1.0) / 2.0 * kLn2));
}

struct LogInf {
  double log_value = kInf;
  double p = TailCurve::kNaN;
  std::size_t index = 0;
};

template <class Term>
LogInf log_infimum(std::span<const double> params, Term&& log_term) {
  LogInf best;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double v = log_term(i);
    if (std::isnan(v)) continue;
    if (v < best.log_value) {
      best = {v, params[i], i};
    }
  }
  return best;
}

/// p values of the table inside [2, b) with finite nonnegative nu.
std::vector<double> admissible_orders(const FunctionTable& nu, double b,
                                      std::vector<double>* values) {
  std::vector<double> ps;
  for (std::size_t i = 0; i < nu.x.size(); ++i) {
    if (nu.x[i] >= 2.0 && nu.x[i] < b && std::isfinite(nu.y[i]) && nu.y[i] >= 0.0) {
      ps.push_back(nu.x[i]);
      values->push_back(nu.y[i]);
    }
  }
  if (ps.empty()) throw std::invalid_argument("moment function is not finite anywhere on [2, b)");
  return ps;
}

}  // namespace

void TailCurve::push(double at, double raw_value, double p, double p2) {
  u.push_back(at);
  raw.push_back(raw_value);
  prob.push_back(std::clamp(raw_value, 0.0, 1.0));
  param.push_back(p);
  param2.push_back(p2);
}

GFunction::GFunction(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() < 2 || times_.size() != values_.size()) {
    throw std::invalid_argument("GFunction: need at least two aligned points");
  }
  if (times_.front() != 0.0 || times_.back() != 1.0) {
    throw std::invalid_argument("GFunction: grid must run from 0 to 1");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("GFunction: grid not increasing");
    if (!(values_[i] >= values_[i - 1])) {
      throw std::invalid_argument("GFunction: values must be nondecreasing");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("GFunction: non-finite value");
  }
}

GFunction GFunction::from_function(std::vector<double> times,
                                   const std::function<double(double)>& f) {
  std::vector<double> values;
  values.reserve(times.size());
  for (double t : times) values.push_back(f(t));
  return GFunction(std::move(times), std::move(values));
}

double GFunction::operator()(double t) const {
  return FunctionTable{times_, values_}.interpolate(t);
}

double GFunction::modulus(double h) const {
  if (!(h >= 0.0)) throw std::invalid_argument("GFunction::modulus: h must be nonnegative");
  if (h >= 1.0) return total();
  // G(x + h) - G(x) is piecewise linear in x; its maximum sits where x or x + h
  // hits a grid time.
  double best = 0.0;
  const auto& g = *this;
  for (double t : times_) {
    if (t + h <= 1.0) best = std::max(best, g(t + h) - g(t));
    if (t - h >= 0.0) best = std::max(best, g(t) - g(t - h));
  }
  return best;
}

double k_constant(double alpha, double beta, KMode mode) {
  return std::exp(log_k_constant(alpha, beta, mode));
}

ScalarMinimum k_constant_theta(double alpha, double beta) {
  check_alpha_beta(alpha, beta);
  const double lo = std::exp((1.0 - alpha) / (2.0 * beta) * kLn2);
  const auto objective = [&](double x) {
    return log_theta_objective(alpha, beta, lo + (1.0 - lo) * x);
  };
  // Coarse scan to bracket the minimum, then golden section inside the bracket.
  constexpr int kScan = 400;
  int best = 1;
  double best_value = kInf;
  for (int i = 1; i < kScan; ++i) {
    const double v = objective(static_cast<double>(i) / kScan);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const auto m = golden_section_minimize(objective, static_cast<double>(best - 1) / kScan,
                                         static_cast<double>(best + 1) / kScan, 1e-14);
  const double x = m.value < best_value ? m.argmin : static_cast<double>(best) / kScan;
  const double v = std::min(m.value, best_value);
  return {lo + (1.0 - lo) * x, std::exp(v)};
}

double k_constant_asymptotic(double alpha, double beta) {
  check_alpha_beta(alpha, beta);
  return std::exp((4.0 * beta + 1.0) * kLn2 + 2.0 * beta * std::log(beta) -
                  (2.0 * beta + 1.0) * std::log(kLn2) -
                  (2.0 * beta + 1.0) * std::log(alpha - 1.0));
}

TailCurve prop30_delta_bound(std::span<const AlphaBeta> set, const GFunction& g,
                             std::span<const double> u_grid, KMode mode) {
  if (set.empty()) throw std::invalid_argument("prop30_delta_bound: empty (alpha, beta) set");
  check_u_grid(u_grid);
  std::vector<double> log_k;
  for (const auto& ab : set) log_k.push_back(log_k_constant(ab.alpha, ab.beta, mode));
  const double log_g = safe_log(g.total());
  TailCurve out;
  for (double u : u_grid) {
    double best = kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double v = log_k[i] - 2.0 * set[i].beta * std::log(u) + set[i].alpha * log_g;
      if (v < best) {
        best = v;
        arg = i;
      }
    }
    out.push(u, std::exp(best), set[arg].alpha, set[arg].beta);
  }
  return out;
}

TailCurve prop30_kappa_bound(std::span<const AlphaBeta> set, const GFunction& g, double h,
                             std::span<const double> u_grid, KMode mode) {
  if (set.empty()) throw std::invalid_argument("prop30_kappa_bound: empty (alpha, beta) set");
  check_h(h);
  check_u_grid(u_grid);
  std::vector<double> log_k;
  for (const auto& ab : set) log_k.push_back(log_k_constant(ab.alpha, ab.beta, mode));
  const double log_g = safe_log(g.total());
  const double log_w = safe_log(g.modulus(2.0 * h));
  TailCurve out;
  for (double u : u_grid) {
    double best = kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double v = kLn2 + log_k[i] - 2.0 * set[i].beta * std::log(u) +
                       set[i].alpha * log_g + (set[i].alpha - 1.0) * log_w;
      if (v < best) {
        best = v;
        arg = i;
      }
    }
    out.push(u, std::exp(best), set[arg].alpha, set[arg].beta);
  }
  return out;
}

SequencePair geometric_sequences(double s, double theta) {
  if (!(s > 0.0 && s < 1.0) || !(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("geometric_sequences: s and theta must lie in (0, 1)");
  }
  return {"geometric",
          [s](std::size_t k) { return std::pow(s, static_cast<double>(k) - 1.0); },
          [theta](std::size_t k) {
            return (1.0 - theta) * std::pow(theta, static_cast<double>(k));
          }};
}

SequencePair polynomial_sequences(double nu) {
  if (!(nu > 1.0)) throw std::invalid_argument("polynomial_sequences: nu must exceed 1");
  const double norm = boost::math::zeta(nu);
  return {"polynomial",
          [](std::size_t k) { return std::exp(1.0 - static_cast<double>(k)); },
          [nu, norm](std::size_t k) { return std::pow(static_cast<double>(k), -nu) / norm; }};
}

SeriesResult entropy_q_bound(const std::function<double(double)>& covering,
                             const std::function<double(double)>& lambda,
                             const SequencePair& seqs, double u, SeriesOptions opts) {
  if (!(u > 0.0)) throw std::invalid_argument("entropy_q_bound: u must be positive");
  if (seqs.eps(1) != 1.0) throw std::invalid_argument("entropy_q_bound: eps(1) must equal 1");
  SeriesResult r;
  std::vector<double> terms{0.0};  // 1-based
  double prev_eps = 1.0;
  const auto finish = [&](bool available, std::string message) {
    r.available = available;
    r.value = available ? r.partial + r.remainder : kInf;
    r.theta_ok = r.theta_sum <= 1.0 + 1e-9;
    r.message = std::move(message);
    return r;
  };
  const auto remainder_estimate = [&](std::size_t k) {
    // Power-law majorant a_j <= a_k (k / j)^q: the tail is at most a_k k / (q - 1).
    const double q = -std::log(terms[k] / terms[k / 2]) / std::log(static_cast<double>(k) /
                                                                     static_cast<double>(k / 2));
    if (!(q > 1.0)) return kInf;
    // Geometric majorant from the largest recent ratio; alone it undershoots
    // power-law tails, whose ratios creep up towards 1.
    double ratio = 0.0;
    for (std::size_t j = k - 15; j <= k; ++j) {
      ratio = std::max(ratio, terms[j] / terms[j - 1]);
    }
    const double geometric = ratio < 1.0 ? terms[k] * ratio / (1.0 - ratio) : kInf;
    return std::max(geometric, terms[k] * static_cast<double>(k) / (q - 1.0));
  };
  for (std::size_t k = 1; k <= opts.max_terms; ++k) {
    const double eps_k = seqs.eps(k);
    const double eps_next = seqs.eps(k + 1);
    const double theta = seqs.theta(k);
    if (!(theta > 0.0)) return finish(false, "theta(k) must be positive");
    if (k > 1 && !(eps_k < prev_eps)) return finish(false, "eps must be strictly decreasing");
    prev_eps = eps_k;
    if (!(eps_next > 0.0)) {
      // Radii underflowed; fall back on the tail estimate so far.
      r.terms = k - 1;
      if (k > 32 && std::isfinite(r.remainder)) {
        return finish(true, "radius underflow; remainder estimated from the last terms");
      }
      return finish(false, "radius underflow before the series settled");
    }
    const double term = covering(eps_next) * eps_k / lambda(u * theta);
    if (!std::isfinite(term) || term < 0.0) {
      r.terms = k - 1;
      // Overflow of N(eps) at tiny radii once the terms already decay.
      if (k > 64 && std::isfinite(r.remainder) && terms[k - 1] < terms[(k - 1) / 2]) {
        return finish(true, "term overflow at k = " + std::to_string(k) +
                                "; remainder estimated from the last terms");
      }
      return finish(false, "series diverges: term overflow at k = " + std::to_string(k));
    }
    terms.push_back(term);
    r.partial += term;
    r.theta_sum += theta;
    r.terms = k;
    if (!std::isfinite(r.partial)) return finish(false, "series diverges: partial sums overflow");
    if (k >= 32) {
      if (term == 0.0) {
        r.remainder = 0.0;
        return finish(true, "terms vanish");
      }
      r.remainder = remainder_estimate(k);
      if (r.remainder < opts.tolerance) return finish(true, "converged");
      if (k >= 64 && !std::isfinite(r.remainder) && terms[k] >= terms[k / 2]) {
        return finish(false, "series diverges: terms do not decrease (partial sums not Cauchy)");
      }
    }
  }
  if (std::isfinite(r.remainder)) {
    return finish(true, "term budget exhausted; value includes the estimated remainder");
  }
  return finish(false, "series diverges: partial sums not Cauchy within the term budget");
}

SeriesResult entropy_q_bound(const std::function<double(double)>& covering,
                             const std::function<double(double)>& lambda,
                             std::span<const SequencePair> family, double u,
                             SeriesOptions opts) {
  if (family.empty()) throw std::invalid_argument("entropy_q_bound: empty sequence family");
  SeriesResult best;
  bool have = false;
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto r = entropy_q_bound(covering, lambda, family[i], u, opts);
    r.best = i;
    if (!have || (r.available && (!best.available || r.value < best.value))) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

TailCurve prop41_bound(const FunctionTable& nu, const GFunction& g, double b,
                       std::span<const double> u_grid) {
  check_u_grid(u_grid);
  std::vector<double> values;
  const auto ps = admissible_orders(nu, b, &values);
  const double log_g = safe_log(g.total());
  TailCurve out;
  for (double u : u_grid) {
    const auto inf = log_infimum(ps, [&](std::size_t i) {
      return ps[i] * (kLn3 + safe_log(values[i]) + log_g - std::log(u));
    });
    out.push(u, std::exp(inf.log_value), inf.p);
  }
  return out;
}

TailCurve prop42_kappa_bound(const FunctionTable& nu, const GFunction& g, double b, double h,
                             std::span<const double> u_grid) {
  check_h(h);
  check_u_grid(u_grid);
  std::vector<double> values;
  const auto ps = admissible_orders(nu, b, &values);
  const double log_g = safe_log(g.total());
  const double log_w = safe_log(g.modulus(2.0 * h));
  TailCurve out;
  for (double u : u_grid) {
    const auto inf = log_infimum(ps, [&](std::size_t i) {
      const double p = ps[i];
      return kLn2 + p * (kLn3 + safe_log(values[i]) + log_g - std::log(u)) + (p - 1.0) * log_w;
    });
    out.push(u, std::exp(inf.log_value), inf.p);
  }
  return out;
}

namespace {

/// Fits the largest C with exp(-C shape(u)) >= exp(log_raw(u)) over the
/// in-range thresholds and returns the envelope curve.
double fit_rate(const std::vector<double>& log_raw, const std::vector<double>& shape,
                const std::vector<bool>& in_range) {
  double c = kInf;
  for (std::size_t i = 0; i < log_raw.size(); ++i) {
    if (in_range[i]) c = std::min(c, -log_raw[i] / shape[i]);
  }
  return std::isfinite(c) ? c : 0.0;
}

struct EnvelopeInputs {
  std::vector<double> ps;
  std::function<double(double)> log_rate;  // ln of 3 K nu(p) per unit of G(1)
};

Envelopes build_envelopes(const EnvelopeInputs& in, const GFunction& g, double h,
                          std::span<const double> u_grid,
                          const std::function<double(double)>& delta_shape,
                          const std::function<double(double, double)>& kappa_shape,
                          const std::function<bool(double)>& delta_range,
                          const std::function<bool(double, double)>& kappa_range) {
  check_h(h);
  check_u_grid(u_grid);
  Envelopes env;
  env.omega = g.modulus(2.0 * h);
  const double log_g = safe_log(g.total());
  const double w = env.omega;
  const std::size_t last = in.ps.size() - 1;
  std::vector<double> dl, ds, kl, ks;
  std::vector<LogInf> dinf, kinf;
  for (double u : u_grid) {
    const auto d = log_infimum(in.ps, [&](std::size_t j) {
      const double p = in.ps[j];
      return p * (in.log_rate(p) + log_g - std::log(u));
    });
    dinf.push_back(d);
    dl.push_back(d.log_value);
    ds.push_back(delta_shape(u));
    env.delta_in_range.push_back(delta_range(u) && d.log_value < 0.0 && d.index > 0 &&
                                 d.index < last);
    // Kappa infimum with the 2 / w prefactor split off.
    const auto k = w > 0.0 ? log_infimum(in.ps,
                                         [&](std::size_t j) {
                                           const double p = in.ps[j];
                                           return p * (in.log_rate(p) + log_g + std::log(w) -
                                                       std::log(u));
                                         })
                           : LogInf{-kInf, in.ps.front(), 0};
    kinf.push_back(k);
    kl.push_back(k.log_value);
    ks.push_back(w > 0.0 ? kappa_shape(u, w) : kInf);
    env.kappa_in_range.push_back(w > 0.0 && kappa_range(u, w) && k.log_value < 0.0 &&
                                 k.index > 0 && k.index < last);
  }
  env.c_delta = fit_rate(dl, ds, env.delta_in_range);
  env.c_kappa = fit_rate(kl, ks, env.kappa_in_range);
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double u = u_grid[i];
    env.delta.push(u, env.delta_in_range[i] ? std::exp(-env.c_delta * ds[i]) : 1.0, dinf[i].p);
    double kappa = 1.0;
    if (w == 0.0) {
      kappa = 0.0;
    } else if (env.kappa_in_range[i]) {
      kappa = 2.0 / w * std::exp(-env.c_kappa * ks[i]);
    }
    env.kappa.push(u, kappa, kinf[i].p);
  }
  return env;
}

}  // namespace

Envelopes exp_tail_envelopes(double c1, double m, const GFunction& g, double h,
                             std::span<const double> u_grid, std::vector<double> p_grid) {
  if (!(c1 > 0.0) || !(m > 0.0)) throw std::invalid_argument("exp_tail_envelopes: c1, m > 0");
  if (p_grid.empty()) p_grid = default_p_grid(kInf, 2.0);
  EnvelopeInputs in{p_grid, [&](double p) { return kLn3 + std::log(c1) + m * std::log(p); }};
  return build_envelopes(
      in, g, h, u_grid, [m](double u) { return std::pow(u, 1.0 / m); },
      [m](double u, double w) { return std::pow(u, 1.0 / m) * w; },
      [](double u) { return u >= 1.0; },
      [m](double u, double w) {
        const double threshold = std::pow(w * std::abs(std::log(w)), -m);
        return u >= threshold;
      });
}

Envelopes clt_envelopes(double c1, double m, double s, const GFunction& b_env, double h,
                        std::span<const double> u_grid, std::vector<double> p_grid) {
  if (!(c1 > 0.0) || !(m > 0.0)) throw std::invalid_argument("clt_envelopes: c1, m > 0");
  if (p_grid.empty()) p_grid = default_p_grid(kInf, 2.0);
  EnvelopeInputs in{p_grid, [&](double p) {
                      return kLn3 + std::log(rosenthal_constant(p)) + std::log(c1) +
                             std::log(p) / m + s * std::log(std::log(p));
                    }};
  const auto shape = [m, s](double x) {
    return std::pow(x, m / (m + 1.0)) * std::pow(std::abs(std::log(x)), m * (s - 1.0) / (m + 1.0));
  };
  return build_envelopes(
      in, b_env, h, u_grid, shape, [shape](double u, double w) { return shape(u / w); },
      [](double u) { return u >= std::numbers::e; },
      [m](double u, double w) {
        return u > std::numbers::e * w * std::pow(std::abs(std::log(w)), 1.0 + 1.0 / m);
      });
}

double joint_moment(std::span<const double> x, std::span<const double> y, double p1, double p2) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("joint_moment: samples must be nonempty and aligned");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += std::pow(std::abs(x[i]), p1) * std::pow(std::abs(y[i]), p2);
  }
  return acc / static_cast<double>(x.size());
}

double joint_pseudo_norm(std::span<const double> x, std::span<const double> y, double p1,
                         double p2) {
  return std::pow(joint_moment(x, y, p1, p2), 1.0 / (p1 + p2));
}

namespace {

double lp_norm(std::span<const double> x, double p) {
  return EmpiricalSample(std::vector<double>(x.begin(), x.end())).abs_moment(p);
}

double conjugate_exponent(double a) {
  if (!(a > 1.0)) throw std::invalid_argument("Hoelder exponent must exceed 1");
  return a / (a - 1.0);
}

}  // namespace

double joint_holder_bound(std::span<const double> x, std::span<const double> y, double p1,
                          double p2, double a) {
  const double b = conjugate_exponent(a);
  const double s = p1 + p2;
  return std::pow(lp_norm(x, a * p1), p1 / s) * std::pow(lp_norm(y, b * p2), p2 / s);
}

double joint_sum_bound(std::span<const double> x1, std::span<const double> x2,
                       std::span<const double> y1, std::span<const double> y2, double p1,
                       double p2, double a) {
  if (!(p1 >= 1.0) || !(p2 >= 1.0)) throw std::invalid_argument("joint_sum_bound: p1, p2 >= 1");
  const double b = conjugate_exponent(a);
  const double s = p1 + p2;
  const double xs = std::pow(lp_norm(x1, a * p1), p1) + std::pow(lp_norm(x2, a * p1), p1);
  const double ys = std::pow(lp_norm(y1, b * p2), p2) + std::pow(lp_norm(y2, b * p2), p2);
  return std::pow(2.0, 1.0 - 2.0 / s) * std::pow(xs * ys, 1.0 / s);
}

MinTail min_tail_2d(const std::function<double(double, double)>& moment, double u, double v,
                    std::span<const double> p1_grid, std::span<const double> p2_grid) {
  if (!(u > 0.0) || !(v > 0.0)) throw std::invalid_argument("min_tail_2d: u, v must be positive");
  if (p1_grid.empty() || p2_grid.empty()) throw std::invalid_argument("min_tail_2d: empty grid");
  MinTail out;
  double best = kInf;
  std::size_t bi = 0, bj = 0;
  bool any = false;
  for (std::size_t i = 0; i < p1_grid.size(); ++i) {
    for (std::size_t j = 0; j < p2_grid.size(); ++j) {
      const double nu = moment(p1_grid[i], p2_grid[j]);
      if (!std::isfinite(nu)) continue;
      any = true;
      const double lv = safe_log(nu) - p1_grid[i] * std::log(u) - p2_grid[j] * std::log(v);
      if (lv < best) {
        best = lv;
        bi = i;
        bj = j;
      }
    }
  }
  if (!any) {
    out.no_finite_moment = true;
    return out;
  }
  out.raw = std::exp(best);
  out.bound = std::min(1.0, out.raw);
  out.p1 = p1_grid[bi];
  out.p2 = p2_grid[bj];
  const auto on_edge = [](std::size_t k, std::size_t n) { return n > 1 && (k == 0 || k + 1 == n); };
  out.grid_edge = on_edge(bi, p1_grid.size()) || on_edge(bj, p2_grid.size());
  return out;
}

FenchelTail min_tail_fenchel(const FunctionTable& psi, int d, double u) {
  if (!(u > 1.0)) throw std::invalid_argument("min_tail_fenchel: u must exceed 1");
  if (d < 1) throw std::invalid_argument("min_tail_fenchel: d must be at least 1");
  psi.validate();
  FunctionTable psi1;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (psi.x[i] < 1.0) throw std::invalid_argument("min_tail_fenchel: p grid must start at 1");
    if (!(psi.y[i] > 0.0)) throw std::invalid_argument("min_tail_fenchel: psi must be positive");
    psi1.x.push_back(psi.x[i]);
    psi1.y.push_back(psi.x[i] * std::log(psi.y[i]));
  }
  const double x = static_cast<double>(d) * std::log(u);
  FenchelTail out;
  const double xs[] = {x};
  const double conj = young_fenchel(psi1, xs).y.front();
  out.via_transform = std::min(1.0, std::exp(-conj));
  double best = kInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < psi1.size(); ++i) {
    const double lv = psi1.y[i] - psi1.x[i] * x;
    if (lv < best) {
      best = lv;
      arg = i;
    }
  }
  out.direct = std::min(1.0, std::exp(best));
  out.argmax_p = psi1.x[arg];
  out.grid_edge = psi1.size() > 1 && arg + 1 == psi1.size();
  return out;
}

MinTail pizier_min_bound(const IncrementDistance& d2p, double r, double s, double t, double u,
                         std::span<const double> p_grid) {
  if (!(r <= s && s <= t)) throw std::invalid_argument("pizier_min_bound: need r <= s <= t");
  if (!(u > 0.0)) throw std::invalid_argument("pizier_min_bound: u must be positive");
  if (p_grid.empty()) throw std::invalid_argument("pizier_min_bound: empty p grid");
  const auto inf = log_infimum(p_grid, [&](std::size_t i) {
    const double p = p_grid[i];
    const double left = d2p(p, r, s);
    const double right = d2p(p, s, t);
    if (!std::isfinite(left) || !std::isfinite(right)) return TailCurve::kNaN;
    return p * (safe_log(left) + safe_log(right) - 2.0 * std::log(u));
  });
  MinTail out;
  if (std::isnan(inf.p)) {
    out.no_finite_moment = true;
    return out;
  }
  out.raw = std::exp(inf.log_value);
  out.bound = std::min(1.0, out.raw);
  out.p1 = inf.p;
  out.grid_edge = p_grid.size() > 1 && (inf.index == 0 || inf.index + 1 == p_grid.size());
  return out;
}

MinTail pizier_min_bound_sup(const IncrementDistance& d2p, double r, std::span<const double> s_grid,
                             double t, double u, std::span<const double> p_grid) {
  MinTail best;
  best.bound = -1.0;
  for (double s : s_grid) {
    if (s < r || s > t) continue;
    const auto m = pizier_min_bound(d2p, r, s, t, u, p_grid);
    if (m.bound > best.bound) {
      best = m;
      best.p2 = s;
    }
  }
  if (best.bound < 0.0) throw std::invalid_argument("pizier_min_bound_sup: no s in [r, t]");
  return best;
}

double kappa_516_term(const std::function<double(double)>& z, const GFunction& v, double l,
                      double p, double h, double u, KMode mode) {
  check_h(h);
  if (!(l > 0.0) || !(l * p > 1.0)) throw std::invalid_argument("kappa_516_term: need l p > 1");
  if (!(u > 0.0)) throw std::invalid_argument("kappa_516_term: u must be positive");
  const double alpha = l * p;
  const double lv = kLn2 + log_k_constant(alpha, p, mode) + safe_log(z(2.0 * p)) / l +
                    alpha * safe_log(v.total()) - 2.0 * p * std::log(u) +
                    (alpha - 1.0) * safe_log(v.modulus(2.0 * h));
  return std::exp(lv);
}

RangeBound kappa_bound_516(const std::function<double(double)>& z, const GFunction& v, double l,
                           double b, double h, double u, std::span<const double> p_grid,
                           KappaRange range, KMode mode) {
  if (!(l > 0.0)) throw std::invalid_argument("kappa_bound_516: l must be positive");
  if (!(b > 2.0)) throw std::invalid_argument("kappa_bound_516: b must exceed 2");
  const double upper = range == KappaRange::as_printed ? std::min(b, 1.0 / l) : b;
  std::vector<double> ps;
  for (double p : p_grid) {
    if (p >= 2.0 && p < upper && l * p > 1.0) ps.push_back(p);
  }
  RangeBound out;
  if (ps.empty()) {
    out.message = range == KappaRange::as_printed
                      ? "bound unavailable: p in [2, min(b, 1/l)) with l p > 1 is empty"
                      : "bound unavailable: no grid p in [2, b) with l p > 1";
    return out;
  }
  double best = kInf;
  for (double p : ps) {
    const double term = kappa_516_term(z, v, l, p, h, u, mode);
    if (term < best) {
      best = term;
      out.p = p;
    }
  }
  out.available = true;
  out.raw = best;
  out.bound = std::min(1.0, best);
  return out;
}

double rosenthal_constant(double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("rosenthal_constant: p must be at least 2");
  return 0.6535 * p / std::log(p);
}

CltBounds clt_bounds(const FunctionTable& y, const GFunction& b_env, double b, double h,
                     std::span<const double> u_grid, bool unit_rosenthal) {
  check_h(h);
  check_u_grid(u_grid);
  std::vector<double> values;
  const auto ps = admissible_orders(y, b, &values);
  const double log_b = safe_log(b_env.total());
  const double log_w = safe_log(b_env.modulus(2.0 * h));
  CltBounds out;
  for (double u : u_grid) {
    const auto log_rate = [&](std::size_t i) {
      const double kr = unit_rosenthal ? 0.0 : std::log(rosenthal_constant(ps[i]));
      return kLn3 + kr + safe_log(values[i]) + log_b - std::log(u);
    };
    const auto d = log_infimum(ps, [&](std::size_t i) { return ps[i] * log_rate(i); });
    const auto k = log_infimum(ps, [&](std::size_t i) {
      return kLn2 + ps[i] * log_rate(i) + (ps[i] - 1.0) * log_w;
    });
    out.delta.push(u, std::exp(d.log_value), d.p);
    out.kappa.push(u, std::exp(k.log_value), k.p);
  }
  return out;
}

}  // namespace psk
