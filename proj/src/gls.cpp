#include "psk/gls.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace psk {

EmpiricalSample::EmpiricalSample(std::vector<double> draws) : draws_(std::move(draws)) {
  if (draws_.empty()) throw std::invalid_argument("EmpiricalSample: empty sample");
  for (double v : draws_) {
    if (!std::isfinite(v)) throw std::invalid_argument("EmpiricalSample: non-finite draw");
  }
  const double n = static_cast<double>(draws_.size());
  mean_ = std::accumulate(draws_.begin(), draws_.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : draws_) {
    ss += (v - mean_) * (v - mean_);
    max_abs_ = std::max(max_abs_, std::abs(v));
  }
  stddev_ = draws_.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  sorted_ = draws_;
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalSample::abs_moment(double p) const {
  if (!(p > 0.0)) throw std::invalid_argument("abs_moment: p must be positive");
  if (max_abs_ == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : draws_) acc += std::pow(std::abs(v) / max_abs_, p);
  return max_abs_ * std::pow(acc / static_cast<double>(draws_.size()), 1.0 / p);
}

double EmpiricalSample::log_mgf(double lambda) const {
  // The largest exponent is lambda times an extreme order statistic.
  const double top = std::max(lambda * sorted_.front(), lambda * sorted_.back());
  double acc = 0.0;
  for (double v : draws_) acc += std::exp(lambda * v - top);
  return top + std::log(acc / static_cast<double>(draws_.size()));
}

double EmpiricalSample::two_sided_tail(double x) const {
  const auto above = static_cast<double>(
      sorted_.end() - std::upper_bound(sorted_.begin(), sorted_.end(), x));
  const auto below = static_cast<double>(
      std::lower_bound(sorted_.begin(), sorted_.end(), -x) - sorted_.begin());
  return std::max(above, below) / static_cast<double>(sorted_.size());
}

bool EmpiricalSample::approximately_centered() const {
  const double n = static_cast<double>(draws_.size());
  return std::abs(mean_) <= 3.0 * stddev_ / std::sqrt(n);
}

PsiFunction::PsiFunction(std::vector<double> p, std::vector<double> values, double b)
    : p_(std::move(p)), values_(std::move(values)), b_(b) {
  if (p_.empty() || p_.size() != values_.size()) {
    throw std::invalid_argument("PsiFunction: grid and values must be nonempty and aligned");
  }
  if (!(b_ > 1.0)) throw std::invalid_argument("PsiFunction: b must exceed 1");
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!(p_[i] >= 1.0) || !(p_[i] < b_)) {
      throw std::invalid_argument("PsiFunction: grid must lie in [1, b)");
    }
    if (i > 0 && !(p_[i] > p_[i - 1])) {
      throw std::invalid_argument("PsiFunction: grid must be increasing");
    }
    if (!(values_[i] > 0.0)) throw std::invalid_argument("PsiFunction: values must be positive");
  }
}

PsiFunction PsiFunction::degenerate(double l) {
  if (!(l >= 1.0)) throw std::invalid_argument("PsiFunction::degenerate: need l >= 1");
  PsiFunction psi({l}, {1.0}, kInf);
  psi.degenerate_ = l;
  return psi;
}

PsiFunction PsiFunction::tabulate(const std::function<double(double)>& f, double b,
                                  std::vector<double> grid) {
  if (grid.empty()) grid = default_p_grid(b);
  std::vector<double> values;
  values.reserve(grid.size());
  for (double p : grid) values.push_back(f(p));
  return PsiFunction(std::move(grid), std::move(values), b);
}

PhiFunction::PhiFunction(std::vector<double> lambda, std::vector<double> values,
                         double lambda0)
    : lambda_(std::move(lambda)), values_(std::move(values)), lambda0_(lambda0) {
  if (lambda_.size() < 2 || lambda_.size() != values_.size()) {
    throw std::invalid_argument("PhiFunction: need at least two aligned grid points");
  }
  if (lambda_.front() != 0.0 || values_.front() != 0.0) {
    throw std::invalid_argument("PhiFunction: grid must start at lambda = 0 with phi(0) = 0");
  }
  if (!(lambda0_ > 0.0)) throw std::invalid_argument("PhiFunction: lambda0 must be positive");
  for (std::size_t i = 1; i < lambda_.size(); ++i) {
    if (!(lambda_[i] > lambda_[i - 1])) {
      throw std::invalid_argument("PhiFunction: grid must be increasing");
    }
    if (!(lambda_[i] < lambda0_)) throw std::invalid_argument("PhiFunction: grid beyond lambda0");
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("PhiFunction: values must be finite and nonnegative");
    }
  }
}

PhiFunction PhiFunction::tabulate(std::function<double(double)> f, double lambda0,
                                  double table_end, std::size_t n) {
  if (!(table_end > 0.0)) throw std::invalid_argument("PhiFunction::tabulate: bad table end");
  if (table_end >= lambda0) {
    // Keep the table strictly inside (-lambda0, lambda0).
    table_end = std::nextafter(lambda0, 0.0);
  }
  auto grid = linspace(0.0, table_end, n);
  std::vector<double> values;
  values.reserve(n);
  for (double l : grid) values.push_back(f(l));
  values.front() = 0.0;
  PhiFunction phi(std::move(grid), std::move(values), lambda0);
  phi.exact_ = std::move(f);
  return phi;
}

double PhiFunction::operator()(double lambda) const {
  const double a = std::abs(lambda);
  if (a >= lambda0_) return kInf;
  if (exact_) return exact_(a);
  if (a <= lambda_.back()) {
    const auto it = std::upper_bound(lambda_.begin(), lambda_.end(), a);
    if (it == lambda_.end()) return values_.back();
    const auto hi = static_cast<std::size_t>(it - lambda_.begin());
    const auto lo = hi - 1;
    const double w = (a - lambda_[lo]) / (lambda_[hi] - lambda_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
  }
  const std::size_t n = lambda_.size();
  const double slope = (values_[n - 1] - values_[n - 2]) / (lambda_[n - 1] - lambda_[n - 2]);
  return values_[n - 1] + slope * (a - lambda_[n - 1]);
}

bool PhiFunction::convex_on_grid() const {
  for (std::size_t i = 1; i + 1 < lambda_.size(); ++i) {
    const double left = (values_[i] - values_[i - 1]) / (lambda_[i] - lambda_[i - 1]);
    const double right = (values_[i + 1] - values_[i]) / (lambda_[i + 1] - lambda_[i]);
    if (right < left - 1e-12 * (1.0 + std::abs(left))) return false;
  }
  return true;
}

bool PhiFunction::superlinear_on_grid() const {
  double prev = 0.0;
  for (std::size_t i = 1; i < lambda_.size(); ++i) {
    const double chord = values_[i] / lambda_[i];
    if (chord < prev - 1e-12 * (1.0 + prev)) return false;
    prev = chord;
  }
  return values_.back() / lambda_.back() > values_[1] / lambda_[1];
}

FunctionTable PhiFunction::symmetric_table() const {
  FunctionTable t;
  const std::size_t n = lambda_.size();
  t.x.reserve(2 * n - 1);
  t.y.reserve(2 * n - 1);
  for (std::size_t i = n; i-- > 1;) {
    t.x.push_back(-lambda_[i]);
    t.y.push_back(values_[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    t.x.push_back(lambda_[i]);
    t.y.push_back(values_[i]);
  }
  return t;
}

double gls_norm(const EmpiricalSample& sample, const PsiFunction& psi) {
  double best = 0.0;
  for (std::size_t i = 0; i < psi.grid().size(); ++i) {
    best = std::max(best, sample.abs_moment(psi.grid()[i]) / psi.values()[i]);
  }
  return best;
}

double bphi_norm(const EmpiricalSample& sample, const PhiFunction& phi) {
  if (!sample.approximately_centered()) {
    throw std::invalid_argument("bphi_norm: sample is not centered (|mean| > 3 sd / sqrt(n))");
  }
  std::vector<double> lambdas;
  std::vector<double> log_mgf;
  for (double l : phi.grid()) {
    if (l <= 0.0) continue;
    const double lm = std::max(sample.log_mgf(l), sample.log_mgf(-l));
    if (!std::isfinite(lm)) {
      throw not_in_space("bphi_norm: empirical moment generating function is not finite");
    }
    lambdas.push_back(l);
    log_mgf.push_back(lm);
  }
  const auto admissible = [&](double tau) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (log_mgf[i] > phi(lambdas[i] * tau)) return false;
    }
    return true;
  };
  if (admissible(0.0)) return 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (!admissible(hi)) {
    hi *= 2.0;
    if (++doublings > 200) {
      throw not_in_space("bphi_norm: no finite tau satisfies the exponential moment bound");
    }
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? hi : lo) = mid;
  }
  return hi;
}

NaturalPhi natural_phi(std::span<const EmpiricalSample> family,
                       std::span<const double> lambda_grid) {
  if (family.empty()) throw std::invalid_argument("natural_phi: empty family");
  if (lambda_grid.size() < 2 || lambda_grid.front() != 0.0) {
    throw std::invalid_argument("natural_phi: lambda grid must start at 0 with >= 2 points");
  }
  for (const auto& s : family) {
    if (!s.approximately_centered()) {
      throw std::invalid_argument("natural_phi: family member is not centered");
    }
  }
  std::vector<double> grid{0.0};
  std::vector<double> values{0.0};
  bool truncated = false;
  for (std::size_t i = 1; i < lambda_grid.size(); ++i) {
    const double l = lambda_grid[i];
    double best = -kInf;
    for (const auto& s : family) {
      best = std::max({best, s.log_mgf(l), s.log_mgf(-l)});
    }
    if (!std::isfinite(best)) {
      truncated = true;
      break;
    }
    grid.push_back(l);
    values.push_back(std::max(best, 0.0));
  }
  if (grid.size() < 2) throw std::domain_error("natural_phi: mgf not finite at any lambda > 0");
  const double lambda0 = truncated ? lambda_grid[grid.size()] : kInf;
  auto env = lower_convex_envelope(FunctionTable{grid, values});
  env.y.front() = 0.0;
  return NaturalPhi{PhiFunction(std::move(env.x), std::move(env.y), lambda0), truncated};
}

std::vector<double> dual_grid(const FunctionTable& f) {
  f.validate();
  const auto hull = lower_hull(f.x, f.y);
  std::vector<double> slopes;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const auto a = hull[h];
    const auto b = hull[h + 1];
    slopes.push_back((f.y[b] - f.y[a]) / (f.x[b] - f.x[a]));
  }
  if (slopes.empty()) slopes.push_back(0.0);
  return slopes;
}

FunctionTable young_fenchel(const FunctionTable& f, std::span<const double> u_grid) {
  f.validate();
  const auto hull = lower_hull(f.x, f.y);
  // Slopes between consecutive hull vertices are increasing; the maximiser of
  // x u - f(x) is the first vertex whose right slope is >= u.
  std::vector<double> slopes(hull.size() > 1 ? hull.size() - 1 : 0);
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    slopes[h] = (f.y[hull[h + 1]] - f.y[hull[h]]) / (f.x[hull[h + 1]] - f.x[hull[h]]);
  }
  FunctionTable out;
  out.x.assign(u_grid.begin(), u_grid.end());
  out.y.resize(u_grid.size());
  const auto m = static_cast<std::ptrdiff_t>(u_grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    const double u = u_grid[static_cast<std::size_t>(j)];
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(slopes.begin(), slopes.end(), u) - slopes.begin());
    // Neighbouring vertices guard against rounding in the slope comparison.
    double best = -kInf;
    const std::size_t lo = pos > 0 ? pos - 1 : 0;
    const std::size_t hi = std::min(pos + 1, hull.size() - 1);
    for (std::size_t h = lo; h <= hi; ++h) {
      best = std::max(best, f.x[hull[h]] * u - f.y[hull[h]]);
    }
    out.y[static_cast<std::size_t>(j)] = best;
  }
  return out;
}

FunctionTable young_fenchel(const FunctionTable& f) {
  const auto u = dual_grid(f);
  return young_fenchel(f, u);
}

namespace {

double conjugate_phi(const PhiFunction& phi, double u) {
  // Even phi: the supremum is attained at lambda with the sign of u.
  const double a = std::abs(u);
  double best = 0.0;
  for (std::size_t i = 0; i < phi.grid().size(); ++i) {
    best = std::max(best, phi.grid()[i] * a - phi.values()[i]);
  }
  return best;
}

}  // namespace

double tail_from_phi(const PhiFunction& phi, double c, double x) {
  if (!(c > 0.0)) throw std::invalid_argument("tail_from_phi: c must be positive");
  if (!(x >= 0.0)) throw std::invalid_argument("tail_from_phi: x must be nonnegative");
  return std::min(1.0, std::exp(-conjugate_phi(phi, c * x)));
}

double n_function(const PhiFunction& phi, double u) {
  return std::expm1(conjugate_phi(phi, u));
}

namespace {

struct EquivalencePoint {
  double moment_sup;
  double argmax;
  double tail_constant;
};

EquivalencePoint equivalence_point(const EmpiricalSample& sample, double m, double s,
                                   std::span<const double> p_grid) {
  EquivalencePoint pt{0.0, p_grid.front(), kInf};
  for (double p : p_grid) {
    const double scale = std::pow(p, 1.0 / m) * (s == 0.0 ? 1.0 : std::pow(std::log(p), s));
    const double ratio = sample.abs_moment(p) / scale;
    if (ratio > pt.moment_sup) {
      pt.moment_sup = ratio;
      pt.argmax = p;
    }
  }
  const double e = std::exp(1.0);
  std::vector<double> candidates{e};
  for (double v : sample.draws()) {
    if (std::abs(v) >= e) candidates.push_back(std::abs(v));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (double x : candidates) {
    // Closed tail at x: the left limit of the right-continuous tail function,
    // which is where the ratio is smallest on each constant stretch.
    const double u = sample.two_sided_tail(std::nextafter(x, 0.0));
    if (u <= 0.0) continue;
    const double g = std::pow(x, m) * std::pow(std::log(x), -m * s);
    pt.tail_constant = std::min(pt.tail_constant, -std::log(u) / g);
  }
  return pt;
}

double loglog_slope(const std::vector<double>& sizes, const std::vector<double>& values) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double x = std::log(sizes[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = k * sxx - sx * sx;
  return den > 0 ? (k * sxy - sx * sy) / den : 0.0;
}

}  // namespace

EquivalenceReport moment_tail_equivalence(const EmpiricalSample& sample, double m, double s,
                                          std::span<const double> p_grid) {
  if (!(m > 0.0)) throw std::invalid_argument("moment_tail_equivalence: m must be positive");
  std::vector<double> grid;
  if (p_grid.empty()) {
    // ln p vanishes at p = 1, so a log factor restricts the grid to p >= 2.
    grid = default_p_grid(kInf, s == 0.0 ? 1.0 : 2.0);
    p_grid = grid;
  }
  EquivalenceReport report;
  report.m = m;
  report.s = s;
  const auto full = equivalence_point(sample, m, s, p_grid);
  report.moment_sup = full.moment_sup;
  report.moment_argmax = full.argmax;
  report.tail_constant = full.tail_constant;

  const std::size_t n = sample.size();
  if (n >= 256) {
    std::vector<double> sizes, moments, tails;
    for (std::size_t size : {n / 16, n / 4, n}) {
      EmpiricalSample sub(std::vector<double>(sample.draws().begin(),
                                              sample.draws().begin() + static_cast<std::ptrdiff_t>(size)));
      const auto pt = size == n ? full : equivalence_point(sub, m, s, p_grid);
      sizes.push_back(static_cast<double>(size));
      moments.push_back(pt.moment_sup);
      tails.push_back(pt.tail_constant);
    }
    const bool moments_positive =
        std::all_of(moments.begin(), moments.end(), [](double v) { return v > 0.0; });
    const bool tails_finite =
        std::all_of(tails.begin(), tails.end(), [](double v) { return std::isfinite(v) && v > 0.0; });
    report.moment_growth = moments_positive ? loglog_slope(sizes, moments) : 0.0;
    report.tail_growth = tails_finite ? loglog_slope(sizes, tails) : 0.0;
  }
  constexpr double kGrowthLimit = 0.2;
  report.moment_finite = std::isfinite(report.moment_sup) && report.moment_growth < kGrowthLimit;
  report.tail_finite = report.tail_constant > 0.0 && report.tail_growth > -kGrowthLimit;
  report.both_finite = report.moment_finite && report.tail_finite;
  return report;
}

}  // namespace psk
