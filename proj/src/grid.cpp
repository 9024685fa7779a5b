#include "psk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psk {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("logspace: need 0 < lo <= hi");
  }
  auto exps = linspace(std::log(lo), std::log(hi), n);
  for (auto& e : exps) e = std::exp(e);
  if (n > 0) {
    exps.front() = lo;
    exps.back() = hi;
  }
  return exps;
}

std::vector<double> default_p_grid(double b, double p_min, std::size_t n) {
  const double cap = std::min(b, 256.0);
  if (!(cap > p_min)) {
    throw std::invalid_argument("default_p_grid: empty range [p_min, min(b, 256))");
  }
  // n + 1 points with the right end dropped gives the half-open range.
  auto grid = logspace(p_min, cap, n + 1);
  grid.pop_back();
  return grid;
}

std::vector<double> default_u_grid(std::size_t n) { return logspace(1e-2, 1e2, n); }

void FunctionTable::validate() const {
  if (x.size() != y.size()) throw std::invalid_argument("FunctionTable: size mismatch");
  if (x.empty()) throw std::invalid_argument("FunctionTable: empty table");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw std::invalid_argument("FunctionTable: grid must be strictly increasing");
    }
  }
}

double FunctionTable::interpolate(double at) const {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const auto hi = static_cast<std::size_t>(it - x.begin());
  const auto lo = hi - 1;
  const double w = (at - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + w * (y[hi] - y[lo]);
}

FunctionTable tabulate(const std::function<double(double)>& f,
                       std::span<const double> xs) {
  FunctionTable t;
  t.x.assign(xs.begin(), xs.end());
  t.y.reserve(xs.size());
  for (double v : xs) t.y.push_back(f(v));
  return t;
}

std::vector<std::size_t> lower_hull(std::span<const double> x,
                                    std::span<const double> y) {
  std::vector<std::size_t> hull;
  hull.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      // Drop b when it lies on or above the chord from a to i.
      const double lhs = (y[b] - y[a]) * (x[i] - x[a]);
      const double rhs = (y[i] - y[a]) * (x[b] - x[a]);
      if (lhs >= rhs) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  return hull;
}

FunctionTable lower_convex_envelope(const FunctionTable& f) {
  f.validate();
  const auto hull = lower_hull(f.x, f.y);
  FunctionTable out{f.x, f.y};
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t a = hull[h];
    const std::size_t b = hull[h + 1];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double w = (f.x[i] - f.x[a]) / (f.x[b] - f.x[a]);
      out.y[i] = f.y[a] + w * (f.y[b] - f.y[a]);
    }
  }
  return out;
}

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f,
                                      double lo, double hi, double tol,
                                      int max_iter) {
  if (!(hi > lo)) throw std::invalid_argument("golden_section_minimize: empty interval");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

}  // namespace psk
