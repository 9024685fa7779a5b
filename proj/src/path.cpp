#include "psk/path.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "psk/grid.hpp"
#include "psk/io.hpp"

namespace psk {

void validate_path(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("path: times and values differ in length");
  }
  if (times.size() < 2) throw std::invalid_argument("path: need at least two grid points");
  if (times.front() != 0.0 || times.back() != 1.0) {
    throw std::invalid_argument("path: grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("path: times must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("path: non-finite value");
  }
}

SampledPath::SampledPath(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  validate_path(times_, values_);
}

SampledPath SampledPath::uniform(std::vector<double> values) {
  auto times = linspace(0.0, 1.0, values.size());
  return SampledPath(std::move(times), std::move(values));
}

double SampledPath::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("path: t outside [0, 1]");
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double triple_delta(const SampledPath& path, double r, double s, double t) {
  if (!(0.0 <= r && r <= s && s <= t && t <= 1.0)) {
    throw std::invalid_argument("triple_delta: need 0 <= r <= s <= t <= 1");
  }
  const double fs = path(s);
  return std::min(std::abs(fs - path(r)), std::abs(path(t) - fs));
}

double global_delta(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  // right[j] = max_{k >= j} |f_k - f_j|, from suffix extrema.
  std::vector<double> right(n);
  double smin = values[n - 1];
  double smax = values[n - 1];
  for (std::size_t j = n; j-- > 0;) {
    smin = std::min(smin, values[j]);
    smax = std::max(smax, values[j]);
    right[j] = std::max(values[j] - smin, smax - values[j]);
  }
  double best = 0.0;
  double pmin = values[0];
  double pmax = values[0];
  for (std::size_t j = 0; j < n; ++j) {
    pmin = std::min(pmin, values[j]);
    pmax = std::max(pmax, values[j]);
    const double left = std::max(values[j] - pmin, pmax - values[j]);
    best = std::max(best, std::min(left, right[j]));
  }
  return best;
}

double global_delta(const SampledPath& path) { return global_delta(path.values()); }

double ps_module(std::span<const double> times, std::span<const double> values,
                 double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("ps_module: delta outside [0, 1]");
  }
  const std::size_t n = values.size();
  double best = 0.0;
  std::size_t i_first = 0;
  for (std::size_t j = 0; j < n; ++j) {
    // Smallest i whose window [t_i, t_i + delta] still reaches t_j.
    while (!(times[j] <= times[i_first] + delta + kGridTol)) ++i_first;
    std::size_t k_end = j;  // last k already folded into right_max
    double right_max = 0.0;
    for (std::size_t i = i_first; i <= j; ++i) {
      while (k_end + 1 < n && times[k_end + 1] <= times[i] + delta + kGridTol) {
        ++k_end;
        right_max = std::max(right_max, std::abs(values[k_end] - values[j]));
      }
      const double left = std::abs(values[j] - values[i]);
      best = std::max(best, std::min(left, right_max));
    }
  }
  return best;
}

double ps_module(const SampledPath& path, double delta) {
  return ps_module(path.times(), path.values(), delta);
}

ModulusCurve ps_module_curve(const SampledPath& path, std::span<const double> deltas) {
  ModulusCurve curve;
  curve.arguments.assign(deltas.begin(), deltas.end());
  curve.values.resize(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) curve.values[i] = ps_module(path, deltas[i]);
  return curve;
}

double continuity_modulus(std::span<const double> times, std::span<const double> g,
                          double h) {
  if (times.size() != g.size()) {
    throw std::invalid_argument("continuity_modulus: size mismatch");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t k = i + 1; k < times.size() && within(times[k] - times[i], h); ++k) {
      best = std::max(best, std::abs(g[k] - g[i]));
    }
  }
  return best;
}

SampledPath PathSet::path(std::size_t i) const {
  const auto r = row(i);
  return SampledPath(times, std::vector<double>(r.begin(), r.end()));
}

SampledPath read_path(std::istream& in) {
  const auto table = read_two_column(in);
  return SampledPath(table.x, table.y);
}

void write_path(std::ostream& out, const SampledPath& path) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_double(path.times()[i]) << ' ' << format_double(path.values()[i]) << '\n';
  }
}

}  // namespace psk
