#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace psk {

/// Right-continuous step function on a finite grid of [0, 1].
///
/// The value at t is the value at the greatest grid time <= t. Grid times are
/// strictly increasing and start at 0 and end at 1.
class SampledPath {
 public:
  SampledPath(std::vector<double> times, std::vector<double> values);

  /// Path on the uniform grid i / (n - 1).
  static SampledPath uniform(std::vector<double> values);

  double operator()(double t) const;

  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Nondecreasing curve of a modulus (kappa or omega) against its argument.
struct ModulusCurve {
  std::vector<double> arguments;
  std::vector<double> values;
};

/// Checks the SampledPath invariants on raw spans; throws std::invalid_argument.
void validate_path(std::span<const double> times, std::span<const double> values);

/// min(|f(s) - f(r)|, |f(t) - f(s)|) with step evaluation; needs 0 <= r <= s <= t <= 1.
double triple_delta(const SampledPath& path, double r, double s, double t);

/// Largest triple minimum over all grid triples r <= s <= t. O(n) via running
/// extrema; matches reference::global_delta exactly.
double global_delta(std::span<const double> values);
double global_delta(const SampledPath& path);

/// kappa[f](delta): largest triple minimum over grid triples (t1, t, t2) with
/// t2 <= t1 + delta. O(n^2); matches reference::ps_module exactly.
double ps_module(std::span<const double> times, std::span<const double> values,
                 double delta);
double ps_module(const SampledPath& path, double delta);

ModulusCurve ps_module_curve(const SampledPath& path, std::span<const double> deltas);

/// Ordinary modulus of continuity of a tabulated function over grid pairs.
double continuity_modulus(std::span<const double> times, std::span<const double> g,
                          double h);

/// A collection of paths sharing one grid, stored row-major.
struct PathSet {
  std::vector<double> times;
  std::vector<double> values;
  /// Number of jumps drawn per path for jump processes; empty otherwise.
  std::vector<std::uint32_t> jump_counts;

  std::size_t grid_size() const { return times.size(); }
  std::size_t count() const { return times.empty() ? 0 : values.size() / times.size(); }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * times.size(), times.size()};
  }
  std::span<double> row(std::size_t i) {
    return {values.data() + i * times.size(), times.size()};
  }
  SampledPath path(std::size_t i) const;
};

/// Two-column text: time value per line; '#' starts a comment; commas allowed.
SampledPath read_path(std::istream& in);
void write_path(std::ostream& out, const SampledPath& path);

}  // namespace psk
