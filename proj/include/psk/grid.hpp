#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace psk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Slack used when comparing grid times and distances against a threshold.
/// Grid times such as 0.7 and 0.8 do not differ by exactly 0.1 in binary.
inline constexpr double kGridTol = 1e-9;

inline bool within(double value, double limit) {
  return value <= limit + kGridTol * (limit > 1.0 ? limit : 1.0);
}

std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Geometric grid from lo to hi inclusive; requires 0 < lo <= hi.
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// Moment-order grid: n log-spaced points on [p_min, min(b, 256)).
std::vector<double> default_p_grid(double b = kInf, double p_min = 1.0,
                                   std::size_t n = 200);

/// Threshold grid: n log-spaced points on [1e-2, 1e2].
std::vector<double> default_u_grid(std::size_t n = 200);

/// A real function sampled on an increasing grid.
struct FunctionTable {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
  void validate() const;
  /// Piecewise-linear interpolation, constant beyond the ends.
  double interpolate(double at) const;
};

FunctionTable tabulate(const std::function<double(double)>& f,
                       std::span<const double> xs);

/// Indices of the vertices of the lower convex hull of (x, y), x increasing.
std::vector<std::size_t> lower_hull(std::span<const double> x,
                                    std::span<const double> y);

/// Greatest convex minorant of the table evaluated back on its own grid.
FunctionTable lower_convex_envelope(const FunctionTable& f);

struct ScalarMinimum {
  double argmin;
  double value;
};

/// Golden-section search for a unimodal function on [lo, hi].
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f,
                                      double lo, double hi,
                                      double tol = 1e-12,
                                      int max_iter = 500);

}  // namespace psk
