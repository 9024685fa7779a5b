#pragma once

// Covering numbers and metric entropy of a finite grid of [0, 1] under a
// symmetric nonnegative pair function. The triangle inequality is not assumed.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace psk {

/// Symmetric matrix q(t_i, t_j) >= 0 with zero diagonal on an increasing grid.
class SemiDistanceGrid {
 public:
  SemiDistanceGrid(std::vector<double> times, std::vector<double> matrix);

  /// q(t_i, t_j) = f(t_i, t_j) with the diagonal forced to zero.
  static SemiDistanceGrid from_function(std::vector<double> times,
                                        const std::function<double(double, double)>& f);

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  double operator()(std::size_t i, std::size_t j) const { return q_[i * times_.size() + j]; }
  double max_value() const;

  /// True when every row is nondecreasing moving away from the diagonal, so
  /// each ball is a contiguous run of grid points.
  bool interval_structure() const;

 private:
  std::vector<double> times_;
  std::vector<double> q_;
};

struct CoveringResult {
  double epsilon = 0.0;
  std::size_t count = 0;
  std::vector<std::size_t> centers;
  /// True when the count is the exact minimum (interval structure); otherwise
  /// the greedy set-cover count, an upper bound on the minimum.
  bool exact = false;
};

/// Covers the grid with closed q-balls of radius epsilon.
///
/// With interval structure the balls must also cover every gap between
/// consecutive grid points, so the count approximates the continuum cover
/// (for |r - t| it is ceil(1 / (2 epsilon))). Otherwise grid points only.
CoveringResult covering_number(const SemiDistanceGrid& q, double epsilon);

/// Every grid point lies in some ball of the result.
bool verify_cover(const SemiDistanceGrid& q, const CoveringResult& cover);

/// ln of the covering number.
double metric_entropy(const SemiDistanceGrid& q, double epsilon);

/// max over grid pairs with |r - t| <= 2h of q(r, t), divided by h.
double sigma_modulus(const SemiDistanceGrid& q, double h);

struct SigmaReport {
  std::vector<double> h;
  std::vector<double> sigma;
  /// sigma appears to tend to zero as h decreases.
  bool vanishing = false;
};

SigmaReport sigma_report(const SemiDistanceGrid& q, const std::vector<double>& h_grid);

/// Dense text form: header row of grid times, then one matrix row per line.
SemiDistanceGrid read_semidistance(std::istream& in);
void write_semidistance(std::ostream& out, const SemiDistanceGrid& q);

}  // namespace psk
