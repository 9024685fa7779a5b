#pragma once

// Tail bounds for the triple-minimum statistics: the constant K(alpha, beta),
// power-law bounds from an increment envelope G, the entropy series, moment
// growth (GLS) bounds, minimum-tail bounds and the CLT envelopes.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "psk/grid.hpp"

namespace psk {

/// Thresholds u with bound values clamped to [0, 1].
struct TailCurve {
  std::vector<double> u;
  std::vector<double> prob;
  /// Unclamped values (may exceed 1).
  std::vector<double> raw;
  /// Parameter attaining the infimum at each u (p, or alpha for pair sets); NaN when none.
  std::vector<double> param;
  /// Second parameter for two-parameter infima (beta); NaN otherwise.
  std::vector<double> param2;

  std::size_t size() const { return u.size(); }
  void push(double at, double raw_value, double p = kNaN, double p2 = kNaN);

  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
};

/// Continuous nondecreasing function on [0, 1], linear between grid points.
class GFunction {
 public:
  GFunction(std::vector<double> times, std::vector<double> values);
  static GFunction from_function(std::vector<double> times,
                                 const std::function<double(double)>& f);

  double operator()(double t) const;
  /// G(1) - G(0).
  double total() const { return values_.back() - values_.front(); }
  /// Exact modulus of continuity sup{G(t) - G(r) : 0 <= t - r <= h}.
  double modulus(double h) const;

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

enum class KMode { closed, optimized };

/// Closed-form bound (1 - 2^{(1-a)/(4b)})^{-2b} / (2^{(a-1)/2} - 1).
double k_constant(double alpha, double beta, KMode mode = KMode::closed);

/// Minimiser over theta in (2^{(1-a)/(2b)}, 1) of
/// 2^{(1-a)/(2b)} theta^{-2b} (1-theta)^{-2b} / (1 - 2^{1-a} theta^{-2b}).
ScalarMinimum k_constant_theta(double alpha, double beta);

/// Leading behaviour 2^{4b+1} b^{2b} (ln 2)^{-2b-1} (a-1)^{-2b-1} as a -> 1.
double k_constant_asymptotic(double alpha, double beta);

struct AlphaBeta {
  double alpha;
  double beta;
};

/// inf over the set of K(a, b) u^{-2b} [G(1) - G(0)]^a.
TailCurve prop30_delta_bound(std::span<const AlphaBeta> set, const GFunction& g,
                             std::span<const double> u_grid, KMode mode = KMode::closed);
/// inf over the set of 2 K(a, b) u^{-2b} [G(1) - G(0)]^a omega[G](2h)^{a-1}.
TailCurve prop30_kappa_bound(std::span<const AlphaBeta> set, const GFunction& g, double h,
                             std::span<const double> u_grid, KMode mode = KMode::closed);

/// Radii eps(k) (eps(1) = 1, decreasing to 0) and weights theta(k) > 0.
struct SequencePair {
  std::string name;
  std::function<double(std::size_t)> eps;
  std::function<double(std::size_t)> theta;
};

/// eps(k) = s^{k-1}, theta(k) = (1 - th) th^k.
SequencePair geometric_sequences(double s, double theta);
/// eps(k) = e^{1-k}, theta(k) = k^{-nu} / zeta(nu).
SequencePair polynomial_sequences(double nu);

struct SeriesOptions {
  double tolerance = 1e-9;
  std::size_t max_terms = 1'000'000;
};

struct SeriesResult {
  bool available = false;
  /// partial + remainder.
  double value = kInf;
  double partial = 0.0;
  /// Estimated majorant of the discarded tail of the series.
  double remainder = kInf;
  std::size_t terms = 0;
  /// Sum of theta over the summed range, and whether it stays <= 1.
  double theta_sum = 0.0;
  bool theta_ok = false;
  /// Index of the winning pair when minimised over a family.
  std::size_t best = 0;
  std::string message;
};

/// sum_k N(eps(k+1)) eps(k) / lambda(u theta(k)), truncated once a geometric or
/// power-law majorant of the tail falls below the tolerance.
SeriesResult entropy_q_bound(const std::function<double(double)>& covering,
                             const std::function<double(double)>& lambda,
                             const SequencePair& seqs, double u, SeriesOptions opts = {});
/// Minimum over a family of sequence pairs.
SeriesResult entropy_q_bound(const std::function<double(double)>& covering,
                             const std::function<double(double)>& lambda,
                             std::span<const SequencePair> family, double u,
                             SeriesOptions opts = {});

/// Moment function nu(p) tabulated on its p grid; only p in [2, b) is used.
/// inf_p (3 nu(p) G(1) / u)^p.
TailCurve prop41_bound(const FunctionTable& nu, const GFunction& g, double b,
                       std::span<const double> u_grid);
/// 2 inf_p (3 nu(p) [G(1) - G(0)] / u)^p omega[G](2h)^{p-1}.
TailCurve prop42_kappa_bound(const FunctionTable& nu, const GFunction& g, double b, double h,
                             std::span<const double> u_grid);

struct Envelopes {
  TailCurve delta;
  TailCurve kappa;
  /// Numerically fitted rate constants of the two envelopes.
  double c_delta = 0.0;
  double c_kappa = 0.0;
  double omega = 0.0;
  std::vector<bool> delta_in_range;
  std::vector<bool> kappa_in_range;
};

/// Exponential envelopes when nu(p) <= c1 p^m: exp(-C2 u^{1/m}) and
/// 2 w^{-1} exp(-C3 u^{1/m} w) with w = omega[G](2h). C2 and C3 are the largest
/// constants keeping each envelope above the moment infimum at the in-range
/// thresholds; out-of-range thresholds get the trivial envelope 1.
Envelopes exp_tail_envelopes(double c1, double m, const GFunction& g, double h,
                             std::span<const double> u_grid, std::vector<double> p_grid = {});

/// |(x, y)|-type mixed moment mean |x|^p1 |y|^p2.
double joint_moment(std::span<const double> x, std::span<const double> y, double p1, double p2);
/// (mean |x|^p1 |y|^p2)^{1/(p1+p2)}.
double joint_pseudo_norm(std::span<const double> x, std::span<const double> y, double p1,
                         double p2);
/// Hoelder majorant |x|_{a p1}^{p1/(p1+p2)} |y|_{b p2}^{p2/(p1+p2)} with 1/a + 1/b = 1.
double joint_holder_bound(std::span<const double> x, std::span<const double> y, double p1,
                          double p2, double a);
/// Majorant for |(x1 + x2, y1 + y2)|_{p1,p2}:
/// 2^{1 - 2/(p1+p2)} [(|x1|^p1 + |x2|^p1)(|y1|^p2 + |y2|^p2)]^{1/(p1+p2)} with the
/// x norms of order a p1 and y norms of order b p2.
double joint_sum_bound(std::span<const double> x1, std::span<const double> x2,
                       std::span<const double> y1, std::span<const double> y2, double p1,
                       double p2, double a);

struct MinTail {
  double bound = 1.0;
  double raw = kInf;
  double p1 = TailCurve::kNaN;
  double p2 = TailCurve::kNaN;
  /// The moment was infinite on the whole search grid.
  bool no_finite_moment = false;
  /// The optimum sits on the boundary of the search grid.
  bool grid_edge = false;
};

/// inf over (p1, p2) of nu(p1, p2) / (u^p1 v^p2), clamped.
MinTail min_tail_2d(const std::function<double(double, double)>& moment, double u, double v,
                    std::span<const double> p1_grid, std::span<const double> p2_grid);

struct FenchelTail {
  double via_transform = 1.0;
  double direct = 1.0;
  double argmax_p = TailCurve::kNaN;
  bool grid_edge = false;
};

/// exp(-psi1*(d ln u)) with psi1(p) = p ln psi(p) on the p grid (+inf elsewhere),
/// evaluated through the Young-Fenchel transform and by the direct infimum.
FenchelTail min_tail_fenchel(const FunctionTable& psi, int d, double u);

/// d(p, r, t) returns the L_{2p} distance of the increment between r and t.
using IncrementDistance = std::function<double(double p, double r, double t)>;

/// inf_p d_{2p}^p(r, s) d_{2p}^p(s, t) / u^{2p}, clamped; param is the best p.
MinTail pizier_min_bound(const IncrementDistance& d2p, double r, double s, double t, double u,
                         std::span<const double> p_grid);
/// sup over s in the grid of the pointwise infimum.
MinTail pizier_min_bound_sup(const IncrementDistance& d2p, double r, std::span<const double> s_grid,
                             double t, double u, std::span<const double> p_grid);

enum class KappaRange {
  /// p in [2, min(b, 1/l)), taken literally.
  as_printed,
  /// p in [2, b) with l p > 1.
  lp_gt_one,
};

/// Single term 2 K(l p, p) Z(2p)^{1/l} V(1)^{l p} u^{-2p} omega[V](2h)^{l p - 1}.
double kappa_516_term(const std::function<double(double)>& z, const GFunction& v, double l,
                      double p, double h, double u, KMode mode = KMode::closed);

struct RangeBound {
  bool available = false;
  double bound = 1.0;
  double raw = kInf;
  double p = TailCurve::kNaN;
  std::string message;
};

RangeBound kappa_bound_516(const std::function<double(double)>& z, const GFunction& v, double l,
                           double b, double h, double u, std::span<const double> p_grid,
                           KappaRange range = KappaRange::as_printed,
                           KMode mode = KMode::closed);

/// 0.6535 p / ln p for p >= 2.
double rosenthal_constant(double p);

struct CltBounds {
  TailCurve delta;
  TailCurve kappa;
};

/// inf_p 3^p K_R(p)^p y(p)^p B(1)^p u^{-p} and the kappa version with the extra
/// omega[B](2h)^{p-1} factor (doubled). unit_rosenthal forces K_R = 1.
CltBounds clt_bounds(const FunctionTable& y, const GFunction& b_env, double b, double h,
                     std::span<const double> u_grid, bool unit_rosenthal = false);

/// Envelopes when y(p) <= c1 p^{1/m} ln^s p: exp(-C2 g(u)) for u >= e and
/// 2 w^{-1} exp(-C3 g(u / w)) above the threshold e w |ln w|^{1 + 1/m}, where
/// g(x) = x^{m/(m+1)} |ln x|^{m(s-1)/(m+1)} and w = omega[B](2h).
Envelopes clt_envelopes(double c1, double m, double s, const GFunction& b_env, double h,
                        std::span<const double> u_grid, std::vector<double> p_grid = {});

}  // namespace psk
