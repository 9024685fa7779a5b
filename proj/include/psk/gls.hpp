#pragma once

// Exponential-moment and moment-growth norms of random variables: Young-Orlicz
// functions phi, moment functions psi, the B(phi) and G(psi) norms, natural
// functions built from data, and the Young-Fenchel transform.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "psk/grid.hpp"

namespace psk {

/// Raised when a sample fails the exponential-moment (Kramer) condition on the grid.
class not_in_space : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Finite list of observations of a real random variable.
class EmpiricalSample {
 public:
  explicit EmpiricalSample(std::vector<double> draws);

  std::span<const double> draws() const { return draws_; }
  std::size_t size() const { return draws_.size(); }
  double mean() const { return mean_; }
  double stddev() const { return stddev_; }
  double max_abs() const { return max_abs_; }

  /// |xi|_p = (mean |x|^p)^(1/p), computed with the largest |x| factored out.
  double abs_moment(double p) const;

  /// log mean exp(lambda x), computed as a log-sum-exp.
  double log_mgf(double lambda) const;

  /// max(P(xi > x), P(xi < -x)) under the empirical measure.
  double two_sided_tail(double x) const;

  /// |mean| <= 3 * sd / sqrt(n).
  bool approximately_centered() const;

 private:
  std::vector<double> draws_;
  std::vector<double> sorted_;
  double mean_ = 0.0;
  double stddev_ = 0.0;
  double max_abs_ = 0.0;
};

/// Moment-growth function psi(p) > 0 tabulated on [1, b).
///
/// A degenerate psi_(l) is +infinity everywhere except psi(l) = 1; its norm is
/// the plain L_l norm.
class PsiFunction {
 public:
  PsiFunction(std::vector<double> p, std::vector<double> values, double b = kInf);

  static PsiFunction degenerate(double l);
  /// Tabulates f on `grid`, or on default_p_grid(b) when the grid is empty.
  static PsiFunction tabulate(const std::function<double(double)>& f, double b = kInf,
                              std::vector<double> grid = {});

  const std::vector<double>& grid() const { return p_; }
  const std::vector<double>& values() const { return values_; }
  double b() const { return b_; }
  std::optional<double> degenerate_at() const { return degenerate_; }

 private:
  std::vector<double> p_;
  std::vector<double> values_;
  double b_;
  std::optional<double> degenerate_;
};

/// Even Young-Orlicz function on (-lambda0, lambda0), tabulated on [0, table end].
///
/// Evaluation uses the exact callable when one was supplied, otherwise linear
/// interpolation; past the table end it extends with the last chord slope and
/// returns +infinity for |lambda| >= lambda0.
class PhiFunction {
 public:
  PhiFunction(std::vector<double> lambda, std::vector<double> values, double lambda0 = kInf);

  static PhiFunction tabulate(std::function<double(double)> f, double lambda0,
                              double table_end, std::size_t n = 200);

  double operator()(double lambda) const;

  const std::vector<double>& grid() const { return lambda_; }
  const std::vector<double>& values() const { return values_; }
  double lambda0() const { return lambda0_; }

  /// Discrete second differences >= 0 within a relative tolerance.
  bool convex_on_grid() const;
  /// Chord slopes phi(lambda)/lambda increase along the grid.
  bool superlinear_on_grid() const;

  /// The table mirrored onto [-end, end] for conjugation.
  FunctionTable symmetric_table() const;

 private:
  std::vector<double> lambda_;
  std::vector<double> values_;
  double lambda0_;
  std::function<double(double)> exact_;
};

/// sup over the psi grid of |xi|_p / psi(p).
double gls_norm(const EmpiricalSample& sample, const PsiFunction& psi);

/// Least tau >= 0 with max_{+-} log mean exp(+-lambda xi) <= phi(lambda tau) on
/// the positive phi grid, by bisection. Throws std::invalid_argument for a sample
/// that is not approximately centered and not_in_space when no finite tau works.
double bphi_norm(const EmpiricalSample& sample, const PhiFunction& phi);

struct NaturalPhi {
  PhiFunction phi;
  /// True when some empirical mgf was not finite and the grid was cut short.
  bool truncated = false;
};

/// max_{+-} log sup_F mean exp(+-lambda xi), convexified by lower convex envelope.
NaturalPhi natural_phi(std::span<const EmpiricalSample> family,
                       std::span<const double> lambda_grid);

/// Chord slopes of the lower convex hull: the dual grid on which double
/// conjugation reproduces a convex table exactly at its nodes.
std::vector<double> dual_grid(const FunctionTable& f);

/// u -> max_i (x_i u - f(x_i)). Hull-based, parallel over u.
FunctionTable young_fenchel(const FunctionTable& f, std::span<const double> u_grid);
FunctionTable young_fenchel(const FunctionTable& f);

/// min(1, exp(-phi*(c x))).
double tail_from_phi(const PhiFunction& phi, double c, double x);

/// Orlicz N-function exp(phi*(u)) - 1 associated with phi.
double n_function(const PhiFunction& phi, double u);

struct EquivalenceReport {
  double m = 0.0;
  double s = 0.0;
  /// sup over the p grid of |xi|_p / (p^(1/m) ln^s p).
  double moment_sup = 0.0;
  double moment_argmax = 0.0;
  /// Best C in U(xi, x) <= exp(-C x^m (ln x)^(-m s)) for x >= e; +inf when the
  /// sample never exceeds e in absolute value.
  double tail_constant = 0.0;
  /// Log-log growth rates of the two quantities over nested subsamples.
  double moment_growth = 0.0;
  double tail_growth = 0.0;
  bool moment_finite = true;
  bool tail_finite = true;
  bool both_finite = true;
};

/// Checks the moment-growth / tail-decay equivalence on a sample. Divergence is
/// diagnosed from nested subsamples: a quantity whose estimate keeps growing
/// (or, for the tail constant, shrinking) with the sample size is reported as
/// not finite.
EquivalenceReport moment_tail_equivalence(const EmpiricalSample& sample, double m, double s,
                                          std::span<const double> p_grid = {});

}  // namespace psk
