#pragma once

// Serial brute-force versions of the fast kernels. Used by the tests as
// oracles and by the benchmarks as the baseline.

#include <span>
#include <vector>

#include "psk/grid.hpp"
#include "psk/path.hpp"

namespace psk::reference {

/// O(n^3) enumeration of all grid triples r <= s <= t.
double global_delta(std::span<const double> values);

/// O(n^3) enumeration of grid triples with t2 <= t1 + delta.
double ps_module(std::span<const double> times, std::span<const double> values, double delta);

/// max over grid points of x u - f(x), for every u.
FunctionTable young_fenchel(const FunctionTable& f, std::span<const double> u_grid);

struct DeltaMoments {
  std::vector<double> nu;
  /// max over s and p of |delta(r, s, t)|_p / nu(p), row-major.
  std::vector<double> w;
};

/// Direct per-triple, per-path accumulation on the grid positions `indices`.
DeltaMoments delta_moments(const PathSet& paths, std::span<const std::size_t> indices,
                           std::span<const double> p_grid);

}  // namespace psk::reference
