#include "psk/reference.hpp"

#include <algorithm>
#include <cmath>

namespace psk::reference {

double global_delta(std::span<const double> values) {
  const std::size_t n = values.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k)
        best = std::max(best, std::min(std::abs(values[j] - values[i]),
                                       std::abs(values[k] - values[j])));
  return best;
}

double ps_module(std::span<const double> times, std::span<const double> values, double delta) {
  const std::size_t n = values.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        if (!(times[k] <= times[i] + delta + kGridTol)) break;
        best = std::max(best, std::min(std::abs(values[j] - values[i]),
                                       std::abs(values[k] - values[j])));
      }
  return best;
}

FunctionTable young_fenchel(const FunctionTable& f, std::span<const double> u_grid) {
  FunctionTable out;
  for (double u : u_grid) {
    double best = -kInf;
    for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, f.x[i] * u - f.y[i]);
    out.x.push_back(u);
    out.y.push_back(best);
  }
  return out;
}

DeltaMoments delta_moments(const PathSet& paths, std::span<const std::size_t> indices,
                           std::span<const double> p_grid) {
  const std::size_t m = indices.size();
  const double trials = static_cast<double>(paths.count());
  DeltaMoments out;
  out.w.assign(m * m, 0.0);
  std::vector<double> sums(m * m * m);
  for (double p : p_grid) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t path = 0; path < paths.count(); ++path) {
      const auto row = paths.row(path);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j)
          for (std::size_t k = j; k < m; ++k) {
            const double d = std::min(std::abs(row[indices[j]] - row[indices[i]]),
                                      std::abs(row[indices[k]] - row[indices[j]]));
            sums[(i * m + j) * m + k] += std::pow(d, p);
          }
    }
    double nu = 0.0;
    std::vector<double> pair(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j)
        for (std::size_t k = j; k < m; ++k) {
          const double norm = std::pow(sums[(i * m + j) * m + k] / trials, 1.0 / p);
          nu = std::max(nu, norm);
          pair[i * m + k] = std::max(pair[i * m + k], norm);
        }
    out.nu.push_back(nu);
    if (nu == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = i + 1; k < m; ++k) {
        const double v = std::max(out.w[i * m + k], pair[i * m + k] / nu);
        out.w[i * m + k] = out.w[k * m + i] = v;
      }
  }
  return out;
}

}  // namespace psk::reference
