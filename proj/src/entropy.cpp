#include "psk/entropy.hpp"

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

namespace {

bool in_ball(double value, double epsilon) {
  return value <= epsilon * (1.0 + 1e-9) + 1e-12;
}

}  // namespace

SemiDistanceGrid::SemiDistanceGrid(std::vector<double> times, std::vector<double> matrix)
    : times_(std::move(times)), q_(std::move(matrix)) {
  const std::size_t n = times_.size();
  if (n == 0) throw std::invalid_argument("SemiDistanceGrid: empty grid");
  if (q_.size() != n * n) throw std::invalid_argument("SemiDistanceGrid: matrix is not n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("SemiDistanceGrid: grid must be increasing");
    }
    if (q_[i * n + i] != 0.0) throw std::invalid_argument("SemiDistanceGrid: nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = q_[i * n + j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("SemiDistanceGrid: entries must be finite and nonnegative");
      }
      if (v != q_[j * n + i]) throw std::invalid_argument("SemiDistanceGrid: matrix not symmetric");
    }
  }
}

SemiDistanceGrid SemiDistanceGrid::from_function(
    std::vector<double> times, const std::function<double(double, double)>& f) {
  const std::size_t n = times.size();
  std::vector<double> q(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      q[i * n + j] = q[j * n + i] = f(times[i], times[j]);
    }
  }
  return SemiDistanceGrid(std::move(times), std::move(q));
}

double SemiDistanceGrid::max_value() const { return *std::max_element(q_.begin(), q_.end()); }

bool SemiDistanceGrid::interval_structure() const {
  const std::size_t n = times_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j + 1 < n; ++j) {
      if ((*this)(i, j + 1) < (*this)(i, j)) return false;
    }
    for (std::size_t j = i; j-- > 0;) {
      if ((*this)(i, j) < (*this)(i, j + 1)) return false;
    }
  }
  return true;
}

namespace {

CoveringResult segment_cover(const SemiDistanceGrid& q, double epsilon) {
  const std::size_t n = q.size();
  std::vector<std::size_t> left(n), right(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r + 1 < n && in_ball(q(c, r + 1), epsilon)) ++r;
    std::size_t l = c;
    while (l > 0 && in_ball(q(c, l - 1), epsilon)) --l;
    left[c] = l;
    right[c] = r;
  }
  CoveringResult out{epsilon, 0, {}, true};
  std::size_t start = 0;
  while (true) {
    // Ball containing `start` that reaches furthest right.
    std::size_t best = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (left[c] <= start && right[c] >= start && (best == n || right[c] > right[best])) {
        best = c;
      }
    }
    out.centers.push_back(best);
    if (right[best] == n - 1) break;
    // The next ball must share the last covered point so that the gap to its
    // neighbour is covered too; when no ball spans that gap, move past it.
    if (right[best] > start) {
      start = right[best];
    } else {
      start = right[best] + 1;
      out.exact = false;
    }
  }
  out.count = out.centers.size();
  return out;
}

CoveringResult greedy_set_cover(const SemiDistanceGrid& q, double epsilon) {
  const std::size_t n = q.size();
  std::vector<char> covered(n, 0);
  std::size_t remaining = n;
  CoveringResult out{epsilon, 0, {}, false};
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t gain = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!covered[j] && in_ball(q(c, j), epsilon)) ++gain;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    out.centers.push_back(best);
    for (std::size_t j = 0; j < n; ++j) {
      if (!covered[j] && in_ball(q(best, j), epsilon)) {
        covered[j] = 1;
        --remaining;
      }
    }
  }
  out.count = out.centers.size();
  std::sort(out.centers.begin(), out.centers.end());
  return out;
}

}  // namespace

CoveringResult covering_number(const SemiDistanceGrid& q, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("covering_number: epsilon must be positive");
  if (q.interval_structure()) return segment_cover(q, epsilon);
  return greedy_set_cover(q, epsilon);
}

bool verify_cover(const SemiDistanceGrid& q, const CoveringResult& cover) {
  if (cover.count != cover.centers.size()) return false;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const bool hit = std::any_of(cover.centers.begin(), cover.centers.end(), [&](std::size_t c) {
      return c < q.size() && in_ball(q(c, j), cover.epsilon);
    });
    if (!hit) return false;
  }
  return true;
}

double metric_entropy(const SemiDistanceGrid& q, double epsilon) {
  return std::log(static_cast<double>(covering_number(q, epsilon).count));
}

double sigma_modulus(const SemiDistanceGrid& q, double h) {
  if (!(h > 0.0) || h > 0.5) throw std::invalid_argument("sigma_modulus: h must lie in (0, 1/2]");
  const auto& t = q.times();
  double best = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = i + 1; j < q.size() && within(t[j] - t[i], 2.0 * h); ++j) {
      best = std::max(best, q(i, j));
    }
  }
  return best / h;
}

SigmaReport sigma_report(const SemiDistanceGrid& q, const std::vector<double>& h_grid) {
  SigmaReport r;
  r.h = h_grid;
  std::sort(r.h.begin(), r.h.end());
  for (double h : r.h) r.sigma.push_back(sigma_modulus(q, h));
  if (r.h.size() >= 2 && r.sigma.back() > 0.0) {
    // Vanishing when sigma shrinks with h at a clear power rate.
    const double smallest = r.sigma.front();
    const double rate = std::log(r.sigma.back() / std::max(smallest, 1e-300)) /
                        std::log(r.h.back() / r.h.front());
    r.vanishing = rate > 0.25;
  } else if (!r.sigma.empty()) {
    r.vanishing = true;
  }
  return r;
}

SemiDistanceGrid read_semidistance(std::istream& in) {
  std::string line;
  std::vector<double> times;
  std::vector<double> matrix;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line) {
      if (c == ',' || c == '\t') c = ' ';
    }
    std::istringstream row(line);
    std::vector<double> cells;
    double v;
    while (row >> v) cells.push_back(v);
    if (cells.empty()) continue;
    if (times.empty()) {
      times = std::move(cells);
    } else {
      if (cells.size() != times.size()) {
        throw std::runtime_error("read_semidistance: row length does not match the header");
      }
      matrix.insert(matrix.end(), cells.begin(), cells.end());
    }
  }
  return SemiDistanceGrid(std::move(times), std::move(matrix));
}

void write_semidistance(std::ostream& out, const SemiDistanceGrid& q) {
  const auto write_row = [&](auto&& cell) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (j > 0) out << ',';
      out << format_double(cell(j));
    }
    out << '\n';
  };
  write_row([&](std::size_t j) { return q.times()[j]; });
  for (std::size_t i = 0; i < q.size(); ++i) write_row([&](std::size_t j) { return q(i, j); });
}

}  // namespace psk
