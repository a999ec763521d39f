#include "slring/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slring {

std::vector<int> hungarian_assignment(const RMatrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("hungarian_assignment: cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();

  // Shortest-augmenting-path formulation with potentials; rows and columns
  // are 1-based internally, index 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

std::vector<int> match_points(const std::vector<Complex>& from, const std::vector<Complex>& to) {
  if (from.size() != to.size()) throw std::invalid_argument("match_points: size mismatch");
  const int n = static_cast<int>(from.size());
  RMatrix cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = std::abs(from[i] - to[j]);
  return hungarian_assignment(cost);
}

double max_matching_distance(const std::vector<Complex>& from, const std::vector<Complex>& to) {
  const std::vector<int> m = match_points(from, to);
  double worst = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) worst = std::max(worst, std::abs(from[i] - to[m[i]]));
  return worst;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw std::invalid_argument("fitted_order: need >= 2 samples");
  const int n = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace slring
