#pragma once

#include <vector>

#include "slring/common.hpp"

namespace slring {

/// Minimum-cost assignment on a square cost matrix (Jonker-Volgenant style
/// shortest augmenting paths, O(n^3)). Returns row_to_col.
std::vector<int> hungarian_assignment(const RMatrix& cost);

/// Optimal pairing of two equally sized complex point sets by the Hungarian
/// method on pairwise distances. Returns, for each index of `from`, the
/// matched index of `to`.
std::vector<int> match_points(const std::vector<Complex>& from, const std::vector<Complex>& to);

/// Largest pairing distance under the optimal matching.
double max_matching_distance(const std::vector<Complex>& from, const std::vector<Complex>& to);

/// Least-squares slope of log(err) against log(h). Nonpositive entries are
/// clamped to 1e-300 so an exactly-zero error cannot poison the fit.
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace slring
