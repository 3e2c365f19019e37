#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace sasm {

template <typename Scalar>
inline constexpr Scalar kForbidden = std::numeric_limits<Scalar>::infinity();

using Assignment = std::vector<std::pair<int, int>>;

namespace detail {

// Shortest augmenting path Hungarian method with row/column potentials.
// Requires rows <= cols and finite entries. Returns col index per row.
template <typename Scalar>
std::vector<int> solveDenseAssignment(const Eigen::MatrixX<Scalar> &a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> u(n + 1, Scalar(0)), v(m + 1, Scalar(0));
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<Scalar> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      Scalar delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j])
          continue;
        const Scalar cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
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
    } while (j0 != 0);
  }
  std::vector<int> rowToCol(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0)
      rowToCol[p[j] - 1] = j - 1;
  return rowToCol;
}

} // namespace detail

/// Minimum-cost one-to-one assignment. Entries equal to kForbidden never
/// appear in the result. Among all assignments the one with the most
/// admissible pairs wins, then the lowest total cost. Pairs are sorted by
/// row index.
template <typename Derived>
Assignment hungarianAssign(const Eigen::MatrixBase<Derived> &cost) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index rows = cost.rows();
  const Eigen::Index cols = cost.cols();
  Assignment result;
  if (rows == 0 || cols == 0)
    return result;

  bool anyFinite = false;
  Scalar lo = std::numeric_limits<Scalar>::max();
  Scalar hi = std::numeric_limits<Scalar>::lowest();
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Scalar x = cost(r, c);
      if (std::isfinite(x)) {
        anyFinite = true;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
  if (!anyFinite)
    return result;

  // Shift to non-negative and price forbidden cells above any admissible total.
  const Eigen::Index k = std::min(rows, cols);
  const Scalar bigM = static_cast<Scalar>(k + 1) * (hi - lo + Scalar(1));
  const bool transpose = rows > cols;
  Eigen::MatrixX<Scalar> work(transpose ? cols : rows, transpose ? rows : cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Scalar x = cost(r, c);
      const Scalar w = std::isfinite(x) ? x - lo : bigM;
      if (transpose)
        work(c, r) = w;
      else
        work(r, c) = w;
    }

  const std::vector<int> match = detail::solveDenseAssignment(work);
  for (int i = 0; i < static_cast<int>(match.size()); ++i) {
    const int j = match[i];
    if (j < 0)
      continue;
    const int r = transpose ? j : i;
    const int c = transpose ? i : j;
    if (std::isfinite(cost(r, c)))
      result.emplace_back(r, c);
  }
  std::sort(result.begin(), result.end());
  return result;
}

template <typename Derived>
typename Derived::Scalar assignmentCost(const Eigen::MatrixBase<Derived> &cost,
                                        const Assignment &pairs) {
  typename Derived::Scalar total(0);
  for (const auto &[r, c] : pairs)
    total += cost(r, c);
  return total;
}

} // namespace sasm
