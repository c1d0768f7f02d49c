#include "core/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace trackenrich {

Assignment solve_assignment(const CostMatrix& cost) {
  const std::size_t n = cost.cols();  // items to place
  const std::size_t m = cost.rows();  // slots
  if (n > m) throw std::logic_error("assignment needs at least as many rows as columns");
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (!std::isfinite(cost(r, c))) throw std::logic_error("non-finite entry in assignment cost matrix");
    }
  }
  Assignment out;
  if (n == 0) return out;

  // Potentials-based shortest augmenting path, 1-based with a virtual slot 0.
  // a(i, j) is the cost of item i in slot j.
  auto a = [&](std::size_t i, std::size_t j) { return cost(j - 1, i - 1); };
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
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
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  out.row_of.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) out.row_of[p[j] - 1] = j - 1;
  }
  for (std::size_t c = 0; c < n; ++c) out.total_cost += cost(out.row_of[c], c);
  return out;
}

}  // namespace trackenrich
