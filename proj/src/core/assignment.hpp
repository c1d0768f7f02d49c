// Rectangular linear assignment (Hungarian / shortest augmenting path).
#pragma once

#include <cstddef>
#include <vector>

namespace trackenrich {

/// Dense row-major cost matrix. Rows are agents (trajectories), columns are
/// the items that must all be assigned (visible positions).
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  // row_of[j] is the row that column j is assigned to.
  std::vector<std::size_t> row_of;
  double total_cost = 0.0;
};

/// Minimum-cost injective map of every column onto a distinct row.
/// Requires cols <= rows and finite entries (std::logic_error otherwise).
/// Equal-cost alternatives resolve deterministically towards lower indices.
Assignment solve_assignment(const CostMatrix& cost);

}  // namespace trackenrich
