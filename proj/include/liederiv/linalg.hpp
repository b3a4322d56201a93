#pragma once

#include <gmpxx.h>

#include <map>
#include <vector>

namespace liederiv {

using SparseRow = std::map<int, mpq_class>;

// Exact row echelon form over ℚ, built one row at a time and kept fully reduced.
class RowReducer {
 public:
  explicit RowReducer(int cols) : cols_(cols) {}

  // Returns true when the row increased the rank.
  bool add(SparseRow row);
  int rank() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  // Reduces `row` against the current basis (zero iff it lies in the row space).
  SparseRow reduce(SparseRow row) const;
  // Basis of {v : M v = 0}, one dense vector per free column.
  std::vector<std::vector<mpq_class>> nullspace() const;

 private:
  int cols_;
  std::map<int, SparseRow> rows_;  // pivot column -> row with leading 1 there
};

}  // namespace liederiv
