#include "liederiv/linalg.hpp"

namespace liederiv {

namespace {

void axpy(SparseRow& target, const mpq_class& factor, const SparseRow& source) {
  for (const auto& [c, v] : source) {
    auto [it, inserted] = target.try_emplace(c, 0);
    it->second -= factor * v;
    if (sgn(it->second) == 0) target.erase(it);
  }
}

}  // namespace

SparseRow RowReducer::reduce(SparseRow row) const {
  for (auto it = row.begin(); it != row.end();) {
    auto pivot = rows_.find(it->first);
    if (pivot == rows_.end()) {
      ++it;
      continue;
    }
    int col = it->first;
    mpq_class factor = it->second;
    axpy(row, factor, pivot->second);
    it = row.upper_bound(col);
  }
  return row;
}

bool RowReducer::add(SparseRow row) {
  row = reduce(std::move(row));
  if (row.empty()) return false;
  auto lead = row.begin();
  int pivot = lead->first;
  mpq_class inv = 1 / lead->second;
  for (auto& [c, v] : row) v *= inv;
  for (auto& [p, r] : rows_) {
    auto hit = r.find(pivot);
    if (hit != r.end()) {
      mpq_class factor = hit->second;
      axpy(r, factor, row);
    }
  }
  rows_.emplace(pivot, std::move(row));
  return true;
}

std::vector<std::vector<mpq_class>> RowReducer::nullspace() const {
  std::vector<std::vector<mpq_class>> basis;
  for (int free = 0; free < cols_; ++free) {
    if (rows_.contains(free)) continue;
    std::vector<mpq_class> v(static_cast<std::size_t>(cols_), 0);
    v[static_cast<std::size_t>(free)] = 1;
    for (const auto& [p, r] : rows_) {
      auto hit = r.find(free);
      if (hit != r.end()) v[static_cast<std::size_t>(p)] = -hit->second;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace liederiv
