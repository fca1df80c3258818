/**
 * @file linalg.hpp
 * @brief Exact linear algebra over K: rank, reduced row echelon form, and
 *        nullspace bases, with deterministic (first-nonzero) pivoting.
 */
#pragma once

#include <qshuffle/kfield.hpp>

namespace qsh {

using KVector = std::vector<KScalar>;
using KMatrix = std::vector<KVector>;

/// In-place reduced row echelon form; returns the pivot column per row.
inline std::vector<int> rref(KMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[r], m[pr]);
    KScalar inv = m[r][c].inverse();
    for (int j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      KScalar f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int rank(KMatrix m) { return static_cast<int>(rref(m).size()); }

/// Basis of the right nullspace {x : m x = 0}; deterministic order (one
/// basis vector per free column, ascending).
inline std::vector<KVector> nullspace(KMatrix m, int cols, int arity) {
  for (auto& row : m)
    if (static_cast<int>(row.size()) != cols)
      throw std::runtime_error("nullspace: ragged matrix");
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<KVector> basis;
  for (int fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    KVector v(cols, KScalar(arity));
    v[fc] = KScalar::from_int(arity, 1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (pivots[r] < fc) v[pivots[r]] = -m[r][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace qsh
