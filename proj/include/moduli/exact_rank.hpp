/**
 * @file exact_rank.hpp
 * @brief Rank of an integer matrix over Q by fraction-free elimination.
 *
 * Rows are streamed into an echelon basis. Each incoming row is reduced
 * against the stored pivots with integer cross-multiplication and then divided
 * by the gcd of its entries, so no fractions ever appear.
 */
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace moduli {

class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

  std::size_t rank() const { return pivots_.size(); }
  std::size_t cols() const { return cols_; }
  bool full() const { return rank() == cols_; }

  /// Inserts a row; returns true if it increased the rank.
  bool insert(std::vector<mpz_class> row) {
    for (std::size_t p = 0; p < pivots_.size(); ++p) {
      const auto& prow = rows_[p];
      const std::size_t c = pivots_[p];
      if (sgn(row[c]) == 0) continue;
      mpz_class f = row[c], g = prow[c];
      mpz_class d = gcd(f, g);
      f /= d;
      g /= d;
      for (std::size_t j = c; j < cols_; ++j) row[j] = g * row[j] - f * prow[j];
      normalize(row, c);
    }
    std::size_t lead = 0;
    while (lead < cols_ && sgn(row[lead]) == 0) ++lead;
    if (lead == cols_) return false;
    normalize(row, lead);
    pivots_.push_back(lead);
    rows_.push_back(std::move(row));
    return true;
  }

 private:
  void normalize(std::vector<mpz_class>& row, std::size_t from) const {
    mpz_class g = 0;
    for (std::size_t j = from; j < cols_; ++j) {
      if (sgn(row[j]) == 0) continue;
      g = gcd(g, row[j]);
      if (g == 1) return;
    }
    if (g > 1)
      for (std::size_t j = from; j < cols_; ++j) row[j] /= g;
  }

  std::size_t cols_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<mpz_class>> rows_;
};

/// Rank of a dense integer matrix given by rows.
inline std::size_t exact_rank(const std::vector<std::vector<mpz_class>>& rows, std::size_t cols) {
  EchelonBasis basis(cols);
  for (const auto& r : rows) {
    basis.insert(r);
    if (basis.full()) break;
  }
  return basis.rank();
}

}  // namespace moduli
