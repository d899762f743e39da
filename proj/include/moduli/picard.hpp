/**
 * @file picard.hpp
 * @brief Rank of a Picard basis measured by pairing against every F-curve.
 */
#pragma once

#include "moduli/divisor_algebra.hpp"
#include "moduli/exact_rank.hpp"
#include "moduli/fcurve.hpp"

namespace moduli::div {

struct RankCheck {
  long long rank = 0;
  long long expected = 0;
  bool matches = false;
};

/// Rank of the matrix (F-curves of M_{0,n}) x (basis generators pulled back to
/// the top level).
inline RankCheck verify_basis_rank(const LevelSpec& level, int cap = 10) {
  check_cap(level.n(), cap, "verify_basis_rank");
  const int n = level.n();
  const auto basis = picard_basis(level);
  const std::size_t cols = basis.generators.size();

  // Columns scaled to integers; scaling a column does not change the rank.
  std::vector<fcurve::PairingTable> tables;
  std::vector<mpz_class> scale;
  for (const auto& g : basis.generators) {
    DivisorClass d(level);
    d.add(g, Rational(1));
    auto top = pullback_to_top(d);
    mpz_class l = 1;
    for (const auto& [s, c] : top.coeffs()) l = lcm(l, c.constant.den());
    scale.push_back(l);
    tables.emplace_back(top);
  }

  EchelonBasis echelon(cols);
  fcurve::for_each_fcurve(n, [&](const fcurve::FCurve& c) {
    if (echelon.full()) return;
    std::vector<mpz_class> row(cols);
    bool nonzero = false;
    for (std::size_t j = 0; j < cols; ++j) {
      Rational v = tables[j](c).constant * Rational(scale[j], mpz_class(1));
      row[j] = v.num();
      nonzero = nonzero || sgn(row[j]) != 0;
    }
    if (nonzero) echelon.insert(std::move(row));
  });

  RankCheck r;
  r.rank = static_cast<long long>(echelon.rank());
  r.expected = picard_rank_formula(level);
  r.matches = r.rank == r.expected && static_cast<long long>(cols) == r.expected;
  return r;
}

}  // namespace moduli::div
