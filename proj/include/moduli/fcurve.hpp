/**
 * @file fcurve.hpp
 * @brief F-curves, their pairing with boundary classes, the closed-form
 *        intersection table of A(k, alpha) with the curves C_i, F-nef
 *        thresholds and the log canonical model lookup.
 *
 * Pairing rule for the F-curve with blocks N1..N4 and a boundary divisor
 * D^S: +1 when {S, S^c} = {Ni u Nj, Np u Nq}, -1 when S or S^c is a single
 * block, 0 otherwise.
 */
#pragma once

#include "moduli/core.hpp"
#include "moduli/divisor_algebra.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace moduli::fcurve {

using div::DivisorClass;

class FCurve {
 public:
  FCurve(int n, std::array<Mask, 4> blocks) : n_(n), blocks_(blocks) {
    if (n < 4 || n > kMaxPoints) throw Error(ErrorCode::SizeMismatch, "n out of range");
    Mask seen = 0;
    for (Mask b : blocks_) {
      if (b == 0) throw Error(ErrorCode::SizeMismatch, "empty block");
      if (seen & b) throw Error(ErrorCode::SizeMismatch, "blocks overlap");
      seen |= b;
    }
    if (seen != full_mask(n)) throw Error(ErrorCode::SizeMismatch, "blocks do not cover 1..n");
    std::sort(blocks_.begin(), blocks_.end(), [](Mask a, Mask b) {
      int sa = popcount(a), sb = popcount(b);
      if (sa != sb) return sa < sb;
      return (a & (~a + 1)) < (b & (~b + 1));
    });
  }

  /// "1|2|3,4|5,6"
  static FCurve parse(int n, std::string_view s) {
    std::array<Mask, 4> b{};
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
      std::size_t bar = s.find('|', pos);
      if ((bar == std::string_view::npos) != (i == 3))
        throw Error(ErrorCode::ParseError, "curve '" + std::string(s) + "' at position " + std::to_string(pos) +
                                               ": expected exactly four blocks");
      auto tok = s.substr(pos, bar == std::string_view::npos ? bar : bar - pos);
      b[i] = mask_of(parse_int_list(tok), n);
      pos = bar + 1;
    }
    return FCurve(n, b);
  }

  int n() const { return n_; }
  const std::array<Mask, 4>& blocks() const { return blocks_; }
  std::array<int, 4> sizes() const {
    return {popcount(blocks_[0]), popcount(blocks_[1]), popcount(blocks_[2]), popcount(blocks_[3])};
  }
  std::string str() const {
    std::string s;
    for (int i = 0; i < 4; ++i) s += (i ? "|" : "") + mask_str(blocks_[i]);
    return s;
  }

  /// Enumeration order: block sizes, then blocks.
  friend bool operator<(const FCurve& a, const FCurve& b) {
    if (a.sizes() != b.sizes()) return a.sizes() < b.sizes();
    for (int i = 0; i < 4; ++i)
      if (a.blocks_[i] != b.blocks_[i]) return lex_less(a.blocks_[i], b.blocks_[i]);
    return false;
  }
  friend bool operator==(const FCurve&, const FCurve&) = default;

 private:
  int n_;
  std::array<Mask, 4> blocks_;
};

namespace detail {

/// The divisor masks (canonical) that pair nonzero with C, with their signs.
/// Returns the number of entries written.
inline int nonzero_divisors(const FCurve& c, std::array<std::pair<Mask, int>, 7>& out) {
  const int n = c.n();
  const auto& b = c.blocks();
  int k = 0;
  out[k++] = {MarkedSubset::canonical(n, b[0] | b[1]), +1};
  out[k++] = {MarkedSubset::canonical(n, b[0] | b[2]), +1};
  out[k++] = {MarkedSubset::canonical(n, b[0] | b[3]), +1};
  for (Mask blk : b) {
    int s = popcount(blk);
    if (s >= 2 && s <= n - 2) out[k++] = {MarkedSubset::canonical(n, blk), -1};
  }
  return k;
}

}  // namespace detail

inline int pair_boundary(const FCurve& c, const MarkedSubset& s) {
  if (c.n() != s.n()) throw Error(ErrorCode::SizeMismatch, "curve and divisor have different n");
  std::array<std::pair<Mask, int>, 7> d;
  int k = detail::nonzero_divisors(c, d);
  int total = 0;
  for (int i = 0; i < k; ++i)
    if (d[i].first == s.mask()) total += d[i].second;
  return total;
}

/// Bilinear extension of pair_boundary to a class on the top level.
inline AffineAlpha pair_class(const FCurve& c, const DivisorClass& cls) {
  if (c.n() != cls.n()) throw Error(ErrorCode::SizeMismatch, "curve and class have different n");
  if (!cls.level().is_top())
    throw Error(ErrorCode::LevelMismatch, "F-curves pair with classes on the top level; pull back first");
  std::array<std::pair<Mask, int>, 7> d;
  int k = detail::nonzero_divisors(c, d);
  AffineAlpha total;
  for (int i = 0; i < k; ++i) {
    auto coef = cls.coeff(MarkedSubset(c.n(), d[i].first));
    if (d[i].second > 0) total += coef;
    else total -= coef;
  }
  return total;
}

/// Dense lookup of a top-level class by mask, for scanning many curves. The
/// class is stored over a common denominator so that a pairing is a handful
/// of machine-integer additions.
class PairingTable {
 public:
  explicit PairingTable(const DivisorClass& cls) : n_(cls.n()), table_(std::size_t{1} << cls.n()) {
    if (!cls.level().is_top())
      throw Error(ErrorCode::LevelMismatch, "F-curves pair with classes on the top level; pull back first");
    mpz_class d = 1;
    for (const auto& [s, c] : cls.coeffs()) d = lcm(lcm(d, c.constant.den()), c.slope.den());
    // 7 terms per pairing; keep every partial sum far from overflow.
    const mpz_class bound = mpz_class(1) << 59;
    for (const auto& [s, c] : cls.coeffs()) {
      mpz_class k = c.constant.num() * (d / c.constant.den());
      mpz_class l = c.slope.num() * (d / c.slope.den());
      if (abs(k) >= bound || abs(l) >= bound) throw std::overflow_error("pairing table coefficient too large");
      table_[s.mask()] = {k.get_si(), l.get_si()};
    }
    denominator_ = d;
  }

  AffineAlpha operator()(const FCurve& c) const {
    if (c.n() != n_) throw Error(ErrorCode::SizeMismatch, "curve and class have different n");
    std::array<std::pair<Mask, int>, 7> d;
    int k = detail::nonzero_divisors(c, d);
    long constant = 0, slope = 0;
    for (int i = 0; i < k; ++i) {
      const auto& [kc, ks] = table_[d[i].first];
      constant += d[i].second * kc;
      slope += d[i].second * ks;
    }
    return {Rational(mpz_class(constant), denominator_), Rational(mpz_class(slope), denominator_)};
  }

 private:
  int n_;
  std::vector<std::pair<long, long>> table_;
  mpz_class denominator_ = 1;
};

/// Calls f on every F-curve of M_{0,n} (set partitions into four blocks), in
/// generation order.
inline void for_each_fcurve(int n, const std::function<void(const FCurve&)>& f) {
  std::array<Mask, 4> blocks{};
  int used = 0;
  std::function<void(int)> rec = [&](int i) {
    if (n - i + 1 < 4 - used) return;
    if (i > n) {
      f(FCurve(n, blocks));
      return;
    }
    for (int b = 0; b < used; ++b) {
      blocks[b] |= bit(i);
      rec(i + 1);
      blocks[b] &= ~bit(i);
    }
    if (used < 4) {
      blocks[used++] = bit(i);
      rec(i + 1);
      blocks[--used] = 0;
    }
  };
  rec(1);
}

inline std::vector<FCurve> enumerate_fcurves(int n, int cap = 12) {
  check_cap(n, cap, "enumerate_fcurves");
  if (n < 4) throw Error(ErrorCode::InvalidN, "n must be at least 4");
  std::vector<std::pair<std::uint64_t, FCurve>> keyed;
  for_each_fcurve(n, [&](const FCurve& c) {
    auto sz = c.sizes();
    std::uint64_t key = 0;
    for (int s : sz) key = key * 32 + static_cast<std::uint64_t>(s);
    keyed.emplace_back(key, c);
  });
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  std::vector<FCurve> out;
  out.reserve(keyed.size());
  for (auto& kc : keyed) out.push_back(kc.second);
  return out;
}

/// C_i = C_{1,1,m-i,m+i-1} for odd n, C_{1,1,m-i,m+i-2} for even n, with
/// blocks {1}, {2}, {3..m-i+2}, rest.
inline FCurve vital_curve(int n, int i) {
  const int m = half(n);
  if (n < 5 || i < 1 || i > m - 1)
    throw Error(ErrorCode::IndexOutOfRange, "i=" + std::to_string(i) + " outside 1.." + std::to_string(m - 1));
  const int third = m - i;
  Mask b3 = 0;
  for (int p = 3; p < 3 + third; ++p) b3 |= bit(p);
  return FCurve(n, {bit(1), bit(2), b3, full_mask(n) & ~(bit(1) | bit(2) | b3)});
}

/// Closed-form row C_i . A(k, alpha):
///   alpha                                   i < k
///   (2 - C(m-k,2)) alpha + m-k-2            i = k
///   (C(m-k+1,2) - 1) alpha - m+k+1          i = k+1
///   0                                       i > k+1
inline AffineAlpha table_row(int n, int k, int i) {
  const int m = half(n);
  if (i < k) return AffineAlpha::alpha();
  if (i == k) return {Rational(m - k - 2), Rational(2 - binomial(m - k, 2))};
  if (i == k + 1) return {Rational(-m + k + 1), Rational(binomial(m - k + 1, 2) - 1)};
  return {};
}

struct TableReport {
  int n = 0, k = 0;
  std::vector<AffineAlpha> engine;       // index i-1
  std::vector<AffineAlpha> closed_form;  // index i-1
  bool matches = false;

  std::vector<int> mismatched_rows() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < engine.size(); ++i)
      if (!(engine[i] == closed_form[i])) out.push_back(static_cast<int>(i) + 1);
    return out;
  }
};

inline TableReport ak_alpha_table(int n, int k) {
  const int m = half(n);
  if (n < 5 || k < 0 || k > m - 2)
    throw Error(ErrorCode::LevelOutOfRange, "k=" + std::to_string(k) + " outside 0.." + std::to_string(m - 2));
  auto a = div::a_alpha_class(n, k);
  TableReport r{n, k, {}, {}, true};
  for (int i = 1; i <= m - 1; ++i) {
    r.engine.push_back(pair_class(vital_curve(n, i), a));
    r.closed_form.push_back(table_row(n, k, i));
    if (!(r.engine.back() == r.closed_form.back())) r.matches = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// F-nef thresholds
// ---------------------------------------------------------------------------

/// F-nef data of A(k, alpha) over all F-curves. The F-nef alphas in [0,1]
/// form the interval [threshold, upper]; only F-nefness is certified.
struct NefReport {
  int n = 0, k = 0;
  Rational threshold;
  Rational upper{1};
  std::optional<FCurve> witness;
  AffineAlpha witness_pairing;
  std::vector<std::pair<int, AffineAlpha>> table;  // (i, C_i . A(k, alpha))
  std::size_t curves_scanned = 0;
};

inline NefReport fnef_threshold(int n, int k, int cap = 12) {
  check_cap(n, cap, "fnef_threshold");
  const int m = half(n);
  if (n < 5 || k < 0 || k > m - 2)
    throw Error(ErrorCode::LevelOutOfRange, "k=" + std::to_string(k) + " outside 0.." + std::to_string(m - 2));
  auto a = div::a_alpha_class(n, k);
  PairingTable pair(a);
  NefReport r;
  r.n = n;
  r.k = k;
  r.threshold = Rational(0);
  bool empty = false;
  // Ties on the threshold go to the curve that comes first in enumeration
  // order, so the witness does not depend on the scan order.
  for_each_fcurve(n, [&](const FCurve& c) {
    ++r.curves_scanned;
    auto p = pair(c);
    if (p.slope.sign() > 0) {
      if (p.constant.sign() < 0) {
        Rational root = -p.constant / p.slope;
        if (root > r.threshold || (root == r.threshold && r.witness && c < *r.witness)) {
          r.threshold = root;
          r.witness = c;
          r.witness_pairing = p;
        }
      }
    } else if (p.slope.sign() < 0) {
      Rational root = -p.constant / p.slope;
      if (root < r.upper) r.upper = root;
    } else if (p.constant.sign() < 0) {
      empty = true;
    }
  });
  if (r.threshold > Rational(1)) r.threshold = Rational(1);
  if (r.upper < Rational(0) || empty) r.upper = Rational(-1);  // no F-nef alpha at all
  for (int i = 1; i <= m - 1; ++i) r.table.emplace_back(i, pair(vital_curve(n, i)));
  return r;
}

/// Log canonical model of (M_{0,n}, K + alpha D):
///   (2/(n-1), 2/(m+1)]        GIT quotient
///   (2/(m-k+2), 2/(m-k+1)]    WeightLevel(k), 1 <= k <= m-2
///   (2/3, 1]                  WeightLevel(m-2)
inline LevelSpec simpson_model(int n, const Rational& alpha) {
  if (n < 4 || n > kMaxPoints) throw Error(ErrorCode::InvalidN, "n=" + std::to_string(n));
  const int m = half(n);
  if (alpha <= Rational(2, n - 1) || alpha > Rational(1))
    throw Error(ErrorCode::AlphaOutOfRange, "alpha=" + alpha.str() + " outside (2/(n-1), 1]");
  if (alpha <= Rational(2, m + 1)) return LevelSpec::git(n);
  for (int k = 1; k <= m - 2; ++k)
    if (alpha <= Rational(2, m - k + 1)) return LevelSpec::weight(n, k);
  return LevelSpec::top(n);
}

}  // namespace moduli::fcurve
