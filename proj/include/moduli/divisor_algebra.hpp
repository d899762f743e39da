/**
 * @file divisor_algebra.hpp
 * @brief Formal boundary divisor classes on each level of the tower,
 *        pullback/pushforward along the reduction morphisms, canonical
 *        classes and the alpha-family A(k, alpha).
 *
 * Classes are formal combinations of boundary divisors D^S with coefficients
 * affine in alpha. Equality is coefficientwise; numerical equality is
 * obtained by pairing against F-curves (see fcurve.hpp).
 */
#pragma once

#include "moduli/core.hpp"

#include <map>

namespace moduli::div {

class DivisorClass {
 public:
  using Coeffs = std::map<MarkedSubset, AffineAlpha>;

  explicit DivisorClass(LevelSpec level) : level_(level) {}

  const LevelSpec& level() const { return level_; }
  int n() const { return level_.n(); }
  const Coeffs& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  AffineAlpha coeff(const MarkedSubset& s) const {
    auto it = coeffs_.find(s);
    return it == coeffs_.end() ? AffineAlpha() : it->second;
  }

  /// Adds c * D^S; zero coefficients are dropped.
  DivisorClass& add(const MarkedSubset& s, const AffineAlpha& c) {
    if (s.n() != n()) throw Error(ErrorCode::SizeMismatch, "subset of a different n");
    if (!level_.is_legal(s.size()))
      throw Error(ErrorCode::IllegalStratum,
                  "D^{" + s.str() + "} is not a divisor at level " + level_.str());
    auto [it, inserted] = coeffs_.try_emplace(s, c);
    if (!inserted) it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
    return *this;
  }

  DivisorClass& operator+=(const DivisorClass& o) {
    check_same_level(o);
    for (const auto& [s, c] : o.coeffs_) add(s, c);
    return *this;
  }
  DivisorClass& operator-=(const DivisorClass& o) {
    check_same_level(o);
    for (const auto& [s, c] : o.coeffs_) add(s, -c);
    return *this;
  }
  /// Multiplication by an affine scalar is only defined when the result stays
  /// affine, i.e. when one side is constant.
  DivisorClass& operator*=(const AffineAlpha& f) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      auto& c = it->second;
      if (!f.slope.is_zero() && !c.slope.is_zero())
        throw std::domain_error("product of two alpha-dependent coefficients is not affine");
      c = AffineAlpha(c.constant * f.constant, c.constant * f.slope + c.slope * f.constant);
      it = c.is_zero() ? coeffs_.erase(it) : std::next(it);
    }
    return *this;
  }
  friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
  friend DivisorClass operator*(const AffineAlpha& f, DivisorClass a) { return a *= f; }

  /// Specializes every coefficient at a value of alpha.
  DivisorClass at(const Rational& alpha) const {
    DivisorClass out(level_);
    for (const auto& [s, c] : coeffs_) out.add(s, AffineAlpha(c(alpha)));
    return out;
  }

  friend bool operator==(const DivisorClass& a, const DivisorClass& b) {
    return a.level_ == b.level_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void check_same_level(const DivisorClass& o) const {
    if (!(o.level_ == level_)) throw Error(ErrorCode::LevelMismatch, "classes live on different levels");
  }

  LevelSpec level_;
  Coeffs coeffs_;
};

/// D^j: the sum of all canonical D^S with |S| = j.
inline DivisorClass symmetric_class(const LevelSpec& level, int j) {
  if (!level.is_legal(j) || 2 * j > level.n())
    throw Error(ErrorCode::IllegalStratum, "D^" + std::to_string(j) + " is not a divisor at level " + level.str());
  DivisorClass c(level);
  for (const auto& s : canonical_subsets_of_size(level.n(), j)) c.add(s, Rational(1));
  return c;
}

/// K = -(2/(n-1)) D^2 + sum_{j > m-k} (-(2/(n-1)) C(j,2) + j - 2) D^j.
inline DivisorClass canonical_class(const LevelSpec& level) {
  const int n = level.n(), m = level.m();
  const Rational c(-2, n - 1);
  DivisorClass k_class = AffineAlpha(c) * symmetric_class(level, 2);
  if (level.is_git()) return k_class;
  for (int j = m - level.index() + 1; j <= m; ++j)
    k_class += AffineAlpha(c * Rational(binomial(j, 2)) + Rational(j - 2)) * symmetric_class(level, j);
  return k_class;
}

/// D = D^2 + sum_{j > m-k} D^j.
inline DivisorClass boundary_class(const LevelSpec& level) {
  DivisorClass d = symmetric_class(level, 2);
  if (level.is_git()) return d;
  for (int j = level.m() - level.index() + 1; j <= level.m(); ++j) d += symmetric_class(level, j);
  return d;
}

/// Pullback along the reduction from level k-1 to level k.
///
/// D^S with |S| > 2 pulls back to itself. For |S| = 2, D^S picks up every
/// exceptional divisor D^{S'} (|S'| = m-k+1) whose centre it contains: S in S'
/// for the smooth blow-ups, S in S' or S in S'^c for the Kirwan blow-up of the
/// even case, where each exceptional divisor enters with coefficient 1/2
/// (twice the exceptional divisor upstairs descends to D^{S'}).
inline DivisorClass pullback_step(const DivisorClass& c, int target_k) {
  const int n = c.n(), m = half(n);
  if (target_k < 1 || target_k > m - 2)
    throw Error(ErrorCode::LevelOutOfRange, "target k=" + std::to_string(target_k));
  if (c.level().index() != target_k - 1)
    throw Error(ErrorCode::LevelMismatch,
                "class at " + c.level().str() + " cannot be pulled back to w" + std::to_string(target_k));
  const int e = m - target_k + 1;
  const bool kirwan = (n % 2 == 0 && target_k == 1);
  const Rational weight = kirwan ? Rational(1, 2) : Rational(1);
  const auto exceptional = canonical_subsets_of_size(n, e);

  DivisorClass out(LevelSpec::weight(n, target_k));
  for (const auto& [s, coef] : c.coeffs()) {
    out.add(s, coef);
    if (s.size() != 2) continue;
    for (const auto& sp : exceptional) {
      bool contains = (s.mask() & ~sp.mask()) == 0;
      if (kirwan) contains = contains || (s.mask() & sp.mask()) == 0;
      if (contains) out.add(sp, coef * weight);
    }
  }
  return out;
}

/// Pushforward along the reduction from level k to level k-1: exceptional
/// divisors (|S| = m-k+1) map to zero, all others to themselves.
inline DivisorClass pushforward_step(const DivisorClass& c, int target_k) {
  const int n = c.n(), m = half(n);
  const int k = c.level().index();
  if (c.level().is_git() || k < 1) throw Error(ErrorCode::LevelMismatch, "nothing below level " + c.level().str());
  if (target_k != k - 1)
    throw Error(ErrorCode::LevelMismatch,
                "class at " + c.level().str() + " cannot be pushed forward to level " + std::to_string(target_k));
  DivisorClass out(LevelSpec::at_index(n, target_k));
  for (const auto& [s, coef] : c.coeffs())
    if (s.size() != m - k + 1) out.add(s, coef);
  return out;
}

/// Pullback to the top level m-2, i.e. to the moduli space of stable curves.
inline DivisorClass pullback_to_top(const DivisorClass& c) {
  DivisorClass cur = c;
  const int m = half(c.n());
  for (int k = c.level().index() + 1; k <= m - 2; ++k) cur = pullback_step(cur, k);
  return cur;
}

/// A(k, alpha) from the closed-form expansion
///   sum_{j=2}^{m-k} C(j,2)(alpha - 2/(n-1)) D^j
///   + sum_{j=m-k+1}^{m} (alpha - 2/(n-1) C(j,2) + j - 2) D^j
/// on the top level.
inline DivisorClass a_alpha_class(int n, int k) {
  const int m = half(n);
  if (n < 5 || k < 0 || k > m - 2)
    throw Error(ErrorCode::LevelOutOfRange, "k=" + std::to_string(k) + " outside 0.." + std::to_string(m - 2));
  const auto top = LevelSpec::top(n);
  const Rational c(2, n - 1);
  DivisorClass a(top);
  for (int j = 2; j <= m; ++j) {
    AffineAlpha coef = j <= m - k
                           ? Rational(binomial(j, 2)) * (AffineAlpha::alpha() - AffineAlpha(c))
                           : AffineAlpha::alpha() + AffineAlpha(Rational(j - 2) - c * Rational(binomial(j, 2)));
    a += coef * symmetric_class(top, j);
  }
  return a;
}

/// The same class through the tower: pullback of K_k + alpha D_k.
inline DivisorClass a_alpha_via_pullback(int n, int k) {
  auto level = LevelSpec::at_index(n, k);
  return pullback_to_top(canonical_class(level) + AffineAlpha::alpha() * boundary_class(level));
}

// ---------------------------------------------------------------------------
// Picard bases
// ---------------------------------------------------------------------------

struct PicardBasis {
  LevelSpec level;
  std::vector<MarkedSubset> generators;
};

/// Picard number from the closed form: odd n gives n + sum_{i=1}^k C(n, m-i+1),
/// even n gives n + C(n,m)/2 + sum_{i=2}^k C(n, m-i+1). Level 0 (the GIT
/// quotient) has rank n.
inline long long picard_rank_formula(const LevelSpec& level) {
  const int n = level.n(), m = level.m(), k = level.index();
  long long r = n;
  if (k == 0) return r;
  if (n % 2 == 1) {
    for (int i = 1; i <= k; ++i) r += binomial(n, m - i + 1);
  } else {
    r += binomial(n, m) / 2;
    for (int i = 2; i <= k; ++i) r += binomial(n, m - i + 1);
  }
  return r;
}

/// Odd n: every D^S with m-k < |S| <= m plus the n cyclic pairs {i,i+1}.
/// Even n (k >= 1): m-k < |S| < m, the half strata 1 in S with |S| = m, the
/// pairs {i,i+1} for i < n and {1, n-1}.
inline PicardBasis picard_basis(const LevelSpec& level) {
  const int n = level.n(), m = level.m(), k = level.index();
  if (n % 2 == 0 && level.is_git())
    throw Error(ErrorCode::LevelOutOfRange, "even n: basis is given for weight levels k >= 1");
  PicardBasis b{level, {}};
  for (int j = m - k + 1; j <= m; ++j) {
    auto s = canonical_subsets_of_size(n, j);
    b.generators.insert(b.generators.end(), s.begin(), s.end());
  }
  if (n % 2 == 1) {
    for (int i = 1; i <= n; ++i) b.generators.push_back(canonicalize_subset(n, {i, i % n + 1}));
  } else {
    for (int i = 1; i < n; ++i) b.generators.push_back(canonicalize_subset(n, {i, i + 1}));
    b.generators.push_back(canonicalize_subset(n, {1, n - 1}));
  }
  return b;
}

}  // namespace moduli::div
