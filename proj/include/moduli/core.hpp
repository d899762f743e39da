/**
 * @file core.hpp
 * @brief Exact scalars, boundary indices and tower levels shared by every
 *        other header of the library.
 *
 * Nothing here uses floating point. Rationals are GMP-backed and always kept
 * in lowest terms; boundary indices are bitmasks over {1..n}.
 */
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <compare>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace moduli {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode {
  SubsetOutOfRange,
  LevelOutOfRange,
  InvalidPattern,
  NotAClosedSemistableOrbit,
  InvalidWeights,
  MalformedTree,
  NotStableForSource,
  WeightsNotDominated,
  CapExceeded,
  IllegalStratum,
  LevelMismatch,
  SizeMismatch,
  IndexOutOfRange,
  AlphaOutOfRange,
  InvalidN,
  ParseError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::SubsetOutOfRange: return "SubsetOutOfRange";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::NotAClosedSemistableOrbit: return "NotAClosedSemistableOrbit";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::NotStableForSource: return "NotStableForSource";
    case ErrorCode::WeightsNotDominated: return "WeightsNotDominated";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::IllegalStratum: return "IllegalStratum";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Domain error raised by every operation of the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

/// Arbitrary precision rational in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) : q_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  /// Parses "p/q" or "p" (optional leading sign). Errors carry the offending
  /// character position.
  static Rational parse(std::string_view s) {
    auto fail = [&](std::size_t pos, const std::string& why) -> Rational {
      throw Error(ErrorCode::ParseError, "invalid rational '" + std::string(s) +
                                             "' at position " + std::to_string(pos) + ": " + why);
    };
    if (s.empty()) return fail(0, "empty string");
    std::size_t slash = s.find('/');
    auto digits_ok = [&](std::string_view part, std::size_t offset, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) ++i;
      if (i == part.size()) fail(offset + i, "expected digit");
      for (; i < part.size(); ++i)
        if (part[i] < '0' || part[i] > '9') fail(offset + i, "expected digit");
    };
    std::string_view num = s.substr(0, slash);
    digits_ok(num, 0, true);
    mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
    mpz_class d = 1;
    if (slash != std::string_view::npos) {
      std::string_view den = s.substr(slash + 1);
      digits_ok(den, slash + 1, false);
      d = mpz_class(std::string(den), 10);
      if (d == 0) return fail(slash + 1, "zero denominator");
    }
    return Rational(n, d);
  }

  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Exact binomial coefficient; zero outside 0 <= k <= n.
inline long long binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ---------------------------------------------------------------------------
// AffineAlpha
// ---------------------------------------------------------------------------

/// constant + slope * alpha, exact.
struct AffineAlpha {
  Rational constant;
  Rational slope;

  AffineAlpha() = default;
  AffineAlpha(Rational c, Rational s = Rational(0)) : constant(std::move(c)), slope(std::move(s)) {}  // NOLINT

  static AffineAlpha alpha() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return constant.is_zero() && slope.is_zero(); }
  Rational operator()(const Rational& a) const { return constant + slope * a; }

  AffineAlpha& operator+=(const AffineAlpha& o) { constant += o.constant; slope += o.slope; return *this; }
  AffineAlpha& operator-=(const AffineAlpha& o) { constant -= o.constant; slope -= o.slope; return *this; }
  AffineAlpha& operator*=(const Rational& r) { constant *= r; slope *= r; return *this; }
  AffineAlpha operator-() const { return {-constant, -slope}; }
  friend AffineAlpha operator+(AffineAlpha a, const AffineAlpha& b) { return a += b; }
  friend AffineAlpha operator-(AffineAlpha a, const AffineAlpha& b) { return a -= b; }
  friend AffineAlpha operator*(AffineAlpha a, const Rational& r) { return a *= r; }
  friend AffineAlpha operator*(const Rational& r, AffineAlpha a) { return a *= r; }
  friend bool operator==(const AffineAlpha&, const AffineAlpha&) = default;

  /// "(c)+(s)a", the wire form used in class JSON.
  std::string str() const { return "(" + constant.str() + ")+(" + slope.str() + ")a"; }

  static AffineAlpha parse(std::string_view s) {
    auto fail = [&](std::size_t pos, const std::string& why) -> AffineAlpha {
      throw Error(ErrorCode::ParseError, "invalid affine value '" + std::string(s) +
                                             "' at position " + std::to_string(pos) + ": " + why);
    };
    // Bare rational: constant only.
    if (s.empty() || s.front() != '(') return AffineAlpha(Rational::parse(s));
    std::size_t close = s.find(')');
    if (close == std::string_view::npos) return fail(s.size(), "missing ')'");
    Rational c = Rational::parse(s.substr(1, close - 1));
    if (s.substr(close + 1, 2) != "+(") return fail(close + 1, "expected '+('");
    std::size_t open2 = close + 2;
    std::size_t close2 = s.find(')', open2);
    if (close2 == std::string_view::npos) return fail(s.size(), "missing ')'");
    Rational sl = Rational::parse(s.substr(open2 + 1, close2 - open2 - 1));
    if (s.substr(close2 + 1) != "a") return fail(close2 + 1, "expected trailing 'a'");
    return {c, sl};
  }
};

inline Rational affine_eval(const AffineAlpha& f, const Rational& alpha) { return f(alpha); }

inline std::ostream& operator<<(std::ostream& os, const AffineAlpha& f) { return os << f.str(); }

// ---------------------------------------------------------------------------
// MarkedSubset
// ---------------------------------------------------------------------------

using Mask = std::uint32_t;
inline constexpr int kMaxPoints = 31;

inline Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : ((Mask{1} << n) - 1); }
inline Mask bit(int i) { return Mask{1} << (i - 1); }
inline int popcount(Mask m) { return std::popcount(m); }

inline std::vector<int> members_of(Mask m) {
  std::vector<int> out;
  for (int i = 1; m != 0; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

inline Mask mask_of(const std::vector<int>& s, int n) {
  Mask m = 0;
  for (int i : s) {
    if (i < 1 || i > n)
      throw Error(ErrorCode::SubsetOutOfRange, "element " + std::to_string(i) + " not in 1.." + std::to_string(n));
    m |= bit(i);
  }
  return m;
}

/// Lexicographic order of the sorted member lists, for equal-size masks.
inline bool lex_less(Mask a, Mask b) {
  if (a == b) return false;
  Mask d = a ^ b;
  Mask low = d & (~d + 1);
  return (a & low) != 0;
}

/// "1,2,3"
inline std::string mask_str(Mask m) {
  std::string s;
  for (int i : members_of(m)) {
    if (!s.empty()) s += ',';
    s += std::to_string(i);
  }
  return s;
}

/// Parses a comma-separated member list.
inline std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string_view tok = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (tok.empty())
      throw Error(ErrorCode::ParseError, "empty element in '" + std::string(s) + "' at position " + std::to_string(pos));
    int v = 0;
    std::size_t i = 0;
    bool neg = false;
    if (tok[0] == '-') { neg = true; i = 1; }
    if (i == tok.size())
      throw Error(ErrorCode::ParseError, "expected digit in '" + std::string(s) + "' at position " + std::to_string(pos + i));
    for (; i < tok.size(); ++i) {
      if (tok[i] < '0' || tok[i] > '9')
        throw Error(ErrorCode::ParseError,
                    "expected digit in '" + std::string(s) + "' at position " + std::to_string(pos + i));
      v = v * 10 + (tok[i] - '0');
      if (v > 100000000)
        throw Error(ErrorCode::ParseError, "number too large in '" + std::string(s) + "' at position " + std::to_string(pos));
    }
    out.push_back(neg ? -v : v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Canonical index of the boundary partition {S, S^c} of {1..n}: the smaller
/// side, or the side containing 1 when |S| = n/2.
class MarkedSubset {
 public:
  MarkedSubset(int n, Mask members) : n_(n), mask_(canonical(n, members)) {}

  int n() const { return n_; }
  Mask mask() const { return mask_; }
  int size() const { return popcount(mask_); }
  std::vector<int> members() const { return members_of(mask_); }
  Mask complement() const { return full_mask(n_) & ~mask_; }
  bool contains(int i) const { return (mask_ & bit(i)) != 0; }
  std::string str() const { return mask_str(mask_); }

  static Mask canonical(int n, Mask m) {
    if (n < 4 || n > kMaxPoints) throw Error(ErrorCode::SubsetOutOfRange, "n out of range: " + std::to_string(n));
    if ((m & ~full_mask(n)) != 0) throw Error(ErrorCode::SubsetOutOfRange, "subset not contained in 1.." + std::to_string(n));
    int s = popcount(m);
    if (s < 2 || s > n - 2)
      throw Error(ErrorCode::SubsetOutOfRange, "subset size " + std::to_string(s) + " outside 2.." + std::to_string(n - 2));
    Mask c = full_mask(n) & ~m;
    if (2 * s < n) return m;
    if (2 * s > n) return c;
    return (m & 1u) ? m : c;
  }

  /// Same order used everywhere for deterministic output: by size, then
  /// lexicographically by members.
  friend bool operator<(const MarkedSubset& a, const MarkedSubset& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    int sa = a.size(), sb = b.size();
    if (sa != sb) return sa < sb;
    return lex_less(a.mask_, b.mask_);
  }
  friend bool operator==(const MarkedSubset&, const MarkedSubset&) = default;

 private:
  int n_;
  Mask mask_;
};

inline MarkedSubset canonicalize_subset(int n, const std::vector<int>& s) {
  std::vector<int> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::SubsetOutOfRange, "repeated element");
  return MarkedSubset(n, mask_of(sorted, n));
}

inline MarkedSubset parse_subset(int n, std::string_view s) { return canonicalize_subset(n, parse_int_list(s)); }

/// All canonical subsets of size j (j <= n/2), in MarkedSubset order.
inline std::vector<MarkedSubset> canonical_subsets_of_size(int n, int j) {
  std::vector<MarkedSubset> out;
  if (j < 2 || 2 * j > n) return out;
  // Gosper's hack over j-bit masks.
  Mask m = (Mask{1} << j) - 1;
  const Mask limit = Mask{1} << n;
  while (m < limit) {
    if (2 * j < n || (m & 1u)) out.emplace_back(n, m);
    Mask c = m & (~m + 1);
    Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// LevelSpec
// ---------------------------------------------------------------------------

inline int half(int n) { return n / 2; }

/// A level of the tower: the GIT quotient or the weighted space of index k.
class LevelSpec {
 public:
  enum class Kind { GITQuotient, WeightLevel };

  static LevelSpec git(int n) {
    check_n(n);
    return LevelSpec(n, Kind::GITQuotient, 0);
  }

  static LevelSpec weight(int n, int k) {
    check_n(n);
    int m = half(n);
    if (k < 0 || k > m - 2)
      throw Error(ErrorCode::LevelOutOfRange, "k=" + std::to_string(k) + " outside 0.." + std::to_string(m - 2));
    if (k == 0 && n % 2 == 0)
      throw Error(ErrorCode::LevelOutOfRange, "even n has no weight level 0; use the GIT quotient");
    return LevelSpec(n, Kind::WeightLevel, k);
  }

  /// Level with index k, where index 0 is the GIT quotient.
  static LevelSpec at_index(int n, int k) {
    if (k == 0) return n % 2 == 0 ? git(n) : weight(n, 0);
    return weight(n, k);
  }

  static LevelSpec top(int n) {
    check_n(n);
    int m = half(n);
    return at_index(n, m - 2);
  }

  /// "git" or "w<k>".
  static LevelSpec parse(int n, std::string_view s) {
    if (s == "git") return git(n);
    if (s.size() >= 2 && s[0] == 'w') {
      auto v = parse_int_list(s.substr(1));
      if (v.size() == 1) return weight(n, v[0]);
    }
    throw Error(ErrorCode::ParseError, "invalid level '" + std::string(s) + "' at position 0: expected git or w<k>");
  }

  int n() const { return n_; }
  int m() const { return half(n_); }
  Kind kind() const { return kind_; }
  bool is_git() const { return kind_ == Kind::GITQuotient; }
  /// 0 for the GIT quotient, k for WeightLevel(k).
  int index() const { return k_; }
  bool is_top() const { return k_ == m() - 2; }

  /// Whether D^S with |S| = size is a divisor at this level.
  bool is_legal(int size) const {
    if (size == 2) return true;
    if (is_git()) return false;
    return m() - k_ < size && size <= m();
  }

  std::string str() const { return is_git() ? "git" : "w" + std::to_string(k_); }
  std::string display() const {
    return is_git() ? "GITQuotient" : "WeightLevel(" + std::to_string(k_) + ")";
  }

  /// Odd n: the GIT quotient and WeightLevel(0) are the same space.
  friend bool operator==(const LevelSpec& a, const LevelSpec& b) {
    return a.n_ == b.n_ && a.k_ == b.k_;
  }

 private:
  LevelSpec(int n, Kind kind, int k) : n_(n), kind_(kind), k_(k) {}
  static void check_n(int n) {
    if (n < 4 || n > kMaxPoints) throw Error(ErrorCode::InvalidN, "n=" + std::to_string(n));
  }

  int n_;
  Kind kind_;
  int k_;
};

/// Symmetric weight chamber of level k: (1/(m-k+1), 1/(m-k)].
inline std::pair<Rational, Rational> eps_range(int n, int k) {
  LevelSpec::weight(n, k);
  int m = half(n);
  return {Rational(1, m - k + 1), Rational(1, m - k)};
}

/// Scan caps may be raised through MODULI_MAX_N.
inline int scan_cap(int default_cap) {
  if (const char* env = std::getenv("MODULI_MAX_N")) {
    try {
      auto v = parse_int_list(env);
      if (v.size() == 1 && v[0] > 0) return v[0];
    } catch (const Error&) {
    }
  }
  return default_cap;
}

inline void check_cap(int n, int default_cap, const char* what) {
  int cap = scan_cap(default_cap);
  if (n > cap)
    throw Error(ErrorCode::CapExceeded,
                std::string(what) + ": n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
}

}  // namespace moduli
