/**
 * @file git_stability.hpp
 * @brief Stability of n-point configurations on the line under the symmetric
 *        linearization, abstracted to coincidence patterns.
 */
#pragma once

#include "moduli/core.hpp"

#include <numeric>

namespace moduli::git {

/// Which marked points share a position; each block is one position.
struct CoincidencePattern {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  /// "1,2,3|4,5,6"
  static CoincidencePattern parse(int n, std::string_view s) {
    CoincidencePattern p{n, {}};
    std::size_t pos = 0;
    while (true) {
      std::size_t bar = s.find('|', pos);
      std::string_view tok = s.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
      try {
        p.blocks.push_back(parse_int_list(tok));
      } catch (const Error& e) {
        throw Error(ErrorCode::ParseError,
                    "block starting at position " + std::to_string(pos) + " of '" + std::string(s) + "': " + e.what());
      }
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
    return p;
  }

  void validate() const {
    if (n < 1 || n > kMaxPoints) throw Error(ErrorCode::InvalidPattern, "n out of range");
    Mask seen = 0;
    for (const auto& b : blocks) {
      if (b.empty()) throw Error(ErrorCode::InvalidPattern, "empty block");
      for (int i : b) {
        if (i < 1 || i > n) throw Error(ErrorCode::InvalidPattern, "point " + std::to_string(i) + " out of range");
        if (seen & bit(i)) throw Error(ErrorCode::InvalidPattern, "point " + std::to_string(i) + " repeated");
        seen |= bit(i);
      }
    }
    if (seen != full_mask(n)) throw Error(ErrorCode::InvalidPattern, "blocks do not cover 1..n");
  }
};

enum class Tag { Stable, StrictlySemistable, Unstable };

inline const char* to_string(Tag t) {
  switch (t) {
    case Tag::Stable: return "stable";
    case Tag::StrictlySemistable: return "strictly_semistable";
    case Tag::Unstable: return "unstable";
  }
  return "?";
}

struct StabilityClass {
  Tag tag = Tag::Stable;
  bool closed_orbit = false;

  bool semistable() const { return tag != Tag::Unstable; }
  friend bool operator==(const StabilityClass&, const StabilityClass&) = default;
};

namespace detail {

inline std::vector<Rational> weights_or_ones(int n, const std::vector<Rational>* weights) {
  if (weights == nullptr || weights->empty()) return std::vector<Rational>(n, Rational(1));
  if (static_cast<int>(weights->size()) != n)
    throw Error(ErrorCode::InvalidWeights, "weight vector has wrong length");
  for (const auto& w : *weights)
    if (w.sign() <= 0) throw Error(ErrorCode::InvalidWeights, "weights must be positive");
  return *weights;
}

inline Rational block_weight(const std::vector<int>& block, const std::vector<Rational>& w) {
  Rational s;
  for (int i : block) s += w[i - 1];
  return s;
}

}  // namespace detail

/// Hilbert-Mumford classification. A point configuration is unstable when a
/// block carries more than half of the total weight, strictly semistable when
/// the heaviest block carries exactly half. The orbit of a strictly semistable
/// configuration is closed iff it has exactly two positions.
///
/// `weights` defaults to all ones (the symmetric linearization).
inline StabilityClass classify_pattern(const CoincidencePattern& p,
                                       const std::vector<Rational>* weights = nullptr) {
  p.validate();
  auto w = detail::weights_or_ones(p.n, weights);
  Rational total = std::accumulate(w.begin(), w.end(), Rational(0));
  Rational half_total = total / Rational(2);
  Rational heaviest;
  for (const auto& b : p.blocks) heaviest = std::max(heaviest, detail::block_weight(b, w));
  if (heaviest > half_total) return {Tag::Unstable, false};
  if (heaviest < half_total) return {Tag::Stable, false};
  bool closed = p.blocks.size() == 2;
  return {Tag::StrictlySemistable, closed};
}

/// Number of singular points of (P^1)^n // SL(2). The n = 4 quotient is the
/// smooth curve P^1, so it reports zero even though it has strictly
/// semistable orbits.
inline long long count_singular_points(int n) {
  if (n < 4) throw Error(ErrorCode::InvalidN, "n must be at least 4");
  if (n % 2 == 1 || n == 4) return 0;
  return binomial(n, n / 2) / 2;
}

/// O(a_1,...,a_n) descends to the quotient iff the total degree is even.
inline bool descends(const std::vector<long long>& degrees) {
  long long s = 0;
  for (long long a : degrees) s += a;
  return s % 2 == 0;
}

/// C^*-weights on the normal space to a closed strictly semistable orbit:
/// |B1|-1 copies of +2 followed by |B2|-1 copies of -2.
inline std::vector<int> stabilizer_weights(const CoincidencePattern& p,
                                           const std::vector<Rational>* weights = nullptr) {
  auto c = classify_pattern(p, weights);
  if (!c.closed_orbit)
    throw Error(ErrorCode::NotAClosedSemistableOrbit, "pattern is not a closed strictly semistable orbit");
  std::vector<int> out;
  out.insert(out.end(), p.blocks[0].size() - 1, 2);
  out.insert(out.end(), p.blocks[1].size() - 1, -2);
  return out;
}

}  // namespace moduli::git
