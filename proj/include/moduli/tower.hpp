/**
 * @file tower.hpp
 * @brief Blow-up schedule of (P^1)^n, the stages at which the GIT quotient
 *        changes, and Picard-rank bookkeeping for the quotient tower.
 *
 * Stage k blows up the loci where n-k+1 points coincide. Stages whose centres
 * lie in the unstable locus leave the quotient unchanged; the remaining
 * stages produce the weighted levels one at a time. The perturbations of the
 * linearization only enter through their ordering, so none are stored.
 */
#pragma once

#include "moduli/core.hpp"
#include "moduli/divisor_algebra.hpp"
#include "moduli/git_stability.hpp"

namespace moduli::tower {

struct StageRecord {
  int stage = 0;
  int center_size = 0;
  long long component_count = 0;
  int codim = 0;
  long long rank_increment = 0;
};

/// Stages 1..n-2. The would-be stage n-1 has a codimension-one centre and
/// is a no-op, so it is omitted.
inline std::vector<StageRecord> schedule(int n) {
  if (n < 4 || n > kMaxPoints) throw Error(ErrorCode::InvalidN, "n=" + std::to_string(n));
  std::vector<StageRecord> out;
  for (int k = 1; k <= n - 2; ++k) {
    StageRecord r;
    r.stage = k;
    r.center_size = n - k + 1;
    r.component_count = binomial(n, r.center_size);
    r.codim = r.center_size - 1;
    r.rank_increment = r.codim >= 2 ? r.component_count : 0;
    out.push_back(r);
  }
  return out;
}

/// Picard rank of the top of the schedule: n plus one exceptional class per
/// centre component.
inline long long schedule_total_rank(int n) {
  long long r = n;
  for (const auto& s : schedule(n)) r += s.rank_increment;
  return r;
}

struct TransitionRow {
  int stage = 0;
  int center_size = 0;
  bool center_unstable = false;       // centre lies in the unstable locus
  bool quotient_changed = false;
  bool kirwan = false;                // blow-up of the strictly semistable points
  long long singular_points = 0;      // only for the Kirwan stage
  std::optional<LevelSpec> quotient;  // F_stage // G
};

/// A centre of size s > n/2 is unstable; the quotient is unchanged through
/// F_{n-m}. Each later stage produces the next weight level.
inline std::vector<TransitionRow> stability_transitions(int n) {
  const int m = half(n);
  std::vector<TransitionRow> out;
  for (const auto& s : schedule(n)) {
    TransitionRow r;
    r.stage = s.stage;
    r.center_size = s.center_size;
    r.center_unstable = 2 * s.center_size > n;
    r.quotient_changed = !r.center_unstable;
    r.kirwan = n % 2 == 0 && 2 * s.center_size == n;
    if (r.kirwan) r.singular_points = git::count_singular_points(n);
    const int level = s.stage - (n - m);
    if (level <= 0) {
      r.quotient = LevelSpec::git(n);
    } else if (level <= m - 2) {
      r.quotient = LevelSpec::weight(n, level);
    }
    out.push_back(r);
  }
  return out;
}

/// Last stage whose quotient equals the GIT quotient of (P^1)^n.
inline int last_unchanged_stage(int n) { return n - half(n); }

struct LedgerRow {
  LevelSpec level;
  long long closed_form = 0;
  long long recursive = 0;
};

struct QuotientLedger {
  int n = 0;
  std::vector<LedgerRow> rows;
  long long top_expected = 0;  // 2^{n-1} - C(n,2) - 1
  bool consistent = false;
};

/// Picard ranks of the GIT quotient and every weight level, computed from the
/// closed form and from the recursion rho(k) = rho(k-1) + C(n, m-k+1) (half
/// of C(n, m) for the first step when n is even), seeded with rho = n.
inline QuotientLedger quotient_ledger(int n) {
  if (n < 5 || n > 62) throw Error(ErrorCode::InvalidN, "n=" + std::to_string(n) + "; the ledger needs n >= 5");
  const int m = half(n);
  QuotientLedger q;
  q.n = n;
  q.top_expected = (1LL << (n - 1)) - binomial(n, 2) - 1;
  long long rec = n;
  for (int k = 0; k <= m - 2; ++k) {
    if (k == 1) rec += n % 2 == 0 ? binomial(n, m) / 2 : binomial(n, m);
    else if (k > 1) rec += binomial(n, m - k + 1);
    auto level = LevelSpec::at_index(n, k);
    q.rows.push_back({level, div::picard_rank_formula(level), rec});
  }
  q.consistent = q.rows.back().closed_form == q.top_expected;
  for (const auto& r : q.rows) q.consistent = q.consistent && r.closed_form == r.recursive;
  return q;
}

struct CenterComponent {
  MarkedSubset subset;
  int points = 0;     // n - m + k + 1
  Rational light;     // eps_k on all but one point; the remaining point has weight 1
};

/// Components of the centre of the reduction from level k+1 to level k: the
/// canonical S with |S| = m-k, each isomorphic to the weighted space with one
/// point of weight 1 and n-m+k points of weight eps_k.
inline std::vector<CenterComponent> blowup_center_description(int n, int k) {
  const int m = half(n);
  if (n < 6 || k < 1 || k > m - 2)
    throw Error(ErrorCode::LevelOutOfRange, "k=" + std::to_string(k) + " outside 1.." + std::to_string(m - 2));
  std::vector<CenterComponent> out;
  const Rational eps = eps_range(n, k).second;
  for (const auto& s : canonical_subsets_of_size(n, m - k)) out.push_back({s, n - m + k + 1, eps});
  return out;
}

}  // namespace moduli::tower
