// End-to-end acceptance checks, one per criterion. Each check returns a
// verdict with a one-line summary and optional detail lines; nothing here is
// relaxed when a check fails.
#pragma once

#include "moduli/moduli.hpp"

#include "oracles/counting_oracle.hpp"
#include "oracles/tree_oracle.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <utility>
#include <string>
#include <vector>

namespace acceptance {

using namespace moduli;

struct Verdict {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
  long long millis = 0;
};

inline Verdict make_verdict(int id, std::string title) {
  Verdict v;
  v.id = id;
  v.title = std::move(title);
  return v;
}

struct Options {
  int max_n = 12;           // upper bound for the F-curve and partition scans
  int max_rank_n = 9;       // upper bound for basis rank verification
  int max_ledger_n = 14;
  int max_tree_oracle_n = 6;
  int max_one_edge_n = 8;
  std::string readme_path;  // empty: criterion 8 cannot be checked
};

// Thresholds are needed by criteria 2 and 7; scan once.
class ThresholdCache {
 public:
  const fcurve::NefReport& get(int n, int k) {
    auto key = std::make_pair(n, k);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, fcurve::fnef_threshold(n, k, n)).first;
    return it->second;
  }

 private:
  std::map<std::pair<int, int>, fcurve::NefReport> cache_;
};

inline Verdict table_reproduction(const Options& o) {
  Verdict v = make_verdict(1, "intersection table reproduction");
  int rows = 0, bad = 0;
  for (int n = 5; n <= o.max_n; ++n)
    for (int k = 0; k <= half(n) - 2; ++k) {
      auto t = fcurve::ak_alpha_table(n, k);
      rows += static_cast<int>(t.engine.size());
      for (int i : t.mismatched_rows()) {
        ++bad;
        v.details.push_back("n=" + std::to_string(n) + " k=" + std::to_string(k) + " i=" + std::to_string(i) +
                            ": engine " + t.engine[i - 1].str() + " vs closed form " + t.closed_form[i - 1].str());
      }
    }
  v.pass = bad == 0;
  v.summary = std::to_string(rows - bad) + "/" + std::to_string(rows) + " rows agree (n=5.." +
              std::to_string(o.max_n) + ")";
  return v;
}

inline Verdict threshold_identities(const Options& o, ThresholdCache& cache) {
  Verdict v = make_verdict(2, "F-nef threshold identities");
  int cases = 0, bad = 0;
  for (int n = 5; n <= o.max_n; ++n) {
    const int m = half(n);
    for (int k = 0; k <= m - 2; ++k) {
      ++cases;
      const auto& r = cache.get(n, k);
      Rational expected = k == 0 ? Rational(2, n - 1) : Rational(2, m - k + 2);
      bool ok = r.threshold == expected && r.witness.has_value();
      if (ok && k >= 1) ok = r.witness->sizes() == fcurve::vital_curve(n, k + 1).sizes();
      if (!ok) {
        ++bad;
        v.details.push_back("n=" + std::to_string(n) + " k=" + std::to_string(k) + ": threshold " +
                            r.threshold.str() + ", expected " + expected.str());
      }
    }
  }
  v.pass = bad == 0;
  v.summary = std::to_string(cases - bad) + "/" + std::to_string(cases) + " (n,k) thresholds and witnesses";
  return v;
}

inline Verdict picard_ledger(const Options& o) {
  Verdict v = make_verdict(3, "Picard-rank ledger and basis rank");
  bool ok = true;
  for (int n = 5; n <= o.max_ledger_n; ++n) {
    auto q = tower::quotient_ledger(n);
    if (!q.consistent) {
      ok = false;
      v.details.push_back("ledger inconsistent at n=" + std::to_string(n));
    }
  }
  int checked = 0;
  for (int n = 5; n <= o.max_rank_n; ++n)
    for (int k = (n % 2 ? 0 : 1); k <= half(n) - 2; ++k) {
      auto r = div::verify_basis_rank(LevelSpec::weight(n, k), o.max_rank_n);
      ++checked;
      if (!r.matches) {
        ok = false;
        v.details.push_back("n=" + std::to_string(n) + " k=" + std::to_string(k) + ": rank " +
                            std::to_string(r.rank) + ", expected " + std::to_string(r.expected));
      }
    }
  v.pass = ok;
  v.summary = "ledger n=5.." + std::to_string(o.max_ledger_n) + ", " + std::to_string(checked) +
              " basis ranks n<=" + std::to_string(o.max_rank_n);
  return v;
}

inline Verdict two_path_identity(const Options& o) {
  Verdict v = make_verdict(4, "two-path identity for A(k,alpha)");
  int cases = 0, bad = 0;
  for (int n = 5; n <= o.max_n; ++n)
    for (int k = 0; k <= half(n) - 2; ++k) {
      ++cases;
      if (!(div::a_alpha_class(n, k) == div::a_alpha_via_pullback(n, k))) {
        ++bad;
        v.details.push_back("n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
    }
  v.pass = bad == 0;
  v.summary = std::to_string(cases - bad) + "/" + std::to_string(cases) + " (n,k) agree exactly";
  return v;
}

inline Verdict counting(const Options& o) {
  Verdict v = make_verdict(5, "counting identities");
  bool ok = true;
  for (int n = 6; n <= o.max_n; n += 2) {
    long long closed = 0;
    oracle::for_each_set_partition(n, [&](const std::vector<int>& label, int blocks) {
      git::CoincidencePattern p{n, std::vector<std::vector<int>>(blocks)};
      for (int i = 0; i < n; ++i) p.blocks[label[i]].push_back(i + 1);
      closed += git::classify_pattern(p).closed_orbit;
    });
    if (closed != git::count_singular_points(n)) {
      ok = false;
      v.details.push_back("n=" + std::to_string(n) + ": " + std::to_string(closed) + " closed orbits vs " +
                          std::to_string(git::count_singular_points(n)) + " singular points");
    }
  }
  for (int n = 6; n <= std::max(o.max_n, o.max_ledger_n); ++n) {
    const int m = half(n);
    auto q = tower::quotient_ledger(n);
    for (int k = 1; k <= m - 2; ++k) {
      long long expected = oracle::pascal(n, m - k + 1);
      if (2 * (m - k + 1) == n) expected /= 2;
      long long got = static_cast<long long>(trees::contracted_divisors(n, k).size());
      if (got != expected || got != q.rows[k].closed_form - q.rows[k - 1].closed_form) {
        ok = false;
        v.details.push_back("contracted n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
      if (k + 1 <= m - 2) {
        long long centers = static_cast<long long>(tower::blowup_center_description(n, k).size());
        if (centers != q.rows[k + 1].closed_form - q.rows[k].closed_form) {
          ok = false;
          v.details.push_back("centres n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
      }
    }
  }
  v.pass = ok;
  v.summary = "singular points (even n<=" + std::to_string(o.max_n) + "), contracted divisors, centre components";
  return v;
}

inline Verdict tree_suite(const Options& o) {
  Verdict v = make_verdict(6, "stable tree suite");
  bool ok = true;
  for (int n = 4; n <= o.max_one_edge_n; ++n) {
    auto types = trees::enumerate_stable_types(n, trees::WeightData::sym(n, 1), o.max_one_edge_n);
    long long one = 0;
    for (const auto& t : types) one += t.edge_count() == 1;
    if (one != (1LL << (n - 1)) - n - 1) {
      ok = false;
      v.details.push_back("one-edge count n=" + std::to_string(n) + ": " + std::to_string(one));
    }
  }
  for (int n = 4; n <= o.max_tree_oracle_n; ++n) {
    std::vector<trees::WeightData> chain{trees::WeightData::sym(n, 1)};
    for (int k = half(n) - 2; k >= (n % 2 ? 0 : 1); --k) chain.push_back(trees::WeightData::sym_eps(n, k));
    std::vector<std::vector<trees::CombCurveType>> types;
    for (const auto& a : chain) {
      types.push_back(trees::enumerate_stable_types(n, a));
      std::vector<mpq_class> w;
      for (const auto& x : a.weights) w.push_back(x.raw());
      auto expected = oracle::count_stable_types(n, w);
      if (types.back().size() != expected) {
        ok = false;
        v.details.push_back("n=" + std::to_string(n) + ": " + std::to_string(types.back().size()) +
                            " types vs oracle " + std::to_string(expected));
      }
    }
    for (std::size_t i = 0; i < chain.size(); ++i)
      for (const auto& t : types[i])
        for (std::size_t j = i; j < chain.size(); ++j) {
          auto tj = trees::reduce_type(t, chain[i], chain[j]);
          if (!trees::is_stable_type(tj, chain[j])) ok = false;
          for (std::size_t l = j; l < chain.size(); ++l)
            if (trees::canonical_encoding(trees::reduce_type(tj, chain[j], chain[l])) !=
                trees::canonical_encoding(trees::reduce_type(t, chain[i], chain[l]))) {
              ok = false;
              v.details.push_back("functoriality fails at n=" + std::to_string(n));
            }
        }
  }
  v.pass = ok;
  v.summary = "one-edge counts n<=" + std::to_string(o.max_one_edge_n) + ", oracle and functoriality n<=" +
              std::to_string(o.max_tree_oracle_n);
  return v;
}

inline Verdict simpson_consistency(const Options& o, ThresholdCache& cache) {
  Verdict v = make_verdict(7, "Simpson lookup consistency");
  std::mt19937 rng(314159);
  bool ok = true;
  int samples = 0;
  for (int n = 5; n <= o.max_n; ++n) {
    const int m = half(n);
    const Rational lo(2, n - 1);
    std::vector<Rational> alphas;
    std::uniform_int_distribution<long> den(1, 10000);
    while (alphas.size() < 100) {
      long d = den(rng);
      long p = std::uniform_int_distribution<long>(0, d)(rng);
      Rational a(p, d);
      if (a > lo) alphas.push_back(a);
    }
    // interval endpoints as well
    for (int k = 0; k <= m - 1; ++k) alphas.push_back(Rational(2, m - k + 1));
    for (const auto& a : alphas) {
      ++samples;
      auto level = fcurve::simpson_model(n, a);
      const int k = level.index();
      // threshold(k) < alpha <= threshold(k+1), where threshold(m-1) := 1
      Rational left = cache.get(n, k).threshold;
      Rational right = k + 1 <= m - 2 ? cache.get(n, k + 1).threshold : Rational(1);
      if (!(left < a && a <= right)) {
        ok = false;
        v.details.push_back("n=" + std::to_string(n) + " alpha=" + a.str() + " -> " + level.display() +
                            " with F-nef window (" + left.str() + ", " + right.str() + "]");
      }
    }
  }
  v.pass = ok;
  v.summary = std::to_string(samples) + " alphas over n=5.." + std::to_string(o.max_n);
  return v;
}

inline Verdict documentation(const Options& o) {
  Verdict v = make_verdict(8, "non-verifiable theorems are documented");
  std::ifstream in(o.readme_path);
  if (!in) {
    v.summary = "README not found at '" + o.readme_path + "'";
    return v;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  bool ok = true;
  for (const char* needle : {"not desk-verifiable", "isomorphism", "ampleness", "F-nef"}) {
    if (text.find(needle) == std::string::npos) {
      ok = false;
      v.details.push_back(std::string("README lacks '") + needle + "'");
    }
  }
  v.pass = ok;
  v.summary = ok ? "README states what is not desk-verifiable" : "README statement missing";
  return v;
}

inline std::vector<Verdict> run_all(const Options& o, const std::function<void(const Verdict&)>& on_done = {}) {
  ThresholdCache cache;
  std::vector<std::function<Verdict()>> checks{
      [&] { return table_reproduction(o); },    [&] { return threshold_identities(o, cache); },
      [&] { return picard_ledger(o); },         [&] { return two_path_identity(o); },
      [&] { return counting(o); },              [&] { return tree_suite(o); },
      [&] { return simpson_consistency(o, cache); }, [&] { return documentation(o); }};
  std::vector<Verdict> out;
  for (auto& check : checks) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.id = static_cast<int>(out.size()) + 1;
      v.title = "check raised";
      v.summary = e.what();
    }
    v.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    if (on_done) on_done(v);
    out.push_back(std::move(v));
  }
  return out;
}

// One line per criterion; details indented below failures. Timings are
// reported separately so that the table itself is deterministic.
inline std::string format_line(const Verdict& v) {
  return std::string(v.pass ? "PASS" : "FAIL") + "  " + std::to_string(v.id) + ". " + v.title + ": " + v.summary;
}

}  // namespace acceptance
