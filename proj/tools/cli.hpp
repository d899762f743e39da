// Command-line front end. `run` is separate from main so that tests can drive
// it with captured streams.
//
// Exit codes: 0 success, 2 usage error (bad flags, unparsable values), 3 domain
// error (value outside the range an operation accepts), 1 internal failure or
// a failed verification.
#pragma once

#include "moduli/json_io.hpp"
#include "moduli/moduli.hpp"

#include "acceptance/acceptance_suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace moduli::cli {

using io::json;

constexpr const char* kGrammar = R"(Value grammars:
  rational   p/q or p, e.g. 2/5, -1, 3/1 (denominator must be nonzero)
  subset     comma-separated members of 1..n, e.g. 1,2,3
  pattern    subsets separated by '|', e.g. 1,2,3|4,5,6
  curve      four subsets separated by '|', e.g. 1|2|3,4|5,6
  weights    sym:<rational> | eps:<k> | list:<r1>,...,<rn>
  level      git | w<k>
  class      {"n":6,"level":"w1","coeffs":{"1,2":"(-2/5)+(1)a"}}
Environment: MODULI_MAX_N raises or lowers the n caps of exhaustive scans.)";

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, what + ": " + e.what());
  }
}

// Level from --level (git|w<k>) or --k (0 means the GIT quotient for even n).
inline LevelSpec level_of(int n, const std::optional<int>& k, const std::string& level) {
  if (!level.empty()) return LevelSpec::parse(n, level);
  if (!k) throw UsageError("one of --k or --level is required");
  return LevelSpec::at_index(n, *k);
}

inline div::DivisorClass class_of(const std::string& inline_json, const std::string& file) {
  if (inline_json.empty() == file.empty()) throw UsageError("give exactly one of --class or --class-file");
  std::string text = file.empty() ? inline_json : read_file(file);
  return io::class_from_json(parse_json(text, "class"));
}

inline std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace detail

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations on weighted pointed rational curves and the GIT quotient of (P^1)^n.", "moduli"};
  app.footer(kGrammar);
  app.require_subcommand(1);

  // Every handler writes to `result` or directly to `out`; exit status comes
  // from `status`.
  int status = 0;
  std::optional<json> result;

  // --- git -------------------------------------------------------------------
  auto* git = app.add_subcommand("git", "GIT stability of point configurations");
  git->require_subcommand(1);
  int n = 0;
  std::string blocks, weights_str, degrees;
  auto* classify = git->add_subcommand("classify", "classify a coincidence pattern");
  classify->add_option("--n", n, "number of points")->required();
  classify->add_option("--blocks", blocks, "coincidence pattern, e.g. 1,2,3|4,5,6")->required();
  classify->add_option("--weights", weights_str, "optional point weights r1,...,rn (default all 1)");
  classify->callback([&] {
    auto p = git::CoincidencePattern::parse(n, blocks);
    std::vector<Rational> w;
    if (!weights_str.empty()) {
      std::size_t pos = 0;
      while (true) {
        std::size_t comma = weights_str.find(',', pos);
        w.push_back(Rational::parse(std::string_view(weights_str).substr(pos, comma == std::string::npos ? comma : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    auto c = git::classify_pattern(p, &w);
    std::vector<int> sw;
    if (c.closed_orbit) sw = git::stabilizer_weights(p, &w);
    result = io::to_json(c, sw);
  });
  auto* singular = git->add_subcommand("singular", "number of singular points of the quotient");
  singular->add_option("--n", n, "number of points")->required();
  singular->callback([&] {
    json j{{"n", n}, {"singular_points", git::count_singular_points(n)}};
    if (n == 4) j["note"] = "the n=4 quotient is P^1, smooth despite strictly semistable orbits";
    result = j;
  });
  auto* descends = git->add_subcommand("descends", "does O(a_1,...,a_n) descend to the quotient");
  descends->add_option("--degrees", degrees, "multidegree a1,...,an")->required();
  descends->callback([&] {
    std::vector<long long> d;
    for (int a : parse_int_list(degrees)) d.push_back(a);
    result = json{{"degrees", d}, {"descends", git::descends(d)}};
  });

  // --- trees -----------------------------------------------------------------
  auto* trees_cmd = app.add_subcommand("trees", "combinatorial types of weighted stable curves");
  trees_cmd->require_subcommand(1);
  std::string weights = "sym:1", from, to, in_file;
  bool count_only = false;
  auto* enumerate = trees_cmd->add_subcommand("enumerate", "all stable types for a weight vector");
  enumerate->add_option("--n", n, "number of points")->required();
  enumerate->add_option("--weights", weights, "weights (default sym:1)");
  enumerate->add_flag("--count-only", count_only, "omit the type list");
  enumerate->callback([&] {
    auto types = trees::enumerate_stable_types(n, trees::WeightData::parse(n, weights));
    json by_edges = json::object();
    for (const auto& t : types) {
      auto key = std::to_string(t.edge_count());
      by_edges[key] = by_edges.value(key, 0) + 1;
    }
    json j{{"n", n}, {"weights", weights}, {"count", types.size()}, {"by_edges", by_edges}};
    if (!count_only) {
      json list = json::array();
      for (const auto& t : types) list.push_back(io::to_json(t));
      j["types"] = list;
    }
    result = j;
  });
  auto* reduce = trees_cmd->add_subcommand("reduce", "image of a type under a weight reduction");
  reduce->add_option("--in", in_file, "tree JSON file")->required();
  reduce->add_option("--from", from, "source weights")->required();
  reduce->add_option("--to", to, "target weights")->required();
  reduce->callback([&] {
    auto t = io::tree_from_json(detail::parse_json(detail::read_file(in_file), "tree"));
    const int tn = t.n();
    result = io::to_json(trees::reduce_type(t, trees::WeightData::parse(tn, from), trees::WeightData::parse(tn, to)));
  });
  auto* check = trees_cmd->add_subcommand("check", "is a type stable for a weight vector");
  check->add_option("--in", in_file, "tree JSON file")->required();
  check->add_option("--weights", weights, "weights (default sym:1)");
  check->callback([&] {
    auto t = io::tree_from_json(detail::parse_json(detail::read_file(in_file), "tree"));
    result = json{{"stable", trees::is_stable_type(t, trees::WeightData::parse(t.n(), weights))}};
  });
  std::optional<int> k;
  std::string level;
  auto* inventory = trees_cmd->add_subcommand("inventory", "boundary divisors of a weight level");
  inventory->add_option("--n", n, "number of points")->required();
  inventory->add_option("--k", k, "level index");
  inventory->add_option("--level", level, "git or w<k>");
  inventory->callback([&] {
    auto inv = trees::boundary_divisor_inventory(detail::level_of(n, k, level));
    json c = json::array(), d = json::array();
    for (const auto& s : inv.collision) c.push_back(s.str());
    for (const auto& s : inv.nodal) d.push_back(s.str());
    result = json{{"level", inv.level.str()}, {"collision", c}, {"nodal", d}, {"total", inv.total()}};
  });
  auto* contracted = trees_cmd->add_subcommand("contracted", "divisors contracted from level k to level k-1");
  contracted->add_option("--n", n, "number of points")->required();
  contracted->add_option("--k", k, "level index")->required();
  contracted->callback([&] {
    json list = json::array();
    for (const auto& s : trees::contracted_divisors(n, *k)) list.push_back(s.str());
    result = json{{"n", n}, {"k", *k}, {"count", list.size()}, {"subsets", list}};
  });

  // --- div -------------------------------------------------------------------
  auto* div_cmd = app.add_subcommand("div", "divisor classes along the tower");
  div_cmd->require_subcommand(1);
  std::string class_json, class_file;
  int j_stratum = 0, to_k = 0;
  bool verify = false, via_pullback = false;
  auto level_opts = [&](CLI::App* c) {
    c->add_option("--n", n, "number of points")->required();
    c->add_option("--k", k, "level index (0 is the GIT quotient)");
    c->add_option("--level", level, "git or w<k>");
  };
  auto* canonical = div_cmd->add_subcommand("canonical", "canonical class");
  level_opts(canonical);
  canonical->callback([&] { result = io::to_json(div::canonical_class(detail::level_of(n, k, level))); });
  auto* boundary = div_cmd->add_subcommand("boundary", "total boundary class");
  level_opts(boundary);
  boundary->callback([&] { result = io::to_json(div::boundary_class(detail::level_of(n, k, level))); });
  auto* symmetric = div_cmd->add_subcommand("symmetric", "sum of all D^S with |S| = j");
  level_opts(symmetric);
  symmetric->add_option("--j", j_stratum, "stratum size")->required();
  symmetric->callback([&] { result = io::to_json(div::symmetric_class(detail::level_of(n, k, level), j_stratum)); });
  auto class_opts = [&](CLI::App* c) {
    c->add_option("--class", class_json, "class JSON");
    c->add_option("--class-file", class_file, "file holding class JSON");
  };
  auto* pullback = div_cmd->add_subcommand("pullback", "pull a class back one level");
  class_opts(pullback);
  pullback->add_option("--n", n, "number of points (checked against the class)");
  pullback->add_option("--to-k", to_k, "target level index")->required();
  pullback->callback([&] {
    auto c = detail::class_of(class_json, class_file);
    if (n != 0 && n != c.n()) throw Error(ErrorCode::SizeMismatch, "--n differs from the class");
    result = io::to_json(div::pullback_step(c, to_k));
  });
  auto* pushforward = div_cmd->add_subcommand("pushforward", "push a class forward one level");
  class_opts(pushforward);
  pushforward->add_option("--n", n, "number of points (checked against the class)");
  pushforward->add_option("--to-k", to_k, "target level index")->required();
  pushforward->callback([&] {
    auto c = detail::class_of(class_json, class_file);
    if (n != 0 && n != c.n()) throw Error(ErrorCode::SizeMismatch, "--n differs from the class");
    result = io::to_json(div::pushforward_step(c, to_k));
  });
  auto* top = div_cmd->add_subcommand("top", "pull a class back to the top level");
  class_opts(top);
  top->callback([&] { result = io::to_json(div::pullback_to_top(detail::class_of(class_json, class_file))); });
  auto* alpha_cmd = div_cmd->add_subcommand("alpha", "A(k, alpha) on the top level");
  alpha_cmd->add_option("--n", n, "number of points")->required();
  alpha_cmd->add_option("--k", k, "level index")->required();
  alpha_cmd->add_flag("--via-pullback", via_pullback, "compute through the tower instead of the closed form");
  alpha_cmd->callback([&] {
    result = io::to_json(via_pullback ? div::a_alpha_via_pullback(n, *k) : div::a_alpha_class(n, *k));
  });
  auto* basis = div_cmd->add_subcommand("basis", "Picard basis of a weight level");
  level_opts(basis);
  basis->add_flag("--verify", verify, "check the rank against all F-curves");
  basis->callback([&] {
    auto l = detail::level_of(n, k, level);
    if (verify) {
      auto r = div::verify_basis_rank(l);
      out << "rank " << r.rank << " / expected " << r.expected << ": " << (r.matches ? "OK" : "MISMATCH") << "\n";
      if (!r.matches) status = 1;
      return;
    }
    auto b = div::picard_basis(l);
    json g = json::array();
    for (const auto& s : b.generators) g.push_back(s.str());
    result = json{{"n", n}, {"level", l.str()}, {"rank", b.generators.size()}, {"generators", g}};
  });

  // --- pair ------------------------------------------------------------------
  std::string curve, subset;
  auto* pair = app.add_subcommand("pair", "intersect an F-curve with a boundary divisor or class");
  pair->add_option("--n", n, "number of points")->required();
  pair->add_option("--curve", curve, "four blocks, e.g. 1|2|3,4|5,6")->required();
  pair->add_option("--subset", subset, "a single boundary divisor D^S");
  class_opts(pair);
  pair->callback([&] {
    auto c = fcurve::FCurve::parse(n, curve);
    if (!subset.empty()) {
      if (!class_json.empty() || !class_file.empty()) throw detail::UsageError("--subset excludes --class");
      auto s = parse_subset(n, subset);
      result = json{{"curve", c.str()}, {"subset", s.str()}, {"pairing", fcurve::pair_boundary(c, s)}};
      return;
    }
    auto cls = div::pullback_to_top(detail::class_of(class_json, class_file));
    result = json{{"curve", c.str()}, {"pairing", fcurve::pair_class(c, cls).str()}};
  });

  // --- nef -------------------------------------------------------------------
  auto* nef = app.add_subcommand("nef", "F-nef thresholds of A(k, alpha)");
  nef->require_subcommand(1);
  auto* threshold = nef->add_subcommand("threshold", "scan all F-curves");
  threshold->add_option("--n", n, "number of points")->required();
  threshold->add_option("--k", k, "level index")->required();
  threshold->callback([&] { result = io::to_json(fcurve::fnef_threshold(n, *k)); });
  auto* table = nef->add_subcommand("table", "pairings with the curves C_i, engine and closed form");
  table->add_option("--n", n, "number of points")->required();
  table->add_option("--k", k, "level index")->required();
  table->callback([&] { result = io::to_json(fcurve::ak_alpha_table(n, *k)); });

  // --- lc --------------------------------------------------------------------
  auto* lc = app.add_subcommand("lc", "log canonical models");
  lc->require_subcommand(1);
  std::string alpha;
  auto* model = lc->add_subcommand("model", "model of (M_{0,n}, K + alpha D)");
  model->add_option("--n", n, "number of points")->required();
  model->add_option("--alpha", alpha, "rational alpha")->required();
  model->callback([&] { out << fcurve::simpson_model(n, Rational::parse(alpha)).display() << "\n"; });

  // --- tower -----------------------------------------------------------------
  auto* tower_cmd = app.add_subcommand("tower", "blow-up schedule and Picard ledger");
  tower_cmd->require_subcommand(1);
  std::string format = "json";
  auto* sched = tower_cmd->add_subcommand("schedule", "stages of the blow-up of (P^1)^n");
  sched->add_option("--n", n, "number of points")->required();
  sched->callback([&] {
    result = json{{"n", n}, {"stages", io::to_json(tower::schedule(n))}, {"total_rank", tower::schedule_total_rank(n)}};
  });
  auto* ledger = tower_cmd->add_subcommand("ledger", "Picard ranks of every quotient level");
  ledger->add_option("--n", n, "number of points")->required();
  ledger->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  ledger->callback([&] {
    auto q = tower::quotient_ledger(n);
    if (format == "json") {
      result = io::to_json(q);
      return;
    }
    out << detail::pad("level", 8) << detail::pad("closed", 12) << "recursive\n";
    for (const auto& r : q.rows)
      out << detail::pad(r.level.str(), 8) << detail::pad(std::to_string(r.closed_form), 12) << r.recursive << "\n";
    out << "top expected " << q.top_expected << ": " << (q.consistent ? "consistent" : "INCONSISTENT") << "\n";
    if (!q.consistent) status = 1;
  });
  auto* transitions = tower_cmd->add_subcommand("transitions", "which stages change the quotient");
  transitions->add_option("--n", n, "number of points")->required();
  transitions->callback([&] {
    result = json{{"n", n},
                  {"last_unchanged_stage", tower::last_unchanged_stage(n)},
                  {"stages", io::to_json(tower::stability_transitions(n))}};
  });
  auto* centers = tower_cmd->add_subcommand("centers", "centre of the reduction from level k+1 to level k");
  centers->add_option("--n", n, "number of points")->required();
  centers->add_option("--k", k, "level index")->required();
  centers->callback([&] {
    auto cs = tower::blowup_center_description(n, *k);
    result = json{{"n", n}, {"k", *k}, {"count", cs.size()}, {"components", io::to_json(cs)}};
  });

  // --- verify ----------------------------------------------------------------
  bool all = false;
  int max_n = 12;
  std::string readme = MODULI_README;
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks");
  verify_cmd->add_flag("--all", all, "run every check")->required();
  verify_cmd->add_option("--max-n", max_n, "largest n for the exhaustive scans")->check(CLI::Range(5, 31));
  verify_cmd->add_option("--readme", readme, "README used by the documentation check");
  verify_cmd->callback([&] {
    acceptance::Options o;
    o.max_n = max_n;
    o.max_rank_n = std::min(o.max_rank_n, max_n);
    o.max_tree_oracle_n = std::min(o.max_tree_oracle_n, max_n);
    o.max_one_edge_n = std::min(o.max_one_edge_n, max_n);
    o.readme_path = readme;
    bool ok = true;
    acceptance::run_all(o, [&](const acceptance::Verdict& v) {
      out << acceptance::format_line(v) << "\n";
      for (const auto& d : v.details) out << "      " << d << "\n";
      ok = ok && v.pass;
    });
    if (!ok) status = 1;
  });

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::ParseError ? 2 : 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  if (result) out << result->dump() << "\n";
  return status;
}

}  // namespace moduli::cli
