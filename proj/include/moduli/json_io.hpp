/**
 * @file json_io.hpp
 * @brief JSON wire forms of the library's values.
 *
 * Rationals are strings "p/q" (or "p"), subsets are "1,2,3", affine
 * coefficients are "(c)+(s)a". Object keys are emitted in a fixed order so
 * that output is byte-stable.
 */
#pragma once

#include "moduli/divisor_algebra.hpp"
#include "moduli/fcurve.hpp"
#include "moduli/git_stability.hpp"
#include "moduli/hassett_trees.hpp"
#include "moduli/tower.hpp"

#include <json.hpp>

namespace moduli::io {

using json = nlohmann::ordered_json;

inline json to_json(const git::StabilityClass& c, const std::vector<int>& weights) {
  json j;
  j["tag"] = git::to_string(c.tag);
  j["closed_orbit"] = c.closed_orbit;
  j["weights"] = weights;
  return j;
}

// --- trees -----------------------------------------------------------------

inline json to_json(const trees::CombCurveType& t) {
  json verts = json::array();
  for (const auto& v : t.vertices) verts.push_back({{"id", v.id}, {"legs", v.legs}, {"clusters", v.clusters}});
  json edges = json::array();
  for (auto [a, b] : t.edges) edges.push_back({a, b});
  return {{"vertices", verts}, {"edges", edges}};
}

inline trees::CombCurveType tree_from_json(const json& j) {
  trees::CombCurveType t;
  try {
    for (const auto& v : j.at("vertices")) {
      trees::Vertex x;
      x.id = v.at("id").get<int>();
      x.legs = v.at("legs").get<std::vector<int>>();
      std::sort(x.legs.begin(), x.legs.end());
      if (v.contains("clusters")) {
        x.clusters = v.at("clusters").get<std::vector<std::vector<int>>>();
      } else {
        for (int l : x.legs) x.clusters.push_back({l});
      }
      t.vertices.push_back(std::move(x));
    }
    for (const auto& e : j.at("edges")) t.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("tree JSON: ") + e.what());
  }
  return t;
}

// --- divisor classes ----------------------------------------------------------

inline json to_json(const div::DivisorClass& c) {
  json coeffs = json::object();
  for (const auto& [s, f] : c.coeffs()) coeffs[s.str()] = f.str();
  return {{"n", c.n()}, {"level", c.level().str()}, {"coeffs", coeffs}};
}

inline div::DivisorClass class_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    div::DivisorClass c(LevelSpec::parse(n, j.at("level").get<std::string>()));
    for (const auto& [key, value] : j.at("coeffs").items())
      c.add(parse_subset(n, key), AffineAlpha::parse(value.get<std::string>()));
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("class JSON: ") + e.what());
  }
}

// --- F-curves and nef reports ------------------------------------------------------

inline json to_json(const fcurve::NefReport& r) {
  json table = json::array();
  for (const auto& [i, f] : r.table) table.push_back({{"i", i}, {"pairing", f.str()}});
  json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["kind"] = "F-nef";
  j["threshold"] = r.threshold.str();
  j["upper"] = r.upper.str();
  j["witness"] = r.witness ? json(r.witness->str()) : json(nullptr);
  j["witness_pairing"] = r.witness_pairing.str();
  j["curves_scanned"] = r.curves_scanned;
  j["table"] = table;
  return j;
}

inline json to_json(const fcurve::TableReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.engine.size(); ++i)
    rows.push_back({{"i", i + 1}, {"engine", r.engine[i].str()}, {"closed_form", r.closed_form[i].str()}});
  return {{"n", r.n}, {"k", r.k}, {"matches", r.matches}, {"rows", rows}};
}

// --- tower ------------------------------------------------------------------

inline json to_json(const std::vector<tower::StageRecord>& s) {
  json out = json::array();
  for (const auto& r : s)
    out.push_back({{"stage", r.stage},
                   {"center_size", r.center_size},
                   {"component_count", r.component_count},
                   {"codim", r.codim},
                   {"rank_increment", r.rank_increment}});
  return out;
}

inline json to_json(const tower::QuotientLedger& q) {
  json rows = json::array();
  for (const auto& r : q.rows)
    rows.push_back({{"level", r.level.str()}, {"closed_form", r.closed_form}, {"recursive", r.recursive}});
  return {{"n", q.n}, {"rows", rows}, {"top_expected", q.top_expected}, {"consistent", q.consistent}};
}

inline json to_json(const std::vector<tower::TransitionRow>& t) {
  json out = json::array();
  for (const auto& r : t) {
    json j{{"stage", r.stage},
           {"center_size", r.center_size},
           {"center_unstable", r.center_unstable},
           {"quotient_changed", r.quotient_changed},
           {"kirwan", r.kirwan}};
    if (r.kirwan) j["singular_points"] = r.singular_points;
    j["quotient"] = r.quotient ? json(r.quotient->str()) : json(nullptr);
    out.push_back(j);
  }
  return out;
}

inline json to_json(const std::vector<tower::CenterComponent>& cs) {
  json out = json::array();
  for (const auto& c : cs)
    out.push_back({{"subset", c.subset.str()}, {"points", c.points}, {"heavy", "1"}, {"light", c.light.str()},
                   {"light_count", c.points - 1}});
  return out;
}

}  // namespace moduli::io
