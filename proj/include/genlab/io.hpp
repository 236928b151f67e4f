#pragma once

// JSON loading for posets, systems, ray data and thresholds.
//
//   poset:   {"elements": ["a","b","1"], "leq": [["a","1"],["b","1"]]}
//            leq pairs are (lesser, greater); the reflexive-transitive
//            closure is taken. "order" is accepted as an alias.
//   system:  {"kind": "abstract", "elements": [...], "leq": [...],
//             "complement": {"P": "~P", ...}, "meets": [["P","Q","P&Q"], ...]}
//            {"kind": "spin", "directions": [[x,y,z], ...]}
//            {"kind": "rays", "dim": 4, "bases": [[ray, ...], ...]}
//            {"kind": "projections", "dim": n, "projections": [{"name": "P", "matrix": [[...]]}]}
//   numbers inside rays and matrices are reals or [re, im] pairs.

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "genlab/error.hpp"
#include "genlab/generic.hpp"
#include "genlab/poset.hpp"
#include "genlab/prop_system.hpp"
#include "genlab/quantum.hpp"

namespace genlab::io {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(std::string(what) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::size_t lookup(const std::vector<std::string>& names, const json& e) {
  if (!e.is_string()) throw InputError("element reference must be a string");
  const auto s = e.get<std::string>();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == s) return i;
  throw InputError("unknown element '" + s + "'");
}

inline std::vector<std::pair<std::size_t, std::size_t>> order_pairs(const json& j, const std::vector<std::string>& names) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (!j.is_array()) throw InputError("leq must be an array of pairs");
  for (const auto& pr : j) {
    if (!pr.is_array() || pr.size() != 2) throw InputError("leq entries must be [lesser, greater]");
    pairs.emplace_back(lookup(names, pr[0]), lookup(names, pr[1]));
  }
  return pairs;
}

inline cplx number(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("expected a real or [re, im]");
}

inline CVector vector_of(const json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw InputError("vector has wrong length (expected " + std::to_string(dim) + ")");
  CVector v;
  for (const auto& x : j) v.push_back(number(x));
  return v;
}

inline std::size_t dimension(const json& j) {
  const auto& d = field(j, "dim");
  if (!d.is_number_unsigned() || d.get<std::size_t>() == 0 || d.get<std::size_t>() > 64)
    throw InputError("dim must be an integer in [1, 64]");
  return d.get<std::size_t>();
}

}  // namespace detail

inline FinitePoset poset_from_json(const json& j) {
  auto names = detail::string_list(detail::field(j, "elements"), "elements");
  if (names.empty()) throw InputError("poset must be nonempty");
  if (names.size() > 4096) throw CapRefusal("poset size", 4096);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (j.contains("leq")) pairs = detail::order_pairs(j.at("leq"), names);
  else if (j.contains("order")) pairs = detail::order_pairs(j.at("order"), names);
  return FinitePoset::from_covers(std::move(names), pairs);
}

inline json poset_to_json(const FinitePoset& P) {
  json order = json::array();
  for (Element b = 0; b < P.size(); ++b)
    P.down(b).for_each([&](Element a) {
      if (a != b) order.push_back({P.name(a), P.name(b)});
    });
  return {{"elements", P.names()}, {"leq", order}};
}

/// Meets not listed are filled in where forced: p∧p, p∧1, p∧0, p∧∁p and
/// comparable pairs.
inline AbstractPS abstract_ps_from_json(const json& j) {
  auto names = detail::string_list(detail::field(j, "elements"), "elements");
  const std::size_t n = names.size();
  if (n < 2) throw InputError("system needs at least 0 and 1");
  const auto pairs = detail::order_pairs(j.contains("order") ? j.at("order") : detail::field(j, "leq"), names);
  const FinitePoset order = FinitePoset::from_covers(names, pairs);
  std::vector<std::pair<std::size_t, std::size_t>> closed;
  for (Element b = 0; b < n; ++b) order.down(b).for_each([&](Element a) { closed.emplace_back(a, b); });

  std::vector<std::size_t> compl_(n, n);
  const auto& cj = detail::field(j, "complement");
  if (!cj.is_object()) throw InputError("complement must be an object");
  for (auto it = cj.begin(); it != cj.end(); ++it) {
    const std::size_t p = detail::lookup(names, json(it.key()));
    const std::size_t q = detail::lookup(names, it.value());
    compl_[p] = q;
    compl_[q] = p;
  }
  for (std::size_t p = 0; p < n; ++p)
    if (compl_[p] == n) throw InputError("no complement given for '" + names[p] + "'");

  std::vector<std::vector<std::size_t>> meet(n, std::vector<std::size_t>(n, AbstractPS::npos));
  auto set = [&](std::size_t p, std::size_t q, std::size_t m) {
    if (meet[p][q] != AbstractPS::npos && meet[p][q] != m)
      throw InputError("conflicting meets for <" + names[p] + "," + names[q] + ">");
    meet[p][q] = meet[q][p] = m;
  };
  if (j.contains("meets")) {
    if (!j.at("meets").is_array()) throw InputError("meets must be an array");
    for (const auto& t : j.at("meets")) {
      if (!t.is_array() || t.size() != 3) throw InputError("meets entries must be [p, q, p&q]");
      set(detail::lookup(names, t[0]), detail::lookup(names, t[1]), detail::lookup(names, t[2]));
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      if (meet[p][q] != AbstractPS::npos) continue;
      if (order.leq(p, q)) set(p, q, p);
      else if (order.leq(q, p)) set(p, q, q);
    }
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t c = compl_[p];
    if (meet[p][c] == AbstractPS::npos && !order.leq(p, c) && !order.leq(c, p)) {
      // 0 is the unique element below everything
      for (std::size_t z = 0; z < n; ++z)
        if (order.up(z).count() == n) set(p, c, z);
    }
  }
  return AbstractPS(std::move(names), closed, std::move(compl_), std::move(meet));
}

inline std::vector<std::array<double, 3>> directions_from_json(const json& j) {
  const auto& d = detail::field(j, "directions");
  if (!d.is_array() || d.empty()) throw InputError("directions must be a nonempty array");
  std::vector<std::array<double, 3>> out;
  for (const auto& v : d) {
    if (!v.is_array() || v.size() != 3) throw InputError("each direction must be [x, y, z]");
    out.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
  }
  return out;
}

inline RayData rays_from_json(const json& j) {
  RayData r;
  r.dim = detail::dimension(j);
  const auto& b = detail::field(j, "bases");
  if (!b.is_array()) throw InputError("bases must be an array");
  for (const auto& basis : b) {
    if (!basis.is_array()) throw InputError("each basis must be an array of rays");
    std::vector<CVector> rays;
    for (const auto& ray : basis) rays.push_back(detail::vector_of(ray, r.dim));
    r.bases.push_back(std::move(rays));
  }
  return r;
}

inline std::pair<std::vector<Projection>, std::vector<std::string>> projections_from_json(const json& j) {
  const std::size_t dim = detail::dimension(j);
  const auto& ps = detail::field(j, "projections");
  if (!ps.is_array()) throw InputError("projections must be an array");
  std::vector<Projection> out;
  std::vector<std::string> names;
  for (const auto& p : ps) {
    const auto& rows = detail::field(p, "matrix");
    if (!rows.is_array() || rows.size() != dim) throw InputError("matrix has wrong row count");
    std::vector<cplx> flat;
    for (const auto& row : rows) {
      const auto v = detail::vector_of(row, dim);
      flat.insert(flat.end(), v.begin(), v.end());
    }
    out.emplace_back(Matrix(dim, flat));
    names.push_back(p.contains("name") ? p.at("name").get<std::string>() : "P" + std::to_string(out.size() - 1));
  }
  return {std::move(out), std::move(names)};
}

/// A loaded system; `quantum` is present when it came from Hilbert-space data.
struct LoadedSystem {
  std::string kind;
  AbstractPS abstract;
  std::optional<PropSystem> quantum;
};

inline LoadedSystem system_from_json(const json& j, std::size_t close_cap = kDefaultCloseCap) {
  const std::string kind = j.contains("kind") ? j.at("kind").get<std::string>() : "abstract";
  if (kind == "abstract") return {kind, abstract_ps_from_json(j), std::nullopt};
  PropSystem R;
  if (kind == "spin") R = spin_half_system(directions_from_json(j));
  else if (kind == "rays") R = ks_system(rays_from_json(j), close_cap);
  else if (kind == "projections") {
    auto [ps, names] = projections_from_json(j);
    R = close_system(ps, names, close_cap);
  } else throw InputError("unknown system kind '" + kind + "'");
  AbstractPS A = to_abstract(R);
  return {kind, std::move(A), std::move(R)};
}

inline FrequencyThresholds thresholds_from_json(const json& j) {
  FrequencyThresholds th;
  if (j.contains("z_max")) th.z_max = j.at("z_max").get<double>();
  if (j.contains("block_sizes")) th.block_sizes = j.at("block_sizes").get<std::vector<std::size_t>>();
  if (!(th.z_max > 0)) throw InputError("z_max must be positive");
  for (auto b : th.block_sizes)
    if (b == 0) throw InputError("block sizes must be positive");
  return th;
}

inline json set_to_json(const ElementSet& S, const std::vector<std::string>& names) {
  json a = json::array();
  S.for_each([&](std::size_t i) { a.push_back(names.at(i)); });
  return a;
}

}  // namespace genlab::io
