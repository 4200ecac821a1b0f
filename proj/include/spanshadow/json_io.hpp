#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanshadow/bicategory.hpp"
#include "spanshadow/diagrams.hpp"
#include "spanshadow/invariants.hpp"

namespace spanshadow {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input documents.
class InputError : public SpanError {
 public:
  using SpanError::SpanError;
};

// ---- elements, sets, maps -------------------------------------------------

inline Json to_json(const Element& e) {
  if (e.is_atom()) return e.label();
  return Json::array({to_json(e.first()), to_json(e.second())});
}

inline Element element_from_json(const Json& j) {
  if (j.is_string()) return Element::atom(j.get<std::string>());
  if (j.is_number_integer()) return Element::atom(std::to_string(j.get<long long>()));
  if (j.is_array() && j.size() == 2) return Element::pair(element_from_json(j[0]), element_from_json(j[1]));
  throw InputError("element must be a string or a two-element array: " + j.dump());
}

inline Json to_json(const FinSet& s) {
  Json es = Json::array();
  for (const auto& e : s.elements()) es.push_back(to_json(e));
  return {{"name", s.name()}, {"elements", es}};
}

inline FinSet finset_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name") || !j.contains("elements") || !j["elements"].is_array())
    throw InputError("FinSet needs \"name\" and \"elements\"");
  std::vector<Element> es;
  for (const auto& e : j["elements"]) es.push_back(element_from_json(e));
  try {
    return FinSet(j["name"].get<std::string>(), std::move(es));
  } catch (const SpanError& err) {
    throw InputError(err.what());
  }
}

inline Json map_pairs(const FinMap& m) {
  Json pairs = Json::array();
  for (std::size_t i = 0; i < m.source().size(); ++i)
    pairs.push_back(Json::array({to_json(m.source().at(i)), to_json(m.image_at(i))}));
  return pairs;
}

inline Json to_json(const FinMap& m) {
  return {{"source", m.source().name()}, {"target", m.target().name()}, {"map", map_pairs(m)}};
}

inline FinMap map_from_pairs(const FinSet& source, const FinSet& target, const Json& pairs) {
  if (!pairs.is_array()) throw InputError("map must be a list of [x, y] pairs");
  std::vector<std::pair<Element, Element>> ps;
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2) throw InputError("map entry must be [x, y]: " + p.dump());
    ps.emplace_back(element_from_json(p[0]), element_from_json(p[1]));
  }
  try {
    return FinMap::from_pairs(source, target, ps);
  } catch (const SpanError& err) {
    throw InputError(err.what());
  }
}

// ---- documents ------------------------------------------------------------

/// Named 0-cells of one input document over a shared context.
///
/// {"ctx": "*" | name, "sets": [{"name", "elements", "over": [[x, b], ...]}]}
/// "over" is required for every set when the context is not "*". The context
/// set itself must be listed in "sets" and is registered over itself.
struct Registry {
  BaseContext ctx;
  std::map<std::string, IndexedSpace> spaces;

  /// A name, or a list of names meaning their fiber product.
  IndexedSpace resolve(const Json& spec) const {
    if (spec.is_string()) {
      auto name = spec.get<std::string>();
      if (name == "*") return IndexedSpace::terminal(ctx);
      auto it = spaces.find(name);
      if (it == spaces.end()) throw InputError("unknown set: " + name);
      return it->second;
    }
    if (spec.is_array()) {
      std::vector<IndexedSpace> parts;
      for (const auto& s : spec) parts.push_back(resolve(s));
      return fiber_product(ctx, parts);
    }
    throw InputError("set reference must be a name or a list of names: " + spec.dump());
  }

  FinMap map(const Json& j) const {
    if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("map"))
      throw InputError("FinMap needs \"source\", \"target\" and \"map\"");
    return map_from_pairs(resolve(j["source"]).space, resolve(j["target"]).space, j["map"]);
  }
};

inline Registry registry_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("document must be a JSON object");
  Registry reg;
  std::vector<Json> entries;
  if (doc.contains("sets")) {
    if (!doc["sets"].is_array()) throw InputError("\"sets\" must be a list");
    for (const auto& s : doc["sets"]) entries.push_back(s);
  }
  std::string ctx_name = doc.value("ctx", std::string("*"));
  if (ctx_name != "*") {
    bool found = false;
    for (const auto& s : entries)
      if (s.value("name", std::string()) == ctx_name) {
        reg.ctx = BaseContext{finset_from_json(s)};
        found = true;
      }
    if (!found) throw InputError("context set " + ctx_name + " is not listed in \"sets\"");
    reg.spaces.emplace(ctx_name, IndexedSpace::terminal(reg.ctx));
  }
  for (const auto& s : entries) {
    FinSet set = finset_from_json(s);
    if (set.name() == ctx_name) continue;
    if (reg.spaces.count(set.name())) throw InputError("duplicate set name: " + set.name());
    if (reg.ctx.is_absolute()) {
      reg.spaces.emplace(set.name(), IndexedSpace::absolute(set));
      continue;
    }
    if (!s.contains("over")) throw InputError("set " + set.name() + " needs \"over\" in a fiberwise document");
    reg.spaces.emplace(set.name(), IndexedSpace(set, map_from_pairs(set, reg.ctx.base, s["over"])));
  }
  return reg;
}

inline Json to_json(const ParamSet& x) {
  return {{"total", to_json(x.total)}, {"base", x.base.name()}, {"proj", to_json(x.proj)}};
}

inline ParamSet paramset_from_json(const Registry& reg, const Json& j, const std::optional<IndexedSpace>& base = {}) {
  if (!j.is_object() || !j.contains("total") || !j.contains("proj")) throw InputError("ParamSet needs \"total\" and \"proj\"");
  FinSet total = finset_from_json(j["total"]);
  IndexedSpace b = base ? *base : reg.resolve(j.value("base", Json("*")));
  const Json& proj = j["proj"];
  FinMap p = map_from_pairs(total, b.space, proj.is_object() ? proj.value("map", Json::array()) : proj);
  try {
    return ParamSet(total, b, p);
  } catch (const SpanError& err) {
    throw InputError(err.what());
  }
}

inline Json to_json(const Cell1& x) {
  return {{"src", x.src.name()}, {"dst", x.dst.name()}, {"body", to_json(x.body)}};
}

inline Cell1 cell_from_json(const Registry& reg, const Json& j) {
  if (!j.is_object() || !j.contains("src") || !j.contains("dst") || !j.contains("body"))
    throw InputError("Cell1 needs \"src\", \"dst\" and \"body\"");
  IndexedSpace a = reg.resolve(j["src"]), c = reg.resolve(j["dst"]);
  ParamSet body = paramset_from_json(reg, j["body"], fiber_product(reg.ctx, {a, c}));
  return Cell1(a, c, body);
}

/// {"ctx", "sets", "B", "C", "inputs", "f", "g"} in one document.
inline MultiSpan multispan_from_json(const Registry& reg, const Json& j) {
  for (const char* k : {"B", "C", "f"})
    if (!j.contains(k)) throw InputError(std::string("multi-span needs \"") + k + "\"");
  MultiSpan s;
  s.ctx = reg.ctx;
  s.B = reg.resolve(j["B"]);
  s.C = reg.resolve(j["C"]);
  for (const auto& a : j.value("inputs", Json::array())) s.inputs.push_back(reg.resolve(a));
  s.f = reg.map(j["f"]);
  for (const auto& g : j.value("g", Json::array())) s.g.push_back(reg.map(g));
  try {
    s.validate();
  } catch (const SpanError& err) {
    throw InputError(err.what());
  }
  return s;
}

inline Json to_json(const Divergence& d) {
  Json j = {{"check", d.check}, {"detail", d.detail}};
  if (d.element) j["element"] = to_json(*d.element);
  if (d.left) j["left"] = to_json(*d.left);
  if (d.right) j["right"] = to_json(*d.right);
  return j;
}

// ---- groups and endomaps ----------------------------------------------------

/// A group with optional named subgroups:
/// {"name", "elements": [labels], "table": [[labels]], "subgroups": [{"name", "members"}]}
struct GroupDoc {
  FinGroup group;
  std::vector<Subgroup> named;

  Subgroup subgroup(const std::string& name) const {
    try {
      return find_subgroup(group, name, named);
    } catch (const SpanError& e) {
      throw InputError(e.what());
    }
  }
};

inline GroupDoc group_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("elements") || !j.contains("table")) throw InputError("group needs \"elements\" and \"table\"");
  try {
    GroupDoc d{FinGroup::from_labels(j.value("name", std::string("G")), j["elements"].get<std::vector<std::string>>(),
                                     j["table"].get<std::vector<std::vector<std::string>>>()),
               {}};
    for (const auto& h : j.value("subgroups", Json::array())) {
      std::vector<std::size_t> ms;
      for (const auto& m : h.at("members")) ms.push_back(d.group.index(m.get<std::string>()));
      std::sort(ms.begin(), ms.end());
      d.named.push_back(Subgroup::make(d.group, h.at("name").get<std::string>(), ms));
    }
    return d;
  } catch (const SpanError& e) {
    throw InputError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed group: ") + e.what());
  }
}

inline Json to_json(const FinGroup& g) {
  Json table = Json::array();
  for (std::size_t a = 0; a < g.order(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < g.order(); ++b) row.push_back(g.label(g.mul(a, b)));
    table.push_back(row);
  }
  return {{"name", g.name()}, {"elements", g.labels()}, {"table", table}};
}

/// {"set": FinSet, "map": [[x, f(x)], ...]}
inline EndoMap endomap_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("set") || !j.contains("map")) throw InputError("endomap needs \"set\" and \"map\"");
  FinSet a = finset_from_json(j["set"]);
  FinMap f = map_from_pairs(a, a, j["map"]);
  return EndoMap::absolute(f);
}

/// Action from generator permutations {"label": [[x, g·x], ...]} or from
/// triples [[g, x, g·x], ...]; either way closed under products.
inline GAction action_from_json(const FinGroup& g, const FinSet& set, const Json& spec) {
  Json gens = spec;
  if (spec.is_array()) {
    gens = Json::object();
    for (const auto& t : spec) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_string())
        throw InputError("action triples must be [g, x, g.x]");
      gens[t[0].get<std::string>()].push_back(Json::array({t[1], t[2]}));
    }
  }
  if (!gens.is_object()) throw InputError("\"action\" must map group elements to [[x, g.x], ...]");
  const std::size_t n = set.size();
  std::vector<std::optional<std::vector<std::size_t>>> perm(g.order());
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  perm[g.unit()] = id;
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> generators;
  try {
    for (const auto& [label, pairs] : gens.items()) {
      FinMap m = map_from_pairs(set, set, pairs);
      std::vector<std::size_t> p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = set.require_index(m.image_at(i));
      generators.emplace_back(g.index(label), std::move(p));
    }
  } catch (const SpanError& e) {
    throw InputError(e.what());
  }
  std::vector<std::size_t> queue{g.unit()};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    std::size_t a = queue[q];
    for (const auto& [s, ps] : generators) {
      std::size_t b = g.mul(a, s);
      std::vector<std::size_t> pb(n);
      for (std::size_t i = 0; i < n; ++i) pb[i] = (*perm[a])[ps[i]];
      if (!perm[b]) {
        perm[b] = std::move(pb);
        queue.push_back(b);
      } else if (*perm[b] != pb) {
        throw InputError("action generators do not respect the group relations");
      }
    }
  }
  std::vector<std::vector<std::size_t>> table;
  for (std::size_t a = 0; a < g.order(); ++a) {
    if (!perm[a]) throw InputError("action generators do not generate " + g.name());
    table.push_back(*perm[a]);
  }
  try {
    return GAction(g, set, std::move(table));
  } catch (const SpanError& e) {
    throw InputError(e.what());
  }
}

}  // namespace spanshadow
