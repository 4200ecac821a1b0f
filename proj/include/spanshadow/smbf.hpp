#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spanshadow/finset.hpp"

namespace spanshadow {

/// The ambient base B. Every indexing object carries a map to B; the
/// absolute context is B = {*}.
struct BaseContext {
  FinSet base = FinSet::point();

  static BaseContext absolute() { return {}; }
  bool is_absolute() const { return base.size() == 1; }
  friend bool operator==(const BaseContext& a, const BaseContext& b) { return a.base == b.base; }
};

/// A finite set together with its structure map to the context base.
struct IndexedSpace {
  FinSet space;
  FinMap to_base;

  IndexedSpace() : space(), to_base(to_point(space)) {}
  IndexedSpace(FinSet s, FinMap tb) : space(std::move(s)), to_base(std::move(tb)) {
    if (!(to_base.source() == space)) throw SpanError("structure map of " + space.name() + " has the wrong source");
  }

  static IndexedSpace absolute(FinSet s) {
    FinMap tb = to_point(s);
    return {std::move(s), std::move(tb)};
  }
  /// Over a context: `images` are the structure-map values in element order.
  static IndexedSpace over(const BaseContext& ctx, FinSet s, std::vector<Element> images) {
    FinMap tb = FinMap::tabled(s, ctx.base, std::move(images));
    return {std::move(s), std::move(tb)};
  }
  /// The context base as an object over itself.
  static IndexedSpace terminal(const BaseContext& ctx) { return {ctx.base, FinMap::identity(ctx.base)}; }

  const FinSet& base() const { return to_base.target(); }
  BaseContext context() const { return {base()}; }
  const std::string& name() const { return space.name(); }
  std::size_t size() const { return space.size(); }

  friend bool operator==(const IndexedSpace& a, const IndexedSpace& b) {
    return a.space == b.space && a.to_base == b.to_base;
  }
};

/// Throws unless `h` is a map a → b commuting with the structure maps.
inline void require_over_base(const IndexedSpace& a, const IndexedSpace& b, const FinMap& h) {
  if (!(h.source() == a.space) || !(h.target() == b.space))
    throw SpanError("map endpoints do not match " + a.name() + " -> " + b.name());
  if (!(a.base() == b.base())) throw SpanError("context mismatch between " + a.name() + " and " + b.name());
  if (a.base().size() == 1) return;
  const auto& src = a.space.elements();
  for (std::size_t i = 0; i < src.size(); ++i)
    if (!(a.to_base.image_at(i) == b.to_base(h.image_at(i))))
      throw SpanError("map does not commute with the maps to the base at " + src[i].to_string());
}

/// A listed copy of a (possibly lazy) indexed space.
inline IndexedSpace materialize(const IndexedSpace& a) {
  if (a.space.is_listed()) return a;
  FinSet s = FinSet::trusted(a.name(), a.space.elements());
  return {s, FinMap::tabled(s, a.base(), a.to_base.images(), false)};
}

/// Left-nested fiber product over the context base. The empty product is
/// the base itself; a single factor is returned unchanged. The result is a
/// lazy set, so large products are never enumerated unless asked.
inline IndexedSpace fiber_product(const BaseContext& ctx, const std::vector<IndexedSpace>& spaces) {
  if (spaces.empty()) return IndexedSpace::terminal(ctx);
  for (const auto& s : spaces)
    if (!(s.base() == ctx.base)) throw SpanError("context mismatch in fiber product at " + s.name());
  if (spaces.size() == 1) return spaces[0];
  IndexedSpace acc = spaces[0];
  const bool absolute = ctx.is_absolute();
  for (std::size_t i = 1; i < spaces.size(); ++i) {
    FinSet p = FinSet::lazy_pullback(acc.name() + "x" + spaces[i].name(), acc.to_base, spaces[i].to_base);
    FinMap tb = absolute ? to_point(p)
                         : FinMap::structural(p, ctx.base, [left = acc.to_base](const Element& e) { return left(e.first()); });
    acc = IndexedSpace(std::move(p), std::move(tb));
  }
  return acc;
}

inline IndexedSpace fiber_product(const std::vector<IndexedSpace>& spaces) {
  if (spaces.empty()) throw SpanError("empty fiber product needs an explicit context");
  return fiber_product(spaces[0].context(), spaces);
}

/// A finite set over an indexed space: the discrete stand-in for a
/// parametrized spectrum. Fibers may be empty.
struct ParamSet {
  FinSet total;
  IndexedSpace base;
  FinMap proj;

  ParamSet() : ParamSet(FinSet(), IndexedSpace(), FinMap()) {}
  ParamSet(FinSet t, IndexedSpace b, FinMap p) : total(std::move(t)), base(std::move(b)), proj(std::move(p)) {
    if (!proj.source().same_object(total) && !(proj.source() == total))
      throw SpanError("projection source differs from total " + total.name());
    if (!proj.target().same_object(base.space) && !(proj.target() == base.space))
      throw SpanError("projection target differs from base " + base.name());
  }

  /// Builds the projection from per-element images.
  static ParamSet from_images(FinSet t, IndexedSpace b, std::vector<Element> images, bool validate = true) {
    FinMap p = FinMap::tabled(t, b.space, std::move(images), validate);
    return {std::move(t), std::move(b), std::move(p)};
  }

  const BaseContext context() const { return base.context(); }
  std::size_t size() const { return total.size(); }

  std::vector<Element> fiber(const Element& a) const {
    std::vector<Element> out;
    const auto& es = total.elements();
    for (std::size_t i = 0; i < es.size(); ++i)
      if (proj.image_at(i) == a) out.push_back(es[i]);
    return out;
  }

  friend bool operator==(const ParamSet& a, const ParamSet& b) {
    return a.base == b.base && a.total == b.total && a.proj == b.proj;
  }
};

/// A map of totals over a fixed base: a 2-cell between parametrized sets.
struct ParamMorphism {
  ParamSet from;
  ParamSet to;
  FinMap map;

  ParamMorphism(ParamSet f, ParamSet t, FinMap m) : from(std::move(f)), to(std::move(t)), map(std::move(m)) {
    if (!(from.base == to.base)) throw SpanError("morphism endpoints lie over different bases");
    if (!(map.source() == from.total) || !(map.target() == to.total))
      throw SpanError("morphism map endpoints do not match the totals");
    const auto& es = from.total.elements();
    for (std::size_t i = 0; i < es.size(); ++i)
      if (!(to.proj(map.image_at(i)) == from.proj.image_at(i)))
        throw SpanError("morphism does not preserve the projection at " + es[i].to_string());
  }

  static ParamMorphism identity(const ParamSet& x) { return {x, x, FinMap::identity(x.total)}; }
};

namespace detail {

// Iterative left-nested tuple enumeration over the context base.
struct TupleRow {
  Element elem;
  Element base_elem;
  Element point;  // image in the context base
};

inline std::vector<TupleRow> rows_of(const ParamSet& x) {
  std::vector<TupleRow> rows;
  const auto& es = x.total.elements();
  rows.reserve(es.size());
  const bool absolute = x.base.base().size() == 1;
  for (std::size_t i = 0; i < es.size(); ++i) {
    Element a = x.proj.image_at(i);
    Element p = absolute ? Element::star() : x.base.to_base(a);
    rows.push_back({es[i], std::move(a), std::move(p)});
  }
  return rows;
}

}  // namespace detail

/// External product over the context: totals and bases are fiber products
/// over B with left-nested tuple elements. The empty product is B over
/// itself ({*} over {*} in the absolute context).
inline ParamSet external_product(const BaseContext& ctx, const std::vector<ParamSet>& xs) {
  for (const auto& x : xs)
    if (!(x.base.base() == ctx.base)) throw SpanError("context mismatch in external product at " + x.total.name());
  if (xs.empty()) {
    IndexedSpace b = IndexedSpace::terminal(ctx);
    return {ctx.base, b, FinMap::identity(ctx.base)};
  }
  if (xs.size() == 1) return xs[0];
  std::vector<IndexedSpace> bases;
  for (const auto& x : xs) bases.push_back(x.base);
  IndexedSpace base = fiber_product(ctx, bases);

  std::vector<detail::TupleRow> acc = detail::rows_of(xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    std::vector<detail::TupleRow> next;
    auto rows = detail::rows_of(xs[k]);
    std::unordered_map<Element, std::vector<std::size_t>, ElementHash> by_point;
    for (std::size_t j = 0; j < rows.size(); ++j) by_point[rows[j].point].push_back(j);
    for (const auto& r : acc) {
      auto it = by_point.find(r.point);
      if (it == by_point.end()) continue;
      for (std::size_t j : it->second)
        next.push_back({Element::pair(r.elem, rows[j].elem), Element::pair(r.base_elem, rows[j].base_elem), r.point});
    }
    acc = std::move(next);
  }
  std::string name;
  for (std::size_t k = 0; k < xs.size(); ++k) name += (k ? "^" : "") + xs[k].total.name();
  std::vector<Element> elems, images;
  elems.reserve(acc.size());
  images.reserve(acc.size());
  for (auto& r : acc) {
    elems.push_back(std::move(r.elem));
    images.push_back(std::move(r.base_elem));
  }
  FinSet total = FinSet::trusted(std::move(name), std::move(elems));
  return ParamSet::from_images(std::move(total), std::move(base), std::move(images), false);
}

/// Result of pulling back along h: the new object and the cartesian
/// comparison map (a',x) ↦ x into the old total.
struct PulledBack {
  ParamSet set;
  FinMap comparison;
};

/// h*X = {(a',x) : h(a') = proj(x)} over A', enumerated by x then a'.
inline PulledBack pullback_along(const IndexedSpace& new_base, const FinMap& h, const ParamSet& x) {
  require_over_base(new_base, x.base, h);
  const auto& xs = x.total.elements();
  std::vector<Element> elems, images;
  auto emit = [&](const Element& xe, const std::vector<Element>& fiber) {
    for (const auto& a : fiber) {
      elems.push_back(Element::pair(a, xe));
      images.push_back(a);
    }
  };
  if (h.has_preimage()) {
    for (std::size_t i = 0; i < xs.size(); ++i) emit(xs[i], h.preimage(x.proj.image_at(i)));
  } else {
    std::unordered_map<Element, std::vector<Element>, ElementHash> inverse;
    const auto& src = new_base.space.elements();
    for (std::size_t j = 0; j < src.size(); ++j) inverse[h.image_at(j)].push_back(src[j]);
    static const std::vector<Element> none;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto it = inverse.find(x.proj.image_at(i));
      emit(xs[i], it == inverse.end() ? none : it->second);
    }
  }
  FinSet total = FinSet::trusted(new_base.name() + "*" + x.total.name(), std::move(elems));
  FinMap cmp = FinMap::structural(total, x.total, [](const Element& e) { return e.second(); });
  return {ParamSet::from_images(total, new_base, std::move(images), false), std::move(cmp)};
}

/// h_!X: the same total over the new base via h ∘ proj.
inline ParamSet pushforward_along(const IndexedSpace& new_base, const FinMap& h, const ParamSet& x) {
  require_over_base(x.base, new_base, h);
  return {x.total, new_base, tabulate(compose(h, x.proj))};
}

/// A commuting square  k: A→Bv, j: A→C, f: Bv→D, h: C→D  (f∘k = h∘j).
struct PullbackSquare {
  IndexedSpace a, b, c, d;
  FinMap k, j, f, h;
};

/// The canonical bijection j_!k*X ≅ h*f_!X, (a,x) ↦ (j(a),x), together with
/// both sides built from the primitive operations.
struct BeckChevalley {
  ParamSet lhs;  // j_! k^* X
  ParamSet rhs;  // h^* f_! X
  Bijection iso;
};

/// Throws "not a pullback square" with a witness unless a ↦ (k(a), j(a)) is
/// a bijection from A onto the pullback of f and h.
inline void require_pullback_square(const PullbackSquare& sq) {
  require_over_base(sq.a, sq.b, sq.k);
  require_over_base(sq.a, sq.c, sq.j);
  require_over_base(sq.b, sq.d, sq.f);
  require_over_base(sq.c, sq.d, sq.h);
  const auto& as = sq.a.space.elements();
  std::unordered_map<Element, Element, ElementHash> hit;
  for (std::size_t i = 0; i < as.size(); ++i) {
    Element kb = sq.k.image_at(i), jc = sq.j.image_at(i);
    if (!(sq.f(kb) == sq.h(jc))) throw SpanError("not a pullback square: square does not commute at " + as[i].to_string());
    Element p = Element::pair(kb, jc);
    auto [it, fresh] = hit.emplace(p, as[i]);
    if (!fresh)
      throw SpanError("not a pullback square: " + it->second.to_string() + " and " + as[i].to_string() +
                      " both map to " + p.to_string());
  }
  Pullback pb = pullback(sq.f, sq.h);
  for (const auto& p : pb.set.elements())
    if (!hit.count(p)) throw SpanError("not a pullback square: " + p.to_string() + " has no preimage");
}

inline BeckChevalley beck_chevalley(const PullbackSquare& sq, const ParamSet& x) {
  require_pullback_square(sq);
  if (!(x.base == sq.b)) throw SpanError("Beck-Chevalley input does not lie over the square's corner");
  ParamSet lhs = pushforward_along(sq.c, sq.j, pullback_along(sq.a, sq.k, x).set);
  ParamSet rhs = pullback_along(sq.c, sq.h, pushforward_along(sq.d, sq.f, x)).set;
  // a is recovered from (j(a), x) as the unique a with k(a) = proj(x), j(a) = c.
  std::unordered_map<Element, Element, ElementHash> back;
  const auto& as = sq.a.space.elements();
  for (std::size_t i = 0; i < as.size(); ++i) back.emplace(Element::pair(sq.k.image_at(i), sq.j.image_at(i)), as[i]);
  FinMap fwd = map_by(lhs.total, rhs.total, [&](const Element& e) { return Element::pair(sq.j(e.first()), e.second()); });
  FinMap bwd = map_by(rhs.total, lhs.total, [&](const Element& e) {
    return Element::pair(back.at(Element::pair(x.proj(e.second()), e.first())), e.second());
  });
  return {lhs, rhs, Bijection(std::move(fwd), std::move(bwd))};
}

/// A wedge  C ←f– B –g_i→ A_i  over the context.
struct MultiSpan {
  BaseContext ctx;
  IndexedSpace B;
  IndexedSpace C;
  std::vector<IndexedSpace> inputs;
  FinMap f;
  std::vector<FinMap> g;

  std::size_t arity() const { return inputs.size(); }

  /// Checks endpoints and that every leg commutes with the maps to the base.
  void validate() const {
    if (g.size() != inputs.size()) throw SpanError("multi-span has " + std::to_string(g.size()) + " legs for " +
                                                  std::to_string(inputs.size()) + " inputs");
    if (!(B.base() == ctx.base) || !(C.base() == ctx.base)) throw SpanError("multi-span context mismatch");
    require_over_base(B, C, f);
    for (std::size_t i = 0; i < g.size(); ++i) require_over_base(B, inputs[i], g[i]);
  }

  /// (g_1,...,g_n): B → A_1 ×_B ... ×_B A_n; for n = 0 the structure map of B.
  FinMap input_tuple(const IndexedSpace& target) const {
    if (g.empty()) return FinMap::tabled(B.space, target.space, B.to_base.images(), false);
    std::vector<Element> images;
    const std::size_t nb = B.space.size();
    images.reserve(nb);
    std::vector<Element> parts(g.size());
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t i = 0; i < g.size(); ++i) parts[i] = g[i].image_at(b);
      images.push_back(Element::tuple(parts));
    }
    return FinMap::tabled(B.space, target.space, std::move(images), false);
  }

  /// The identity span on A (n = 1, f = g_1 = id).
  static MultiSpan identity(const IndexedSpace& a) {
    return {a.context(), a, a, {a}, FinMap::identity(a.space), {FinMap::identity(a.space)}};
  }
};

/// f_!(g_1,...,g_n)^*(X_1 ⊠ ... ⊠ X_n). Elements are (b, (x_1,...,x_n)); for
/// n = 0 they are (b, β) with β the image of b in the context base.
inline ParamSet multispan_action(const MultiSpan& s, const std::vector<ParamSet>& xs) {
  s.validate();
  if (xs.size() != s.arity())
    throw SpanError("action expects " + std::to_string(s.arity()) + " inputs, got " + std::to_string(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i].base == s.inputs[i])) throw SpanError("input " + std::to_string(i + 1) + " lies over the wrong space");
  ParamSet ext = external_product(s.ctx, xs);
  FinMap tuple = s.input_tuple(ext.base);
  PulledBack pb = pullback_along(s.B, tuple, ext);
  return pushforward_along(s.C, s.f, pb.set);
}

/// Map of action outputs induced by componentwise 2-cells φ_i: X_i → Y_i.
inline FinMap multispan_action_on(const MultiSpan& s, const ParamSet& out_from, const ParamSet& out_to,
                                  const std::vector<FinMap>& phis) {
  const std::size_t n = s.arity();
  if (phis.size() != n) throw SpanError("action on 2-cells expects one map per input");
  return map_by(out_from.total, out_to.total, [&](const Element& e) {
    if (n == 0) return e;
    auto xs = untuple(e.second(), n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = phis[i](xs[i]);
    return Element::pair(e.first(), Element::tuple(xs));
  });
}

/// Injectivity of (f, g_1, ..., g_n): B → C ×_B A_1 ×_B ... ×_B A_n, with a
/// collision witness when it fails.
inline InjectivityReport is_rigid(const MultiSpan& s) {
  s.validate();
  std::vector<IndexedSpace> parts{s.C};
  parts.insert(parts.end(), s.inputs.begin(), s.inputs.end());
  IndexedSpace target = fiber_product(s.ctx, parts);
  std::vector<Element> images;
  std::vector<Element> row(parts.size());
  for (std::size_t b = 0; b < s.B.space.size(); ++b) {
    row[0] = s.f.image_at(b);
    for (std::size_t i = 0; i < s.g.size(); ++i) row[i + 1] = s.g[i].image_at(b);
    images.push_back(Element::tuple(row));
  }
  return is_injective(FinMap::tabled(s.B.space, target.space, std::move(images), false));
}

/// Objects are tuples of inputs for a multi-span; arrows are componentwise
/// 2-cells between them.
struct ActionFamily {
  struct Arrow {
    std::size_t from;
    std::size_t to;
    std::vector<FinMap> maps;
  };
  std::vector<std::vector<ParamSet>> tuples;
  std::vector<Arrow> arrows;
};

/// One automorphism per family object, as a permutation of its action output.
struct ActionAutomorphism {
  std::vector<FinMap> components;

  bool is_identity() const {
    for (const auto& c : components)
      for (std::size_t i = 0; i < c.source().size(); ++i)
        if (!(c.image_at(i) == c.source().at(i))) return false;
    return true;
  }
};

struct AutomorphismSearch {
  std::vector<ActionAutomorphism> found;
  std::size_t explored = 0;
};

/// Exhaustive search for fiber-preserving permutations of the action outputs
/// that commute with every induced arrow of the family. For a nullary span an
/// empty family stands for the single empty tuple. Backtracks over images
/// element by element, propagating the arrows; throws "search budget
/// exceeded" after `budget` candidate images.
inline AutomorphismSearch search_automorphisms(const MultiSpan& s, ActionFamily family,
                                               std::size_t budget = 1'000'000) {
  s.validate();
  if (family.tuples.empty() && s.arity() == 0) family.tuples.push_back({});
  const std::size_t K = family.tuples.size();
  std::vector<ParamSet> outs;
  for (const auto& t : family.tuples) outs.push_back(multispan_action(s, t));

  // Induced arrows as index maps.
  struct IndexArrow {
    std::size_t from, to;
    std::vector<std::size_t> idx;
  };
  std::vector<IndexArrow> arrows;
  for (const auto& a : family.arrows) {
    if (a.from >= K || a.to >= K) throw SpanError("family arrow refers to a missing tuple");
    for (std::size_t i = 0; i < a.maps.size() && i < s.arity(); ++i)
      ParamMorphism(family.tuples[a.from][i], family.tuples[a.to][i], a.maps[i]);
    FinMap m = multispan_action_on(s, outs[a.from], outs[a.to], a.maps);
    IndexArrow ia{a.from, a.to, {}};
    for (std::size_t i = 0; i < outs[a.from].size(); ++i) ia.idx.push_back(outs[a.to].total.require_index(m.image_at(i)));
    arrows.push_back(std::move(ia));
  }

  // Global variables: element i of object k is off[k] + i. Candidates are
  // the other elements of the same fiber over C.
  std::vector<std::size_t> off(K + 1, 0);
  for (std::size_t k = 0; k < K; ++k) off[k + 1] = off[k] + outs[k].size();
  const std::size_t V = off[K];
  std::vector<std::vector<std::size_t>> cand(V);
  for (std::size_t k = 0; k < K; ++k) {
    std::unordered_map<Element, std::vector<std::size_t>, ElementHash> fib;
    std::vector<Element> keys;
    for (std::size_t i = 0; i < outs[k].size(); ++i) {
      auto [it, fresh] = fib.try_emplace(outs[k].proj.image_at(i));
      if (fresh) keys.push_back(outs[k].proj.image_at(i));
      it->second.push_back(off[k] + i);
    }
    for (const auto& key : keys)
      for (std::size_t v : fib[key]) cand[v] = fib[key];
  }
  // Each arrow constrains σ(a(x)) = a(σ(x)). Edges are stored per variable:
  // forward (x → a(x)) and backward (a(x) ← x).
  struct Edge {
    std::size_t arrow, other;
  };
  std::vector<std::vector<Edge>> fwd(V), bwd(V);
  auto image = [&](std::size_t a, std::size_t v) { return off[arrows[a].to] + arrows[a].idx[v - off[arrows[a].from]]; };
  for (std::size_t a = 0; a < arrows.size(); ++a)
    for (std::size_t i = 0; i < arrows[a].idx.size(); ++i) {
      std::size_t x = off[arrows[a].from] + i, y = image(a, x);
      fwd[x].push_back({a, y});
      bwd[y].push_back({a, x});
    }

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> sigma(V, unset), trail;
  std::vector<char> taken(V, 0);

  // Assigns σ(x) = v and everything it forces; false on a conflict.
  auto assign = [&](std::size_t x, std::size_t v) {
    std::vector<std::pair<std::size_t, std::size_t>> queue{{x, v}};
    while (!queue.empty()) {
      auto [y, w] = queue.back();
      queue.pop_back();
      if (sigma[y] != unset) {
        if (sigma[y] != w) return false;
        continue;
      }
      if (taken[w] || std::find(cand[y].begin(), cand[y].end(), w) == cand[y].end()) return false;
      sigma[y] = w;
      taken[w] = 1;
      trail.push_back(y);
      for (const auto& e : fwd[y]) queue.emplace_back(e.other, image(e.arrow, w));
      for (const auto& e : bwd[y])
        if (sigma[e.other] != unset && image(e.arrow, sigma[e.other]) != w) return false;
    }
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      taken[sigma[trail.back()]] = 0;
      sigma[trail.back()] = unset;
      trail.pop_back();
    }
  };

  AutomorphismSearch result;
  auto recurse = [&](auto&& self, std::size_t next) -> void {
    while (next < V && sigma[next] != unset) ++next;
    if (next == V) {
      ActionAutomorphism aut;
      for (std::size_t k = 0; k < K; ++k) {
        std::vector<Element> images;
        for (std::size_t i = off[k]; i < off[k + 1]; ++i) images.push_back(outs[k].total.at(sigma[i] - off[k]));
        aut.components.push_back(FinMap::tabled(outs[k].total, outs[k].total, std::move(images), false));
      }
      result.found.push_back(std::move(aut));
      return;
    }
    for (std::size_t v : cand[next]) {
      if (taken[v]) continue;
      if (++result.explored > budget) throw SpanError("search budget exceeded");
      std::size_t mark = trail.size();
      if (assign(next, v)) self(self, next + 1);
      undo(mark);
    }
  };
  recurse(recurse, 0);
  return result;
}

/// A family that pins the automorphisms of a rigid span's action: one tuple
/// X_i = A_i × {0,1}, the two constant endomorphisms, and for each input and
/// each bit of the index of a ∈ A_i (at least one) the endomorphism
/// (a, t) ↦ (a, bit(a)) on that coordinate only. Throws when this needs more than `max_arrows` arrows.
inline ActionFamily probe_family(const MultiSpan& s, std::size_t max_arrows = 5) {
  const std::size_t n = s.arity();
  ActionFamily fam;
  if (n == 0) return fam;
  const Element zero = Element::atom("0"), one = Element::atom("1");
  std::vector<ParamSet> xs;
  for (const auto& a : s.inputs) {
    std::vector<Element> elems, over;
    for (const auto& e : a.space.elements())
      for (const auto& t : {zero, one}) {
        elems.push_back(Element::pair(e, t));
        over.push_back(e);
      }
    xs.push_back(ParamSet::from_images(FinSet::trusted("X" + a.name(), std::move(elems)), a, std::move(over), false));
  }
  fam.tuples.push_back(xs);
  auto endo = [&](std::size_t i, auto&& fn) {
    return map_by(xs[i].total, xs[i].total, [&](const Element& e) { return Element::pair(e.first(), fn(e)); }, false);
  };
  for (const auto& c : {zero, one}) {
    std::vector<FinMap> maps;
    for (std::size_t i = 0; i < n; ++i) maps.push_back(endo(i, [&](const Element&) { return c; }));
    fam.arrows.push_back({0, 0, std::move(maps)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const FinSet& ai = s.inputs[i].space;
    for (std::size_t bit = 0; bit == 0 || (std::size_t{1} << bit) < ai.size(); ++bit) {
      std::vector<FinMap> maps;
      for (std::size_t j = 0; j < n; ++j)
        maps.push_back(j != i ? FinMap::identity(xs[j].total) : endo(j, [&](const Element& e) {
          return (ai.require_index(e.first()) >> bit) & 1 ? one : zero;
        }));
      fam.arrows.push_back({0, 0, std::move(maps)});
    }
  }
  if (fam.arrows.size() > max_arrows)
    throw SpanError("probe family needs " + std::to_string(fam.arrows.size()) + " arrows");
  return fam;
}

}  // namespace spanshadow
