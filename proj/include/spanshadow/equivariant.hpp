#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spanshadow/basechange.hpp"
#include "spanshadow/group.hpp"
#include "spanshadow/random.hpp"

namespace spanshadow {

/// An action of a finite group on a finite set; table[g][i] is the index of
/// g·x_i. Unit and compatibility laws are checked exhaustively.
class GAction {
 public:
  GAction() = default;
  GAction(FinGroup g, FinSet set, std::vector<std::vector<std::size_t>> table)
      : group_(std::move(g)), set_(std::move(set)), table_(std::move(table)) {
    const std::size_t n = set_.size();
    if (table_.size() != group_.order()) throw SpanError("action on " + set_.name() + " has the wrong number of rows");
    for (const auto& row : table_) {
      if (row.size() != n) throw SpanError("action on " + set_.name() + " has a row of the wrong length");
      for (std::size_t v : row)
        if (v >= n) throw SpanError("action on " + set_.name() + " leaves the set");
    }
    for (std::size_t i = 0; i < n; ++i)
      if (table_[group_.unit()][i] != i) throw SpanError("unit does not act trivially on " + set_.name());
    for (std::size_t a = 0; a < group_.order(); ++a)
      for (std::size_t b = 0; b < group_.order(); ++b)
        for (std::size_t i = 0; i < n; ++i)
          if (table_[a][table_[b][i]] != table_[group_.mul(a, b)][i])
            throw SpanError("action on " + set_.name() + " is not compatible with multiplication");
  }

  /// Tabulates fn(g, x), which must land in `set`.
  template <class Fn>
  static GAction by(const FinGroup& g, const FinSet& set, Fn&& fn) {
    std::vector<std::vector<std::size_t>> t(g.order(), std::vector<std::size_t>(set.size()));
    for (std::size_t a = 0; a < g.order(); ++a)
      for (std::size_t i = 0; i < set.size(); ++i) {
        auto j = set.index_of(fn(a, set.at(i)));
        if (!j) throw SpanError("action does not preserve " + set.name());
        t[a][i] = *j;
      }
    return GAction(g, set, std::move(t));
  }

  static GAction trivial(const FinGroup& g, const FinSet& set) {
    return by(g, set, [](std::size_t, const Element& e) { return e; });
  }

  const FinGroup& group() const { return group_; }
  const FinSet& set() const { return set_; }
  std::size_t apply_index(std::size_t g, std::size_t i) const { return table_[g][i]; }
  Element apply(std::size_t g, const Element& e) const { return set_.at(table_[g][set_.require_index(e)]); }

  bool fixed_by(const Subgroup& h, std::size_t i) const {
    for (std::size_t m : h.members)
      if (table_[m][i] != i) return false;
    return true;
  }

  /// {g : g·x_i = x_i} as a sorted index list.
  std::vector<std::size_t> stabilizer(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < group_.order(); ++g)
      if (table_[g][i] == i) out.push_back(g);
    return out;
  }

  /// Index of the first element of each orbit, in order.
  std::vector<std::size_t> orbit_representatives() const {
    std::vector<bool> seen(set_.size(), false);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < set_.size(); ++i) {
      if (seen[i]) continue;
      reps.push_back(i);
      for (std::size_t g = 0; g < group_.order(); ++g) seen[table_[g][i]] = true;
    }
    return reps;
  }

  /// The same action, restricted to the subgroup H (as a group).
  GAction restricted(const Subgroup& h) const {
    std::vector<std::vector<std::size_t>> t;
    for (std::size_t m : h.members) t.push_back(table_[m]);
    return GAction(h.as_group(group_), set_, std::move(t));
  }

 private:
  FinGroup group_;
  FinSet set_;
  std::vector<std::vector<std::size_t>> table_;
};

/// f(g·x) = g·f(x) for all g, x.
inline bool is_equivariant(const FinMap& f, const GAction& from, const GAction& to) {
  for (std::size_t g = 0; g < from.group().order(); ++g)
    for (std::size_t i = 0; i < from.set().size(); ++i)
      if (!(f.image_at(from.apply_index(g, i)) == to.apply(g, f.image_at(i)))) return false;
  return true;
}

/// A 0-cell with a G-action; the context base carries the trivial action.
struct GSpace {
  IndexedSpace space;
  GAction action;

  GSpace() = default;
  GSpace(IndexedSpace s, GAction a) : space(std::move(s)), action(std::move(a)) {
    if (!(action.set() == space.space)) throw SpanError("action is not on " + space.name());
    for (std::size_t g = 0; g < action.group().order(); ++g)
      for (std::size_t i = 0; i < space.size(); ++i)
        if (!(space.to_base.image_at(action.apply_index(g, i)) == space.to_base.image_at(i)))
          throw SpanError("action on " + space.name() + " moves points between fibers of the base");
  }
  const FinGroup& group() const { return action.group(); }
  const std::string& name() const { return space.name(); }
};

/// The diagonal action on a fiber product of G-spaces.
inline GSpace product_gspace(const BaseContext& ctx, const std::vector<GSpace>& parts) {
  std::vector<IndexedSpace> spaces;
  for (const auto& p : parts) spaces.push_back(p.space);
  IndexedSpace prod = fiber_product(ctx, spaces);
  if (parts.size() == 1) return parts[0];
  const FinGroup& g = parts.at(0).group();
  const std::size_t n = parts.size();
  return {prod, GAction::by(g, prod.space, [&](std::size_t a, const Element& e) {
            auto xs = untuple(e, n);
            for (std::size_t i = 0; i < n; ++i) xs[i] = parts[i].action.apply(a, xs[i]);
            return Element::tuple(xs);
          })};
}

/// A 1-cell between G-spaces whose total carries an action making the
/// projection equivariant.
struct GCell1 {
  GSpace src;
  GSpace dst;
  Cell1 cell;
  GAction action;

  GCell1(GSpace a, GSpace c, Cell1 x, GAction act)
      : src(std::move(a)), dst(std::move(c)), cell(std::move(x)), action(std::move(act)) {
    if (!(cell.src == src.space) || !(cell.dst == dst.space)) throw SpanError("G-cell endpoints do not match");
    if (!(action.set() == cell.total())) throw SpanError("action is not on the total of " + cell.name());
    for (std::size_t g = 0; g < action.group().order(); ++g)
      for (std::size_t i = 0; i < cell.size(); ++i) {
        Element p = cell.proj_at(i), q = cell.proj_at(action.apply_index(g, i));
        if (!(q.first() == src.action.apply(g, p.first())) || !(q.second() == dst.action.apply(g, p.second())))
          throw SpanError("projection of " + cell.name() + " is not equivariant");
      }
  }
  const FinGroup& group() const { return action.group(); }
};

/// Checks that a 2-cell between G-cells is equivariant.
inline void require_equivariant(const Cell2& phi, const GAction& from, const GAction& to) {
  if (!is_equivariant(phi.map, from, to)) throw SpanError("2-cell is not equivariant");
}

inline GCell1 gunit(const GSpace& a) {
  Cell1 u = unit(a.space);
  return {a, a, u, GAction::by(a.group(), u.total(), [&](std::size_t g, const Element& e) { return a.action.apply(g, e); })};
}

inline GCell1 gcompose(const GCell1& x, const GCell1& y) {
  Cell1 c = compose(x.cell, y.cell);
  return {x.src, y.dst, c, GAction::by(x.group(), c.total(), [&](std::size_t g, const Element& e) {
            return Element::pair(x.action.apply(g, e.first()), y.action.apply(g, e.second()));
          })};
}

/// The action on ⟨X⟩.
inline GAction gshadow(const GCell1& x) {
  FinSet s = shadow(x.cell);
  return GAction::by(x.group(), s, [&](std::size_t g, const Element& e) { return x.action.apply(g, e); });
}

/// An equivariant map of G-spaces.
struct GMap {
  GSpace source;
  GSpace target;
  SpaceMap map;

  GMap(GSpace s, GSpace t, FinMap m) : source(std::move(s)), target(std::move(t)), map(source.space, target.space, m) {
    if (!is_equivariant(map.map, source.action, target.action)) throw SpanError("map is not equivariant");
  }
  static GMap identity(const GSpace& a) { return {a, a, FinMap::identity(a.space.space)}; }
};

inline GMap compose(const GMap& g, const GMap& f) { return {f.source, g.target, compose(g.map, f.map).map}; }

/// [f] with the action of the source on its total.
inline GCell1 gbase_change(const GMap& f) {
  Cell1 c = base_change(f.map).cell;
  return {f.target, f.source, c, GAction::by(f.source.group(), c.total(), [&](std::size_t g, const Element& e) {
            return f.source.action.apply(g, e);
          })};
}

// ---- fixed points and restriction -----------------------------------------

/// A^H with its residual WH-action ([n]·a = n·a for the coset representative n).
inline GSpace fixed_points(const GSpace& a, const Subgroup& h, const Weyl& w) {
  std::vector<Element> es, base;
  for (std::size_t i = 0; i < a.space.size(); ++i)
    if (a.action.fixed_by(h, i)) {
      es.push_back(a.space.space.at(i));
      base.push_back(a.space.to_base.image_at(i));
    }
  FinSet s = FinSet::trusted(a.name() + "^" + h.name, std::move(es));
  IndexedSpace sp(s, FinMap::tabled(s, a.space.base(), std::move(base), false));
  return {sp, GAction::by(w.group, s, [&](std::size_t k, const Element& e) { return a.action.apply(w.reps[k], e); })};
}

inline GSpace fixed_points(const GSpace& a, const Subgroup& h) { return fixed_points(a, h, weyl(a.group(), h)); }

/// The H-fixed subset of an action's set, with the WH-action.
inline GAction fixed_points(const GAction& x, const Subgroup& h, const Weyl& w) {
  std::vector<Element> es;
  for (std::size_t i = 0; i < x.set().size(); ++i)
    if (x.fixed_by(h, i)) es.push_back(x.set().at(i));
  FinSet s = FinSet::trusted(x.set().name() + "^" + h.name, std::move(es));
  return GAction::by(w.group, s, [&](std::size_t k, const Element& e) { return x.apply(w.reps[k], e); });
}

/// Φ^H X: the H-fixed elements over A^H ×_B C^H, a WH-cell. A pair (a, c) is
/// fixed exactly when both coordinates are, so the base identification
/// (A ×_B C)^H ≅ A^H ×_B C^H is the identity on elements.
inline GCell1 geometric_fixed_points(const GCell1& x, const Subgroup& h, const Weyl& w) {
  GSpace a = fixed_points(x.src, h, w), c = fixed_points(x.dst, h, w);
  GAction act = fixed_points(x.action, h, w);
  std::vector<Element> images;
  for (const auto& e : act.set().elements()) images.push_back(x.cell.body.proj(e));
  Cell1 cell = Cell1::from_images(a.space, c.space, act.set().renamed("Phi(" + x.cell.name() + ")"), images);
  return {a, c, cell, GAction::by(w.group, cell.total(), [&](std::size_t k, const Element& e) { return act.apply(k, e); })};
}

inline GCell1 geometric_fixed_points(const GCell1& x, const Subgroup& h) {
  return geometric_fixed_points(x, h, weyl(x.group(), h));
}

/// f^H: A^H → C^H.
inline GMap fixed_map(const GMap& f, const Subgroup& h, const Weyl& w) {
  GSpace a = fixed_points(f.source, h, w), c = fixed_points(f.target, h, w);
  return {a, c, map_by(a.space.space, c.space.space, [&](const Element& e) { return f.map(e); })};
}

/// Φ^H on a 2-cell whose map sends H-fixed elements to H-fixed elements,
/// for instance any H-equivariant one.
inline Cell2 phi_on_2cell(const Cell2& phi, const GCell1& from, const GCell1& to, const Subgroup& h, const Weyl& w) {
  GCell1 a = geometric_fixed_points(from, h, w), b = geometric_fixed_points(to, h, w);
  return {a.cell, b.cell, map_by(a.cell.total(), b.cell.total(), [&](const Element& e) { return phi.map(e); })};
}

inline Iso2 phi_on_iso(const Iso2& phi, const GCell1& from, const GCell1& to, const Subgroup& h, const Weyl& w) {
  return {phi_on_2cell(phi.forward, from, to, h, w), phi_on_2cell(phi.backward, to, from, h, w)};
}

/// Φ^H on a map of sets with actions, for instance ⟨φ⟩ or θ.
inline FinMap phi_on_map(const FinMap& f, const GAction& from, const GAction& to, const Subgroup& h, const Weyl& w) {
  FinSet a = fixed_points(from, h, w).set(), b = fixed_points(to, h, w).set();
  return map_by(a, b, [&](const Element& e) { return f(e); });
}

/// ι_H^*: the same data with the action restricted to H.
inline GSpace restrict(const GSpace& a, const Subgroup& h) { return {a.space, a.action.restricted(h)}; }
inline GCell1 restrict(const GCell1& x, const Subgroup& h) {
  return {restrict(x.src, h), restrict(x.dst, h), x.cell, x.action.restricted(h)};
}

// ---- comparison isomorphisms ---------------------------------------------

namespace detail {
inline Iso2 identity_iso(const Cell1& from, const Cell1& to) {
  auto id = [](const Element& e) { return e; };
  return {Cell2::by(from, to, id), Cell2::by(to, from, id)};
}
inline Bijection identity_bijection(const FinSet& from, const FinSet& to) {
  auto id = [](const Element& e) { return e; };
  return {map_by(from, to, id), map_by(to, from, id)};
}
}  // namespace detail

/// m_Φ: Φ^H X ⊙ Φ^H Y ≅ Φ^H(X ⊙ Y). Checked WH-equivariant.
inline Iso2 m_phi(const GCell1& x, const GCell1& y, const Subgroup& h, const Weyl& w) {
  GCell1 l = gcompose(geometric_fixed_points(x, h, w), geometric_fixed_points(y, h, w));
  GCell1 r = geometric_fixed_points(gcompose(x, y), h, w);
  Iso2 iso = detail::identity_iso(l.cell, r.cell);
  require_equivariant(iso.forward, l.action, r.action);
  return iso;
}

/// i_Φ: U_{A^H} ≅ Φ^H(U_A).
inline Iso2 i_phi(const GSpace& a, const Subgroup& h, const Weyl& w) {
  GCell1 l = gunit(fixed_points(a, h, w));
  GCell1 r = geometric_fixed_points(gunit(a), h, w);
  Iso2 iso = detail::identity_iso(l.cell, r.cell);
  require_equivariant(iso.forward, l.action, r.action);
  return iso;
}

/// s_Φ: ⟨Φ^H X⟩ ≅ Φ^H⟨X⟩.
inline Bijection s_phi(const GCell1& x, const Subgroup& h, const Weyl& w) {
  GAction l = gshadow(geometric_fixed_points(x, h, w));
  GAction r = fixed_points(gshadow(x), h, w);
  Bijection b = detail::identity_bijection(l.set(), r.set());
  if (!is_equivariant(b.forward, l, r)) throw SpanError("s_phi is not equivariant");
  return b;
}

/// η: Φ^H[f] ≅ [f^H].
inline Iso2 eta(const GMap& f, const Subgroup& h, const Weyl& w) {
  GCell1 l = geometric_fixed_points(gbase_change(f), h, w);
  GCell1 r = gbase_change(fixed_map(f, h, w));
  Iso2 iso = detail::identity_iso(l.cell, r.cell);
  require_equivariant(iso.forward, l.action, r.action);
  return iso;
}

// ---- parametrized G-sets (Lemma-6.2 style commutation) --------------------

/// A set over a G-space with an action making the projection equivariant.
struct GParam {
  GSpace base;
  ParamSet set;
  GAction action;

  GParam(GSpace b, ParamSet s, GAction a) : base(std::move(b)), set(std::move(s)), action(std::move(a)) {
    if (!(set.base == base.space)) throw SpanError("parametrized G-set lies over the wrong space");
    if (!(action.set() == set.total)) throw SpanError("action is not on " + set.total.name());
    if (!is_equivariant(set.proj, action, base.action)) throw SpanError("projection of " + set.total.name() + " is not equivariant");
  }
};

inline GParam phi(const GParam& x, const Subgroup& h, const Weyl& w) {
  GSpace b = fixed_points(x.base, h, w);
  GAction act = fixed_points(x.action, h, w);
  std::vector<Element> images;
  for (const auto& e : act.set().elements()) images.push_back(x.set.proj(e));
  return {b, ParamSet::from_images(act.set(), b.space, std::move(images)), act};
}

inline GParam gexternal(const BaseContext& ctx, const GParam& x, const GParam& y) {
  ParamSet p = external_product(ctx, {x.set, y.set});
  GSpace b = product_gspace(ctx, {x.base, y.base});
  return {b, p, GAction::by(x.action.group(), p.total, [&](std::size_t g, const Element& e) {
            return Element::pair(x.action.apply(g, e.first()), y.action.apply(g, e.second()));
          })};
}

inline GParam gpullback(const GMap& f, const GParam& y) {
  PulledBack pb = pullback_along(f.source.space, f.map.map, y.set);
  return {f.source, pb.set, GAction::by(y.action.group(), pb.set.total, [&](std::size_t g, const Element& e) {
            return Element::pair(f.source.action.apply(g, e.first()), y.action.apply(g, e.second()));
          })};
}

inline GParam gpushforward(const GMap& f, const GParam& y) {
  ParamSet p = pushforward_along(f.target.space, f.map.map, y.set);
  return {f.target, p, GAction::by(y.action.group(), p.total, [&](std::size_t g, const Element& e) {
            return y.action.apply(g, e);
          })};
}

/// The identity on elements as a bijection of parametrized sets, or the
/// reason it is not one.
inline std::optional<std::string> same_parametrized(const ParamSet& a, const ParamSet& b) {
  std::unordered_map<Element, Element, ElementHash> pa;
  for (std::size_t i = 0; i < a.total.size(); ++i) pa.emplace(a.total.at(i), a.proj.image_at(i));
  if (pa.size() != b.total.size()) return "totals have different sizes";
  for (std::size_t i = 0; i < b.total.size(); ++i) {
    auto it = pa.find(b.total.at(i));
    if (it == pa.end()) return "element " + b.total.at(i).to_string() + " is missing";
    if (!(it->second == b.proj.image_at(i))) return "element " + b.total.at(i).to_string() + " lies over different points";
  }
  for (const auto& p : a.base.space.elements())
    if (!b.base.space.contains(p)) return "base point " + p.to_string() + " is missing";
  if (a.base.size() != b.base.size()) return "bases have different sizes";
  return std::nullopt;
}

// ---- random equivariant instances -----------------------------------------

namespace detail {

/// Left cosets gK of K as index lists, ordered by least element, and the
/// coset of each group element.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> cosets(const FinGroup& g, const Subgroup& k) {
  std::vector<std::size_t> coset_of(g.order(), g.order()), reps;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (coset_of[x] != g.order()) continue;
    for (std::size_t m : k.members) coset_of[g.mul(x, m)] = reps.size();
    reps.push_back(x);
  }
  return {reps, coset_of};
}

inline bool subset_of(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Elements, proj images and action table for a union of orbits G/K_j, the
/// orbit j sent onto the orbit of anchors[j] by gK ↦ g·anchor.
struct OrbitBuild {
  std::vector<Element> elements;
  std::vector<Element> images;
  std::vector<std::vector<std::size_t>> table;
};

inline OrbitBuild build_orbits(const FinGroup& g, const std::string& prefix, const std::vector<Subgroup>& ks,
                               const std::vector<std::size_t>& anchors, const std::function<Element(std::size_t, std::size_t)>& move) {
  OrbitBuild out;
  out.table.assign(g.order(), {});
  for (std::size_t j = 0; j < ks.size(); ++j) {
    auto [reps, coset_of] = cosets(g, ks[j]);
    std::size_t offset = out.elements.size();
    for (std::size_t c = 0; c < reps.size(); ++c) {
      out.elements.push_back(Element::atom(prefix + std::to_string(offset + c)));
      out.images.push_back(move(reps[c], anchors[j]));
    }
    for (std::size_t a = 0; a < g.order(); ++a)
      for (std::size_t c = 0; c < reps.size(); ++c) out.table[a].push_back(offset + coset_of[g.mul(a, reps[c])]);
  }
  return out;
}

}  // namespace detail

/// A G-space made of random orbits G/K, each over one random base point, of
/// total size at most max_size. With `fixed_over_every_point` a fixed point is
/// added over each base point, so every G-space maps to it.
inline GSpace random_gspace(Rng& rng, const GenParams& p, const FinGroup& g, const std::string& name,
                            bool fixed_over_every_point = false) {
  const auto subs = all_subgroups(g);
  int size = detail::draw_size(rng, 0, p.max_size);
  std::vector<Subgroup> ks;
  std::vector<std::size_t> anchors;
  if (fixed_over_every_point)
    for (std::size_t b = 0; b < p.ctx.base.size(); ++b) {
      ks.push_back(Subgroup::whole(g));
      anchors.push_back(b);
    }
  int used = static_cast<int>(ks.size());
  while (used < size) {
    std::vector<Subgroup> fit;
    for (const auto& k : subs)
      if (static_cast<int>(g.order() / k.order()) <= size - used) fit.push_back(k);
    const Subgroup& k = rng.pick(fit);
    ks.push_back(k);
    anchors.push_back(rng.below(p.ctx.base.size()));
    used += static_cast<int>(g.order() / k.order());
  }
  auto built = detail::build_orbits(g, name, ks, anchors,
                                    [&](std::size_t, std::size_t b) { return p.ctx.base.at(b); });
  FinSet s = FinSet::trusted(name, built.elements);
  IndexedSpace sp(s, FinMap::tabled(s, p.ctx.base, built.images, false));
  return {sp, GAction(g, s, std::move(built.table))};
}

/// Random orbits over a G-space: each orbit is G/K for K inside the
/// stabilizer of a random base element; up to max_fiber orbits, total capped
/// at max_total.
inline std::pair<FinSet, std::pair<std::vector<Element>, GAction>> random_orbits_over(Rng& rng, const GenParams& p,
                                                                                      const GSpace& base,
                                                                                      const std::string& name) {
  const FinGroup& g = base.group();
  const auto subs = all_subgroups(g);
  auto reps = base.action.orbit_representatives();
  std::vector<Subgroup> ks;
  std::vector<std::size_t> anchors;
  int used = 0;
  int tries = reps.empty() ? 0 : rng.uniform(0, p.max_fiber + 1);
  for (int t = 0; t < tries; ++t) {
    std::size_t r = rng.pick(reps);
    auto stab = base.action.stabilizer(r);
    std::vector<Subgroup> fit;
    for (const auto& k : subs)
      if (detail::subset_of(k.members, stab) && used + static_cast<int>(g.order() / k.order()) <= p.max_total)
        fit.push_back(k);
    if (fit.empty()) continue;
    const Subgroup& k = rng.pick(fit);
    ks.push_back(k);
    anchors.push_back(r);
    used += static_cast<int>(g.order() / k.order());
  }
  auto built = detail::build_orbits(g, name, ks, anchors, [&](std::size_t x, std::size_t i) {
    return base.space.space.at(base.action.apply_index(x, i));
  });
  FinSet s = FinSet::trusted(name, built.elements);
  return {s, {built.images, GAction(g, s, std::move(built.table))}};
}

inline GCell1 random_gcell(Rng& rng, const GenParams& p, const std::string& name, const GSpace& a, const GSpace& c) {
  GSpace base = product_gspace(p.ctx, {a, c});
  auto [s, rest] = random_orbits_over(rng, p, base, name);
  Cell1 cell = Cell1::from_images(a.space, c.space, s, rest.first);
  return {a, c, cell, rest.second};
}

inline GParam random_gparam(Rng& rng, const GenParams& p, const std::string& name, const GSpace& a) {
  auto [s, rest] = random_orbits_over(rng, p, a, name);
  return {a, ParamSet::from_images(s, a.space, rest.first), rest.second};
}

/// A random equivariant map, choosing for each orbit representative a target
/// whose stabilizer contains its own; nothing if some orbit has no target.
inline std::optional<GMap> random_gmap(Rng& rng, const GSpace& a, const GSpace& c) {
  std::vector<Element> images(a.space.size());
  for (std::size_t r : a.action.orbit_representatives()) {
    auto stab = a.action.stabilizer(r);
    std::vector<std::size_t> options;
    for (std::size_t j = 0; j < c.space.size(); ++j)
      if (c.space.to_base.image_at(j) == a.space.to_base.image_at(r) && detail::subset_of(stab, c.action.stabilizer(j)))
        options.push_back(j);
    if (options.empty()) return std::nullopt;
    std::size_t j = rng.pick(options);
    for (std::size_t g = 0; g < a.group().order(); ++g)
      images[a.action.apply_index(g, r)] = c.space.space.at(c.action.apply_index(g, j));
  }
  return GMap(a, c, FinMap::tabled(a.space.space, c.space.space, std::move(images)));
}

/// A random H-equivariant 2-cell x → y between G-cells with the same
/// endpoints, or nothing when some H-orbit has no admissible image.
inline std::optional<Cell2> random_h_2cell(Rng& rng, const GCell1& x, const GCell1& y, const Subgroup& h) {
  GAction hx = x.action.restricted(h), hy = y.action.restricted(h);
  std::vector<Element> images(x.cell.size());
  for (std::size_t r : hx.orbit_representatives()) {
    auto stab = hx.stabilizer(r);
    std::vector<std::size_t> options;
    for (std::size_t j = 0; j < y.cell.size(); ++j)
      if (y.cell.proj_at(j) == x.cell.proj_at(r) && detail::subset_of(stab, hy.stabilizer(j))) options.push_back(j);
    if (options.empty()) return std::nullopt;
    std::size_t j = rng.pick(options);
    for (std::size_t k = 0; k < h.order(); ++k)
      images[hx.apply_index(k, r)] = y.cell.total().at(hy.apply_index(k, j));
  }
  return Cell2(x.cell, y.cell, FinMap::tabled(x.cell.total(), y.cell.total(), std::move(images)));
}

}  // namespace spanshadow
