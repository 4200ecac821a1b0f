#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spanshadow/smbf.hpp"

namespace spanshadow {

/// A 1-cell A → C: a parametrized set over A ×_B C. The endpoints are stored
/// so that empty cells still carry their type.
struct Cell1 {
  IndexedSpace src;
  IndexedSpace dst;
  ParamSet body;

  Cell1() = default;
  Cell1(IndexedSpace a, IndexedSpace c, ParamSet b) : src(std::move(a)), dst(std::move(c)), body(std::move(b)) {
    if (!(src.base() == dst.base())) throw SpanError("1-cell endpoints lie over different bases");
    const FinSet& bs = body.base.space;
    if (!(bs == fiber_product(src.context(), {src, dst}).space))
      throw SpanError("1-cell body does not lie over " + src.name() + " x " + dst.name());
  }

  /// Builds the body from per-element images in src ×_B dst.
  static Cell1 from_images(const IndexedSpace& a, const IndexedSpace& c, FinSet total, std::vector<Element> images,
                           bool validate = true) {
    IndexedSpace base = fiber_product(a.context(), {a, c});
    return {a, c, ParamSet::from_images(std::move(total), std::move(base), std::move(images), validate)};
  }

  const FinSet& total() const { return body.total; }
  std::size_t size() const { return body.total.size(); }
  const std::string& name() const { return body.total.name(); }
  BaseContext context() const { return src.context(); }
  bool is_endo() const { return src == dst; }

  /// proj of the i-th element: a pair (source coordinate, target coordinate).
  Element proj_at(std::size_t i) const { return body.proj.image_at(i); }

  friend bool operator==(const Cell1& a, const Cell1& b) {
    return a.src == b.src && a.dst == b.dst && a.body.total == b.body.total && a.body.proj == b.body.proj;
  }
};

inline bool same_endpoints(const Cell1& a, const Cell1& b) { return a.src == b.src && a.dst == b.dst; }

/// A map of 1-cells with the same endpoints, commuting with the projections.
struct Cell2 {
  Cell1 from;
  Cell1 to;
  FinMap map;

  Cell2(Cell1 f, Cell1 t, FinMap m) : from(std::move(f)), to(std::move(t)), map(std::move(m)) {
    if (!same_endpoints(from, to)) throw SpanError("2-cell between 1-cells with different endpoints");
    if (!(map.source() == from.total()) || !(map.target() == to.total()))
      throw SpanError("2-cell map does not run between the totals");
    const auto& es = from.total().elements();
    for (std::size_t i = 0; i < es.size(); ++i) {
      Element y = map.image_at(i);
      if (!to.total().contains(y)) throw SpanError("2-cell image " + y.to_string() + " not in " + to.name());
      if (!(to.body.proj(y) == from.body.proj.image_at(i)))
        throw SpanError("2-cell does not commute with projections at " + es[i].to_string());
    }
  }

  static Cell2 identity(const Cell1& x) { return {x, x, FinMap::identity(x.total())}; }
  /// Tabled from a per-element formula.
  template <class Fn>
  static Cell2 by(const Cell1& from, const Cell1& to, Fn&& fn) {
    return {from, to, map_by(from.total(), to.total(), std::forward<Fn>(fn), false)};
  }
};

/// An invertible 2-cell with its inverse, checked pointwise.
struct Iso2 {
  Cell2 forward;
  Cell2 backward;

  Iso2(Cell2 f, Cell2 b) : forward(std::move(f)), backward(std::move(b)) {
    Bijection(forward.map, backward.map);
    if (!(forward.from == backward.to) || !(forward.to == backward.from))
      throw SpanError("inverse 2-cell has the wrong endpoints");
  }

  static Iso2 identity(const Cell1& x) { return {Cell2::identity(x), Cell2::identity(x)}; }
  Iso2 inverse() const { return {backward, forward}; }
  const Cell1& from() const { return forward.from; }
  const Cell1& to() const { return forward.to; }
};

/// ψ ∘ φ.
inline Cell2 vcomp(const Cell2& psi, const Cell2& phi) {
  if (!(phi.to == psi.from)) throw SpanError("vertical composition of non-adjacent 2-cells");
  return {phi.from, psi.to, tabulate(compose(psi.map, phi.map))};
}
inline Iso2 vcomp(const Iso2& psi, const Iso2& phi) {
  return {vcomp(psi.forward, phi.forward), vcomp(phi.backward, psi.backward)};
}

/// U_A: the elements of A over the diagonal of A ×_B A.
inline Cell1 unit(const IndexedSpace& a) {
  std::vector<Element> images;
  images.reserve(a.size());
  for (const auto& e : a.space.elements()) images.push_back(Element::pair(e, e));
  return Cell1::from_images(a, a, a.space, std::move(images), false);
}

/// X ⊙ Y for X: A → E and Y: E → C. Elements (x,y) with matching middle
/// coordinate, ordered by x then y, over A ×_B C.
inline Cell1 compose(const Cell1& x, const Cell1& y) {
  if (!(x.dst == y.src)) throw SpanError("cannot compose: " + x.name() + " ends at " + x.dst.name() +
                                         " but " + y.name() + " starts at " + y.src.name());
  const auto& ys = y.total().elements();
  std::unordered_map<Element, std::vector<std::size_t>, ElementHash> by_start;
  for (std::size_t j = 0; j < ys.size(); ++j) by_start[y.proj_at(j).first()].push_back(j);
  const auto& xs = x.total().elements();
  std::vector<Element> elems, images;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Element px = x.proj_at(i);
    auto it = by_start.find(px.second());
    if (it == by_start.end()) continue;
    for (std::size_t j : it->second) {
      elems.push_back(Element::pair(xs[i], ys[j]));
      images.push_back(Element::pair(px.first(), y.proj_at(j).second()));
    }
  }
  FinSet total = FinSet::trusted("(" + x.name() + "." + y.name() + ")", std::move(elems));
  return Cell1::from_images(x.src, y.dst, std::move(total), std::move(images), false);
}

/// φ ⊙ ψ: (x,y) ↦ (φx, ψy).
inline Cell2 hcomp(const Cell2& phi, const Cell2& psi) {
  Cell1 from = compose(phi.from, psi.from);
  Cell1 to = compose(phi.to, psi.to);
  return Cell2::by(from, to, [&](const Element& e) { return Element::pair(phi.map(e.first()), psi.map(e.second())); });
}
inline Iso2 hcomp(const Iso2& phi, const Iso2& psi) {
  return {hcomp(phi.forward, psi.forward), hcomp(phi.backward, psi.backward)};
}

/// α: (X⊙Y)⊙Z → X⊙(Y⊙Z), ((x,y),z) ↦ (x,(y,z)).
inline Iso2 associator(const Cell1& x, const Cell1& y, const Cell1& z) {
  Cell1 l = compose(compose(x, y), z);
  Cell1 r = compose(x, compose(y, z));
  return {Cell2::by(l, r, [](const Element& e) {
            return Element::pair(e.first().first(), Element::pair(e.first().second(), e.second()));
          }),
          Cell2::by(r, l, [](const Element& e) {
            return Element::pair(Element::pair(e.first(), e.second().first()), e.second().second());
          })};
}

/// ℓ: U_A ⊙ X → X, (a,x) ↦ x.
inline Iso2 left_unitor(const Cell1& x) {
  Cell1 ux = compose(unit(x.src), x);
  return {Cell2::by(ux, x, [](const Element& e) { return e.second(); }),
          Cell2::by(x, ux, [&](const Element& e) { return Element::pair(x.body.proj(e).first(), e); })};
}

/// r: X ⊙ U_C → X, (x,c) ↦ x.
inline Iso2 right_unitor(const Cell1& x) {
  Cell1 xu = compose(x, unit(x.dst));
  return {Cell2::by(xu, x, [](const Element& e) { return e.first(); }),
          Cell2::by(x, xu, [&](const Element& e) { return Element::pair(e, x.body.proj(e).second()); })};
}

/// ⟨X⟩ = {x : both coordinates of proj(x) agree}, for an endo-1-cell.
inline FinSet shadow(const Cell1& x) {
  if (!x.is_endo()) throw SpanError("shadow of a 1-cell that is not an endo-cell: " + x.name());
  const auto& es = x.total().elements();
  std::vector<Element> out;
  for (std::size_t i = 0; i < es.size(); ++i) {
    Element p = x.proj_at(i);
    if (p.first() == p.second()) out.push_back(es[i]);
  }
  return FinSet::trusted("<" + x.name() + ">", std::move(out));
}

inline FinMap shadow_on_2cells(const Cell2& phi) {
  FinSet a = shadow(phi.from);
  FinSet b = shadow(phi.to);
  return map_by(a, b, [&](const Element& e) { return phi.map(e); }, false);
}

inline Bijection shadow_on_iso(const Iso2& phi) {
  return {shadow_on_2cells(phi.forward), shadow_on_2cells(phi.backward)};
}

/// θ: ⟨X⊙Y⟩ → ⟨Y⊙X⟩, (x,y) ↦ (y,x).
inline Bijection rotator(const Cell1& x, const Cell1& y) {
  if (!(x.src == y.dst) || !(x.dst == y.src)) throw SpanError("rotator needs cyclically composable 1-cells");
  FinSet l = shadow(compose(x, y));
  FinSet r = shadow(compose(y, x));
  auto swap = [](const Element& e) { return Element::pair(e.second(), e.first()); };
  return {map_by(l, r, swap, false), map_by(r, l, swap, false)};
}

/// X ⊙ Y computed literally as the action of the multi-span
/// A ×_B C ← A ×_B E ×_B C → (A ×_B E, E ×_B C), with the canonical
/// bijection onto compose(x, y).
struct ComposeViaAction {
  ParamSet action;
  Bijection to_compose;  // (b,(x,y)) ↦ (x,y)
};

inline ComposeViaAction compose_via_action(const Cell1& x, const Cell1& y) {
  if (!(x.dst == y.src)) throw SpanError("cannot compose: endpoint mismatch");
  BaseContext ctx = x.context();
  IndexedSpace b = materialize(fiber_product(ctx, {x.src, x.dst, y.dst}));
  IndexedSpace target = fiber_product(ctx, {x.src, y.dst});
  auto leg = [&](const IndexedSpace& to, auto&& fn) { return map_by(b.space, to.space, fn, false); };
  MultiSpan s{ctx, b, target, {x.body.base, y.body.base},
              leg(target, [](const Element& e) { return Element::pair(e.first().first(), e.second()); }),
              {leg(x.body.base, [](const Element& e) { return e.first(); }),
               leg(y.body.base, [](const Element& e) { return Element::pair(e.first().second(), e.second()); })}};
  ParamSet act = multispan_action(s, {x.body, y.body});
  Cell1 direct = compose(x, y);
  Bijection iso(map_by(act.total, direct.total(), [](const Element& e) { return e.second(); }),
                map_by(direct.total(), act.total, [&](const Element& e) {
                  Element px = x.body.proj(e.first());
                  Element c = y.body.proj(e.second()).second();
                  return Element::pair(Element::pair(px, c), e);
                }));
  return {act, iso};
}

// ---- bracketings ----------------------------------------------------------

/// A binary bracketing of leaves 0..n-1, used to write down the rebracketing
/// isomorphisms that diagrams leave implicit.
struct Bracketing {
  int leaf = -1;
  std::vector<Bracketing> kids;  // empty for a leaf, else exactly two

  static Bracketing single(int i) { return {i, {}}; }
  static Bracketing join(Bracketing l, Bracketing r) { return {-1, {std::move(l), std::move(r)}}; }
  /// ((0,1),2)...
  static Bracketing left_nested(int lo, int hi) {
    Bracketing b = single(lo);
    for (int i = lo + 1; i < hi; ++i) b = join(std::move(b), single(i));
    return b;
  }
  /// 0,(1,(2,...))
  static Bracketing right_nested(int lo, int hi) {
    Bracketing b = single(hi - 1);
    for (int i = hi - 2; i >= lo; --i) b = join(single(i), std::move(b));
    return b;
  }
  bool is_leaf() const { return kids.empty(); }

  void leaves(std::vector<int>& out) const {
    if (is_leaf()) out.push_back(leaf);
    else {
      kids[0].leaves(out);
      kids[1].leaves(out);
    }
  }
};

inline void flatten_by(const Element& e, const Bracketing& t, std::vector<Element>& out) {
  if (t.is_leaf()) {
    out.push_back(e);
    return;
  }
  flatten_by(e.first(), t.kids[0], out);
  flatten_by(e.second(), t.kids[1], out);
}

inline Element build_by(const std::vector<Element>& parts, const Bracketing& t) {
  if (t.is_leaf()) return parts.at(static_cast<std::size_t>(t.leaf));
  return Element::pair(build_by(parts, t.kids[0]), build_by(parts, t.kids[1]));
}

/// Composite of cells[leaf] bracketed by t.
inline Cell1 compose_tree(const std::vector<Cell1>& cells, const Bracketing& t) {
  if (t.is_leaf()) return cells.at(static_cast<std::size_t>(t.leaf));
  return compose(compose_tree(cells, t.kids[0]), compose_tree(cells, t.kids[1]));
}

/// The rebracketing isomorphism between two bracketings of the same leaf
/// sequence; equal to any chain of associators between them.
inline Iso2 rebracket(const std::vector<Cell1>& cells, const Bracketing& from, const Bracketing& to) {
  std::vector<int> lf, lt;
  from.leaves(lf);
  to.leaves(lt);
  if (lf != lt) throw SpanError("rebracketing between different leaf sequences");
  Cell1 a = compose_tree(cells, from);
  Cell1 b = compose_tree(cells, to);
  auto move = [&](const Bracketing& s, const Bracketing& d) {
    return [&s, &d, n = lf.size()](const Element& e) {
      std::vector<Element> flat;
      flat.reserve(n);
      flatten_by(e, s, flat);
      // Leaves are indexed by cell number; rebuild positionally.
      std::vector<int> order;
      s.leaves(order);
      std::vector<Element> by_leaf(static_cast<std::size_t>(*std::max_element(order.begin(), order.end()) + 1));
      for (std::size_t k = 0; k < order.size(); ++k) by_leaf[static_cast<std::size_t>(order[k])] = flat[k];
      return build_by(by_leaf, d);
    };
  };
  return {Cell2::by(a, b, move(from, to)), Cell2::by(b, a, move(to, from))};
}

}  // namespace spanshadow
