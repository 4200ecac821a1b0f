#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "spanshadow/fuller.hpp"

namespace spanshadow {

/// A map of indexed spaces commuting with the maps to the context base.
struct SpaceMap {
  IndexedSpace source;
  IndexedSpace target;
  FinMap map;

  SpaceMap(IndexedSpace s, IndexedSpace t, FinMap m) : source(std::move(s)), target(std::move(t)), map(std::move(m)) {
    require_over_base(source, target, map);
  }

  static SpaceMap identity(const IndexedSpace& a) { return {a, a, FinMap::identity(a.space)}; }
  Element operator()(const Element& e) const { return map(e); }
};

/// g ∘ f.
inline SpaceMap compose(const SpaceMap& g, const SpaceMap& f) {
  if (!(f.target == g.source)) throw SpanError("cannot compose maps: " + f.target.name() + " vs " + g.source.name());
  return {f.source, g.target, tabulate(compose(g.map, f.map))};
}

/// ∏f_i: ∏A_i → ∏B_i over the context.
inline SpaceMap product_map(const BaseContext& ctx, const std::vector<SpaceMap>& fs) {
  std::vector<IndexedSpace> src, dst;
  for (const auto& f : fs) {
    src.push_back(f.source);
    dst.push_back(f.target);
  }
  IndexedSpace a = fiber_product(ctx, src), b = fiber_product(ctx, dst);
  const std::size_t n = fs.size();
  if (n == 1) return fs[0];
  return {a, b, map_by(a.space, b.space, [&](const Element& e) {
            auto parts = untuple(e, n);
            for (std::size_t i = 0; i < n; ++i) parts[i] = fs[i].map(parts[i]);
            return Element::tuple(parts);
          }, false)};
}

/// Γ: ∏A_i → ∏A_{i+1}, moving the leftmost coordinate to the right.
inline SpaceMap shift_map(const BaseContext& ctx, const std::vector<IndexedSpace>& as) {
  IndexedSpace a = fiber_product(ctx, as), b = fiber_product(ctx, rotate_left(as));
  const std::size_t n = as.size();
  return {a, b, map_by(a.space, b.space, [n](const Element& e) { return shift_tuple(e, n); }, false)};
}

/// The multi-span A → C ×_B A, A → * defining [f]; rigid for every f.
inline MultiSpan base_change_span(const SpaceMap& f) {
  BaseContext ctx = f.source.context();
  IndexedSpace target = fiber_product(ctx, {f.target, f.source});
  FinMap leg = map_by(f.source.space, target.space, [&](const Element& a) { return Element::pair(f.map(a), a); }, false);
  return {ctx, f.source, target, {}, leg, {}};
}

/// [f] for f: A → C: the 1-cell C → A whose elements are the a ∈ A, lying
/// over (f(a), a).
struct BaseChangeCell {
  SpaceMap f;
  Cell1 cell;
};

inline BaseChangeCell base_change(const SpaceMap& f) {
  if (!is_rigid(base_change_span(f)).injective) throw SpanError("base-change span is not rigid");
  std::vector<Element> images;
  for (std::size_t i = 0; i < f.source.size(); ++i)
    images.push_back(Element::pair(f.map.image_at(i), f.source.space.at(i)));
  return {f, Cell1::from_images(f.target, f.source, f.source.space, std::move(images), false)};
}

/// m_[]: [g] ⊙ [f] ≅ [g ∘ f], (f(a), a) ↦ a.
inline Iso2 m_bc(const SpaceMap& g, const SpaceMap& f) {
  Cell1 l = compose(base_change(g).cell, base_change(f).cell);
  Cell1 r = base_change(compose(g, f)).cell;
  return {Cell2::by(l, r, [](const Element& e) { return e.second(); }),
          Cell2::by(r, l, [&](const Element& a) { return Element::pair(f.map(a), a); })};
}

/// i_[]: U_A = [id_A]. The two cells coincide, so this is an identity.
inline Iso2 i_bc(const IndexedSpace& a) {
  Cell1 u = unit(a);
  Cell1 b = base_change(SpaceMap::identity(a)).cell;
  if (!(u == b)) throw SpanError("unit and base change of the identity differ");
  return Iso2::identity(u);
}

/// ν: ⊠[f_i] ≅ [∏f_i]. Both have the tuples (a_i) as elements.
inline Iso2 nu(const BaseContext& ctx, const std::vector<SpaceMap>& fs) {
  if (fs.empty()) throw SpanError("nu needs at least one map");
  std::vector<Cell1> cells;
  for (const auto& f : fs) cells.push_back(base_change(f).cell);
  Cell1 l = box(cells);
  Cell1 r = base_change(product_map(ctx, fs)).cell;
  auto id = [](const Element& e) { return e; };
  return {Cell2::by(l, r, id), Cell2::by(r, l, id)};
}

/// [f]^{⊙k} ≅ [f^k] for k = 1..n, by iterating m_[] on left-nested powers.
/// Entry k-1 is the iso for k.
inline std::vector<Iso2> power_chain(const SpaceMap& f, std::size_t n) {
  if (n == 0) throw SpanError("power needs n >= 1");
  Cell1 bf = base_change(f).cell;
  std::vector<Iso2> out{Iso2::identity(bf)};
  SpaceMap fk = f;
  for (std::size_t k = 2; k <= n; ++k) {
    Iso2 step = hcomp(out.back(), Iso2::identity(bf));  // [f]^{⊙k-1} ⊙ [f] → [f^{k-1}] ⊙ [f]
    out.push_back(vcomp(m_bc(fk, f), step));
    fk = compose(fk, f);
  }
  return out;
}

inline Iso2 power_to_iterate(const SpaceMap& f, std::size_t n) { return power_chain(f, n).back(); }

}  // namespace spanshadow
