#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spanshadow/bicategory.hpp"

namespace spanshadow {

/// (x_2, ..., x_n, x_1): the leftmost entry moves to the right. Indices are
/// taken mod n throughout this module.
template <class T>
std::vector<T> rotate_left(std::vector<T> xs) {
  if (!xs.empty()) std::rotate(xs.begin(), xs.begin() + 1, xs.end());
  return xs;
}

template <class T>
std::vector<T> rotate_right(std::vector<T> xs) {
  if (!xs.empty()) std::rotate(xs.rbegin(), xs.rbegin() + 1, xs.rend());
  return xs;
}

/// Γ on a left-nested n-tuple.
inline Element shift_tuple(const Element& t, std::size_t n) { return Element::tuple(rotate_left(untuple(t, n))); }
inline Element unshift_tuple(const Element& t, std::size_t n) { return Element::tuple(rotate_right(untuple(t, n))); }

namespace detail {

inline void require_arity(std::size_t n) {
  if (n == 0) throw SpanError("n-Fuller operations need n >= 1");
}

inline std::vector<IndexedSpace> sources(const std::vector<Cell1>& ms) {
  std::vector<IndexedSpace> out;
  for (const auto& m : ms) out.push_back(m.src);
  return out;
}
inline std::vector<IndexedSpace> targets(const std::vector<Cell1>& ms) {
  std::vector<IndexedSpace> out;
  for (const auto& m : ms) out.push_back(m.dst);
  return out;
}

}  // namespace detail

/// ⊠M_i: a 1-cell ∏A_i → ∏B_i with elements (m_1, ..., m_n), all over one
/// point of the context base. This is the external product transported along
/// the interleaving ∏(A_i × B_i) ≅ ∏A_i × ∏B_i; see box_literal.
inline Cell1 box(const std::vector<Cell1>& ms) {
  detail::require_arity(ms.size());
  if (ms.size() == 1) return ms[0];
  BaseContext ctx = ms[0].context();
  for (const auto& m : ms)
    if (!(m.context() == ctx)) throw SpanError("context mismatch in box product");
  const bool absolute = ctx.is_absolute();

  struct Row {
    Element elem, src, dst, point;
  };
  auto rows_of = [&](const Cell1& m) {
    std::vector<Row> rows;
    const auto& es = m.total().elements();
    rows.reserve(es.size());
    for (std::size_t i = 0; i < es.size(); ++i) {
      Element p = m.proj_at(i);
      Element pt = absolute ? Element::star() : m.src.to_base(p.first());
      rows.push_back({es[i], p.first(), p.second(), std::move(pt)});
    }
    return rows;
  };
  std::vector<Row> acc = rows_of(ms[0]);
  std::string name = ms[0].name();
  for (std::size_t k = 1; k < ms.size(); ++k) {
    auto rows = rows_of(ms[k]);
    name += "#" + ms[k].name();
    std::vector<Row> next;
    if (absolute) {
      next.reserve(acc.size() * rows.size());
      for (const auto& r : acc)
        for (const auto& s : rows)
          next.push_back({Element::pair(r.elem, s.elem), Element::pair(r.src, s.src), Element::pair(r.dst, s.dst), r.point});
    } else {
      std::unordered_map<Element, std::vector<std::size_t>, ElementHash> by_point;
      for (std::size_t j = 0; j < rows.size(); ++j) by_point[rows[j].point].push_back(j);
      for (const auto& r : acc) {
        auto it = by_point.find(r.point);
        if (it == by_point.end()) continue;
        for (std::size_t j : it->second) {
          const auto& s = rows[j];
          next.push_back({Element::pair(r.elem, s.elem), Element::pair(r.src, s.src), Element::pair(r.dst, s.dst), r.point});
        }
      }
    }
    acc = std::move(next);
  }
  std::vector<Element> elems, images;
  elems.reserve(acc.size());
  images.reserve(acc.size());
  for (auto& r : acc) {
    elems.push_back(std::move(r.elem));
    images.push_back(Element::pair(std::move(r.src), std::move(r.dst)));
  }
  IndexedSpace src = fiber_product(ctx, detail::sources(ms));
  IndexedSpace dst = fiber_product(ctx, detail::targets(ms));
  return Cell1::from_images(src, dst, FinSet::trusted("[" + name + "]", std::move(elems)), std::move(images), false);
}

/// ⊠φ_i: (m_1, ..., m_n) ↦ (φ_1 m_1, ..., φ_n m_n).
inline Cell2 box(const std::vector<Cell2>& phis) {
  std::vector<Cell1> from, to;
  for (const auto& p : phis) {
    from.push_back(p.from);
    to.push_back(p.to);
  }
  const std::size_t n = phis.size();
  Cell1 a = box(from), b = box(to);
  return Cell2::by(a, b, [&](const Element& e) {
    auto ms = untuple(e, n);
    for (std::size_t i = 0; i < n; ++i) ms[i] = phis[i].map(ms[i]);
    return Element::tuple(ms);
  });
}

inline Iso2 box(const std::vector<Iso2>& isos) {
  std::vector<Cell2> f, b;
  for (const auto& i : isos) {
    f.push_back(i.forward);
    b.push_back(i.backward);
  }
  return {box(f), box(b)};
}

/// The literal construction of ⊠M_i: the external product of the bodies,
/// pulled back along ∏A_i ×_B ∏B_i → ∏(A_i ×_B B_i), with the canonical
/// bijection ((α, β), m) ↦ m onto box(ms).
struct BoxLiteral {
  ParamSet literal;
  Bijection to_box;
};

inline BoxLiteral box_literal(const std::vector<Cell1>& ms) {
  detail::require_arity(ms.size());
  BaseContext ctx = ms[0].context();
  const std::size_t n = ms.size();
  std::vector<ParamSet> bodies;
  for (const auto& m : ms) bodies.push_back(m.body);
  ParamSet ext = external_product(ctx, bodies);
  IndexedSpace src = fiber_product(ctx, detail::sources(ms));
  IndexedSpace dst = fiber_product(ctx, detail::targets(ms));
  IndexedSpace base = materialize(fiber_product(ctx, {src, dst}));
  FinMap interleave = map_by(base.space, ext.base.space, [&](const Element& e) {
    auto as = untuple(e.first(), n), bs = untuple(e.second(), n);
    std::vector<Element> parts;
    for (std::size_t i = 0; i < n; ++i) parts.push_back(Element::pair(as[i], bs[i]));
    return Element::tuple(parts);
  }, false);
  ParamSet lit = pullback_along(base, interleave, ext).set;
  Cell1 direct = box(ms);
  return {lit, Bijection(map_by(lit.total, direct.total(), [](const Element& e) { return e.second(); }),
                         map_by(direct.total(), lit.total, [&](const Element& e) {
                           return Element::pair(direct.body.proj(e), e);
                         }))};
}

/// m_⊠: (⊠M_i) ⊙ (⊠N_i) ≅ ⊠(M_i ⊙ N_i), ((m_i), (n_i)) ↦ ((m_i, n_i)).
inline Iso2 m_box(const std::vector<Cell1>& ms, const std::vector<Cell1>& ns) {
  if (ms.size() != ns.size()) throw SpanError("m_box needs tuples of equal length");
  detail::require_arity(ms.size());
  const std::size_t n = ms.size();
  std::vector<Cell1> mn;
  for (std::size_t i = 0; i < n; ++i) mn.push_back(compose(ms[i], ns[i]));
  Cell1 l = compose(box(ms), box(ns));
  Cell1 r = box(mn);
  return {Cell2::by(l, r, [n](const Element& e) {
            auto a = untuple(e.first(), n), b = untuple(e.second(), n);
            std::vector<Element> parts;
            for (std::size_t i = 0; i < n; ++i) parts.push_back(Element::pair(a[i], b[i]));
            return Element::tuple(parts);
          }),
          Cell2::by(r, l, [n](const Element& e) {
            auto parts = untuple(e, n);
            std::vector<Element> a, b;
            for (const auto& p : parts) {
              a.push_back(p.first());
              b.push_back(p.second());
            }
            return Element::pair(Element::tuple(a), Element::tuple(b));
          })};
}

/// i_⊠: U_{∏A_i} ≅ ⊠U_{A_i}. Both sides have the tuples (a_i) as elements.
inline Iso2 i_box(const BaseContext& ctx, const std::vector<IndexedSpace>& as) {
  detail::require_arity(as.size());
  Cell1 l = unit(fiber_product(ctx, as));
  std::vector<Cell1> us;
  for (const auto& a : as) us.push_back(unit(a));
  Cell1 r = box(us);
  auto id = [](const Element& e) { return e; };
  return {Cell2::by(l, r, id), Cell2::by(r, l, id)};
}

/// T_{(A_i)}: the 1-cell ∏A_{i+1} → ∏A_i with elements the tuples t ∈ ∏A_i
/// lying over (Γt, t).
struct TwistCell {
  std::vector<IndexedSpace> inputs;
  Cell1 cell;
};

inline TwistCell twist_cell(const BaseContext& ctx, const std::vector<IndexedSpace>& as) {
  detail::require_arity(as.size());
  const std::size_t n = as.size();
  IndexedSpace prod = fiber_product(ctx, as);
  IndexedSpace shifted = fiber_product(ctx, rotate_left(as));
  std::vector<Element> images;
  for (const auto& t : prod.space.elements()) images.push_back(Element::pair(shift_tuple(t, n), t));
  FinSet total = FinSet::trusted("T", prod.space.elements());
  return {as, Cell1::from_images(shifted, prod, std::move(total), std::move(images), false)};
}

/// ϑ: T_{(A_i)} ⊙ (⊠M_i) ≅ (⊠M_{i+1}) ⊙ T_{(B_i)} for M_i: A_i → B_i.
/// (t, (m_i)) ↦ ((m_{i+1}), (dst m_i)).
inline Iso2 vartheta(const std::vector<Cell1>& ms) {
  detail::require_arity(ms.size());
  const std::size_t n = ms.size();
  BaseContext ctx = ms[0].context();
  Cell1 ta = twist_cell(ctx, detail::sources(ms)).cell;
  Cell1 tb = twist_cell(ctx, detail::targets(ms)).cell;
  Cell1 l = compose(ta, box(ms));
  Cell1 r = compose(box(rotate_left(ms)), tb);
  auto coords = [&](const std::vector<Element>& parts, const std::vector<Cell1>& cells, bool want_src) {
    std::vector<Element> out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      Element p = cells[i].body.proj(parts[i]);
      out.push_back(want_src ? p.first() : p.second());
    }
    return Element::tuple(out);
  };
  std::vector<Cell1> rotated = rotate_left(ms);
  return {Cell2::by(l, r, [&](const Element& e) {
            auto parts = untuple(e.second(), n);
            return Element::pair(Element::tuple(rotate_left(parts)), coords(parts, ms, false));
          }),
          Cell2::by(r, l, [&](const Element& e) {
            auto parts = rotate_right(untuple(e.first(), n));
            return Element::pair(coords(parts, ms, true), Element::tuple(parts));
          })};
}

namespace detail {
inline void require_cyclic(const std::vector<Cell1>& qs) {
  require_arity(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i)
    if (!(qs[i].dst == qs[(i + 1) % qs.size()].src)) throw SpanError("needs a cyclically composable list");
}

/// `composite` is the left-nested Q_1 ⊙ ... ⊙ Q_n.
inline Bijection tau_from(const FinSet& lhs, const std::vector<Cell1>& qs, const Cell1& composite) {
  const std::size_t n = qs.size();
  FinSet rhs = shadow(composite);
  return {map_by(lhs, rhs, [](const Element& e) { return e.second(); }),
          map_by(rhs, lhs, [&](const Element& e) {
            auto parts = untuple(e, n);
            std::vector<Element> src;
            for (std::size_t i = 0; i < n; ++i) src.push_back(qs[i].body.proj(parts[i]).first());
            return Element::pair(Element::tuple(src), e);
          })};
}
}  // namespace detail

/// τ: ⟨T_{(A_{i-1})} ⊙ ⊠Q_i⟩ ≅ ⟨Q_1 ⊙ ... ⊙ Q_n⟩ (left-nested), for
/// Q_i: A_{i-1} → A_i. Sends (t, (q_i)) to the composite element built from
/// the same q_i.
inline Bijection tau(const std::vector<Cell1>& qs) {
  detail::require_cyclic(qs);
  Cell1 t = twist_cell(qs[0].context(), detail::sources(qs)).cell;
  return detail::tau_from(shadow(compose(t, box(qs))), qs, compose_tree(qs, Bracketing::left_nested(0, static_cast<int>(qs.size()))));
}

inline FinSet twisted_shadow(const std::vector<Cell1>& qs);

/// τ with its source built by twisted_shadow; for long lists where ⊠Q_i is
/// too large to materialize.
inline Bijection twisted_tau(const std::vector<Cell1>& qs) {
  FinSet lhs = twisted_shadow(qs);
  return detail::tau_from(lhs, qs, compose_tree(qs, Bracketing::left_nested(0, static_cast<int>(qs.size()))));
}

/// twisted_tau for a list whose left-nested composite is already built.
inline Bijection twisted_tau(const std::vector<Cell1>& qs, const Cell1& composite) {
  return detail::tau_from(twisted_shadow(qs), qs, composite);
}

/// The elements of ⟨T_{(A_{i-1})} ⊙ ⊠Q_i⟩, found by walking cycles
/// q_1 → q_2 → ... → q_n → q_1 instead of building ⊠Q_i, whose size is the
/// product of the |Q_i|. Same elements as the literal construction, possibly
/// in a different order.
inline FinSet twisted_shadow(const std::vector<Cell1>& qs) {
  detail::require_cyclic(qs);
  const std::size_t n = qs.size();
  // For i ≥ 1, index Q_i by source coordinate.
  std::vector<std::unordered_map<Element, std::vector<std::size_t>, ElementHash>> by_src(n);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < qs[i].size(); ++j) by_src[i][qs[i].proj_at(j).first()].push_back(j);
  std::vector<Element> out, chosen(n), src(n);
  auto walk = [&](auto&& self, std::size_t i, const Element& at, const Element& start) -> void {
    if (i == n) {
      if (at == start) out.push_back(Element::pair(Element::tuple(src), Element::tuple(chosen)));
      return;
    }
    auto it = by_src[i].find(at);
    if (it == by_src[i].end()) return;
    for (std::size_t j : it->second) {
      chosen[i] = qs[i].total().at(j);
      src[i] = at;
      self(self, i + 1, qs[i].proj_at(j).second(), start);
    }
  };
  for (std::size_t j = 0; j < qs[0].size(); ++j) {
    Element p = qs[0].proj_at(j);
    chosen[0] = qs[0].total().at(j);
    src[0] = p.first();
    walk(walk, 1, p.second(), p.first());
  }
  return FinSet::trusted("<T.box>", std::move(out));
}

}  // namespace spanshadow
