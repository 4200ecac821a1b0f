#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spanshadow/basechange.hpp"

namespace spanshadow {

/// The first place where two legs of a diagram disagree.
struct Divergence {
  std::string check;
  std::string detail;
  std::optional<Element> element;
  std::optional<Element> left;
  std::optional<Element> right;
};

using Verdict = std::optional<Divergence>;

inline Verdict diverge(std::string check, std::string detail) {
  return Divergence{std::move(check), std::move(detail), std::nullopt, std::nullopt, std::nullopt};
}

inline Verdict compare_maps(const std::string& check, const FinMap& l, const FinMap& r) {
  if (!(l.source() == r.source()) || !(l.target() == r.target())) return diverge(check, "legs have different endpoints");
  for (std::size_t i = 0; i < l.source().size(); ++i) {
    Element a = l.image_at(i), b = r.image_at(i);
    if (!(a == b)) return Divergence{check, "legs disagree", l.source().at(i), a, b};
  }
  return std::nullopt;
}

inline Verdict compare_cells(const std::string& check, const Cell2& l, const Cell2& r) {
  if (!(l.from == r.from) || !(l.to == r.to)) return diverge(check, "legs have different endpoint 1-cells");
  return compare_maps(check, l.map, r.map);
}

inline Verdict require_same_cell(const std::string& check, const Cell1& a, const Cell1& b) {
  if (a == b) return std::nullopt;
  return diverge(check, "1-cells " + a.name() + " and " + b.name() + " differ");
}

namespace detail {

inline Iso2 id2(const Cell1& x) { return Iso2::identity(x); }

inline std::vector<Cell1> zip_compose(const std::vector<Cell1>& xs, const std::vector<Cell1>& ys) {
  std::vector<Cell1> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(compose(xs[i], ys[i]));
  return out;
}

}  // namespace detail

// ---- bicategory and shadow ------------------------------------------------

/// ((WX)Y)Z → W(X(YZ)) along both sides of the pentagon.
inline Verdict check_pentagon(const Cell1& w, const Cell1& x, const Cell1& y, const Cell1& z) {
  using detail::id2;
  Cell1 wx = compose(w, x), xy = compose(x, y), yz = compose(y, z);
  Iso2 top = vcomp(associator(w, x, yz), associator(wx, y, z));
  Iso2 bottom =
      vcomp(hcomp(id2(w), associator(x, y, z)), vcomp(associator(w, xy, z), hcomp(associator(w, x, y), id2(z))));
  return compare_cells("pentagon", top.forward, bottom.forward);
}

/// (X U) Y → X Y, through α and ℓ or directly through r.
inline Verdict check_triangle(const Cell1& x, const Cell1& y) {
  using detail::id2;
  Cell1 u = unit(x.dst);
  Iso2 l = vcomp(hcomp(id2(x), left_unitor(y)), associator(x, u, y));
  Iso2 r = hcomp(right_unitor(x), id2(y));
  return compare_cells("triangle", l.forward, r.forward);
}

/// θ_{Y,X} ∘ θ_{X,Y} = id on ⟨X ⊙ Y⟩.
inline Verdict check_rotator_involution(const Cell1& x, const Cell1& y) {
  Bijection twice = compose(rotator(y, x), rotator(x, y));
  return compare_maps("theta_involution", twice.forward, FinMap::identity(twice.forward.source()));
}

/// ⟨(XY)Z⟩ → ⟨(ZX)Y⟩ for a cyclic triple.
inline Verdict check_shadow_assoc(const Cell1& x, const Cell1& y, const Cell1& z) {
  Cell1 xy = compose(x, y), yz = compose(y, z), zx = compose(z, x);
  Bijection short_leg = compose(shadow_on_iso(associator(z, x, y).inverse()), rotator(xy, z));
  Bijection long_leg = compose(rotator(y, zx),
                               compose(shadow_on_iso(associator(y, z, x)),
                                       compose(rotator(x, yz), shadow_on_iso(associator(x, y, z)))));
  if (auto v = compare_maps("shadow_assoc", short_leg.forward, long_leg.forward)) return v;
  if (auto v = check_rotator_involution(xy, z)) return v;
  return check_rotator_involution(x, yz);
}

/// ⟨ℓ⟩ = ⟨r⟩ ∘ θ and ⟨r⟩ = ⟨ℓ⟩ ∘ θ for an endo-1-cell X.
inline Verdict check_shadow_unitor(const Cell1& x) {
  Cell1 u = unit(x.src);
  if (auto v = compare_maps("shadow_unitor.left", shadow_on_iso(left_unitor(x)).forward,
                            compose(shadow_on_iso(right_unitor(x)), rotator(u, x)).forward))
    return v;
  if (auto v = compare_maps("shadow_unitor.right", shadow_on_iso(right_unitor(x)).forward,
                            compose(shadow_on_iso(left_unitor(x)), rotator(x, u)).forward))
    return v;
  return check_rotator_involution(u, x);
}

// ---- n-Fuller structure ---------------------------------------------------

/// (⊠M ⊙ ⊠N) ⊙ ⊠P → ⊠(M(NP)) for M_i: A_i → B_i, N_i: B_i → C_i, P_i: C_i → D_i.
inline Verdict check_box_assoc(const std::vector<Cell1>& ms, const std::vector<Cell1>& ns,
                               const std::vector<Cell1>& ps) {
  using detail::id2;
  using detail::zip_compose;
  const std::size_t n = ms.size();
  auto mn = zip_compose(ms, ns), np = zip_compose(ns, ps);
  Iso2 top = vcomp(m_box(ms, np), vcomp(hcomp(id2(box(ms)), m_box(ns, ps)), associator(box(ms), box(ns), box(ps))));
  std::vector<Iso2> alphas;
  for (std::size_t i = 0; i < n; ++i) alphas.push_back(associator(ms[i], ns[i], ps[i]));
  Iso2 bottom = vcomp(box(alphas), vcomp(m_box(mn, ps), hcomp(m_box(ms, ns), id2(box(ps)))));
  return compare_cells("fuller.assoc", top.forward, bottom.forward);
}

/// The two unit axioms of ⊠: ℓ against ⊠ℓ ∘ m ∘ (i⊙1), and r against
/// ⊠r ∘ m ∘ (1⊙i).
inline Verdict check_box_unit(const std::vector<Cell1>& ms) {
  using detail::id2;
  const std::size_t n = ms.size();
  BaseContext ctx = ms[0].context();
  auto as = detail::sources(ms), bs = detail::targets(ms);
  std::vector<Cell1> uas, ubs;
  std::vector<Iso2> ls, rs;
  for (std::size_t i = 0; i < n; ++i) {
    uas.push_back(unit(as[i]));
    ubs.push_back(unit(bs[i]));
    ls.push_back(left_unitor(ms[i]));
    rs.push_back(right_unitor(ms[i]));
  }
  Cell1 bm = box(ms);
  Iso2 left_route = vcomp(box(ls), vcomp(m_box(uas, ms), hcomp(i_box(ctx, as), id2(bm))));
  if (auto v = compare_cells("fuller.unit.left", left_unitor(bm).forward, left_route.forward)) return v;
  Iso2 right_route = vcomp(box(rs), vcomp(m_box(ms, ubs), hcomp(id2(bm), i_box(ctx, bs))));
  return compare_cells("fuller.unit.right", right_unitor(bm).forward, right_route.forward);
}

/// (T_A ⊙ ⊠M) ⊙ ⊠N → ⊠(M_{i+1} N_{i+1}) ⊙ T_C.
inline Verdict check_twist_composition(const std::vector<Cell1>& ms, const std::vector<Cell1>& ns) {
  using detail::id2;
  BaseContext ctx = ms[0].context();
  Cell1 ta = twist_cell(ctx, detail::sources(ms)).cell;
  Cell1 tb = twist_cell(ctx, detail::sources(ns)).cell;
  Cell1 tc = twist_cell(ctx, detail::targets(ns)).cell;
  auto mr = rotate_left(ms), nr = rotate_left(ns);
  Iso2 top = vcomp(vartheta(detail::zip_compose(ms, ns)),
                   vcomp(hcomp(id2(ta), m_box(ms, ns)), associator(ta, box(ms), box(ns))));
  Iso2 bottom = vcomp(hcomp(m_box(mr, nr), id2(tc)),
                      vcomp(associator(box(mr), box(nr), tc).inverse(),
                            vcomp(hcomp(id2(box(mr)), vartheta(ns)),
                                  vcomp(associator(box(mr), tb, box(ns)), hcomp(vartheta(ms), id2(box(ns)))))));
  return compare_cells("fuller.nat_comp", top.forward, bottom.forward);
}

/// U_{∏A_{i+1}} ⊙ T_A → T_A through ℓ, or through i_⊠, ϑ⁻¹, i_⊠⁻¹ and r.
inline Verdict check_twist_unit(const BaseContext& ctx, const std::vector<IndexedSpace>& as) {
  using detail::id2;
  const std::size_t n = as.size();
  Cell1 t = twist_cell(ctx, as).cell;
  std::vector<Cell1> us;
  for (std::size_t i = 0; i < n; ++i) us.push_back(unit(as[i]));
  Iso2 route = vcomp(right_unitor(t), vcomp(hcomp(id2(t), i_box(ctx, as)).inverse(),
                                            vcomp(vartheta(us).inverse(), hcomp(i_box(ctx, rotate_left(as)), id2(t)))));
  return compare_cells("fuller.nat_unit", left_unitor(t).forward, route.forward);
}

/// ϑ is natural in the M_i: ϑ ∘ (1 ⊙ ⊠φ) = (⊠φ_{i+1} ⊙ 1) ∘ ϑ.
inline Verdict check_twist_naturality(const std::vector<Cell2>& phis) {
  std::vector<Cell1> from, to;
  for (const auto& p : phis) {
    from.push_back(p.from);
    to.push_back(p.to);
  }
  BaseContext ctx = from[0].context();
  Cell1 ta = twist_cell(ctx, detail::sources(from)).cell;
  Cell1 tb = twist_cell(ctx, detail::targets(from)).cell;
  Cell2 l = vcomp(vartheta(to).forward, hcomp(Cell2::identity(ta), box(phis)));
  Cell2 r = vcomp(hcomp(box(rotate_left(phis)), Cell2::identity(tb)), vartheta(from).forward);
  return compare_cells("fuller.naturality", l, r);
}

/// The twist compatibility square for R_i: A_{i-1} → B_i, S_i: B_i → A_i
/// (so R_i ⊙ S_i: A_{i-1} → A_i). Both legs run from ⟨T ⊙ (⊠R ⊙ ⊠S)⟩ to
/// ⟨(S_1R_2) ⊙ ... ⊙ (S_nR_1)⟩.
inline Verdict check_twist_shadow(const std::vector<Cell1>& rs, const std::vector<Cell1>& ss) {
  using detail::id2;
  const int n = static_cast<int>(rs.size());
  BaseContext ctx = rs[0].context();
  Cell1 ta = twist_cell(ctx, detail::sources(rs)).cell;  // T_{(A_{i-1})}
  Cell1 tb = twist_cell(ctx, detail::sources(ss)).cell;  // T_{(B_i)}
  auto rr = rotate_left(rs);
  auto qs = detail::zip_compose(rs, ss);
  auto qps = detail::zip_compose(ss, rr);

  // Leaves R_1, S_1, ..., R_n, S_n.
  std::vector<Cell1> leaves;
  for (int i = 0; i < n; ++i) {
    leaves.push_back(rs[i]);
    leaves.push_back(ss[i]);
  }
  auto pairs_from = [](int first, int count, int total) {
    auto pair_at = [&](int k) {
      int a = (first + 2 * k) % total, b = (first + 2 * k + 1) % total;
      return Bracketing::join(Bracketing::single(a), Bracketing::single(b));
    };
    Bracketing t = pair_at(0);
    for (int k = 1; k < count; ++k) t = Bracketing::join(t, pair_at(k));
    return t;
  };
  Bracketing start = pairs_from(0, n, 2 * n);
  Bracketing rest = Bracketing::right_nested(1, 2 * n);
  Bracketing split = Bracketing::join(Bracketing::single(0), rest);
  Bracketing turned = Bracketing::join(rest, Bracketing::single(0));
  Bracketing finish = pairs_from(1, n, 2 * n);

  Bijection top = compose(
      shadow_on_iso(rebracket(leaves, turned, finish)),
      compose(rotator(leaves[0], compose_tree(leaves, rest)),
              compose(shadow_on_iso(rebracket(leaves, start, split)),
                      compose(tau(qs), shadow_on_iso(hcomp(id2(ta), m_box(rs, ss)))))));

  Cell1 bs = box(ss), brr = box(rr);
  Bijection left = compose(
      tau(qps),
      compose(shadow_on_iso(hcomp(id2(tb), m_box(ss, rr))),
              compose(shadow_on_iso(associator(tb, bs, brr)),
                      compose(rotator(brr, compose(tb, bs)),
                              compose(shadow_on_iso(associator(brr, tb, bs)),
                                      compose(shadow_on_iso(hcomp(vartheta(rs), id2(bs))),
                                              shadow_on_iso(associator(ta, box(rs), bs).inverse())))))));
  return compare_maps("fuller.twist", top.forward, left.forward);
}

// ---- base change ----------------------------------------------------------

/// ([h][g])[f] → [hgf] for f: A → B, g: B → C, h: C → D.
inline Verdict check_bc_assoc(const SpaceMap& f, const SpaceMap& g, const SpaceMap& h) {
  using detail::id2;
  Cell1 bf = base_change(f).cell, bg = base_change(g).cell, bh = base_change(h).cell;
  SpaceMap gf = compose(g, f), hg = compose(h, g);
  Iso2 top = vcomp(m_bc(h, gf), vcomp(hcomp(id2(bh), m_bc(g, f)), associator(bh, bg, bf)));
  Iso2 bottom = vcomp(m_bc(hg, f), hcomp(m_bc(h, g), id2(bf)));
  return compare_cells("bc.assoc", top.forward, bottom.forward);
}

/// ℓ = m ∘ (i ⊙ 1) on U ⊙ [f], and r = m ∘ (1 ⊙ i) on [f] ⊙ U.
inline Verdict check_bc_unit(const SpaceMap& f) {
  using detail::id2;
  Cell1 bf = base_change(f).cell;
  SpaceMap ida = SpaceMap::identity(f.source), idb = SpaceMap::identity(f.target);
  if (auto v = compare_cells("bc.unit.left", left_unitor(bf).forward,
                             vcomp(m_bc(idb, f), hcomp(i_bc(f.target), id2(bf))).forward))
    return v;
  return compare_cells("bc.unit.right", right_unitor(bf).forward,
                       vcomp(m_bc(f, ida), hcomp(id2(bf), i_bc(f.source))).forward);
}

/// ⊠[g_i] ⊙ ⊠[f_i] → [∏(g_i f_i)] through ν ⊙ ν and m_[], or through m_⊠,
/// ⊠m_[] and ν. Also checks [∏g ∘ ∏f] = [∏(g f)].
inline Verdict check_bc_vertical_composition(const BaseContext& ctx, const std::vector<SpaceMap>& fs,
                                             const std::vector<SpaceMap>& gs) {
  std::vector<Cell1> bfs, bgs;
  std::vector<SpaceMap> gfs;
  std::vector<Iso2> ms;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    bfs.push_back(base_change(fs[i]).cell);
    bgs.push_back(base_change(gs[i]).cell);
    gfs.push_back(compose(gs[i], fs[i]));
    ms.push_back(m_bc(gs[i], fs[i]));
  }
  SpaceMap pg = product_map(ctx, gs), pf = product_map(ctx, fs);
  if (auto v = require_same_cell("bc.vert_comp.product", base_change(compose(pg, pf)).cell,
                                 base_change(product_map(ctx, gfs)).cell))
    return v;
  Iso2 top = vcomp(m_bc(pg, pf), hcomp(nu(ctx, gs), nu(ctx, fs)));
  Iso2 bottom = vcomp(nu(ctx, gfs), vcomp(box(ms), m_box(bgs, bfs)));
  return compare_cells("bc.vert_comp", top.forward, bottom.forward);
}

/// ν ∘ i_⊠ = i_[] on U_{∏A_i}, where every f_i is an identity.
inline Verdict check_bc_vertical_unit(const BaseContext& ctx, const std::vector<IndexedSpace>& as) {
  std::vector<SpaceMap> ids;
  for (const auto& a : as) ids.push_back(SpaceMap::identity(a));
  std::vector<Cell1> units, bcs;
  for (const auto& a : as) {
    units.push_back(unit(a));
    bcs.push_back(base_change(SpaceMap::identity(a)).cell);
  }
  if (auto v = require_same_cell("bc.vert_unit.box", box(units), box(bcs))) return v;
  IndexedSpace prod = fiber_product(ctx, as);
  Iso2 route = vcomp(nu(ctx, ids), i_box(ctx, as));
  return compare_cells("bc.vert_unit", route.forward, i_bc(prod).forward);
}

/// T_{(A_i)} = [Γ] structurally.
inline Verdict check_twist_is_base_change(const BaseContext& ctx, const std::vector<IndexedSpace>& as) {
  return require_same_cell("twist_equals_base_change", twist_cell(ctx, as).cell,
                           base_change(shift_map(ctx, as)).cell);
}

/// T_B ⊙ ⊠[p_i] → [Γ_B ∘ ∏p_i] for p_i: E_i → B_i, through ϑ or through ν.
inline Verdict check_bc_final(const BaseContext& ctx, const std::vector<SpaceMap>& ps) {
  using detail::id2;
  std::vector<IndexedSpace> es, bs;
  std::vector<Cell1> cells;
  for (const auto& p : ps) {
    es.push_back(p.source);
    bs.push_back(p.target);
    cells.push_back(base_change(p).cell);
  }
  if (auto v = check_twist_is_base_change(ctx, bs)) return v;
  if (auto v = check_twist_is_base_change(ctx, es)) return v;
  SpaceMap gamma_b = shift_map(ctx, bs), gamma_e = shift_map(ctx, es);
  SpaceMap prod = product_map(ctx, ps), prod_shifted = product_map(ctx, rotate_left(ps));
  SpaceMap l = compose(prod_shifted, gamma_e), r = compose(gamma_b, prod);
  if (!(l.map == r.map)) return diverge("bc.final.square", "shift does not commute with the product map");
  Cell1 te = twist_cell(ctx, es).cell, tb = twist_cell(ctx, bs).cell;
  Iso2 top = vcomp(m_bc(prod_shifted, gamma_e), vcomp(hcomp(nu(ctx, rotate_left(ps)), id2(te)), vartheta(cells)));
  Iso2 bottom = vcomp(m_bc(gamma_b, prod), hcomp(id2(tb), nu(ctx, ps)));
  return compare_cells("bc.final", top.forward, bottom.forward);
}

}  // namespace spanshadow
