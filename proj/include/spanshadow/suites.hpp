#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spanshadow/diagrams.hpp"
#include "spanshadow/equivariant.hpp"
#include "spanshadow/json_io.hpp"
#include "spanshadow/random.hpp"

namespace spanshadow {

struct GroupChoice {
  FinGroup group;
  Subgroup subgroup;
};

struct SuiteParams {
  std::uint64_t seed = 1;
  std::size_t instances = 100;
  std::size_t n = 0;  // arity of n-ary suites; 0 cycles instance k through 1 + k mod 3
  GenParams gen;
  std::optional<GroupChoice> group;  // equivariant suites; defaults to C2 with H = C2

  std::size_t arity_for(std::size_t index) const { return n ? n : 1 + index % 3; }
};

struct Failure {
  std::size_t index;
  std::uint64_t seed;
  Json instance;
  Divergence divergence;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::string context;
  std::string group;
  std::string subgroup;
  std::vector<Failure> failures;

  bool passed() const { return failures.empty(); }

  Json to_json() const {
    Json fs = Json::array();
    for (const auto& f : failures)
      fs.push_back({{"index", f.index},
                    {"instance_seed", f.seed},
                    {"instance", f.instance},
                    {"divergence", spanshadow::to_json(f.divergence)}});
    Json j = {{"suite", suite}, {"seed", seed}, {"instances", instances}, {"context", context}};
    if (!group.empty()) {
      j["group"] = group;
      j["subgroup"] = subgroup;
    }
    j["failures"] = fs;
    return j;
  }
};

/// Runs one instance: draws inputs from the generator, records them in
/// `instance`, and returns where the diagram fails to commute, if anywhere.
using InstanceFn = std::function<Verdict(Rng&, const SuiteParams&, std::size_t, Json&)>;

struct Suite {
  std::string name;
  std::string summary;
  bool equivariant = false;
  InstanceFn run;
};

namespace detail {

inline Json cells_json(const std::vector<Cell1>& cells) {
  Json j = Json::array();
  for (const auto& c : cells) j.push_back(to_json(c));
  return j;
}

inline Json spaces_json(const std::vector<IndexedSpace>& spaces) {
  Json j = Json::array();
  for (const auto& s : spaces) j.push_back({{"set", to_json(s.space)}, {"over", map_pairs(s.to_base)}});
  return j;
}

inline Json maps_json(const std::vector<SpaceMap>& maps) {
  Json j = Json::array();
  for (const auto& m : maps) j.push_back(to_json(m.map));
  return j;
}

inline Json gaction_json(const GAction& a) {
  Json rows = Json::array();
  for (std::size_t g = 0; g < a.group().order(); ++g)
    for (std::size_t i = 0; i < a.set().size(); ++i)
      rows.push_back(Json::array({a.group().label(g), to_json(a.set().at(i)), to_json(a.set().at(a.apply_index(g, i)))}));
  return rows;
}

inline Json gcell_json(const GCell1& x) {
  Json j = to_json(x.cell);
  j["action"] = gaction_json(x.action);
  return j;
}

inline std::string context_name(const BaseContext& ctx) {
  return ctx.is_absolute() ? std::string("*") : ctx.base.name() + "(" + std::to_string(ctx.base.size()) + ")";
}

inline std::string idx(const std::string& prefix, std::size_t i) { return prefix + std::to_string(i); }

/// Cells M_i: A_i → B_i with random endpoints.
inline std::vector<Cell1> random_row(Rng& rng, const GenParams& p, const std::string& name,
                                     const std::vector<IndexedSpace>& src, const std::vector<IndexedSpace>& dst) {
  std::vector<Cell1> out;
  for (std::size_t i = 0; i < src.size(); ++i) out.push_back(random_cell(rng, p, idx(name, i), src[i], dst[i]));
  return out;
}

inline std::vector<IndexedSpace> random_spaces(Rng& rng, const GenParams& p, const std::string& name, std::size_t n) {
  std::vector<IndexedSpace> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_space(rng, p, idx(name, i)));
  return out;
}

/// n-ary suites draw smaller 0-cells as n grows so that boxed cells stay at
/// desk scale; totals of ⊠ grow like the product of the factors.
inline GenParams scaled(const GenParams& p, std::size_t n) {
  GenParams q = p;
  if (n >= 3) {
    q.max_size = std::min(p.max_size, 2);
    q.max_total = std::min(p.max_total, 3);
  } else if (n == 2) {
    q.max_size = std::min(p.max_size, 3);
    q.max_total = std::min(p.max_total, 4);
  }
  return q;
}

inline GroupChoice group_choice(const SuiteParams& p) {
  if (p.group) return *p.group;
  FinGroup c2 = FinGroup::cyclic(2);
  return {c2, Subgroup::whole(c2)};
}

}  // namespace detail

// ---- registry ---------------------------------------------------------------

inline const std::vector<Suite>& all_suites() {
  using namespace detail;
  static const std::vector<Suite> suites = [] {
    std::vector<Suite> s;

    s.push_back({"pentagon", "associator pentagon", false, [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
                   auto a = random_spaces(rng, p.gen, "A", 5);
                   Cell1 w = random_cell(rng, p.gen, "W", a[0], a[1]), x = random_cell(rng, p.gen, "X", a[1], a[2]);
                   Cell1 y = random_cell(rng, p.gen, "Y", a[2], a[3]), z = random_cell(rng, p.gen, "Z", a[3], a[4]);
                   inst = {{"spaces", spaces_json(a)}, {"cells", cells_json({w, x, y, z})}};
                   return check_pentagon(w, x, y, z);
                 }});
    s.push_back({"triangle", "unit triangle", false, [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
                   auto a = random_spaces(rng, p.gen, "A", 3);
                   Cell1 x = random_cell(rng, p.gen, "X", a[0], a[1]), y = random_cell(rng, p.gen, "Y", a[1], a[2]);
                   inst = {{"spaces", spaces_json(a)}, {"cells", cells_json({x, y})}};
                   return check_triangle(x, y);
                 }});
    s.push_back({"shadow_assoc", "shadow associator axiom and theta involution", false,
                 [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
                   auto a = random_spaces(rng, p.gen, "A", 3);
                   Cell1 x = random_cell(rng, p.gen, "X", a[0], a[1]), y = random_cell(rng, p.gen, "Y", a[1], a[2]);
                   Cell1 z = random_cell(rng, p.gen, "Z", a[2], a[0]);
                   inst = {{"spaces", spaces_json(a)}, {"cells", cells_json({x, y, z})}};
                   return check_shadow_assoc(x, y, z);
                 }});
    s.push_back({"shadow_unitor", "shadow unitor axiom", false, [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
                   auto a = random_spaces(rng, p.gen, "A", 1);
                   Cell1 x = random_cell(rng, p.gen, "X", a[0], a[0]);
                   inst = {{"spaces", spaces_json(a)}, {"cells", cells_json({x})}};
                   return check_shadow_unitor(x);
                 }});

    s.push_back({"fuller.assoc", "box associator axiom", false, [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   GenParams g = scaled(p.gen, n);
                   auto a = random_spaces(rng, g, "A", n), b = random_spaces(rng, g, "B", n);
                   auto c = random_spaces(rng, g, "C", n), d = random_spaces(rng, g, "D", n);
                   auto ms = random_row(rng, g, "M", a, b), ns = random_row(rng, g, "N", b, c), ps = random_row(rng, g, "P", c, d);
                   inst = {{"n", n}, {"M", cells_json(ms)}, {"N", cells_json(ns)}, {"P", cells_json(ps)}};
                   return check_box_assoc(ms, ns, ps);
                 }});
    s.push_back({"fuller.unit", "box unit axioms", false, [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   GenParams g = scaled(p.gen, n);
                   auto a = random_spaces(rng, g, "A", n), b = random_spaces(rng, g, "B", n);
                   auto ms = random_row(rng, g, "M", a, b);
                   inst = {{"n", n}, {"M", cells_json(ms)}};
                   return check_box_unit(ms);
                 }});
    s.push_back({"fuller.nat_comp", "twist composition axiom", false,
                 [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   GenParams g = scaled(p.gen, n);
                   auto a = random_spaces(rng, g, "A", n), b = random_spaces(rng, g, "B", n), c = random_spaces(rng, g, "C", n);
                   auto ms = random_row(rng, g, "M", a, b), ns = random_row(rng, g, "N", b, c);
                   inst = {{"n", n}, {"M", cells_json(ms)}, {"N", cells_json(ns)}};
                   return check_twist_composition(ms, ns);
                 }});
    s.push_back({"fuller.nat_unit", "twist unit axiom", false, [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   auto a = random_spaces(rng, scaled(p.gen, n), "A", n);
                   inst = {{"n", n}, {"spaces", spaces_json(a)}};
                   return check_twist_unit(p.gen.ctx, a);
                 }});
    s.push_back({"fuller.twist", "twist and shadow compatibility", false,
                 [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   GenParams g = scaled(p.gen, n);
                   auto a = random_spaces(rng, g, "A", n), b = random_spaces(rng, g, "B", n);
                   std::vector<Cell1> rs, ss;
                   for (std::size_t i = 0; i < n; ++i) rs.push_back(random_cell(rng, g, idx("R", i), a[(i + n - 1) % n], b[i]));
                   for (std::size_t i = 0; i < n; ++i) ss.push_back(random_cell(rng, g, idx("S", i), b[i], a[i]));
                   inst = {{"n", n}, {"R", cells_json(rs)}, {"S", cells_json(ss)}};
                   if (auto v = check_twist_is_base_change(p.gen.ctx, a)) return v;
                   if (auto v = check_twist_is_base_change(p.gen.ctx, b)) return v;
                   return check_twist_shadow(rs, ss);
                 }});
    s.push_back({"fuller.naturality", "naturality of vartheta", false,
                 [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   GenParams g = scaled(p.gen, n);
                   auto a = random_spaces(rng, g, "A", n), b = random_spaces(rng, g, "B", n);
                   std::vector<Cell2> phis;
                   for (std::size_t i = 0; i < n; ++i) {
                     Cell1 m = random_cell(rng, g, idx("M", i), a[i], b[i]);
                     std::optional<Cell2> phi;
                     for (int t = 0; t < 8 && !phi; ++t) phi = random_2cell(rng, m, random_cell(rng, g, idx("N", i), a[i], b[i]));
                     phis.push_back(phi ? *phi : random_automorphism(rng, m).forward);
                   }
                   Json maps = Json::array();
                   for (const auto& ph : phis)
                     maps.push_back({{"from", to_json(ph.from)}, {"to", to_json(ph.to)}, {"map", map_pairs(ph.map)}});
                   inst = {{"n", n}, {"two_cells", maps}};
                   return check_twist_naturality(phis);
                 }});

    s.push_back({"bc.assoc", "base change associativity", false, [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
                   IndexedSpace d = random_space(rng, p.gen, "D");
                   SpaceMap h = random_space_into(rng, p.gen, "C", d);
                   SpaceMap g = random_space_into(rng, p.gen, "B", h.source);
                   SpaceMap f = random_space_into(rng, p.gen, "A", g.source);
                   inst = {{"maps", maps_json({f, g, h})}};
                   return check_bc_assoc(f, g, h);
                 }});
    s.push_back({"bc.unit", "base change unit", false, [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
                   SpaceMap f = random_space_into(rng, p.gen, "A", random_space(rng, p.gen, "B"));
                   inst = {{"maps", maps_json({f})}};
                   return check_bc_unit(f);
                 }});
    s.push_back({"bc.vert_comp", "nu and composition", false, [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   GenParams g = scaled(p.gen, n);
                   std::vector<SpaceMap> fs, gs;
                   for (std::size_t i = 0; i < n; ++i) {
                     gs.push_back(random_space_into(rng, g, idx("B", i), random_space(rng, g, idx("C", i))));
                     fs.push_back(random_space_into(rng, g, idx("A", i), gs.back().source));
                   }
                   inst = {{"n", n}, {"f", maps_json(fs)}, {"g", maps_json(gs)}};
                   return check_bc_vertical_composition(p.gen.ctx, fs, gs);
                 }});
    s.push_back({"bc.vert_unit", "nu and units", false, [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   auto a = random_spaces(rng, scaled(p.gen, n), "A", n);
                   inst = {{"n", n}, {"spaces", spaces_json(a)}};
                   return check_bc_vertical_unit(p.gen.ctx, a);
                 }});
    s.push_back({"bc.final", "twist, nu and base change", false, [](Rng& rng, const SuiteParams& p, std::size_t k, Json& inst) {
                   std::size_t n = p.arity_for(k);
                   GenParams g = scaled(p.gen, n);
                   std::vector<SpaceMap> ps;
                   for (std::size_t i = 0; i < n; ++i)
                     ps.push_back(random_space_into(rng, g, idx("E", i), random_space(rng, g, idx("B", i))));
                   inst = {{"n", n}, {"p", maps_json(ps)}};
                   return check_bc_final(p.gen.ctx, ps);
                 }});

    auto eq = [&s](std::string name, std::string summary, InstanceFn fn) {
      s.push_back({std::move(name), std::move(summary), true, std::move(fn)});
    };
    eq("equivariant.assoc", "Phi^H and the associator", [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
      auto [g, h] = group_choice(p);
      Weyl w = weyl(g, h);
      GSpace a = random_gspace(rng, p.gen, g, "A"), b = random_gspace(rng, p.gen, g, "B");
      GSpace c = random_gspace(rng, p.gen, g, "C"), d = random_gspace(rng, p.gen, g, "D");
      GCell1 x = random_gcell(rng, p.gen, "X", a, b), y = random_gcell(rng, p.gen, "Y", b, c), z = random_gcell(rng, p.gen, "Z", c, d);
      inst = {{"cells", {gcell_json(x), gcell_json(y), gcell_json(z)}}};
      GCell1 px = geometric_fixed_points(x, h, w), py = geometric_fixed_points(y, h, w), pz = geometric_fixed_points(z, h, w);
      GCell1 xy = gcompose(x, y), yz = gcompose(y, z);
      Iso2 phi_alpha = phi_on_iso(associator(x.cell, y.cell, z.cell), gcompose(xy, z), gcompose(x, yz), h, w);
      Iso2 l = vcomp(phi_alpha, vcomp(m_phi(xy, z, h, w), hcomp(m_phi(x, y, h, w), Iso2::identity(pz.cell))));
      Iso2 r = vcomp(m_phi(x, yz, h, w), vcomp(hcomp(Iso2::identity(px.cell), m_phi(y, z, h, w)),
                                               associator(px.cell, py.cell, pz.cell)));
      return compare_cells("equivariant.assoc", l.forward, r.forward);
    });
    eq("equivariant.unit", "Phi^H and the unitors", [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
      auto [g, h] = group_choice(p);
      Weyl w = weyl(g, h);
      GSpace a = random_gspace(rng, p.gen, g, "A"), b = random_gspace(rng, p.gen, g, "B");
      GCell1 x = random_gcell(rng, p.gen, "X", a, b);
      inst = {{"cells", {gcell_json(x)}}};
      GCell1 px = geometric_fixed_points(x, h, w);
      GCell1 ux = gcompose(gunit(a), x), xu = gcompose(x, gunit(b));
      Iso2 l = vcomp(phi_on_iso(left_unitor(x.cell), ux, x, h, w),
                     vcomp(m_phi(gunit(a), x, h, w), hcomp(i_phi(a, h, w), Iso2::identity(px.cell))));
      if (auto v = compare_cells("equivariant.unit.left", left_unitor(px.cell).forward, l.forward)) return v;
      Iso2 r = vcomp(phi_on_iso(right_unitor(x.cell), xu, x, h, w),
                     vcomp(m_phi(x, gunit(b), h, w), hcomp(Iso2::identity(px.cell), i_phi(b, h, w))));
      return compare_cells("equivariant.unit.right", right_unitor(px.cell).forward, r.forward);
    });
    eq("equivariant.rotator", "Phi^H and the rotator", [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
      auto [g, h] = group_choice(p);
      Weyl w = weyl(g, h);
      GSpace a = random_gspace(rng, p.gen, g, "A"), b = random_gspace(rng, p.gen, g, "B");
      GCell1 x = random_gcell(rng, p.gen, "X", a, b), y = random_gcell(rng, p.gen, "Y", b, a);
      inst = {{"cells", {gcell_json(x), gcell_json(y)}}};
      GCell1 px = geometric_fixed_points(x, h, w), py = geometric_fixed_points(y, h, w);
      GCell1 xy = gcompose(x, y), yx = gcompose(y, x);
      FinMap phi_theta = phi_on_map(rotator(x.cell, y.cell).forward, gshadow(xy), gshadow(yx), h, w);
      FinMap l = compose(phi_theta, compose(s_phi(xy, h, w).forward, shadow_on_iso(m_phi(x, y, h, w)).forward));
      FinMap r = compose(s_phi(yx, h, w).forward,
                         compose(shadow_on_iso(m_phi(y, x, h, w)).forward, rotator(px.cell, py.cell).forward));
      return compare_maps("equivariant.rotator", tabulate(l), tabulate(r));
    });
    eq("equivariant.icon", "eta against units and composition", [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
      auto [g, h] = group_choice(p);
      Weyl w = weyl(g, h);
      GSpace c = random_gspace(rng, p.gen, g, "C", true);
      GSpace b = random_gspace(rng, p.gen, g, "B", true);
      GSpace a = random_gspace(rng, p.gen, g, "A");
      auto gm = random_gmap(rng, b, c);
      auto fm = random_gmap(rng, a, b);
      if (!gm || !fm) return diverge("equivariant.icon", "generator could not build equivariant maps");
      inst = {{"f", to_json(fm->map.map)}, {"g", to_json(gm->map.map)},
              {"actions", {gaction_json(a.action), gaction_json(b.action), gaction_json(c.action)}}};
      // Unit: η(id) ∘ i_Φ is the identity of U_{A^H} = [id_{A^H}].
      GSpace ah = fixed_points(a, h, w);
      Iso2 unit_route = vcomp(eta(GMap::identity(a), h, w), i_phi(a, h, w));
      if (auto v = compare_cells("equivariant.icon.unit", unit_route.forward, Iso2::identity(unit(ah.space)).forward)) return v;
      // Composition.
      GCell1 bg = gbase_change(*gm), bf = gbase_change(*fm);
      GMap gf = compose(*gm, *fm);
      Iso2 phi_m = phi_on_iso(m_bc(gm->map, fm->map), gcompose(bg, bf), gbase_change(gf), h, w);
      Iso2 l = vcomp(eta(gf, h, w), vcomp(phi_m, m_phi(bg, bf, h, w)));
      GMap gh = fixed_map(*gm, h, w), fh = fixed_map(*fm, h, w);
      Iso2 r = vcomp(m_bc(gh.map, fh.map), hcomp(eta(*gm, h, w), eta(*fm, h, w)));
      return compare_cells("equivariant.icon.comp", l.forward, r.forward);
    });
    eq("equivariant.smash", "Phi^H commutes with external products", [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
      auto [g, h] = group_choice(p);
      Weyl w = weyl(g, h);
      GSpace a = random_gspace(rng, p.gen, g, "A"), c = random_gspace(rng, p.gen, g, "C");
      GParam x = random_gparam(rng, p.gen, "X", a), y = random_gparam(rng, p.gen, "Y", c);
      inst = {{"X", to_json(x.set)}, {"Y", to_json(y.set)}};
      if (auto why = same_parametrized(phi(gexternal(p.gen.ctx, x, y), h, w).set,
                                       gexternal(p.gen.ctx, phi(x, h, w), phi(y, h, w)).set))
        return diverge("equivariant.smash", *why);
      return Verdict{};
    });
    eq("equivariant.pullback", "Phi^H commutes with pullback", [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
      auto [g, h] = group_choice(p);
      Weyl w = weyl(g, h);
      GSpace c = random_gspace(rng, p.gen, g, "C", true), a = random_gspace(rng, p.gen, g, "A");
      auto f = random_gmap(rng, a, c);
      if (!f) return diverge("equivariant.pullback", "generator could not build an equivariant map");
      GParam y = random_gparam(rng, p.gen, "Y", c);
      inst = {{"f", to_json(f->map.map)}, {"Y", to_json(y.set)}};
      if (auto why = same_parametrized(phi(gpullback(*f, y), h, w).set, gpullback(fixed_map(*f, h, w), phi(y, h, w)).set))
        return diverge("equivariant.pullback", *why);
      return Verdict{};
    });
    eq("equivariant.pushforward", "Phi^H commutes with pushforward",
       [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
         auto [g, h] = group_choice(p);
         Weyl w = weyl(g, h);
         GSpace c = random_gspace(rng, p.gen, g, "C", true), a = random_gspace(rng, p.gen, g, "A");
         auto f = random_gmap(rng, a, c);
         if (!f) return diverge("equivariant.pushforward", "generator could not build an equivariant map");
         GParam x = random_gparam(rng, p.gen, "X", a);
         inst = {{"f", to_json(f->map.map)}, {"X", to_json(x.set)}};
         if (auto why = same_parametrized(phi(gpushforward(*f, x), h, w).set,
                                          gpushforward(fixed_map(*f, h, w), phi(x, h, w)).set))
           return diverge("equivariant.pushforward", *why);
         return Verdict{};
       });
    eq("equivariant.naturality", "m_Phi and s_Phi natural in H-maps",
       [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
         auto [g, h] = group_choice(p);
         Weyl w = weyl(g, h);
         GSpace a = random_gspace(rng, p.gen, g, "A"), b = random_gspace(rng, p.gen, g, "B");
         GCell1 x = random_gcell(rng, p.gen, "X", a, b), y = random_gcell(rng, p.gen, "Y", b, a);
         GCell1 x2 = random_gcell(rng, p.gen, "X'", a, b), y2 = random_gcell(rng, p.gen, "Y'", b, a);
         auto phi = random_h_2cell(rng, x, x2, h);
         auto psi = random_h_2cell(rng, y, y2, h);
         if (!phi) {
           x2 = x;
           phi = Cell2::identity(x.cell);
         }
         if (!psi) {
           y2 = y;
           psi = Cell2::identity(y.cell);
         }
         inst = {{"cells", {gcell_json(x), gcell_json(y), gcell_json(x2), gcell_json(y2)}},
                 {"phi", map_pairs(phi->map)}, {"psi", map_pairs(psi->map)}};
         Cell2 l = vcomp(m_phi(x2, y2, h, w).forward,
                         hcomp(phi_on_2cell(*phi, x, x2, h, w), phi_on_2cell(*psi, y, y2, h, w)));
         Cell2 r = vcomp(phi_on_2cell(hcomp(*phi, *psi), gcompose(x, y), gcompose(x2, y2), h, w), m_phi(x, y, h, w).forward);
         if (auto v = compare_cells("equivariant.naturality.m", l, r)) return v;
         GCell1 xy = gcompose(x, y), xy2 = gcompose(x2, y2);
         Cell2 both = hcomp(*phi, *psi);
         FinMap sl = compose(s_phi(xy2, h, w).forward, shadow_on_2cells(phi_on_2cell(both, xy, xy2, h, w)));
         FinMap sr = compose(phi_on_map(shadow_on_2cells(both), gshadow(xy), gshadow(xy2), h, w), s_phi(xy, h, w).forward);
         return compare_maps("equivariant.naturality.s", tabulate(sl), tabulate(sr));
       });
    eq("equivariant.restrict", "restriction is strict", [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
      auto [g, h] = group_choice(p);
      GSpace a = random_gspace(rng, p.gen, g, "A"), b = random_gspace(rng, p.gen, g, "B", true);
      GCell1 x = random_gcell(rng, p.gen, "X", a, b), y = random_gcell(rng, p.gen, "Y", b, a);
      auto f = random_gmap(rng, a, b);
      inst = {{"cells", {gcell_json(x), gcell_json(y)}}};
      auto same_action = [](const GAction& l, const GAction& r) {
        return l.set() == r.set() && l.group() == r.group() && is_equivariant(FinMap::identity(l.set()), l, r);
      };
      GCell1 rc = restrict(gcompose(x, y), h), cr = gcompose(restrict(x, h), restrict(y, h));
      if (!(rc.cell == cr.cell) || !same_action(rc.action, cr.action)) return diverge("equivariant.restrict.m", "composites differ");
      GCell1 ru = restrict(gunit(a), h), ur = gunit(restrict(a, h));
      if (!(ru.cell == ur.cell) || !same_action(ru.action, ur.action)) return diverge("equivariant.restrict.i", "units differ");
      GAction rs = gshadow(restrict(gcompose(x, y), h)), sr = gshadow(gcompose(x, y)).restricted(h);
      if (!same_action(rs, sr)) return diverge("equivariant.restrict.s", "shadows differ");
      if (f) {
        GCell1 rb = restrict(gbase_change(*f), h);
        GMap rf(restrict(f->source, h), restrict(f->target, h), f->map.map);
        GCell1 br = gbase_change(rf);
        if (!(rb.cell == br.cell) || !same_action(rb.action, br.action))
          return diverge("equivariant.restrict.eta", "base change cells differ");
      }
      return Verdict{};
    });

    s.push_back({"selftest.broken", "associator against a perturbed copy; fails by construction", false,
                 [](Rng& rng, const SuiteParams& p, std::size_t, Json& inst) {
                   auto a = random_spaces(rng, p.gen, "A", 4);
                   Cell1 x = random_cell(rng, p.gen, "X", a[0], a[1]), y = random_cell(rng, p.gen, "Y", a[1], a[2]);
                   Cell1 z = random_cell(rng, p.gen, "Z", a[2], a[3]);
                   inst = {{"cells", cells_json({x, y, z})}};
                   Iso2 alpha = associator(x, y, z);
                   Iso2 twist = random_automorphism(rng, alpha.from());
                   return compare_cells("selftest.broken", alpha.forward, vcomp(alpha, twist).forward);
                 }});
    return s;
  }();
  return suites;
}

inline const Suite* find_suite(const std::string& name) {
  for (const auto& s : all_suites())
    if (s.name == name) return &s;
  return nullptr;
}

/// Worker threads for suite runs: SPANSHADOW_WORKERS, default 1.
inline unsigned worker_count() {
  const char* env = std::getenv("SPANSHADOW_WORKERS");
  if (!env) return 1;
  long v = std::strtol(env, nullptr, 10);
  return v < 1 ? 1u : static_cast<unsigned>(std::min(v, 64L));
}

/// Runs instances 0..N-1; instance k draws from its own seed, so reports do
/// not depend on how instances are split across workers.
inline SuiteReport run_suite(const Suite& suite, const SuiteParams& p, unsigned workers = worker_count()) {
  std::vector<std::optional<Failure>> slots(p.instances);
  auto work = [&](unsigned w) {
    for (std::size_t k = w; k < p.instances; k += workers) {
      std::uint64_t seed = instance_seed(p.seed, k);
      Rng rng(seed);
      Json inst;
      try {
        if (auto v = suite.run(rng, p, k, inst)) slots[k] = Failure{k, seed, inst, *v};
      } catch (const std::exception& e) {
        slots[k] = Failure{k, seed, inst, *diverge(suite.name, std::string("construction failed: ") + e.what())};
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  SuiteReport r;
  r.suite = suite.name;
  r.seed = p.seed;
  r.instances = p.instances;
  r.context = detail::context_name(p.gen.ctx);
  if (suite.equivariant) {
    auto choice = detail::group_choice(p);
    r.group = choice.group.name();
    r.subgroup = choice.subgroup.name;
  }
  for (auto& s : slots)
    if (s) r.failures.push_back(std::move(*s));
  return r;
}

}  // namespace spanshadow
