// Acceptance run: one pass/fail line per criterion. Exit status is the number
// of failing criteria (0 when all pass).
//
//   acceptance [--seed S] [--only K]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "spanshadow/invariants.hpp"
#include "spanshadow/models.hpp"
#include "spanshadow/suites.hpp"

using namespace spanshadow;
using testing_helpers::space;
using testing_helpers::table;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void fail(const std::string& why) {
    if (ok) note.str("");
    if (ok) note << why;
    ok = false;
  }
};

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::uint64_t g_seed = 1;

const std::vector<BaseContext>& contexts() {
  static const std::vector<BaseContext> cs{BaseContext::absolute(), two_point_context()};
  return cs;
}

// Runs each named suite with the given parameters; the first failure is
// recorded. Returns the number of instances run.
std::size_t run_all(Outcome& out, const std::vector<std::string>& names, SuiteParams p) {
  std::size_t total = 0;
  for (const auto& name : names) {
    const Suite* s = find_suite(name);
    if (!s) {
      out.fail("missing suite " + name);
      continue;
    }
    SuiteReport r = run_suite(*s, p);
    total += r.instances;
    if (!r.passed())
      out.fail(name + " in " + r.context + (r.group.empty() ? "" : " " + r.group + "/" + r.subgroup) + ": " +
               r.failures.front().divergence.check + " " + r.failures.front().divergence.detail);
  }
  return total;
}

SuiteParams params(std::size_t instances, const BaseContext& ctx, std::size_t n = 0) {
  SuiteParams p;
  p.seed = g_seed;
  p.instances = instances;
  p.n = n;
  p.gen.ctx = ctx;
  return p;
}

const std::vector<std::string> kFuller{"fuller.assoc",    "fuller.unit",  "fuller.nat_comp",
                                       "fuller.nat_unit", "fuller.twist", "fuller.naturality"};
const std::vector<std::string> kBaseChange{"bc.assoc", "bc.unit", "bc.vert_comp", "bc.vert_unit", "bc.final"};

// ---- 1-4 and 7 ------------------------------------------------------------

void bicategory_axioms(Outcome& out, const BaseContext& ctx) {
  std::size_t k = run_all(out, {"pentagon", "triangle"}, params(200, ctx));
  out.note << k << " instances in " << detail::context_name(ctx) << "; ";
}

void shadow_axioms(Outcome& out, const BaseContext& ctx) {
  std::size_t k = run_all(out, {"shadow_assoc", "shadow_unitor"}, params(200, ctx));
  // θ_{Y,X} ∘ θ_{X,Y} = id on its own as well.
  GenParams gp;
  gp.ctx = ctx;
  for (std::size_t i = 0; i < 200; ++i) {
    Rng rng(instance_seed(g_seed ^ 0x7e7a, i));
    IndexedSpace a = random_space(rng, gp, "A"), b = random_space(rng, gp, "B");
    Cell1 x = random_cell(rng, gp, "X", a, b), y = random_cell(rng, gp, "Y", b, a);
    if (auto v = check_rotator_involution(x, y)) out.fail("theta twice is not the identity: " + v->detail);
  }
  out.note << k << " instances + 200 involutions in " << detail::context_name(ctx) << "; ";
}

void fuller_structure(Outcome& out, const BaseContext& ctx) {
  std::size_t k = 0;
  for (std::size_t n = 1; n <= 3; ++n) k += run_all(out, kFuller, params(100, ctx, n));
  out.note << k << " instances (n = 1, 2, 3) in " << detail::context_name(ctx) << "; ";
}

void base_change_suites(Outcome& out, const BaseContext& ctx) {
  std::size_t k = run_all(out, kBaseChange, params(100, ctx));
  GenParams gp;
  gp.ctx = ctx;
  std::size_t twists = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    Rng rng(instance_seed(g_seed ^ 0x7417, i));
    const std::size_t n = 1 + i % 3;
    GenParams q = gp;
    q.max_size = n == 3 ? 2 : 3;
    std::vector<IndexedSpace> as;
    for (std::size_t j = 0; j < n; ++j) as.push_back(random_space(rng, q, "A" + std::to_string(j)));
    if (!(twist_cell(ctx, as).cell == base_change(shift_map(ctx, as)).cell))
      out.fail("T differs from the base change of the shift at instance " + std::to_string(i));
    ++twists;
  }
  out.note << k << " instances + " << twists << " T = [shift] cases in " << detail::context_name(ctx) << "; ";
}

// ---- 5 --------------------------------------------------------------------

void rigidity(Outcome& out) {
  std::size_t rigid = 0, loose = 0;
  for (const auto& ctx : contexts()) {
    GenParams gp;
    gp.ctx = ctx;
    for (std::size_t i = 0; i < 400; ++i) {
      Rng rng(instance_seed(g_seed ^ 0x4191d, i));
      const std::size_t n = i % 4;
      MultiSpan s = random_multispan(rng, gp, n, n == 1 ? 4 : 2);
      ActionFamily fam = probe_family(s);
      if (fam.tuples.size() > 3 || fam.arrows.size() > 5) out.fail("probe family exceeds 3 inputs and 5 2-cells");
      auto res = search_automorphisms(s, fam);
      if (is_rigid(s).injective) {
        ++rigid;
        if (res.found.size() != 1 || !res.found[0].is_identity())
          out.fail("rigid span with " + std::to_string(res.found.size()) + " automorphisms at instance " +
                   std::to_string(i));
      } else {
        ++loose;
      }
    }
  }
  IndexedSpace b = IndexedSpace::absolute(FinSet::atoms("B", {"b1", "b2"}));
  IndexedSpace c = IndexedSpace::absolute(FinSet::atoms("C", {"c"}));
  MultiSpan witness{BaseContext::absolute(), b, c, {}, FinMap::constant(b.space, c.space, Element::atom("c")), {}};
  std::size_t w = search_automorphisms(witness, {}).found.size();
  if (w != 2) out.fail("non-rigid witness has " + std::to_string(w) + " automorphisms");
  out.note << rigid << " rigid spans with only the identity (" << loose << " non-rigid skipped); witness has " << w;
}

// ---- 6 --------------------------------------------------------------------

// N(H) by comparing conjugate sets, independent of the library's normalizer.
std::set<std::size_t> normalizer_oracle(const FinGroup& g, const Subgroup& h) {
  std::set<std::size_t> hs(h.members.begin(), h.members.end()), out;
  for (std::size_t x = 0; x < g.order(); ++x) {
    std::set<std::size_t> conj;
    for (std::size_t m : h.members) conj.insert(g.mul(g.mul(x, m), g.inverse(x)));
    if (conj == hs) out.insert(x);
  }
  return out;
}

void equivariance(Outcome& out) {
  std::vector<std::string> names;
  for (const auto& s : all_suites())
    if (s.equivariant) names.push_back(s.name);
  std::size_t runs = 0, weyls = 0;
  for (const auto& g : {FinGroup::cyclic(2), FinGroup::cyclic(3), FinGroup::s3()}) {
    for (const auto& h : all_subgroups(g)) {
      SuiteParams p = params(50, BaseContext::absolute());
      p.group = GroupChoice{g, h};
      run_all(out, names, p);
      runs += names.size();

      Weyl w = weyl(g, h);
      auto n = normalizer_oracle(g, h);
      std::set<std::size_t> lib(w.normalizer.members.begin(), w.normalizer.members.end());
      if (lib != n) out.fail("normalizer of " + h.name + " in " + g.name() + " differs from the oracle");
      if (w.group.order() * h.members.size() != n.size()) out.fail("|W" + h.name + "| is not |N|/|H|");
      for (std::size_t i = 0; i < w.reps.size(); ++i)
        for (std::size_t j = 0; j < w.reps.size(); ++j) {
          std::size_t prod = g.mul(w.reps[i], w.reps[j]), rep = w.reps[w.group.mul(i, j)];
          bool same = false;
          for (std::size_t m : h.members) same = same || g.mul(rep, m) == prod;
          if (!same) out.fail("Weyl multiplication of " + h.name + " in " + g.name() + " is not the coset product");
        }
      ++weyls;
    }
  }
  out.note << names.size() << " suites x " << runs / names.size() << " (G, H) pairs x 50 instances; " << weyls
           << " Weyl groups checked";
}

// ---- 8 --------------------------------------------------------------------

std::size_t iterate_fix(const std::vector<int>& f, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t a = 0; a < f.size(); ++a) {
    int x = static_cast<int>(a);
    for (std::size_t k = 0; k < n; ++k) x = f[static_cast<std::size_t>(x)];
    count += x == static_cast<int>(a);
  }
  return count;
}

template <class Fn>
void all_endos(int m, Fn&& fn) {
  std::vector<int> f(static_cast<std::size_t>(m), 0);
  while (true) {
    fn(f);
    int i = 0;
    while (i < m && ++f[static_cast<std::size_t>(i)] == m) f[static_cast<std::size_t>(i++)] = 0;
    if (i == m) return;
  }
}

int at(const std::vector<int>& f, int i) { return f[static_cast<std::size_t>(i)]; }

void invariants(Outcome& out) {
  std::size_t maps = 0;
  for (int m = 0; m <= 5; ++m)
    all_endos(m, [&](const std::vector<int>& f) {
      ++maps;
      IndexedSpace a = space("a", m);
      EndoMap e = EndoMap::absolute(table(a, a, f));
      auto fix = fix_counts(e, 6);
      auto full = fuller_counts(e, 6);
      for (std::size_t n = 1; n <= 6; ++n) {
        std::size_t oracle = iterate_fix(f, n);
        if (fix[n - 1] != oracle) out.fail("fix_count differs from iteration");
        if (full[n - 1].count != oracle) out.fail("fuller_count differs from iteration");
        for (const auto& x : full[n - 1].to_fixed.forward.target().elements()) {
          int i = static_cast<int>(a.space.require_index(x)), y = i;
          for (std::size_t k = 0; k < n; ++k) y = at(f, y);
          if (y != i) out.fail("Fuller bijection lands off Fix(f^n)");
        }
        long long sum = 0;
        for (auto d : divisors(n)) sum += least_period_count(e, d);
        if (sum != static_cast<long long>(oracle)) out.fail("least periods do not sum to fix_count");
      }
    });

  // Every C2 action on ≤ 4 points and every equivariant endomap.
  FinGroup c2 = FinGroup::cyclic(2);
  std::size_t gmaps = 0;
  for (int m = 0; m <= 4; ++m)
    all_endos(m, [&](const std::vector<int>& s) {
      for (int i = 0; i < m; ++i)
        if (at(s, at(s, i)) != i) return;
      IndexedSpace a = space("a", m);
      GSpace ga{a, GAction::by(c2, a.space, [&](std::size_t g, const Element& x) {
                  return g == 0 ? x : a.space.at(static_cast<std::size_t>(at(s, static_cast<int>(a.space.require_index(x)))));
                })};
      all_endos(m, [&](const std::vector<int>& f) {
        for (int i = 0; i < m; ++i)
          if (at(f, at(s, i)) != at(s, at(f, i))) return;
        ++gmaps;
        GMap g(ga, ga, table(a, a, f));
        for (std::size_t n = 1; n <= 4; ++n) {
          std::size_t fixed = 0;
          for (int x = 0; x < m; ++x) {
            if (at(s, x) != x) continue;
            int y = x;
            for (std::size_t k = 0; k < n; ++k) y = at(f, y);
            fixed += y == x;
          }
          if (equivariant_fix_count(g, Subgroup::trivial(c2), n) != iterate_fix(f, n) ||
              equivariant_fix_count(g, Subgroup::whole(c2), n) != fixed)
            out.fail("equivariant count differs from enumeration");
        }
      });
    });
  out.note << maps << " endomaps, n <= 6; " << gmaps << " C2-maps on <= 4 points";
}

// ---- 9 --------------------------------------------------------------------

// Strongly connected components by mutual reachability (Warshall closure).
std::size_t scc_count(const Digraph& g) {
  std::vector<std::vector<bool>> r(g.n, std::vector<bool>(g.n));
  for (std::size_t u = 0; u < g.n; ++u)
    for (std::size_t w = 0; w < g.n; ++w) r[u][w] = u == w || g.edge(u, w);
  for (std::size_t k = 0; k < g.n; ++k)
    for (std::size_t u = 0; u < g.n; ++u)
      for (std::size_t w = 0; w < g.n; ++w) r[u][w] = r[u][w] || (r[u][k] && r[k][w]);
  std::size_t count = 0;
  for (std::size_t u = 0; u < g.n; ++u) {
    bool least = true;
    for (std::size_t w = 0; w < u; ++w) least = least && !(r[u][w] && r[w][u]);
    count += least;
  }
  return count;
}

void deformation(Outcome& out) {
  Model m = graph_model(4);
  const auto& g = dynamic_cast<const GraphCategory&>(*m.base);
  const auto& d = m.deformations[0];
  auto need = [&](const Report& r) {
    if (!r.ok()) out.fail(r.check + ": " + (r.violations.empty() ? std::string("failed") : r.violations.front()));
  };
  for (const auto& f : m.functors) need(validate_deformation(f, d));

  WEFunctor rv = derived_functor(m.functor("vertices"), d);
  for (std::size_t x = 0; x < g.object_count(); ++x)
    if (rv(x) != scc_count(g.graph(x))) out.fail("derived vertex set differs from the SCC set at " + g.object_label(x));

  const std::vector<std::vector<std::string>> pairs{{"condensation", "vertices"},
                                                    {"condensation", "vertices-edges"},
                                                    {"reversal", "vertices"},
                                                    {"reversal", "vertices-edges"},
                                                    {"reversal", "condensation"},
                                                    {"reversal", "reversal"}};
  for (const auto& p : pairs) need(compare_composites(m.list(p)).report);

  need(check_vertical(m.transformation("source"), m.transformation("include"), d));
  need(check_vertical(m.transformation("include"), m.transformation("source"), d));
  need(check_horizontal(m.list({"reversal", "vertices"}), m.list({"reversal", "vertices-edges"}),
                        identity_nat(m.functor("reversal")), m.transformation("include")));
  DeformableList f = m.list({"condensation", "vertices"});
  f.functors[0] = identity_functor(m.base);
  need(check_horizontal(f, m.list({"condensation", "vertices-edges"}), m.transformation("unit"),
                        m.transformation("include")));

  std::vector<WEFunctor> probes;
  for (const auto& fn : m.functors) probes.push_back(derived_functor(fn, d));
  Localization loc = homotopy_category(d, probes);
  need(loc.report);
  std::set<std::size_t> condensed, ho;
  for (std::size_t x = 0; x < g.object_count(); ++x)
    if (is_condensed(g.graph(x))) condensed.insert(x);
  for (std::size_t i = 0; i < loc.ho->object_count(); ++i) ho.insert(loc.ho->parent_object(i));
  if (ho != condensed) out.fail("Ho objects are not the condensed graphs");
  for (std::size_t x = 0; x < g.object_count(); ++x)
    if (!(g.graph(loc.ho->parent_object(loc.L(x))) == canonical(condense(g.graph(x))).rep))
      out.fail("localization does not send a graph to its condensation");
  out.note << g.object_count() << " graphs, " << m.functors.size() << " functors validated, " << pairs.size()
           << " composite pairs, Ho has " << loc.ho->object_count() << " objects";
}

// ---- 10 -------------------------------------------------------------------

// Reports from the acceptance commands for one seed, concatenated.
std::string reports(std::uint64_t seed, unsigned workers) {
  std::string all;
  for (const auto& ctx : contexts())
    for (const auto& name : {"pentagon", "shadow_assoc", "fuller.twist", "bc.final"}) {
      SuiteParams p = params(40, ctx);
      p.seed = seed;
      all += run_suite(*find_suite(name), p, workers).to_json().dump() + "\n";
    }
  SuiteParams p = params(20, BaseContext::absolute());
  p.seed = seed;
  p.group = GroupChoice{FinGroup::s3(), Subgroup::make(FinGroup::s3(), "A3", {0, 1, 2})};
  all += run_suite(*find_suite("equivariant.icon"), p, workers).to_json().dump() + "\n";
  Model m = graph_model(3);
  all += compare_composites(m.list({"reversal", "vertices"})).report.to_json().dump() + "\n";
  return all;
}

void determinism(Outcome& out) {
  std::string a = reports(g_seed, 1), b = reports(g_seed, 1), c = reports(g_seed, 3);
  if (a != b) out.fail("two runs with the same seed differ");
  if (a != c) out.fail("reports depend on the worker count");
  if (a == reports(g_seed + 1, 1)) out.fail("seed has no effect");
  out.note << a.size() << " bytes identical across reruns and worker counts";
}

struct Criterion {
  int id;
  std::string title;
  std::function<void(Outcome&)> run;
  double limit = 0;  // seconds, 0 for none
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--seed") g_seed = std::strtoull(argv[i + 1], nullptr, 10);
    else if (flag == "--only") only = std::atoi(argv[i + 1]);
  }

  auto per_context = [](void (*fn)(Outcome&, const BaseContext&)) {
    return [fn](Outcome& o) { fn(o, BaseContext::absolute()); };
  };
  auto fiberwise = [](Outcome& o) {
    const BaseContext b = two_point_context();
    for (auto fn : {bicategory_axioms, shadow_axioms, fuller_structure, base_change_suites}) fn(o, b);
  };
  std::vector<Criterion> cs{
      {1, "bicategory axioms",
       [](Outcome& o) {
         for (const auto& ctx : contexts()) bicategory_axioms(o, ctx);
       },
       10},
      {2, "shadow axioms", per_context(shadow_axioms)},
      {3, "n-Fuller structure", per_context(fuller_structure)},
      {4, "base change", per_context(base_change_suites)},
      {5, "rigidity", rigidity},
      {6, "equivariance", equivariance},
      {7, "fiberwise over B = {p, q}", fiberwise},
      {8, "invariants against oracles", invariants, 60},
      {9, "deformation calculus on graphs", deformation},
      {10, "determinism", determinism},
  };

  int failed = 0;
  for (const auto& c : cs) {
    if (only && c.id != only) continue;
    Outcome o;
    Clock clock;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double t = clock.seconds();
    if (c.limit > 0 && t >= c.limit) o.fail("took " + std::to_string(t) + " s, limit " + std::to_string(c.limit));
    failed += !o.ok;
    std::string note = o.note.str();
    while (!note.empty() && (note.back() == ' ' || note.back() == ';')) note.pop_back();
    std::printf("criterion %2d %s  %-32s %7.2f s  %s\n", c.id, o.ok ? "PASS" : "FAIL", c.title.c_str(), t,
                note.c_str());
    std::fflush(stdout);
  }
  return failed;
}
