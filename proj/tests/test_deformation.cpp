#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "spanshadow/models.hpp"

using namespace spanshadow;

namespace {

// Kosaraju on an adjacency matrix; components as sets of vertices.
std::set<std::set<std::size_t>> scc_oracle(const Digraph& g) {
  std::size_t n = g.n;
  std::vector<bool> seen(n);
  std::vector<std::size_t> order;
  std::function<void(std::size_t)> dfs1 = [&](std::size_t u) {
    seen[u] = true;
    for (std::size_t w = 0; w < n; ++w)
      if (g.edge(u, w) && !seen[w]) dfs1(w);
    order.push_back(u);
  };
  for (std::size_t u = 0; u < n; ++u)
    if (!seen[u]) dfs1(u);
  std::vector<int> comp(n, -1);
  std::function<void(std::size_t, int)> dfs2 = [&](std::size_t u, int c) {
    comp[u] = c;
    for (std::size_t w = 0; w < n; ++w)
      if (g.edge(w, u) && comp[w] < 0) dfs2(w, c);
  };
  int c = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (comp[*it] < 0) dfs2(*it, c++);
  std::vector<std::set<std::size_t>> parts(c);
  for (std::size_t u = 0; u < n; ++u) parts[comp[u]].insert(u);
  return {parts.begin(), parts.end()};
}

// All loopless labelled digraphs on n vertices.
std::vector<Digraph> labelled(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t w = 0; w < n; ++w)
      if (u != w) slots.emplace_back(u, w);
  std::vector<Digraph> out;
  for (std::uint32_t bits = 0; bits < (1u << slots.size()); ++bits) {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (bits & (1u << i)) es.push_back(slots[i]);
    out.push_back(Digraph::from_edges(n, es));
  }
  return out;
}

const Model& model4() {
  static const Model m = graph_model(4);
  return m;
}

const GraphCategory& graphs(const Model& m) { return dynamic_cast<const GraphCategory&>(*m.base); }

std::size_t object_of(const Model& m, std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& es) {
  return graphs(m).index_of(Digraph::from_edges(n, es));
}

}  // namespace

TEST(Digraph, CondensationExample) {
  // a <-> b, b -> c
  Digraph g = Digraph::from_edges(3, {{0, 1}, {1, 0}, {1, 2}});
  Digraph c = condense(g);
  EXPECT_EQ(c.n, 2);
  EXPECT_EQ(c.edges().size(), 1u);
  EXPECT_TRUE(c.edge(0, 1));
  EXPECT_THROW(Digraph::from_edges(2, {{1, 1}}), DeformationError);
}

TEST(Digraph, SccLabelsMatchOracle) {
  for (std::size_t n = 0; n <= 4; ++n)
    for (const auto& g : labelled(n)) {
      auto label = scc_labels(g);
      std::set<std::set<std::size_t>> parts;
      std::map<std::uint32_t, std::set<std::size_t>> by;
      for (std::size_t v = 0; v < n; ++v) by[label[v]].insert(v);
      std::uint32_t expect = 0;
      for (auto& [l, p] : by) {
        EXPECT_EQ(l, expect++) << g.label();
        parts.insert(p);
      }
      EXPECT_EQ(parts, scc_oracle(g)) << g.label();
      // SCCs numbered by least vertex.
      std::size_t prev_min = 0;
      for (auto& [l, p] : by) {
        if (l) {
          EXPECT_GT(*p.begin(), prev_min);
        }
        prev_min = *p.begin();
      }
    }
}

TEST(GraphModel, ObjectCounts) {
  // Isomorphism classes of loopless digraphs: 1, 1, 3, 16, 218; acyclic: 1, 1, 2, 6, 31.
  const auto& g = graphs(model4());
  EXPECT_EQ(g.object_count(), 239u);
  std::size_t dags = 0;
  for (std::size_t x = 0; x < g.object_count(); ++x) dags += g.radiant(x);
  EXPECT_EQ(dags, 41u);
  EXPECT_EQ(GraphCategory(2).object_count(), 5u);
}

TEST(GraphModel, CanonicalFormIsAnInvariant) {
  const auto& g = graphs(model4());
  for (const auto& h : labelled(4)) {
    Canonical c = canonical(h);
    EXPECT_EQ(h.relabel(c.perm), c.rep);
    EXPECT_EQ(g.graph(g.index_of(h)), c.rep);
    EXPECT_EQ(g.index_of(h.relabel({3, 1, 0, 2})), g.index_of(h));
  }
}

TEST(GraphModel, CategoryAxiomsSmall) {
  Model m = graph_model(2);
  Report r = check_category(*m.base);
  EXPECT_TRUE(r.ok()) << r.to_json().dump();
}

TEST(GraphModel, FunctorsAreFunctorial) {
  Model m = graph_model(3);
  for (const auto& f : m.functors) {
    Report r = check_functor(f);
    EXPECT_TRUE(r.ok()) << r.to_json().dump();
  }
  for (const auto& t : m.transformations) {
    Report r = check_natural(t);
    EXPECT_TRUE(r.ok()) << r.to_json().dump();
  }
}

TEST(GraphModel, HomsAreReflexiveGraphMaps) {
  Model m = graph_model(3);
  const auto& g = graphs(m);
  std::size_t counted = 0, enumerated = 0;
  for (std::size_t x = 0; x < g.object_count(); ++x)
    for (std::size_t y = 0; y < g.object_count(); ++y) {
      const Digraph &a = g.graph(x), &b = g.graph(y);
      std::size_t total = 1;
      for (std::size_t i = 0; i < a.n; ++i) total *= b.n;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::size_t> f(a.n);
        for (std::size_t i = 0, c = code; i < a.n; ++i, c /= b.n) f[i] = c % b.n;
        bool ok = true;
        for (std::size_t u = 0; u < a.n; ++u)
          for (std::size_t w = 0; w < a.n; ++w)
            if (a.edge(u, w) && f[u] != f[w] && !b.edge(f[u], f[w])) ok = false;
        counted += ok;
      }
      g.for_each_hom(x, y, [&](const Mor&) { return ++enumerated; });
    }
  EXPECT_EQ(counted, enumerated);
}

TEST(GraphModel, WeakEquivalences) {
  const auto& m = model4();
  const auto& g = graphs(m);
  std::size_t cycle = object_of(m, 2, {{0, 1}, {1, 0}}), point = object_of(m, 1, {});
  Mor collapse{static_cast<std::uint32_t>(cycle), static_cast<std::uint32_t>(point), {0, 0}};
  ASSERT_TRUE(g.is_hom(collapse));
  EXPECT_TRUE(g.is_we(collapse));
  EXPECT_FALSE(g.is_iso(collapse));
  std::size_t edge = object_of(m, 2, {{0, 1}});
  Mor squash{static_cast<std::uint32_t>(edge), static_cast<std::uint32_t>(point), {0, 0}};
  EXPECT_FALSE(g.is_we(squash));
  // Between condensed graphs the weak equivalences are the isomorphisms.
  g.for_each_morphism([&](const Mor& f) {
    if (g.radiant(f.src) && g.radiant(f.dst)) {
      EXPECT_EQ(g.is_we(f), g.is_iso(f)) << g.describe(f);
    }
    return true;
  });
}

TEST(GraphModel, VerticesBreaksWeakEquivalences) {
  const auto& m = model4();
  const WEFunctor& v = m.functor("vertices");
  std::size_t cycle = object_of(m, 2, {{0, 1}, {1, 0}}), point = object_of(m, 1, {});
  Mor collapse{static_cast<std::uint32_t>(cycle), static_cast<std::uint32_t>(point), {0, 0}};
  Mor image = v(collapse);
  EXPECT_EQ(image.src, 2u);
  EXPECT_EQ(image.dst, 1u);
  EXPECT_FALSE(v.target->is_we(image));
  EXPECT_FALSE(check_preserves_we(v, all_objects).ok());
}

TEST(Deformation, ValidatesEveryGraphFunctor) {
  const auto& m = model4();
  for (const auto& f : m.functors) {
    Report r = validate_deformation(f, m.deformations[0]);
    EXPECT_TRUE(r.ok()) << r.to_json().dump();
  }
}

TEST(Deformation, RejectsForeignCategory) {
  const auto& m = model4();
  Model small = graph_model(2);
  EXPECT_THROW(validate_deformation(small.functor("vertices"), m.deformations[0]), DeformationError);
}

TEST(Deformation, TooManyRadiantObjectsIsReported) {
  const auto& m = model4();
  RightDeformation bad = m.deformations[0];
  bad.radiant = [](std::size_t) { return true; };
  Report r = validate_deformation(m.functor("vertices"), bad);
  EXPECT_FALSE(r.ok());
}

TEST(Deformation, DerivedVerticesCountsComponents) {
  const auto& m = model4();
  const auto& g = graphs(m);
  WEFunctor rv = derived_functor(m.functor("vertices"), m.deformations[0]);
  for (std::size_t x = 0; x < g.object_count(); ++x) EXPECT_EQ(rv(x), scc_oracle(g.graph(x)).size()) << g.object_label(x);
  EXPECT_THROW(derived_functor(m.functor("vertices"), RightDeformation{m.deformations[0].name, m.base,
                                                                       [](std::size_t) { return true; },
                                                                       identity_functor(m.base),
                                                                       identity_nat(identity_functor(m.base))}),
               DeformationError);
}

TEST(Deformation, DerivedInclusionOnTwoCycle) {
  const auto& m = model4();
  const auto& d = m.deformations[0];
  NatTrans inc = derived_nat(m.transformation("include"), d);
  std::size_t cycle = object_of(m, 2, {{0, 1}, {1, 0}});
  Mor c = inc(cycle);
  EXPECT_EQ(c.src, 1u);
  EXPECT_EQ(c.dst, 1u);
  EXPECT_FALSE(is_iso_nat(inc));
  NatTrans flip = derived_nat(m.transformation("flip"), d);
  EXPECT_TRUE(is_iso_nat(m.transformation("flip")));
  EXPECT_TRUE(is_iso_nat(flip));
}

TEST(Deformation, VerticalComposition) {
  const auto& m = model4();
  Report r = check_vertical(m.transformation("source"), m.transformation("include"), m.deformations[0]);
  EXPECT_TRUE(r.ok()) << r.to_json().dump();
  r = check_vertical(m.transformation("include"), m.transformation("source"), m.deformations[0]);
  EXPECT_TRUE(r.ok()) << r.to_json().dump();
}

TEST(Deformation, HorizontalComposition) {
  const auto& m = model4();
  NatTrans rev1 = identity_nat(m.functor("reversal"));
  Report r = check_horizontal(m.list({"reversal", "vertices"}), m.list({"reversal", "vertices-edges"}), rev1,
                              m.transformation("include"));
  EXPECT_TRUE(r.ok()) << r.to_json().dump();

  DeformableList f = m.list({"condensation", "vertices"});
  f.functors[0] = identity_functor(m.base);
  r = check_horizontal(f, m.list({"condensation", "vertices-edges"}), m.transformation("unit"), m.transformation("include"));
  EXPECT_TRUE(r.ok()) << r.to_json().dump();
}

TEST(CompareComposites, CondensationThenVertices) {
  const auto& m = model4();
  Comparison c = compare_composites(m.list({"condensation", "vertices"}));
  EXPECT_TRUE(c.report.ok()) << c.report.to_json().dump();
  for (std::size_t x = 0; x < m.base->object_count(); ++x) EXPECT_EQ(c.kappa(x), c.lhs.target->identity(c.lhs(x)));
}

TEST(CompareComposites, ReversalThenVertices) {
  const auto& m = model4();
  for (const auto& second : {"vertices", "vertices-edges", "reversal", "condensation"}) {
    Comparison c = compare_composites(m.list({"reversal", second}));
    EXPECT_TRUE(c.report.ok()) << second << c.report.to_json().dump();
  }
  Comparison three = compare_composites(m.list({"reversal", "condensation", "vertices-edges"}));
  EXPECT_TRUE(three.report.ok()) << three.report.to_json().dump();
}

TEST(CompareComposites, RejectsIncoherentList) {
  const auto& m = model4();
  DeformableList l = m.list({"reversal", "vertices"});
  l.deformations[1].radiant = [](std::size_t) { return false; };
  EXPECT_THROW(compare_composites(l), DeformationError);
}

TEST(CompareComposites, PointSetIsoGivesWeakEquivalences) {
  const auto& m = model4();
  NatTrans t = derived_between(m.list({"reversal", "vertices"}), m.list({"vertices"}), m.transformation("flip"));
  for (std::size_t x = 0; x < m.base->object_count(); ++x) EXPECT_TRUE(t.from.target->is_we(t(x)));
  EXPECT_TRUE(check_natural(t).ok());
}

TEST(ExpandRadiant, CondensationAcceptsEverything) {
  const auto& m = model4();
  std::vector<std::size_t> all(m.base->object_count());
  std::iota(all.begin(), all.end(), 0);
  Expansion e = expand_radiant(m.deformations[0], m.functor("condensation"), all);
  ASSERT_TRUE(e.deformation) << e.report.to_json().dump();
  EXPECT_TRUE(e.deformation->radiant(object_of(m, 2, {{0, 1}, {1, 0}})));
  EXPECT_TRUE(validate_deformation(m.functor("condensation"), *e.deformation).ok());
}

TEST(ExpandRadiant, VerticesNamesTheCycle) {
  const auto& m = model4();
  std::size_t edge = object_of(m, 2, {{0, 1}}), cycle = object_of(m, 2, {{0, 1}, {1, 0}});
  Expansion e = expand_radiant(m.deformations[0], m.functor("vertices"), {edge, cycle});
  EXPECT_FALSE(e.deformation);
  ASSERT_TRUE(e.witness);
  EXPECT_EQ(*e.witness, cycle);
}

TEST(HomotopyCategory, CondensedGraphs) {
  const auto& m = model4();
  const auto& d = m.deformations[0];
  std::vector<WEFunctor> probes;
  for (const auto& f : m.functors) probes.push_back(derived_functor(f, d));
  Localization loc = homotopy_category(d, probes);
  EXPECT_TRUE(loc.report.ok()) << loc.report.to_json().dump();
  ASSERT_EQ(loc.ho->object_count(), 41u);
  const auto& g = graphs(m);
  for (std::size_t i = 0; i < loc.ho->object_count(); ++i) EXPECT_TRUE(is_condensed(g.graph(loc.ho->parent_object(i))));
  for (std::size_t x = 0; x < g.object_count(); ++x)
    EXPECT_EQ(g.graph(loc.ho->parent_object(loc.L(x))), canonical(condense(g.graph(x))).rep);
  // Weak equivalences become isomorphisms.
  g.for_each_morphism([&](const Mor& f) {
    if (g.is_we(f)) {
      EXPECT_TRUE(loc.ho->is_iso(loc.L(f)));
    }
    return true;
  });
}

TEST(HomotopyCategory, ProbeThatDoesNotInvert) {
  const auto& m = model4();
  EXPECT_FALSE(homotopy_category(m.deformations[0], {m.functor("vertices")}).report.ok());
}

TEST(HomotopyCategory, RejectsNonIdempotentReplacement) {
  Model chain = chain_model();
  const auto& d = chain.deformations[0];
  EXPECT_TRUE(validate_deformation(chain.functor("id"), d).ok());
  try {
    homotopy_category(d);
    FAIL() << "expected a rejection";
  } catch (const DeformationError& e) {
    EXPECT_NE(std::string(e.what()).find("R(R(a)) = c"), std::string::npos) << e.what();
  }
}

TEST(TableModel, CategoryAxioms) {
  Model chain = chain_model();
  EXPECT_TRUE(check_category(*chain.base).ok());
  EXPECT_TRUE(check_functor(chain.deformations[0].R).ok());
}

TEST(TableModel, DerivedFunctorsAgreeUpToUnits) {
  // a ≤ b ≤ c, all arrows weak equivalences, two deformations.
  auto doc = nlohmann::ordered_json::parse(R"({
    "name": "poset",
    "objects": ["a", "b", "c"],
    "morphisms": [{"name": "u", "src": "a", "dst": "b", "we": true},
                  {"name": "v", "src": "b", "dst": "c", "we": true},
                  {"name": "w", "src": "a", "dst": "c", "we": true}],
    "deformation": {"radiant": ["b", "c"], "R": {"objects": {"a": "b", "b": "b", "c": "c"}}},
    "functors": [{"name": "F", "objects": {"a": "a", "b": "b", "c": "c"}},
                 {"name": "top", "objects": {"a": "c", "b": "c", "c": "c"}}]
  })");
  Model m = table_model(doc);
  const RightDeformation& d1 = m.deformations[0];
  WEFunctor top = m.functor("top");
  RightDeformation d2{"top", m.base, [](std::size_t x) { return x == 2; }, top,
                      NatTrans{"unit", identity_functor(m.base), top, [&m](std::size_t x) {
                                 return dynamic_cast<const TableCategory&>(*m.base).unique(x, 2);
                               }}};
  const WEFunctor& f = m.functor("F");
  WEFunctor r1 = derived_functor(f, d1), r2 = derived_functor(f, d2);
  for (std::size_t x = 0; x < 3; ++x) {
    Mor left = f(d2.unit(d1.R(x)));   // ℝ₁F X → F R₂R₁X
    Mor right = f(d2.R(d1.unit(x)));  // ℝ₂F X → F R₂R₁X
    EXPECT_EQ(left.src, r1(x));
    EXPECT_EQ(right.src, r2(x));
    EXPECT_EQ(left.dst, right.dst);
    EXPECT_TRUE(m.base->is_we(left));
    EXPECT_TRUE(m.base->is_we(right));
  }
}

TEST(TableModel, MalformedDocuments) {
  EXPECT_THROW(table_model(nlohmann::ordered_json::parse(R"({"objects": ["a"], "morphisms": [{"name": "f", "src": "a", "dst": "z"}]})")),
               DeformationError);
  EXPECT_THROW(table_model(nlohmann::ordered_json::parse(R"({"morphisms": []})")), DeformationError);
  // f.h lands in a hom-set with two arrows and no composite is given.
  Model m = table_model(nlohmann::ordered_json::parse(R"({
    "objects": ["a", "b"],
    "morphisms": [{"name": "f", "src": "a", "dst": "b"}, {"name": "h", "src": "b", "dst": "a"},
                  {"name": "e", "src": "b", "dst": "b"}]})"));
  EXPECT_FALSE(m.base->object_count() == 0);
  EXPECT_THROW(check_category(*m.base), DeformationError);
}
