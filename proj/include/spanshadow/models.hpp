#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "spanshadow/deformation.hpp"

namespace spanshadow {

// ---- directed graphs ----------------------------------------------------------------

/// A loopless directed graph on vertices 0..n-1, n ≤ 4, as an adjacency bitmask
/// (bit 4u + w for the edge u → w).
struct Digraph {
  static constexpr std::size_t kMaxVertices = 4;

  std::uint8_t n = 0;
  std::uint16_t adj = 0;

  static Digraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    if (n > kMaxVertices) throw DeformationError("graphs are limited to " + std::to_string(kMaxVertices) + " vertices");
    Digraph g{static_cast<std::uint8_t>(n), 0};
    for (auto [u, w] : edges) {
      if (u >= n || w >= n) throw DeformationError("edge endpoint out of range");
      if (u == w) throw DeformationError("self-loops are not objects of the graph model");
      g.adj |= bit(u, w);
    }
    return g;
  }

  static constexpr std::uint16_t bit(std::size_t u, std::size_t w) { return static_cast<std::uint16_t>(1u << (4 * u + w)); }
  bool edge(std::size_t u, std::size_t w) const { return adj & bit(u, w); }

  /// Edges sorted by (source, target).
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t w = 0; w < n; ++w)
        if (edge(u, w)) es.emplace_back(u, w);
    return es;
  }

  Digraph relabel(const MorData& p) const {
    Digraph g{n, 0};
    for (auto [u, w] : edges()) g.adj |= bit(p[u], p[w]);
    return g;
  }

  Digraph reversed() const {
    Digraph g{n, 0};
    for (auto [u, w] : edges()) g.adj |= bit(w, u);
    return g;
  }

  std::uint32_t code() const { return (std::uint32_t{n} << 16) | adj; }

  std::string label() const {
    std::string s = std::to_string(n) + "|";
    bool first = true;
    for (auto [u, w] : edges()) {
      s += (first ? "" : ",") + std::to_string(u) + ">" + std::to_string(w);
      first = false;
    }
    return s;
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;
};

/// Strongly connected components numbered in order of their least vertex.
inline MorData scc_labels(const Digraph& g) {
  std::array<std::array<bool, Digraph::kMaxVertices>, Digraph::kMaxVertices> reach{};
  for (std::size_t u = 0; u < g.n; ++u)
    for (std::size_t w = 0; w < g.n; ++w) reach[u][w] = u == w || g.edge(u, w);
  for (std::size_t k = 0; k < g.n; ++k)
    for (std::size_t u = 0; u < g.n; ++u)
      for (std::size_t w = 0; w < g.n; ++w) reach[u][w] = reach[u][w] || (reach[u][k] && reach[k][w]);
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  MorData label(g.n, unset);
  std::uint32_t next = 0;
  for (std::size_t u = 0; u < g.n; ++u) {
    if (label[u] != unset) continue;
    for (std::size_t w = u; w < g.n; ++w)
      if (reach[u][w] && reach[w][u]) label[w] = next;
    ++next;
  }
  return label;
}

/// One vertex per SCC (ordered by least vertex), one edge per pair of distinct
/// SCCs joined by some edge.
inline Digraph condense(const Digraph& g) {
  auto label = scc_labels(g);
  std::size_t k = g.n ? *std::max_element(label.begin(), label.end()) + 1 : 0;
  Digraph c{static_cast<std::uint8_t>(k), 0};
  for (auto [u, w] : g.edges())
    if (label[u] != label[w]) c.adj |= Digraph::bit(label[u], label[w]);
  return c;
}

inline bool is_condensed(const Digraph& g) { return condense(g).n == g.n; }

struct Canonical {
  Digraph rep;
  MorData perm;  // vertex of the input → vertex of rep
};

/// The relabelling with the least adjacency code.
inline Canonical canonical(const Digraph& g) {
  MorData p(g.n);
  std::iota(p.begin(), p.end(), 0u);
  Canonical best{g.relabel(p), p};
  while (std::next_permutation(p.begin(), p.end())) {
    Digraph h = g.relabel(p);
    if (h.adj < best.rep.adj) best = {h, p};
  }
  return best;
}

namespace detail {
inline Mor sets_identity(std::size_t n) {
  Mor m{static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n), MorData(n)};
  std::iota(m.data.begin(), m.data.end(), 0u);
  return m;
}

inline MorData invert_perm(const MorData& p) {
  MorData q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<std::uint32_t>(i);
  return q;
}
}  // namespace detail

/// Isomorphism classes of loopless digraphs with at most `max_vertices`
/// vertices; morphisms are vertex maps sending each edge to an edge or
/// collapsing it to a vertex. A weak equivalence is a map whose condensation is
/// an isomorphism.
class GraphCategory : public WECategory {
 public:
  explicit GraphCategory(std::size_t max_vertices = Digraph::kMaxVertices) : max_(max_vertices) {
    if (max_vertices > Digraph::kMaxVertices) throw DeformationError("graph model supports at most 4 vertices");
    for (std::size_t n = 0; n <= max_vertices; ++n) {
      std::size_t pairs = n * n;
      for (std::uint32_t bits = 0; bits < (1u << pairs); ++bits) {
        Digraph g{static_cast<std::uint8_t>(n), 0};
        bool loop = false;
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t w = 0; w < n; ++w)
            if (bits & (1u << (u * n + w))) {
              if (u == w) loop = true;
              g.adj |= Digraph::bit(u, w);
            }
        if (loop) continue;
        Digraph rep = canonical(g).rep;
        if (!index_.count(rep.code())) {
          index_.emplace(rep.code(), reps_.size());
          reps_.push_back(rep);
        }
      }
    }
    std::vector<std::size_t> order(reps_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return reps_[a].code() < reps_[b].code(); });
    std::vector<Digraph> sorted;
    for (auto i : order) sorted.push_back(reps_[i]);
    reps_ = std::move(sorted);
    index_.clear();
    for (std::size_t i = 0; i < reps_.size(); ++i) index_.emplace(reps_[i].code(), i);
    info_.resize(reps_.size());
    for (std::size_t i = 0; i < reps_.size(); ++i) build_info(i);
  }

  std::string name() const override { return "graphs(" + std::to_string(max_) + ")"; }
  std::size_t object_count() const override { return reps_.size(); }
  std::string object_label(std::size_t x) const override { return reps_[x].label(); }
  Mor identity(std::size_t x) const override {
    Mor m{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(x), MorData(reps_[x].n)};
    std::iota(m.data.begin(), m.data.end(), 0u);
    return m;
  }
  Mor compose(const Mor& g, const Mor& f) const override {
    if (f.dst != g.src) throw DeformationError("graph maps do not compose");
    Mor m{f.src, g.dst, f.data};
    for (auto& v : m.data) v = g.data[v];
    return m;
  }
  bool is_we(const Mor& f) const override { return is_iso(condensation(f)); }
  std::optional<Mor> inverse(const Mor& f) const override {
    const Digraph &a = reps_[f.src], &b = reps_[f.dst];
    if (a.n != b.n || a.adj != b.adj) return std::nullopt;  // distinct classes are not isomorphic
    std::vector<bool> hit(b.n);
    for (auto v : f.data) hit[v] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return std::nullopt;
    for (auto [u, w] : a.edges())
      if (!b.edge(f.data[u], f.data[w])) return std::nullopt;
    return Mor{f.dst, f.src, detail::invert_perm(f.data)};
  }
  void for_each_hom(std::size_t x, std::size_t y, const std::function<bool(const Mor&)>& fn) const override {
    const Digraph &a = reps_[x], &b = reps_[y];
    if (a.n > 0 && b.n == 0) return;
    const auto& es = info_[x].edges;
    Mor m{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y), MorData(a.n, 0)};
    while (true) {
      bool ok = true;
      for (auto [u, w] : es)
        if (m.data[u] != m.data[w] && !b.edge(m.data[u], m.data[w])) {
          ok = false;
          break;
        }
      if (ok && !fn(m)) return;
      std::size_t i = 0;
      while (i < a.n && ++m.data[i] == b.n) m.data[i++] = 0;
      if (i == a.n) return;
    }
  }

  const Digraph& graph(std::size_t x) const { return reps_[x]; }
  std::size_t index_of(const Digraph& g) const {
    auto it = index_.find(canonical(g).rep.code());
    if (it == index_.end()) throw DeformationError("graph " + g.label() + " is outside the model");
    return it->second;
  }
  bool is_hom(const Mor& f) const {
    for (auto [u, w] : info_[f.src].edges)
      if (f.data[u] != f.data[w] && !reps_[f.dst].edge(f.data[u], f.data[w])) return false;
    return true;
  }

  bool radiant(std::size_t x) const { return info_[x].cond == x; }
  std::size_t condensation(std::size_t x) const { return info_[x].cond; }
  /// X → R(X): each vertex to its SCC.
  Mor unit(std::size_t x) const { return {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(info_[x].cond), info_[x].to_cond}; }
  Mor condensation(const Mor& f) const {
    const Info &a = info_[f.src], &b = info_[f.dst];
    Mor m{static_cast<std::uint32_t>(a.cond), static_cast<std::uint32_t>(b.cond), MorData(a.from_cond.size())};
    for (std::size_t c = 0; c < a.from_cond.size(); ++c) m.data[c] = b.to_cond[f.data[a.from_cond[c]]];
    return m;
  }
  std::size_t reversal(std::size_t x) const { return info_[x].rev; }
  Mor reversal(const Mor& f) const {
    const Info &a = info_[f.src], &b = info_[f.dst];
    Mor m{static_cast<std::uint32_t>(a.rev), static_cast<std::uint32_t>(b.rev), MorData(f.data.size())};
    for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = b.to_rev[f.data[a.from_rev[i]]];
    return m;
  }
  /// Vertex of rev(X) for each vertex of X, and back.
  const MorData& to_reversal(std::size_t x) const { return info_[x].to_rev; }
  const MorData& from_reversal(std::size_t x) const { return info_[x].from_rev; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges(std::size_t x) const { return info_[x].edges; }
  std::size_t edge_index(std::size_t x, std::size_t u, std::size_t w) const { return info_[x].edge_index[4 * u + w]; }

 private:
  struct Info {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::array<std::size_t, 16> edge_index{};
    std::size_t cond = 0;
    MorData to_cond;    // vertex → vertex of the condensation rep
    MorData from_cond;  // rep vertex → least vertex of its SCC
    std::size_t rev = 0;
    MorData to_rev, from_rev;
  };

  void build_info(std::size_t x) {
    const Digraph& g = reps_[x];
    Info& in = info_[x];
    in.edges = g.edges();
    in.edge_index.fill(static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < in.edges.size(); ++k) in.edge_index[4 * in.edges[k].first + in.edges[k].second] = k;
    auto label = scc_labels(g);
    Digraph raw = condense(g);
    Canonical c = canonical(raw);
    in.cond = index_.at(c.rep.code());
    in.to_cond.resize(g.n);
    for (std::size_t v = 0; v < g.n; ++v) in.to_cond[v] = c.perm[label[v]];
    in.from_cond.assign(raw.n, 0);
    for (std::size_t v = g.n; v-- > 0;) in.from_cond[c.perm[label[v]]] = static_cast<std::uint32_t>(v);
    Canonical r = canonical(g.reversed());
    in.rev = index_.at(r.rep.code());
    in.to_rev = r.perm;
    in.from_rev = detail::invert_perm(r.perm);
  }

  std::size_t max_;
  std::vector<Digraph> reps_;
  std::unordered_map<std::uint32_t, std::size_t> index_;
  std::vector<Info> info_;
};

// ---- finite sets --------------------------------------------------------------------

/// Skeletal finite sets {0..n-1}, n ≤ max; weak equivalences are bijections.
class SetCategory : public WECategory {
 public:
  explicit SetCategory(std::size_t max) : max_(max) {}

  std::string name() const override { return "sets(" + std::to_string(max_) + ")"; }
  std::size_t object_count() const override { return max_ + 1; }
  std::string object_label(std::size_t x) const override { return std::to_string(x); }
  Mor identity(std::size_t x) const override {
    Mor m{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(x), MorData(x)};
    std::iota(m.data.begin(), m.data.end(), 0u);
    return m;
  }
  Mor compose(const Mor& g, const Mor& f) const override {
    if (f.dst != g.src) throw DeformationError("functions do not compose");
    Mor m{f.src, g.dst, f.data};
    for (auto& v : m.data) v = g.data[v];
    return m;
  }
  bool is_we(const Mor& f) const override { return is_iso(f); }
  std::optional<Mor> inverse(const Mor& f) const override {
    if (f.src != f.dst) return std::nullopt;
    std::vector<bool> hit(f.dst);
    for (auto v : f.data) hit[v] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return std::nullopt;
    return Mor{f.dst, f.src, detail::invert_perm(f.data)};
  }
  void for_each_hom(std::size_t x, std::size_t y, const std::function<bool(const Mor&)>& fn) const override {
    if (x > 0 && y == 0) return;
    Mor m{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y), MorData(x, 0)};
    while (true) {
      if (!fn(m)) return;
      std::size_t i = 0;
      while (i < x && ++m.data[i] == y) m.data[i++] = 0;
      if (i == x) return;
    }
  }

 private:
  std::size_t max_;
};

// ---- finite tables --------------------------------------------------------------------

/// A category given by finite tables. Morphism data is {id}. Composites may be
/// omitted when the target hom-set has a single element.
class TableCategory : public WECategory {
 public:
  struct Arrow {
    std::string name;
    std::size_t src = 0, dst = 0;
    bool we = false;
  };

  TableCategory(std::string name, std::vector<std::string> objects) : name_(std::move(name)), objects_(std::move(objects)) {
    for (std::size_t x = 0; x < objects_.size(); ++x) add_arrow("1_" + objects_[x], x, x, true);
  }

  std::size_t add_arrow(const std::string& name, std::size_t src, std::size_t dst, bool we) {
    if (src >= objects_.size() || dst >= objects_.size()) throw DeformationError("arrow " + name + " has unknown endpoints");
    if (by_name_.count(name)) throw DeformationError("duplicate arrow " + name);
    by_name_.emplace(name, arrows_.size());
    arrows_.push_back({name, src, dst, we});
    return arrows_.size() - 1;
  }
  void set_composite(const std::string& g, const std::string& f, const std::string& gf) {
    std::size_t a = arrow(f), b = arrow(g), c = arrow(gf);
    if (arrows_[a].dst != arrows_[b].src || arrows_[c].src != arrows_[a].src || arrows_[c].dst != arrows_[b].dst)
      throw DeformationError("composite " + g + "." + f + " = " + gf + " is ill-typed");
    table_[{b, a}] = c;
  }

  std::size_t object(const std::string& name) const {
    auto it = std::find(objects_.begin(), objects_.end(), name);
    if (it == objects_.end()) throw DeformationError("unknown object " + name);
    return static_cast<std::size_t>(it - objects_.begin());
  }
  std::size_t arrow(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw DeformationError("unknown arrow " + name);
    return it->second;
  }
  Mor mor(std::size_t id) const {
    return {static_cast<std::uint32_t>(arrows_[id].src), static_cast<std::uint32_t>(arrows_[id].dst), {static_cast<std::uint32_t>(id)}};
  }
  Mor mor(const std::string& name) const { return mor(arrow(name)); }
  /// The unique morphism x → y; throws when there is none or several.
  Mor unique(std::size_t x, std::size_t y) const {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < arrows_.size(); ++i)
      if (arrows_[i].src == x && arrows_[i].dst == y) {
        if (found) throw DeformationError("no unique arrow " + objects_[x] + " -> " + objects_[y]);
        found = i;
      }
    if (!found) throw DeformationError("no arrow " + objects_[x] + " -> " + objects_[y]);
    return mor(*found);
  }
  const Arrow& arrow_at(const Mor& m) const { return arrows_.at(m.data.at(0)); }

  std::string name() const override { return name_; }
  std::size_t object_count() const override { return objects_.size(); }
  std::string object_label(std::size_t x) const override { return objects_[x]; }
  Mor identity(std::size_t x) const override { return mor(x); }
  Mor compose(const Mor& g, const Mor& f) const override {
    if (f.dst != g.src) throw DeformationError("arrows " + describe(g) + " and " + describe(f) + " do not compose");
    if (g.data[0] == g.dst) return f;  // identities are listed first
    if (f.data[0] == f.src) return g;
    auto it = table_.find({g.data[0], f.data[0]});
    if (it != table_.end()) return mor(it->second);
    try {
      return unique(f.src, g.dst);
    } catch (const DeformationError&) {
      throw DeformationError("composition table has no entry for " + describe(g) + " . " + describe(f));
    }
  }
  bool is_we(const Mor& f) const override { return arrow_at(f).we; }
  std::optional<Mor> inverse(const Mor& f) const override {
    for (std::size_t i = 0; i < arrows_.size(); ++i)
      if (arrows_[i].src == f.dst && arrows_[i].dst == f.src) {
        Mor g = mor(i);
        if (compose(g, f) == identity(f.src) && compose(f, g) == identity(f.dst)) return g;
      }
    return std::nullopt;
  }
  void for_each_hom(std::size_t x, std::size_t y, const std::function<bool(const Mor&)>& fn) const override {
    for (std::size_t i = 0; i < arrows_.size(); ++i)
      if (arrows_[i].src == x && arrows_[i].dst == y && !fn(mor(i))) return;
  }
  std::string describe(const Mor& f) const override { return arrow_at(f).name; }

 private:
  std::string name_;
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::map<std::string, std::size_t> by_name_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> table_;
};

// ---- models ---------------------------------------------------------------------------

/// Categories, deformations, functors and transformations of one model.
struct Model {
  std::string name;
  CategoryPtr base;
  std::vector<RightDeformation> deformations;
  std::vector<WEFunctor> functors;
  std::vector<NatTrans> transformations;

  const RightDeformation& deformation_of(const CategoryPtr& c) const {
    for (const auto& d : deformations)
      if (d.cat == c) return d;
    throw DeformationError("model " + name + " has no deformation on " + c->name());
  }
  /// The base deformation, or the trivial one on categories without a deformation.
  RightDeformation deformation_or_trivial(const CategoryPtr& c) const {
    for (const auto& d : deformations)
      if (d.cat == c) return d;
    return trivial_deformation(c);
  }
  const WEFunctor& functor(const std::string& n) const {
    for (const auto& f : functors)
      if (f.name == n) return f;
    throw DeformationError("model " + name + " has no functor " + n);
  }
  const NatTrans& transformation(const std::string& n) const {
    for (const auto& t : transformations)
      if (t.name == n) return t;
    throw DeformationError("model " + name + " has no transformation " + n);
  }
  /// F_1, ..., F_n with the deformation of each source category.
  DeformableList list(const std::vector<std::string>& names) const {
    DeformableList l;
    for (const auto& n : names) {
      l.functors.push_back(functor(n));
      l.deformations.push_back(deformation_or_trivial(l.functors.back().source));
    }
    if (!l.functors.empty()) l.final_radiant = deformation_or_trivial(l.functors.back().target).radiant;
    return l;
  }
};

/// Graphs on at most `max_vertices` vertices with R = condensation. Functors:
/// vertices and vertices-edges into finite sets, reversal and condensation on
/// graphs. Transformations: include (vertices ⇒ vertices-edges), source
/// (vertices-edges ⇒ vertices), unit (id ⇒ condensation), flip (vertices.reversal
/// ⇒ vertices).
inline Model graph_model(std::size_t max_vertices = Digraph::kMaxVertices) {
  auto g = std::make_shared<const GraphCategory>(max_vertices);
  std::size_t max_ve = max_vertices + max_vertices * (max_vertices > 0 ? max_vertices - 1 : 0);
  auto sets = std::make_shared<const SetCategory>(max_ve);
  CategoryPtr gc = g, sc = sets;
  Model m{"graph", gc, {}, {}, {}};

  WEFunctor cond{"condensation", gc, gc, [g](std::size_t x) { return g->condensation(x); },
                 [g](const Mor& f) { return g->condensation(f); }};
  NatTrans unit{"unit", identity_functor(gc), cond, [g](std::size_t x) { return g->unit(x); }};
  m.deformations.push_back({"condensation", gc, [g](std::size_t x) { return g->radiant(x); }, cond, unit});

  WEFunctor vertices{"vertices", gc, sc, [g](std::size_t x) { return std::size_t{g->graph(x).n}; }, [g](const Mor& f) {
                       return Mor{g->graph(f.src).n, g->graph(f.dst).n, f.data};
                     }};
  auto ve_size = [g](std::size_t x) { return g->graph(x).n + g->edges(x).size(); };
  WEFunctor ve{"vertices-edges", gc, sc, ve_size, [g, ve_size](const Mor& f) {
                 std::size_t ny = g->graph(f.dst).n;
                 Mor m{static_cast<std::uint32_t>(ve_size(f.src)), static_cast<std::uint32_t>(ve_size(f.dst)), f.data};
                 for (auto [u, w] : g->edges(f.src)) {
                   std::size_t a = f.data[u], b = f.data[w];
                   m.data.push_back(static_cast<std::uint32_t>(a == b ? a : ny + g->edge_index(f.dst, a, b)));
                 }
                 return m;
               }};
  WEFunctor rev{"reversal", gc, gc, [g](std::size_t x) { return g->reversal(x); },
                [g](const Mor& f) { return g->reversal(f); }};
  m.functors = {vertices, ve, rev, cond};

  NatTrans include{"include", vertices, ve, [g, ve_size](std::size_t x) {
                     Mor c = detail::sets_identity(g->graph(x).n);
                     c.dst = static_cast<std::uint32_t>(ve_size(x));
                     return c;
                   }};
  NatTrans source{"source", ve, vertices, [g, ve_size](std::size_t x) {
                    Mor c = detail::sets_identity(g->graph(x).n);
                    c.src = static_cast<std::uint32_t>(ve_size(x));
                    for (auto e : g->edges(x)) c.data.push_back(static_cast<std::uint32_t>(e.first));
                    return c;
                  }};
  NatTrans flip{"flip", compose(vertices, rev), vertices, [g](std::size_t x) {
                  Mor c = detail::sets_identity(g->graph(x).n);
                  c.data = g->from_reversal(x);
                  return c;
                }};
  m.transformations = {include, source, unit, flip};
  return m;
}

/// A model given by finite tables:
///
/// {"name", "objects": [..], "morphisms": [{"name", "src", "dst", "we"}],
///  "compose": [[g, f, gf], ..],
///  "deformation": {"radiant": [..], "R": {"objects": {..}, "morphisms": {..}}, "unit": {x: arrow}},
///  "functors": [{"name", "objects": {..}, "morphisms": {..}}]}
///
/// Identities are named 1_x and need not be listed. Functors are endofunctors.
/// Any arrow image, composite or unit component may be omitted when the
/// relevant hom-set has exactly one element.
inline Model table_model(const nlohmann::ordered_json& doc) {
  using J = nlohmann::ordered_json;
  auto need = [](const J& j, const char* key) -> const J& {
    if (!j.is_object() || !j.contains(key)) throw DeformationError(std::string("model needs \"") + key + "\"");
    return j[key];
  };
  std::vector<std::string> objects;
  for (const auto& o : need(doc, "objects")) objects.push_back(o.get<std::string>());
  auto t = std::make_shared<TableCategory>(doc.value("name", std::string("table")), objects);
  for (const auto& a : doc.value("morphisms", J::array()))
    t->add_arrow(need(a, "name").get<std::string>(), t->object(need(a, "src").get<std::string>()),
                 t->object(need(a, "dst").get<std::string>()), a.value("we", false));
  for (const auto& c : doc.value("compose", J::array())) {
    if (!c.is_array() || c.size() != 3) throw DeformationError("compose entries are [g, f, gf]");
    t->set_composite(c[0].get<std::string>(), c[1].get<std::string>(), c[2].get<std::string>());
  }
  CategoryPtr cat = t;
  Model m{t->name(), cat, {}, {}, {}};

  // An endofunctor from object and arrow tables.
  auto endo = [t, cat](const std::string& name, const J& spec) {
    std::vector<std::size_t> obj(t->object_count());
    for (std::size_t x = 0; x < obj.size(); ++x) {
      const J& o = spec.value("objects", J::object());
      if (!o.contains(t->object_label(x))) throw DeformationError(name + " has no image for object " + t->object_label(x));
      obj[x] = t->object(o[t->object_label(x)].get<std::string>());
    }
    std::map<std::uint32_t, Mor> arr;
    const J& ms = spec.value("morphisms", J::object());
    t->for_each_morphism([&](const Mor& f) {
      std::string n = t->describe(f);
      if (f.data[0] == f.src) arr.emplace(f.data[0], t->identity(obj[f.src]));
      else if (ms.contains(n)) arr.emplace(f.data[0], t->mor(ms[n].get<std::string>()));
      else arr.emplace(f.data[0], t->unique(obj[f.src], obj[f.dst]));
      return true;
    });
    return WEFunctor{name, cat, cat, [obj](std::size_t x) { return obj.at(x); }, [arr](const Mor& f) { return arr.at(f.data[0]); }};
  };

  for (const auto& f : doc.value("functors", J::array())) m.functors.push_back(endo(need(f, "name").get<std::string>(), f));
  if (doc.contains("deformation")) {
    const J& d = doc["deformation"];
    std::vector<bool> rad(t->object_count());
    for (const auto& x : need(d, "radiant")) rad[t->object(x.get<std::string>())] = true;
    WEFunctor r = endo("R", need(d, "R"));
    std::vector<Mor> unit;
    const J& u = d.value("unit", J::object());
    for (std::size_t x = 0; x < t->object_count(); ++x)
      unit.push_back(u.contains(t->object_label(x)) ? t->mor(u[t->object_label(x)].get<std::string>()) : t->unique(x, r(x)));
    m.deformations.push_back({"R", cat, [rad](std::size_t x) { return bool(rad.at(x)); }, r,
                              NatTrans{"unit", identity_functor(cat), r, [unit](std::size_t x) { return unit.at(x); }}});
  }
  return m;
}

/// a → b → c with every arrow a weak equivalence and R = (a ↦ b, b ↦ c, c ↦ c):
/// a valid deformation whose R is not idempotent.
inline Model chain_model() {
  return table_model(nlohmann::ordered_json::parse(R"({
    "name": "chain",
    "objects": ["a", "b", "c"],
    "morphisms": [{"name": "u", "src": "a", "dst": "b", "we": true},
                  {"name": "v", "src": "b", "dst": "c", "we": true},
                  {"name": "vu", "src": "a", "dst": "c", "we": true}],
    "deformation": {"radiant": ["b", "c"], "R": {"objects": {"a": "b", "b": "c", "c": "c"}}},
    "functors": [{"name": "id", "objects": {"a": "a", "b": "b", "c": "c"}}]
  })"));
}

}  // namespace spanshadow
