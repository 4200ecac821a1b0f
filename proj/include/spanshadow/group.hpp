#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spanshadow/finset.hpp"

namespace spanshadow {

/// A finite group given by its multiplication table on indices 0..n-1.
class FinGroup {
 public:
  FinGroup() : FinGroup("1", {"e"}, {{0}}) {}

  /// table[a][b] = index of a·b. The group axioms are checked exhaustively.
  FinGroup(std::string name, std::vector<std::string> labels, std::vector<std::vector<std::size_t>> table)
      : name_(std::move(name)), labels_(std::move(labels)), table_(std::move(table)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw SpanError("group " + name_ + " has no elements");
    std::vector<Element> es;
    for (const auto& l : labels_) es.push_back(Element::atom(l));
    elements_ = FinSet(name_, std::move(es));
    if (table_.size() != n) throw SpanError("group " + name_ + ": table has the wrong number of rows");
    for (const auto& row : table_) {
      if (row.size() != n) throw SpanError("group " + name_ + ": table row has the wrong length");
      for (std::size_t v : row)
        if (v >= n) throw SpanError("group " + name_ + ": table entry out of range");
    }
    std::optional<std::size_t> e;
    for (std::size_t a = 0; a < n && !e; ++a) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) ok = table_[a][x] == x && table_[x][a] == x;
      if (ok) e = a;
    }
    if (!e) throw SpanError("group " + name_ + " has no identity");
    unit_ = *e;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
            throw SpanError("group " + name_ + " is not associative at (" + labels_[a] + "," + labels_[b] + "," +
                            labels_[c] + ")");
    inverse_.assign(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (table_[a][b] == unit_ && table_[b][a] == unit_) inverse_[a] = b;
    for (std::size_t a = 0; a < n; ++a)
      if (inverse_[a] == n) throw SpanError("group " + name_ + ": " + labels_[a] + " has no inverse");
  }

  static FinGroup from_labels(std::string name, std::vector<std::string> labels,
                              const std::vector<std::vector<std::string>>& table) {
    std::vector<std::vector<std::size_t>> idx;
    auto find = [&](const std::string& l) {
      auto it = std::find(labels.begin(), labels.end(), l);
      if (it == labels.end()) throw SpanError("group " + name + ": unknown element " + l);
      return static_cast<std::size_t>(it - labels.begin());
    };
    for (const auto& row : table) {
      idx.emplace_back();
      for (const auto& l : row) idx.back().push_back(find(l));
    }
    return FinGroup(std::move(name), std::move(labels), std::move(idx));
  }

  /// C_n with elements e, r, r2, ..., r^{n-1}.
  static FinGroup cyclic(std::size_t n, std::string name = {}) {
    std::vector<std::string> labels{"e"};
    for (std::size_t k = 1; k < n; ++k) labels.push_back(k == 1 ? "r" : "r" + std::to_string(k));
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FinGroup(name.empty() ? "C" + std::to_string(n) : std::move(name), std::move(labels), std::move(t));
  }

  /// S_3 as permutations of {0,1,2}; r is the 3-cycle 0→1→2, s swaps 1 and 2,
  /// and sr^k means s∘r^k.
  static FinGroup s3() {
    using Perm = std::array<int, 3>;
    auto comp = [](const Perm& p, const Perm& q) { return Perm{p[q[0]], p[q[1]], p[q[2]]}; };
    Perm id{0, 1, 2}, r{1, 2, 0}, s{0, 2, 1};
    Perm r2 = comp(r, r);
    std::vector<Perm> ps{id, r, r2, s, comp(s, r), comp(s, r2)};
    std::vector<std::string> labels{"e", "r", "r2", "s", "sr", "sr2"};
    std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(6));
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b)
        t[a][b] = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), comp(ps[a], ps[b])) - ps.begin());
    return FinGroup("S3", std::move(labels), std::move(t));
  }

  const std::string& name() const { return name_; }
  std::size_t order() const { return labels_.size(); }
  std::size_t unit() const { return unit_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  const std::string& label(std::size_t a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const FinSet& elements() const { return elements_; }
  const std::vector<std::vector<std::size_t>>& table() const { return table_; }

  std::size_t index(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw SpanError("group " + name_ + " has no element " + label);
    return static_cast<std::size_t>(it - labels_.begin());
  }

  friend bool operator==(const FinGroup& a, const FinGroup& b) {
    return a.labels_ == b.labels_ && a.table_ == b.table_;
  }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> table_;
  FinSet elements_;
  std::size_t unit_ = 0;
  std::vector<std::size_t> inverse_;
};

/// A subgroup, as a sorted list of element indices of its parent.
struct Subgroup {
  std::string name;
  std::vector<std::size_t> members;

  bool contains(std::size_t g) const { return std::binary_search(members.begin(), members.end(), g); }
  std::size_t order() const { return members.size(); }

  /// Checks that `members` contains the unit and is closed under products
  /// and inverses.
  static Subgroup make(const FinGroup& g, std::string name, std::vector<std::size_t> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    Subgroup h{std::move(name), std::move(members)};
    for (std::size_t m : h.members)
      if (m >= g.order()) throw SpanError("subgroup " + h.name + " has an element outside " + g.name());
    if (!h.contains(g.unit())) throw SpanError("subgroup " + h.name + " does not contain the unit");
    for (std::size_t a : h.members) {
      if (!h.contains(g.inverse(a))) throw SpanError("subgroup " + h.name + " is not closed under inverses");
      for (std::size_t b : h.members)
        if (!h.contains(g.mul(a, b))) throw SpanError("subgroup " + h.name + " is not closed under products");
    }
    return h;
  }

  static Subgroup trivial(const FinGroup& g) { return make(g, "1", {g.unit()}); }
  static Subgroup whole(const FinGroup& g) {
    std::vector<std::size_t> all(g.order());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return make(g, g.name(), all);
  }

  /// The subgroup as a group in its own right.
  FinGroup as_group(const FinGroup& g) const {
    std::vector<std::string> labels;
    for (std::size_t m : members) labels.push_back(g.label(m));
    std::vector<std::vector<std::size_t>> t(members.size(), std::vector<std::size_t>(members.size()));
    auto pos = [&](std::size_t x) {
      return static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), x) - members.begin());
    };
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = 0; j < members.size(); ++j) t[i][j] = pos(g.mul(members[i], members[j]));
    return FinGroup(name, std::move(labels), std::move(t));
  }
};

/// Every subgroup, by brute force over subsets, ordered by size and then by
/// member list. The trivial subgroup is named "1", the whole group by the
/// group's name, cyclic subgroups "<g>" for the first generator, and the rest
/// by their member labels.
inline std::vector<Subgroup> all_subgroups(const FinGroup& g) {
  const std::size_t n = g.order();
  if (n > 16) throw SpanError("subgroup enumeration is limited to groups of order 16");
  std::vector<Subgroup> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!(mask & (1u << g.unit()))) continue;
    std::vector<std::size_t> ms;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) ms.push_back(i);
    bool closed = true;
    for (std::size_t a : ms)
      for (std::size_t b : ms)
        if (!(mask & (1u << g.mul(a, b)))) closed = false;
    if (!closed) continue;
    std::string name;
    if (ms.size() == 1) {
      name = "1";
    } else if (ms.size() == n) {
      name = g.name();
    } else {
      for (std::size_t gen : ms) {
        std::vector<std::size_t> powers{g.unit()};
        for (std::size_t x = gen; x != g.unit(); x = g.mul(x, gen)) powers.push_back(x);
        if (powers.size() == ms.size()) {
          name = "<" + g.label(gen) + ">";
          break;
        }
      }
      if (name.empty()) {
        name = "{";
        for (std::size_t i = 0; i < ms.size(); ++i) name += (i ? "," : "") + g.label(ms[i]);
        name += "}";
      }
    }
    out.push_back(Subgroup::make(g, name, ms));
  }
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.members.size() != b.members.size() ? a.members.size() < b.members.size() : a.members < b.members;
  });
  return out;
}

/// N(H) = {g : gHg⁻¹ = H}.
inline Subgroup normalizer(const FinGroup& g, const Subgroup& h) {
  std::vector<std::size_t> ns;
  for (std::size_t x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (std::size_t m : h.members)
      if (!h.contains(g.mul(g.mul(x, m), g.inverse(x)))) ok = false;
    if (ok) ns.push_back(x);
  }
  return Subgroup::make(g, "N(" + h.name + ")", ns);
}

/// WH = N(H)/H. Each coset is represented by its least element index; the
/// group's labels are the representatives' labels.
struct Weyl {
  FinGroup group;
  Subgroup normalizer;
  std::vector<std::size_t> reps;  // representative in G of each WH element
  std::vector<std::size_t> coset;  // coset[g] for g in N(H); unused entries are npos
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t of(std::size_t g) const {
    if (coset[g] == npos) throw SpanError("element is not in the normalizer");
    return coset[g];
  }
};

inline Weyl weyl(const FinGroup& g, const Subgroup& h) {
  Subgroup::make(g, h.name, h.members);
  Subgroup n = normalizer(g, h);
  std::vector<std::size_t> coset(g.order(), Weyl::npos), reps;
  for (std::size_t x : n.members) {
    if (coset[x] != Weyl::npos) continue;
    std::size_t id = reps.size();
    reps.push_back(x);
    for (std::size_t m : h.members) coset[g.mul(x, m)] = id;
  }
  std::vector<std::string> labels;
  for (std::size_t r : reps) labels.push_back(g.label(r));
  std::vector<std::vector<std::size_t>> t(reps.size(), std::vector<std::size_t>(reps.size()));
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j) t[i][j] = coset[g.mul(reps[i], reps[j])];
  FinGroup w("W(" + h.name + ")", std::move(labels), std::move(t));
  return {std::move(w), std::move(n), std::move(reps), std::move(coset)};
}

/// A subgroup by name: "1", the group's name, a name from all_subgroups, or
/// one of `named`.
inline Subgroup find_subgroup(const FinGroup& g, const std::string& name, const std::vector<Subgroup>& named = {}) {
  for (const auto& h : named)
    if (h.name == name) return h;
  for (const auto& h : all_subgroups(g))
    if (h.name == name) return h;
  throw SpanError("group " + g.name() + " has no subgroup named " + name);
}

}  // namespace spanshadow
