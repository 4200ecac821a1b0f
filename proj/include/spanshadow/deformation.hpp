#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <json.hpp>

#include "spanshadow/finset.hpp"

namespace spanshadow {

/// Morphism payloads are short: at most 16 entries in the bundled models.
using MorData = boost::container::small_vector<std::uint32_t, 16>;

/// A morphism of a finitely presented category. `data` is interpreted by the
/// owning category: a vertex map, a function, or a table id.
struct Mor {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  MorData data;

  friend bool operator==(const Mor&, const Mor&) = default;
};

class DeformationError : public SpanError {
 public:
  using SpanError::SpanError;
};

/// A category with weak equivalences whose hom-sets are enumerated on demand.
class WECategory {
 public:
  virtual ~WECategory() = default;

  virtual std::string name() const = 0;
  virtual std::size_t object_count() const = 0;
  virtual std::string object_label(std::size_t x) const = 0;
  virtual Mor identity(std::size_t x) const = 0;
  /// g ∘ f; requires f.dst == g.src.
  virtual Mor compose(const Mor& g, const Mor& f) const = 0;
  virtual bool is_we(const Mor& f) const = 0;
  virtual std::optional<Mor> inverse(const Mor& f) const = 0;
  /// Calls fn on each morphism x → y until fn returns false.
  virtual void for_each_hom(std::size_t x, std::size_t y, const std::function<bool(const Mor&)>& fn) const = 0;
  virtual std::string describe(const Mor& f) const {
    std::ostringstream out;
    out << object_label(f.src) << "->" << object_label(f.dst) << "[";
    for (std::size_t i = 0; i < f.data.size(); ++i) out << (i ? "," : "") << f.data[i];
    out << "]";
    return out.str();
  }

  bool is_iso(const Mor& f) const { return inverse(f).has_value(); }

  /// Every morphism of the category, grouped by (source, target).
  void for_each_morphism(const std::function<bool(const Mor&)>& fn) const {
    bool go = true;
    for (std::size_t x = 0; x < object_count() && go; ++x)
      for (std::size_t y = 0; y < object_count() && go; ++y) for_each_hom(x, y, [&](const Mor& f) { return go = fn(f); });
  }
};

using CategoryPtr = std::shared_ptr<const WECategory>;

// ---- reports ------------------------------------------------------------------

/// Outcome of an exhaustive check: counts of what was visited and the first
/// few violations.
struct Report {
  Report() = default;
  explicit Report(std::string what) : check(std::move(what)) {}

  std::string check;
  std::size_t objects = 0;
  std::size_t morphisms = 0;
  std::size_t violation_count = 0;
  std::vector<std::string> violations;

  static constexpr std::size_t kKept = 10;

  bool ok() const { return violation_count == 0; }
  void fail(std::string what) {
    if (violations.size() < kKept) violations.push_back(std::move(what));
    ++violation_count;
  }
  void absorb(const Report& r) {
    objects += r.objects;
    morphisms += r.morphisms;
    for (const auto& v : r.violations) fail(r.check + ": " + v);
    violation_count += r.violation_count - r.violations.size();
  }
  nlohmann::ordered_json to_json() const {
    return {{"check", check},
            {"ok", ok()},
            {"objects", objects},
            {"morphisms", morphisms},
            {"violation_count", violation_count},
            {"violations", violations}};
  }
};

// ---- functors and transformations ---------------------------------------------

struct WEFunctor {
  std::string name;
  CategoryPtr source;
  CategoryPtr target;
  std::function<std::size_t(std::size_t)> on_object;
  std::function<Mor(const Mor&)> on_morphism;

  std::size_t operator()(std::size_t x) const { return on_object(x); }
  Mor operator()(const Mor& f) const { return on_morphism(f); }
};

inline WEFunctor identity_functor(const CategoryPtr& c) {
  return {"id", c, c, [](std::size_t x) { return x; }, [](const Mor& f) { return f; }};
}

/// g ∘ f.
inline WEFunctor compose(const WEFunctor& g, const WEFunctor& f) {
  if (f.target != g.source) throw DeformationError("functors " + g.name + " and " + f.name + " do not compose");
  return {g.name + "." + f.name, f.source, g.target, [g, f](std::size_t x) { return g(f(x)); },
          [g, f](const Mor& m) { return g(f(m)); }};
}

/// Composite of F_1, ..., F_n applied in list order.
inline WEFunctor compose_list(const std::vector<WEFunctor>& fs) {
  if (fs.empty()) throw DeformationError("empty functor list");
  WEFunctor acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = compose(fs[i], acc);
  return acc;
}

struct NatTrans {
  std::string name;
  WEFunctor from;
  WEFunctor to;
  std::function<Mor(std::size_t)> component;

  Mor operator()(std::size_t x) const { return component(x); }
};

inline NatTrans identity_nat(const WEFunctor& f) {
  return {"1", f, f, [f](std::size_t x) { return f.target->identity(f(x)); }};
}

/// υ ∘ η.
inline NatTrans vertical(const NatTrans& upsilon, const NatTrans& eta) {
  return {upsilon.name + "*" + eta.name, eta.from, upsilon.to,
          [upsilon, eta](std::size_t x) { return eta.from.target->compose(upsilon(x), eta(x)); }};
}

/// η whiskered by a functor on the left: Hη: HF ⇒ HG.
inline NatTrans whisker_left(const WEFunctor& h, const NatTrans& eta) {
  return {h.name + eta.name, compose(h, eta.from), compose(h, eta.to), [h, eta](std::size_t x) { return h(eta(x)); }};
}

/// η whiskered on the right: ηK: FK ⇒ GK.
inline NatTrans whisker_right(const NatTrans& eta, const WEFunctor& k) {
  return {eta.name + k.name, compose(eta.from, k), compose(eta.to, k), [eta, k](std::size_t x) { return eta(k(x)); }};
}

/// η₂ * η₁: F₂F₁ ⇒ G₂G₁, component η₂(G₁X) ∘ F₂(η₁X).
inline NatTrans horizontal(const NatTrans& eta2, const NatTrans& eta1) {
  return {eta2.name + "o" + eta1.name, compose(eta2.from, eta1.from), compose(eta2.to, eta1.to),
          [eta2, eta1](std::size_t x) { return eta2.from.target->compose(eta2(eta1.to(x)), eta2.from(eta1(x))); }};
}

// ---- basic checks ----------------------------------------------------------------

/// Identity laws, associativity on all composable triples, w.e. containing
/// identities and closed under composition with isomorphisms.
inline Report check_category(const WECategory& c) {
  Report r{"category"};
  std::vector<std::vector<std::vector<Mor>>> homs(c.object_count(), std::vector<std::vector<Mor>>(c.object_count()));
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    ++r.objects;
    Mor id = c.identity(x);
    if (id.src != x || id.dst != x) r.fail("identity of " + c.object_label(x) + " has wrong endpoints");
    if (!c.is_we(id)) r.fail("identity of " + c.object_label(x) + " is not a weak equivalence");
  }
  c.for_each_morphism([&](const Mor& f) {
    ++r.morphisms;
    homs[f.src][f.dst].push_back(f);
    if (!(c.compose(c.identity(f.dst), f) == f) || !(c.compose(f, c.identity(f.src)) == f))
      r.fail("identity law fails at " + c.describe(f));
    return true;
  });
  const std::size_t n = c.object_count();
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t x = 0; x < n; ++x)
      for (const auto& f : homs[w][x])
        for (std::size_t y = 0; y < n; ++y)
          for (const auto& g : homs[x][y]) {
            Mor gf = c.compose(g, f);
            if (gf.src != w || gf.dst != y) r.fail("composite has wrong endpoints: " + c.describe(gf));
            for (std::size_t z = 0; z < n; ++z)
              for (const auto& h : homs[y][z])
                if (!(c.compose(h, gf) == c.compose(c.compose(h, g), f)))
                  r.fail("associativity fails at " + c.describe(f) + ", " + c.describe(g) + ", " + c.describe(h));
          }
  // Weak equivalences are closed under composition with isomorphisms.
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (const auto& w : homs[x][y]) {
        if (!c.is_we(w)) continue;
        for (std::size_t z = 0; z < n; ++z) {
          for (const auto& i : homs[y][z])
            if (c.is_iso(i) && !c.is_we(c.compose(i, w))) r.fail("iso after w.e. is not a w.e.: " + c.describe(i));
          for (const auto& i : homs[z][x])
            if (c.is_iso(i) && !c.is_we(c.compose(w, i))) r.fail("w.e. after iso is not a w.e.: " + c.describe(i));
        }
      }
  return r;
}

/// F(id) = id and F(g∘f) = F(g)∘F(f) on all composable pairs.
inline Report check_functor(const WEFunctor& f) {
  Report r{"functor " + f.name};
  const WECategory& c = *f.source;
  const WECategory& d = *f.target;
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    ++r.objects;
    if (f.on_object(x) >= d.object_count()) r.fail("object " + c.object_label(x) + " maps outside the target");
    else if (!(f(c.identity(x)) == d.identity(f(x)))) r.fail("identity of " + c.object_label(x) + " not preserved");
  }
  std::vector<std::vector<Mor>> into(c.object_count());
  c.for_each_morphism([&](const Mor& m) {
    ++r.morphisms;
    Mor fm = f(m);
    if (fm.src != f(m.src) || fm.dst != f(m.dst)) r.fail("image of " + c.describe(m) + " has wrong endpoints");
    into[m.dst].push_back(m);
    return true;
  });
  c.for_each_morphism([&](const Mor& g) {
    for (const auto& m : into[g.src])
      if (!(f(c.compose(g, m)) == d.compose(f(g), f(m)))) r.fail("composition not preserved at " + c.describe(m) + ", " + c.describe(g));
    return true;
  });
  return r;
}

/// Components well-typed and G(f)∘η_X = η_Y∘F(f) for every morphism f.
inline Report check_natural(const NatTrans& eta) {
  Report r{"naturality of " + eta.name};
  const WECategory& c = *eta.from.source;
  const WECategory& d = *eta.from.target;
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    ++r.objects;
    Mor e = eta(x);
    if (e.src != eta.from(x) || e.dst != eta.to(x)) r.fail("component at " + c.object_label(x) + " has wrong endpoints");
  }
  c.for_each_morphism([&](const Mor& f) {
    ++r.morphisms;
    if (!(d.compose(eta.to(f), eta(f.src)) == d.compose(eta(f.dst), eta.from(f))))
      r.fail("square fails at " + c.describe(f));
    return true;
  });
  return r;
}

/// F sends every weak equivalence between objects satisfying `within` to a
/// weak equivalence.
inline Report check_preserves_we(const WEFunctor& f, const std::function<bool(std::size_t)>& within) {
  Report r{"we-preservation of " + f.name};
  const WECategory& c = *f.source;
  std::vector<char> in(c.object_count());
  for (std::size_t x = 0; x < c.object_count(); ++x) in[x] = within(x);
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    if (!in[x]) continue;
    ++r.objects;
    for (std::size_t y = 0; y < c.object_count(); ++y) {
      if (!in[y]) continue;
      c.for_each_hom(x, y, [&](const Mor& m) {
        if (!c.is_we(m)) return true;
        ++r.morphisms;
        if (!f.target->is_we(f(m))) r.fail(f.name + " breaks the w.e. " + c.describe(m));
        return true;
      });
    }
  }
  return r;
}

inline bool all_objects(std::size_t) { return true; }

// ---- deformations ----------------------------------------------------------------

/// Radiant objects, a replacement R landing in them, and a natural weak
/// equivalence id → R.
struct RightDeformation {
  std::string name;
  CategoryPtr cat;
  std::function<bool(std::size_t)> radiant;
  WEFunctor R;
  NatTrans unit;
};

/// R = id, every object radiant.
inline RightDeformation trivial_deformation(const CategoryPtr& c) {
  WEFunctor id = identity_functor(c);
  return {"trivial", c, all_objects, id, identity_nat(id)};
}

/// The deformation data alone: R lands in radiant objects, unit components
/// are weak equivalences, and the unit is natural.
inline Report check_deformation_data(const RightDeformation& d) {
  Report r{"deformation " + d.name};
  const WECategory& c = *d.cat;
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    ++r.objects;
    if (!d.radiant(d.R(x))) r.fail("R(" + c.object_label(x) + ") = " + c.object_label(d.R(x)) + " is not radiant");
    if (!c.is_we(d.unit(x))) r.fail("unit at " + c.object_label(x) + " is not a weak equivalence");
  }
  r.absorb(check_natural(d.unit));
  return r;
}

/// F preserves w.e. on radiant objects, plus the deformation data.
inline Report validate_deformation(const WEFunctor& f, const RightDeformation& d) {
  if (f.source != d.cat) throw DeformationError("deformation " + d.name + " is not on the source of " + f.name);
  Report r{"validate " + f.name + " with " + d.name};
  r.absorb(check_deformation_data(d));
  r.absorb(check_preserves_we(f, d.radiant));
  return r;
}

/// ℝF = F ∘ R. Throws unless the deformation is valid for F and ℝF preserves
/// every weak equivalence.
inline WEFunctor derived_functor(const WEFunctor& f, const RightDeformation& d) {
  Report v = validate_deformation(f, d);
  if (!v.ok()) throw DeformationError("invalid deformation: " + v.violations.front());
  WEFunctor rf = compose(f, d.R);
  rf.name = "R" + f.name;
  Report p = check_preserves_we(rf, all_objects);
  if (!p.ok()) throw DeformationError("derived functor does not preserve weak equivalences: " + p.violations.front());
  return rf;
}

struct Expansion {
  std::optional<RightDeformation> deformation;  // set on success
  std::optional<std::size_t> witness;           // an X with F(X) → F(RX) not a w.e.
  Report report;
};

/// Adds `extra` to the radiant objects when each F(X) → F(RX) is a weak
/// equivalence. On success the enlarged subcategory is re-checked: F preserves
/// w.e. on it, and for each w.e. f: Y → Z there the square
/// F(Y) → F(RY) → F(RZ) = F(Y) → F(Z) → F(RZ) commutes with three w.e. sides.
inline Expansion expand_radiant(const RightDeformation& d, const WEFunctor& f, const std::vector<std::size_t>& extra) {
  const WECategory& c = *d.cat;
  const WECategory& t = *f.target;
  Expansion out{std::nullopt, std::nullopt, Report{"expand " + d.name}};
  for (std::size_t x : extra) {
    if (x >= c.object_count()) throw DeformationError("expand_radiant: object out of range");
    ++out.report.objects;
    if (!t.is_we(f(d.unit(x)))) {
      out.witness = x;
      out.report.fail(f.name + "(unit at " + c.object_label(x) + ") is not a weak equivalence");
      return out;
    }
  }
  auto base = d.radiant;
  std::vector<std::size_t> added = extra;
  RightDeformation e = d;
  e.name = d.name + "+" + std::to_string(extra.size());
  e.radiant = [base, added](std::size_t x) { return base(x) || std::find(added.begin(), added.end(), x) != added.end(); };
  Report sq{"two-out-of-three"};
  for (std::size_t y = 0; y < c.object_count(); ++y) {
    if (!e.radiant(y)) continue;
    for (std::size_t z = 0; z < c.object_count(); ++z) {
      if (!e.radiant(z)) continue;
      c.for_each_hom(y, z, [&](const Mor& m) {
        if (!c.is_we(m)) return true;
        ++sq.morphisms;
        Mor top = f(d.unit(y)), bottom = f(d.unit(z)), right = f(d.R(m)), left = f(m);
        if (!(t.compose(right, top) == t.compose(bottom, left))) sq.fail("square fails at " + c.describe(m));
        if (!t.is_we(top) || !t.is_we(bottom) || !t.is_we(right)) sq.fail("a side is not a w.e. at " + c.describe(m));
        if (!t.is_we(left)) sq.fail(f.name + " breaks the w.e. " + c.describe(m));
        return true;
      });
    }
  }
  out.report.absorb(sq);
  if (out.report.ok()) out.deformation = std::move(e);
  return out;
}

namespace detail {
inline WEFunctor derive(const WEFunctor& f, const RightDeformation& d) {
  WEFunctor rf = compose(f, d.R);
  rf.name = "R" + f.name;
  return rf;
}
}  // namespace detail

/// η̃: ℝF ⇒ ℝG with component η at RX, for η: F ⇒ G and a deformation d valid
/// for both F and G. The result is checked to be natural.
inline NatTrans derived_nat(const NatTrans& eta, const RightDeformation& d) {
  if (eta.from.source != d.cat) throw DeformationError("deformation " + d.name + " is not on the source of " + eta.name);
  NatTrans out{eta.name + "~", detail::derive(eta.from, d), detail::derive(eta.to, d),
               [eta, d](std::size_t x) { return eta(d.R(x)); }};
  Report m = check_natural(out);
  if (!m.ok()) throw DeformationError("derived transformation is not natural: " + m.violations.front());
  return out;
}

inline bool is_iso_nat(const NatTrans& eta) {
  for (std::size_t x = 0; x < eta.from.source->object_count(); ++x)
    if (!eta.from.target->is_iso(eta(x))) return false;
  return true;
}

/// Componentwise equality of two transformations with the same endpoints.
inline Report compare_nats(const std::string& what, const NatTrans& a, const NatTrans& b) {
  Report r{what};
  const WECategory& c = *a.from.source;
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    ++r.objects;
    if (!(a(x) == b(x))) r.fail("components differ at " + c.object_label(x));
  }
  return r;
}

// ---- coherent lists ----------------------------------------------------------------

/// F_i: C_{i-1} → C_i with a deformation of each C_{i-1}; `final_radiant`
/// is A_n ⊆ C_n (all objects when empty).
struct DeformableList {
  std::vector<WEFunctor> functors;
  std::vector<RightDeformation> deformations;
  std::function<bool(std::size_t)> final_radiant;

  std::string name() const {
    std::string s;
    for (const auto& f : functors) s += (s.empty() ? "" : ",") + f.name;
    return s;
  }
};

/// Each F_i is deformed by d_{i-1}, and F_i(A_{i-1}) ⊆ A_i.
inline Report validate_list(const DeformableList& l) {
  Report r{"coherent list " + l.name()};
  if (l.functors.empty() || l.functors.size() != l.deformations.size()) {
    r.fail("needs one deformation per functor");
    return r;
  }
  for (std::size_t i = 0; i < l.functors.size(); ++i) {
    const WEFunctor& f = l.functors[i];
    if (i + 1 < l.functors.size() && f.target != l.functors[i + 1].source) {
      r.fail(f.name + " does not compose with " + l.functors[i + 1].name);
      return r;
    }
    r.absorb(validate_deformation(f, l.deformations[i]));
    auto next = i + 1 < l.functors.size() ? l.deformations[i + 1].radiant
                                          : (l.final_radiant ? l.final_radiant : std::function<bool(std::size_t)>(all_objects));
    const WECategory& c = *f.source;
    for (std::size_t x = 0; x < c.object_count(); ++x)
      if (l.deformations[i].radiant(x) && !next(f(x)))
        r.fail(f.name + " sends radiant " + c.object_label(x) + " to non-radiant " + f.target->object_label(f(x)));
  }
  return r;
}

struct Comparison {
  WEFunctor lhs;  // ℝ(F_n ∘ ... ∘ F_1)
  WEFunctor rhs;  // ℝF_n ∘ ... ∘ ℝF_1
  NatTrans kappa;
  Report report;
};

namespace detail {
/// κ_k at X: F_k⋯F_1R_0X → F_kR_{k-1}⋯F_1R_0X, built by inserting units from
/// the inside out.
inline Mor kappa_at(const DeformableList& l, std::size_t x) {
  std::size_t y = l.deformations[0].R(x);
  std::size_t plain = l.functors[0](y), full = plain;
  Mor k = l.functors[0].target->identity(plain);
  for (std::size_t i = 1; i < l.functors.size(); ++i) {
    const RightDeformation& d = l.deformations[i];
    Mor step = d.cat->compose(d.unit(full), k);  // F_{i}⋯ → R_i(full)
    k = l.functors[i](step);
    full = l.functors[i](d.R(full));
    plain = l.functors[i](plain);
  }
  return k;
}
}  // namespace detail

/// The canonical ℝ(F_n⋯F_1) ⇒ ℝF_n⋯ℝF_1; every component is checked to be a
/// weak equivalence and the transformation to be natural.
inline Comparison compare_composites(const DeformableList& l) {
  Report v = validate_list(l);
  if (!v.ok()) throw DeformationError("list " + l.name() + " is not coherent: " + v.violations.front());
  WEFunctor lhs = compose(compose_list(l.functors), l.deformations[0].R);
  lhs.name = "R(" + l.name() + ")";
  std::vector<WEFunctor> derived;
  for (std::size_t i = 0; i < l.functors.size(); ++i) derived.push_back(detail::derive(l.functors[i], l.deformations[i]));
  WEFunctor rhs = compose_list(derived);
  NatTrans kappa{"kappa", lhs, rhs, [l](std::size_t x) { return detail::kappa_at(l, x); }};
  Comparison out{lhs, rhs, kappa, Report{"compare " + l.name()}};
  const WECategory& c = *lhs.source;
  for (std::size_t x = 0; x < c.object_count(); ++x) {
    ++out.report.objects;
    if (!lhs.target->is_we(kappa(x))) out.report.fail("component at " + c.object_label(x) + " is not a weak equivalence");
  }
  out.report.absorb(check_natural(kappa));
  return out;
}

/// Transport of a point-set transformation θ: F_n⋯F_1 ⇒ G_m⋯G_1 between
/// composites of coherent lists starting with the same deformation: κ_G ∘
/// θR_0 ∘ κ_F⁻¹. κ_F must be invertible in the target category.
inline NatTrans derived_between(const DeformableList& lf, const DeformableList& lg, const NatTrans& theta) {
  Comparison cf = compare_composites(lf), cg = compare_composites(lg);
  RightDeformation d0 = lf.deformations[0];
  auto target = cf.lhs.target;
  return {theta.name + "~", cf.rhs, cg.rhs, [cf, cg, d0, theta, target](std::size_t x) {
            auto inv = target->inverse(cf.kappa(x));
            if (!inv) throw DeformationError("comparison is not invertible at " + cf.lhs.source->object_label(x));
            return target->compose(cg.kappa(x), target->compose(theta(d0.R(x)), *inv));
          }};
}

/// (υ∘η)~ = υ~ ∘ η~ componentwise, for η: F ⇒ G and υ: G ⇒ H deformed by d.
inline Report check_vertical(const NatTrans& upsilon, const NatTrans& eta, const RightDeformation& d) {
  return compare_nats("vertical " + upsilon.name + "*" + eta.name, derived_nat(vertical(upsilon, eta), d),
                      vertical(derived_nat(upsilon, d), derived_nat(eta, d)));
}

/// For two-functor lists F = (F_1, F_2), G = (G_1, G_2) over the deformations
/// of F and η_i: F_i ⇒ G_i, the square
///   ℝ(F_2F_1) → ℝ(G_2G_1) → ℝG_2ℝG_1  =  ℝ(F_2F_1) → ℝF_2ℝF_1 → ℝG_2ℝG_1
/// commutes componentwise.
inline Report check_horizontal(const DeformableList& lf, const DeformableList& lg, const NatTrans& eta1, const NatTrans& eta2) {
  if (lf.functors.size() != 2 || lg.functors.size() != 2) throw DeformationError("check_horizontal takes two-functor lists");
  const RightDeformation &d0 = lf.deformations[0], &d1 = lf.deformations[1];
  Comparison cf = compare_composites(lf), cg = compare_composites(lg);
  NatTrans top = derived_nat(horizontal(eta2, eta1), d0);
  NatTrans bottom = horizontal(derived_nat(eta2, d1), derived_nat(eta1, d0));
  const WECategory& t = *cf.lhs.target;
  Report r{"horizontal " + eta2.name + "o" + eta1.name};
  for (std::size_t x = 0; x < d0.cat->object_count(); ++x) {
    ++r.objects;
    if (!(t.compose(cg.kappa(x), top(x)) == t.compose(bottom(x), cf.kappa(x))))
      r.fail("square fails at " + d0.cat->object_label(x));
  }
  return r;
}

// ---- homotopy category --------------------------------------------------------------

/// Full subcategory of `parent` on `objects`, with weak equivalences the
/// isomorphisms.
class FullSubcategory : public WECategory {
 public:
  FullSubcategory(CategoryPtr parent, std::vector<std::size_t> objects, std::string name)
      : parent_(std::move(parent)), objects_(std::move(objects)), name_(std::move(name)) {
    index_.assign(parent_->object_count(), kNone);
    for (std::size_t i = 0; i < objects_.size(); ++i) index_[objects_[i]] = i;
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::string name() const override { return name_; }
  std::size_t object_count() const override { return objects_.size(); }
  std::string object_label(std::size_t x) const override { return parent_->object_label(objects_[x]); }
  Mor identity(std::size_t x) const override { return down(parent_->identity(objects_[x])); }
  Mor compose(const Mor& g, const Mor& f) const override { return down(parent_->compose(up(g), up(f))); }
  bool is_we(const Mor& f) const override { return is_iso(f); }
  std::optional<Mor> inverse(const Mor& f) const override {
    auto inv = parent_->inverse(up(f));
    if (!inv) return std::nullopt;
    return down(*inv);
  }
  void for_each_hom(std::size_t x, std::size_t y, const std::function<bool(const Mor&)>& fn) const override {
    parent_->for_each_hom(objects_[x], objects_[y], [&](const Mor& m) { return fn(down(m)); });
  }
  std::string describe(const Mor& f) const override { return parent_->describe(up(f)); }

  std::size_t parent_object(std::size_t x) const { return objects_[x]; }
  std::size_t index_of(std::size_t parent_x) const { return index_[parent_x]; }
  Mor up(const Mor& f) const { return {static_cast<std::uint32_t>(objects_[f.src]), static_cast<std::uint32_t>(objects_[f.dst]), f.data}; }
  Mor down(const Mor& f) const {
    if (index_[f.src] == kNone || index_[f.dst] == kNone) throw DeformationError("morphism leaves the subcategory");
    return {static_cast<std::uint32_t>(index_[f.src]), static_cast<std::uint32_t>(index_[f.dst]), f.data};
  }

 private:
  CategoryPtr parent_;
  std::vector<std::size_t> objects_;
  std::vector<std::size_t> index_;
  std::string name_;
};

struct Localization {
  std::shared_ptr<const FullSubcategory> ho;
  WEFunctor L;  // cat → Ho, given by R
  Report report;
};

/// Ho under the hypothesis that R is idempotent and every w.e. between radiant
/// objects is an isomorphism; Ho is the full subcategory of radiant objects
/// and the localization is R. Each probe (a functor out of cat inverting
/// weak equivalences) is checked to factor through L up to the natural
/// isomorphism F(unit).
inline Localization homotopy_category(const RightDeformation& d, const std::vector<WEFunctor>& probes = {}) {
  const WECategory& c = *d.cat;
  Report r = check_deformation_data(d);
  r.check = "homotopy category of " + d.name;
  if (!r.ok()) throw DeformationError("invalid deformation: " + r.violations.front());
  for (std::size_t x = 0; x < c.object_count(); ++x)
    if (d.R(d.R(x)) != d.R(x))
      throw DeformationError("R is not idempotent: R(R(" + c.object_label(x) + ")) = " + c.object_label(d.R(d.R(x))) +
                             " but R(" + c.object_label(x) + ") = " + c.object_label(d.R(x)));
  std::optional<std::string> bad;
  c.for_each_morphism([&](const Mor& f) {
    ++r.morphisms;
    if (!(d.R(d.R(f)) == d.R(f))) bad = "R is not idempotent on " + c.describe(f);
    else if (d.radiant(f.src) && d.radiant(f.dst) && c.is_we(f) && !c.is_iso(f))
      bad = "weak equivalence between radiant objects is not an isomorphism: " + c.describe(f);
    return !bad;
  });
  if (bad) throw DeformationError(*bad);
  std::vector<std::size_t> radiant;
  for (std::size_t x = 0; x < c.object_count(); ++x)
    if (d.radiant(x)) radiant.push_back(x);
  auto ho = std::make_shared<const FullSubcategory>(d.cat, radiant, "Ho(" + c.name() + ")");
  WEFunctor L{"L", d.cat, ho, [ho, d](std::size_t x) { return ho->index_of(d.R(x)); },
              [ho, d](const Mor& f) { return ho->down(d.R(f)); }};
  for (const auto& p : probes) {
    if (p.source != d.cat) throw DeformationError("probe " + p.name + " is not defined on " + c.name());
    const WECategory& t = *p.target;
    Report pr{"probe " + p.name};
    for (std::size_t x = 0; x < c.object_count(); ++x) {
      ++pr.objects;
      if (!t.is_iso(p(d.unit(x)))) pr.fail(p.name + "(unit at " + c.object_label(x) + ") is not invertible");
    }
    c.for_each_morphism([&](const Mor& f) {
      if (!c.is_we(f)) return true;
      ++pr.morphisms;
      if (!t.is_iso(p(f))) pr.fail(p.name + " does not invert the w.e. " + c.describe(f));
      return true;
    });
    r.absorb(pr);
  }
  return {ho, L, r};
}

}  // namespace spanshadow
