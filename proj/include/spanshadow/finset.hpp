#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "spanshadow/element.hpp"

namespace spanshadow {

/// Raised for precondition violations on user-supplied data (endpoint
/// mismatches, malformed maps, non-cartesian squares, ...).
class SpanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FinMap;
namespace detail {
struct SetImpl;
struct MapImpl;
}  // namespace detail

/// A named finite set with a deterministic element order.
///
/// A set is either listed (elements given up front) or a lazy pullback
/// {(l,r) : f(l) = g(r)} of two maps with a common target. Lazy sets answer
/// membership structurally and enumerate only on demand, so products of
/// large factors can serve as bases without being materialized.
class FinSet {
 public:
  FinSet();
  /// Throws SpanError when elements repeat.
  FinSet(std::string name, std::vector<Element> elements);

  /// Listed set whose distinctness is guaranteed by construction; skips the
  /// duplicate check.
  static FinSet trusted(std::string name, std::vector<Element> elements);
  static FinSet atoms(std::string name, const std::vector<std::string>& labels);
  static FinSet point();

  /// {(l,r) : f(l) = g(r)}, enumerated by l then r in source order.
  static FinSet lazy_pullback(std::string name, FinMap f, FinMap g);

  const std::string& name() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  const std::vector<Element>& elements() const;
  const Element& at(std::size_t i) const { return elements()[i]; }
  bool contains(const Element& e) const;
  std::optional<std::size_t> index_of(const Element& e) const;
  std::size_t require_index(const Element& e) const;
  bool is_listed() const;

  /// Same set object (not merely equal).
  bool same_object(const FinSet& o) const { return impl_ == o.impl_; }

  /// Structural equality: the same elements in the same order. Names are
  /// labels only and are ignored.
  friend bool operator==(const FinSet& a, const FinSet& b);

  FinSet renamed(std::string name) const;

 private:
  explicit FinSet(std::shared_ptr<const detail::SetImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::SetImpl> impl_;
  friend class FinMap;
};

/// A total function between finite sets.
///
/// Tabled maps store one image per source element and are validated on
/// construction. Structural maps wrap a formula (projections, diagonals,
/// rebracketings) and may carry a preimage function so that pulling back
/// along them never enumerates a large source.
class FinMap {
 public:
  using Fn = std::function<Element(const Element&)>;
  using PreimageFn = std::function<std::vector<Element>(const Element&)>;

  FinMap();

  /// Images aligned with source.elements(). Validates membership in target.
  static FinMap tabled(FinSet source, FinSet target, std::vector<Element> images, bool validate = true);
  /// From an association list; checks totality and single-valuedness.
  static FinMap from_pairs(FinSet source, FinSet target, const std::vector<std::pair<Element, Element>>& pairs);
  /// A trusted formula. `preimage`, if given, must return the full fiber in
  /// source order.
  static FinMap structural(FinSet source, FinSet target, Fn fn, PreimageFn preimage = {});

  static FinMap identity(const FinSet& a);
  static FinMap constant(const FinSet& source, const FinSet& target, const Element& value);

  const FinSet& source() const;
  const FinSet& target() const;

  Element operator()(const Element& e) const;
  /// Image of the i-th source element.
  Element image_at(std::size_t i) const;
  bool is_tabled() const;
  bool has_preimage() const;
  /// Fiber over y in source order.
  std::vector<Element> preimage(const Element& y) const;

  /// Images of all source elements, in source order.
  std::vector<Element> images() const;

  /// Pointwise check that every image lies in the target.
  void validate() const;

  /// Pointwise equality with the same source and target.
  friend bool operator==(const FinMap& a, const FinMap& b);

 private:
  explicit FinMap(std::shared_ptr<const detail::MapImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::MapImpl> impl_;
};

namespace detail {

struct SetImpl {
  std::string name;
  // Listed sets fill `listed`; lazy pullbacks fill `legs`.
  std::optional<std::vector<Element>> listed;
  std::optional<std::pair<FinMap, FinMap>> legs;

  mutable std::once_flag enumerated_once;
  mutable std::vector<Element> enumerated;
  mutable std::once_flag index_once;
  mutable std::unordered_map<Element, std::size_t, ElementHash> index;

  const std::vector<Element>& elements() const {
    if (listed) return *listed;
    std::call_once(enumerated_once, [this] {
      const auto& [f, g] = *legs;
      std::unordered_map<Element, std::vector<std::size_t>, ElementHash> by_image;
      const auto& right = g.source().elements();
      for (std::size_t j = 0; j < right.size(); ++j) by_image[g.image_at(j)].push_back(j);
      const auto& left = f.source().elements();
      for (std::size_t i = 0; i < left.size(); ++i) {
        auto it = by_image.find(f.image_at(i));
        if (it == by_image.end()) continue;
        for (std::size_t j : it->second) enumerated.push_back(Element::pair(left[i], right[j]));
      }
    });
    return enumerated;
  }

  const std::unordered_map<Element, std::size_t, ElementHash>& element_index() const {
    std::call_once(index_once, [this] {
      const auto& es = elements();
      index.reserve(es.size());
      for (std::size_t i = 0; i < es.size(); ++i) index.emplace(es[i], i);
    });
    return index;
  }
};

struct MapImpl {
  FinSet source;
  FinSet target;
  std::optional<std::vector<Element>> table;
  FinMap::Fn fn;
  FinMap::PreimageFn preimage;
};

}  // namespace detail

// ---- FinSet ---------------------------------------------------------------

inline FinSet::FinSet() : FinSet("empty", {}) {}

inline FinSet::FinSet(std::string name, std::vector<Element> elements) {
  auto impl = std::make_shared<detail::SetImpl>();
  impl->name = std::move(name);
  impl->listed = std::move(elements);
  std::call_once(impl->index_once, [&] {
    const auto& es = *impl->listed;
    impl->index.reserve(es.size());
    for (std::size_t i = 0; i < es.size(); ++i)
      if (!impl->index.emplace(es[i], i).second)
        throw SpanError("duplicate element " + es[i].to_string() + " in set " + impl->name);
  });
  impl_ = std::move(impl);
}

inline FinSet FinSet::trusted(std::string name, std::vector<Element> elements) {
  auto impl = std::make_shared<detail::SetImpl>();
  impl->name = std::move(name);
  impl->listed = std::move(elements);
  return FinSet(std::shared_ptr<const detail::SetImpl>(std::move(impl)));
}

inline FinSet FinSet::atoms(std::string name, const std::vector<std::string>& labels) {
  std::vector<Element> es;
  es.reserve(labels.size());
  for (const auto& l : labels) es.push_back(Element::atom(l));
  return FinSet(std::move(name), std::move(es));
}

inline FinSet FinSet::point() {
  static const FinSet pt("*", {Element::star()});
  return pt;
}

inline FinSet FinSet::lazy_pullback(std::string name, FinMap f, FinMap g) {
  if (!(f.target() == g.target())) throw SpanError("incompatible cospan");
  auto impl = std::make_shared<detail::SetImpl>();
  impl->name = std::move(name);
  impl->legs.emplace(std::move(f), std::move(g));
  return FinSet(std::shared_ptr<const detail::SetImpl>(std::move(impl)));
}

inline const std::string& FinSet::name() const { return impl_->name; }
inline std::size_t FinSet::size() const { return impl_->elements().size(); }
inline const std::vector<Element>& FinSet::elements() const { return impl_->elements(); }
inline bool FinSet::is_listed() const { return impl_->listed.has_value(); }

inline bool FinSet::contains(const Element& e) const {
  if (impl_->listed) return impl_->element_index().count(e) > 0;
  if (!e.is_pair()) return false;
  const auto& [f, g] = *impl_->legs;
  return f.source().contains(e.first()) && g.source().contains(e.second()) && f(e.first()) == g(e.second());
}

inline std::optional<std::size_t> FinSet::index_of(const Element& e) const {
  const auto& idx = impl_->element_index();
  auto it = idx.find(e);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

inline std::size_t FinSet::require_index(const Element& e) const {
  auto i = index_of(e);
  if (!i) throw SpanError("element " + e.to_string() + " is not in set " + name());
  return *i;
}

inline FinSet FinSet::renamed(std::string name) const {
  auto impl = std::make_shared<detail::SetImpl>();
  impl->name = std::move(name);
  impl->listed = impl_->listed;
  impl->legs = impl_->legs;
  return FinSet(std::shared_ptr<const detail::SetImpl>(std::move(impl)));
}

inline bool operator==(const FinSet& a, const FinSet& b) {
  if (a.impl_ == b.impl_) return true;
  if (a.impl_->legs && b.impl_->legs)
    return a.impl_->legs->first == b.impl_->legs->first && a.impl_->legs->second == b.impl_->legs->second;
  return a.elements() == b.elements();
}

// ---- FinMap ---------------------------------------------------------------

inline FinMap::FinMap() : FinMap(identity(FinSet())) {}

inline FinMap FinMap::tabled(FinSet source, FinSet target, std::vector<Element> images, bool validate) {
  if (images.size() != source.size())
    throw SpanError("map from " + source.name() + " has " + std::to_string(images.size()) +
                    " images for " + std::to_string(source.size()) + " elements");
  if (validate)
    for (std::size_t i = 0; i < images.size(); ++i)
      if (!target.contains(images[i]))
        throw SpanError("image " + images[i].to_string() + " of " + source.at(i).to_string() +
                        " is not in " + target.name());
  auto impl = std::make_shared<detail::MapImpl>();
  impl->source = std::move(source);
  impl->target = std::move(target);
  impl->table = std::move(images);
  return FinMap(std::shared_ptr<const detail::MapImpl>(std::move(impl)));
}

inline FinMap FinMap::from_pairs(FinSet source, FinSet target,
                                 const std::vector<std::pair<Element, Element>>& pairs) {
  std::vector<std::optional<Element>> slot(source.size());
  for (const auto& [x, y] : pairs) {
    auto i = source.index_of(x);
    if (!i) throw SpanError("map entry " + x.to_string() + " is not in source " + source.name());
    if (slot[*i] && !(*slot[*i] == y))
      throw SpanError("map is not single-valued at " + x.to_string());
    slot[*i] = y;
  }
  std::vector<Element> images;
  images.reserve(slot.size());
  for (std::size_t i = 0; i < slot.size(); ++i) {
    if (!slot[i]) throw SpanError("map is not total: no image for " + source.at(i).to_string());
    images.push_back(*slot[i]);
  }
  return tabled(std::move(source), std::move(target), std::move(images));
}

inline FinMap FinMap::structural(FinSet source, FinSet target, Fn fn, PreimageFn preimage) {
  auto impl = std::make_shared<detail::MapImpl>();
  impl->source = std::move(source);
  impl->target = std::move(target);
  impl->fn = std::move(fn);
  impl->preimage = std::move(preimage);
  return FinMap(std::shared_ptr<const detail::MapImpl>(std::move(impl)));
}

inline FinMap FinMap::identity(const FinSet& a) {
  auto impl = std::make_shared<detail::MapImpl>();
  impl->source = a;
  impl->target = a;
  impl->fn = [](const Element& e) { return e; };
  impl->preimage = [](const Element& e) { return std::vector<Element>{e}; };
  return FinMap(std::shared_ptr<const detail::MapImpl>(std::move(impl)));
}

inline FinMap FinMap::constant(const FinSet& source, const FinSet& target, const Element& value) {
  if (!target.contains(value)) throw SpanError("constant value " + value.to_string() + " not in " + target.name());
  return structural(source, target, [value](const Element&) { return value; },
                    [source, value](const Element& y) {
                      return y == value ? source.elements() : std::vector<Element>{};
                    });
}

inline const FinSet& FinMap::source() const { return impl_->source; }
inline const FinSet& FinMap::target() const { return impl_->target; }
inline bool FinMap::is_tabled() const { return impl_->table.has_value(); }
inline bool FinMap::has_preimage() const { return static_cast<bool>(impl_->preimage); }

inline Element FinMap::operator()(const Element& e) const {
  if (impl_->table) return (*impl_->table)[impl_->source.require_index(e)];
  return impl_->fn(e);
}

inline Element FinMap::image_at(std::size_t i) const {
  if (impl_->table) return (*impl_->table)[i];
  return impl_->fn(impl_->source.at(i));
}

inline std::vector<Element> FinMap::images() const {
  if (impl_->table) return *impl_->table;
  const auto& src = impl_->source.elements();
  std::vector<Element> out;
  out.reserve(src.size());
  for (const auto& e : src) out.push_back(impl_->fn(e));
  return out;
}

inline std::vector<Element> FinMap::preimage(const Element& y) const {
  if (impl_->preimage) return impl_->preimage(y);
  std::vector<Element> out;
  const auto& src = impl_->source.elements();
  for (std::size_t i = 0; i < src.size(); ++i)
    if (image_at(i) == y) out.push_back(src[i]);
  return out;
}

inline void FinMap::validate() const {
  const auto& src = source().elements();
  for (std::size_t i = 0; i < src.size(); ++i) {
    Element y = image_at(i);
    if (!target().contains(y))
      throw SpanError("image " + y.to_string() + " of " + src[i].to_string() + " is not in " + target().name());
  }
}

inline bool operator==(const FinMap& a, const FinMap& b) {
  if (a.impl_ == b.impl_) return true;
  if (!(a.source() == b.source()) || !(a.target() == b.target())) return false;
  // Any two maps into a one-point set agree.
  if (a.target().size() == 1) return true;
  const std::size_t n = a.source().size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(a.image_at(i) == b.image_at(i))) return false;
  return true;
}

// ---- operations -----------------------------------------------------------

/// g ∘ f. Requires f.target == g.source.
inline FinMap compose(const FinMap& g, const FinMap& f) {
  if (!(f.target() == g.source()))
    throw SpanError("cannot compose: target " + f.target().name() + " differs from source " + g.source().name());
  if (f.is_tabled()) {
    const std::size_t n = f.source().size();
    std::vector<Element> images;
    images.reserve(n);
    for (std::size_t i = 0; i < n; ++i) images.push_back(g(f.image_at(i)));
    return FinMap::tabled(f.source(), g.target(), std::move(images), false);
  }
  FinMap::PreimageFn pre;
  if (f.has_preimage() && g.has_preimage())
    pre = [f, g](const Element& z) {
      std::vector<Element> out;
      for (const auto& y : g.preimage(z))
        for (auto& x : f.preimage(y)) out.push_back(std::move(x));
      return out;
    };
  return FinMap::structural(f.source(), g.target(), [f, g](const Element& x) { return g(f(x)); }, std::move(pre));
}

/// Materializes a map as a table (for repeated evaluation).
inline FinMap tabulate(const FinMap& m) {
  if (m.is_tabled()) return m;
  return FinMap::tabled(m.source(), m.target(), m.images(), false);
}

/// The chosen one-point set {*} and the unique map into it.
inline FinMap to_point(const FinSet& a) { return FinMap::constant(a, FinSet::point(), Element::star()); }

/// Pullback f ×_D g with its two projections.
struct Pullback {
  FinSet set;
  FinMap left;   // (b,c) ↦ b
  FinMap right;  // (b,c) ↦ c
};

inline Pullback pullback(const FinMap& f, const FinMap& g, std::string name = {}) {
  if (!(f.target() == g.target())) throw SpanError("incompatible cospan");
  if (name.empty()) name = f.source().name() + "x_" + f.target().name() + g.source().name();
  FinSet p = FinSet::lazy_pullback(std::move(name), f, g);
  FinMap l = FinMap::structural(p, f.source(), [](const Element& e) { return e.first(); });
  FinMap r = FinMap::structural(p, g.source(), [](const Element& e) { return e.second(); });
  return {p, l, r};
}

/// Product with left-nested tuple elements. The empty product is {*}.
struct Product {
  FinSet set;
  std::vector<FinMap> projections;
};

inline Product cartesian_product(const std::vector<FinSet>& sets) {
  if (sets.empty()) return {FinSet::point(), {}};
  FinSet acc = sets[0];
  for (std::size_t i = 1; i < sets.size(); ++i)
    acc = FinSet::lazy_pullback(acc.name() + "x" + sets[i].name(), to_point(acc), to_point(sets[i]));
  const std::size_t n = sets.size();
  std::vector<FinMap> proj;
  for (std::size_t i = 0; i < n; ++i)
    proj.push_back(FinMap::structural(acc, sets[i], [i, n](const Element& e) { return untuple(e, n)[i]; }));
  return {acc, std::move(proj)};
}

/// Injectivity with one colliding pair as witness.
struct InjectivityReport {
  bool injective = true;
  std::optional<std::pair<Element, Element>> witness;
  explicit operator bool() const { return injective; }
};

inline InjectivityReport is_injective(const FinMap& f) {
  std::unordered_map<Element, std::size_t, ElementHash> seen;
  const auto& src = f.source().elements();
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto [it, fresh] = seen.emplace(f.image_at(i), i);
    if (!fresh) return {false, std::make_pair(src[it->second], src[i])};
  }
  return {};
}

/// A pair of mutually inverse maps, checked pointwise on construction.
struct Bijection {
  FinMap forward;
  FinMap backward;

  Bijection(FinMap fwd, FinMap bwd) : forward(std::move(fwd)), backward(std::move(bwd)) {
    if (!(forward.source() == backward.target()) || !(forward.target() == backward.source()))
      throw SpanError("bijection legs have mismatched endpoints");
    const auto& a = forward.source().elements();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(backward(forward.image_at(i)) == a[i]))
        throw SpanError("not a bijection: backward(forward(" + a[i].to_string() + ")) differs");
    const auto& b = backward.source().elements();
    for (std::size_t i = 0; i < b.size(); ++i)
      if (!(forward(backward.image_at(i)) == b[i]))
        throw SpanError("not a bijection: forward(backward(" + b[i].to_string() + ")) differs");
  }

  Bijection inverse() const { return Bijection(backward, forward); }
};

inline Bijection compose(const Bijection& g, const Bijection& f) {
  return Bijection(compose(g.forward, f.forward), compose(f.backward, g.backward));
}

/// Tabled map on `source` built from a per-element formula.
template <class Fn>
FinMap map_by(const FinSet& source, const FinSet& target, Fn&& fn, bool validate = true) {
  const auto& src = source.elements();
  std::vector<Element> images;
  images.reserve(src.size());
  for (const auto& e : src) images.push_back(fn(e));
  return FinMap::tabled(source, target, std::move(images), validate);
}

/// Subset of `s` in the order of `s`.
template <class Pred>
FinSet filter(const FinSet& s, std::string name, Pred&& keep) {
  std::vector<Element> out;
  for (const auto& e : s.elements())
    if (keep(e)) out.push_back(e);
  return FinSet(std::move(name), std::move(out));
}

}  // namespace spanshadow
