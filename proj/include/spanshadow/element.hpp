#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spanshadow {

struct ElementNode;

/// An element of a finite set: either a string atom or an ordered pair of
/// elements. Pairs are never flattened, so ((a,b),c) and (a,(b,c)) differ.
///
/// Elements are immutable and share structure; copying is a refcount bump.
class Element {
 public:
  /// The one-point element `*`.
  Element();

  static Element atom(std::string_view label);
  static Element pair(Element first, Element second);
  static Element star() { return Element(); }

  /// Left-nested tuple ((e0,e1),e2)...; the empty tuple is `*` and a
  /// one-tuple is its sole entry.
  static Element tuple(std::span<const Element> entries) {
    if (entries.empty()) return star();
    Element acc = entries[0];
    for (std::size_t i = 1; i < entries.size(); ++i) acc = pair(std::move(acc), entries[i]);
    return acc;
  }

  bool is_atom() const;
  bool is_pair() const;
  const std::string& label() const;
  const Element& first() const;
  const Element& second() const;
  std::size_t hash() const;

  friend bool operator==(const Element& a, const Element& b);
  /// Atoms sort before pairs; atoms by label; pairs lexicographically.
  friend std::strong_ordering operator<=>(const Element& a, const Element& b);

  std::string to_string() const {
    if (is_atom()) return label();
    return "(" + first().to_string() + "," + second().to_string() + ")";
  }

 private:
  explicit Element(std::shared_ptr<const ElementNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ElementNode> node_;
};

struct ElementNode {
  explicit ElementNode(std::string l)
      : hash(std::hash<std::string>{}(l) * 0x9e3779b97f4a7c15ULL + 1), label(std::move(l)) {}
  ElementNode(Element a, Element b)
      : hash(mix(a.hash(), b.hash())), is_pair(true), kids{{std::move(a), std::move(b)}} {}

  static std::size_t mix(std::size_t a, std::size_t b) {
    std::size_t h = a * 0xff51afd7ed558ccdULL ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 29;
    return h;
  }

  std::size_t hash;
  bool is_pair = false;
  std::string label;
  std::optional<std::array<Element, 2>> kids;
};

namespace detail {
// The shared `*` node; an immutable constant.
inline const std::shared_ptr<const ElementNode>& star_node() {
  static const std::shared_ptr<const ElementNode> star = std::make_shared<const ElementNode>(std::string("*"));
  return star;
}
}  // namespace detail

inline Element::Element() : node_(detail::star_node()) {}

inline Element Element::atom(std::string_view label) {
  return Element(std::make_shared<const ElementNode>(std::string(label)));
}
inline Element Element::pair(Element first, Element second) {
  return Element(std::make_shared<const ElementNode>(std::move(first), std::move(second)));
}

inline bool Element::is_atom() const { return !node_->is_pair; }
inline bool Element::is_pair() const { return node_->is_pair; }
inline std::size_t Element::hash() const { return node_->hash; }

inline const std::string& Element::label() const {
  if (node_->is_pair) throw std::logic_error("label() on a pair element");
  return node_->label;
}
inline const Element& Element::first() const {
  if (!node_->is_pair) throw std::logic_error("first() on an atom element " + node_->label);
  return (*node_->kids)[0];
}
inline const Element& Element::second() const {
  if (!node_->is_pair) throw std::logic_error("second() on an atom element " + node_->label);
  return (*node_->kids)[1];
}

inline bool operator==(const Element& a, const Element& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->is_pair != b.node_->is_pair) return false;
  if (!a.node_->is_pair) return a.node_->label == b.node_->label;
  return (*a.node_->kids)[0] == (*b.node_->kids)[0] && (*a.node_->kids)[1] == (*b.node_->kids)[1];
}

inline std::strong_ordering operator<=>(const Element& a, const Element& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.node_->is_pair != b.node_->is_pair)
    return a.node_->is_pair ? std::strong_ordering::greater : std::strong_ordering::less;
  if (!a.node_->is_pair) return a.node_->label.compare(b.node_->label) <=> 0;
  if (auto c = (*a.node_->kids)[0] <=> (*b.node_->kids)[0]; c != 0) return c;
  return (*a.node_->kids)[1] <=> (*b.node_->kids)[1];
}

/// Inverse of Element::tuple for a known arity.
inline std::vector<Element> untuple(const Element& e, std::size_t arity) {
  if (arity == 0) return {};
  std::vector<Element> out(arity);
  Element cur = e;
  for (std::size_t i = arity - 1; i > 0; --i) {
    if (!cur.is_pair()) throw std::invalid_argument("element " + e.to_string() + " is not a " + std::to_string(arity) + "-tuple");
    out[i] = cur.second();
    cur = cur.first();
  }
  out[0] = cur;
  return out;
}

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept { return e.hash(); }
};

}  // namespace spanshadow

template <>
struct std::hash<spanshadow::Element> {
  std::size_t operator()(const spanshadow::Element& e) const noexcept { return e.hash(); }
};
