#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "spanshadow/basechange.hpp"

namespace spanshadow {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the index-th instance of a run, independent of how instances are
/// split across workers.
inline std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5eed));
}

/// mt19937_64 with a bounded draw that does not depend on the standard
/// library's distribution implementations, so runs are reproducible across
/// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do v = eng_();
    while (v >= limit);
    return v % n;
  }
  /// Uniform in [lo, hi].
  int uniform(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool coin() { return below(2) == 1; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

/// Size bounds for random instances.
struct GenParams {
  int max_size = 4;   // 0-cells
  int max_fiber = 3;  // elements over one point of a 1-cell's base
  int max_total = 6;  // elements of a 1-cell
  BaseContext ctx;
};

/// The context used for fiberwise runs: B = {p, q}.
inline BaseContext two_point_context() { return {FinSet::atoms("B", {"p", "q"})}; }

namespace detail {
/// Sizes for generated 0-cells: one draw in sixteen is empty, the rest uniform
/// in [max(lo, 1), hi]. Empty spaces make every composite through them empty,
/// so they are kept as an occasional edge case.
inline int draw_size(Rng& rng, int lo, int hi) {
  if (lo == 0 && (hi == 0 || rng.below(16) == 0)) return 0;
  return rng.uniform(std::max(lo, 1), hi);
}

inline std::vector<Element> labelled(const std::string& prefix, int n) {
  std::vector<Element> out;
  for (int i = 0; i < n; ++i) out.push_back(Element::atom(prefix + std::to_string(i)));
  return out;
}
}  // namespace detail

/// A 0-cell of size at most max_size with a random map to the context base.
inline IndexedSpace random_space(Rng& rng, const GenParams& p, const std::string& name, int min_size = 0) {
  int n = detail::draw_size(rng, std::min(min_size, p.max_size), p.max_size);
  FinSet s = FinSet::trusted(name, detail::labelled(name, n));
  std::vector<Element> images;
  for (int i = 0; i < n; ++i) images.push_back(p.ctx.base.at(rng.below(p.ctx.base.size())));
  return {s, FinMap::tabled(s, p.ctx.base, std::move(images), false)};
}

/// A 1-cell src → dst: between max_total/2 and max_total elements (one draw
/// in sixteen is empty), each over a uniformly chosen
/// point of src × dst whose fiber still has room (max_fiber).
inline Cell1 random_cell(Rng& rng, const GenParams& p, const std::string& name, const IndexedSpace& src,
                         const IndexedSpace& dst) {
  IndexedSpace base = fiber_product(p.ctx, {src, dst});
  std::vector<Element> points = base.space.elements();
  std::vector<int> counts(points.size(), 0);
  int want = points.empty() || rng.below(16) == 0 ? 0 : rng.uniform(std::max(1, p.max_total / 2), p.max_total);
  std::vector<std::size_t> open(points.size());
  std::iota(open.begin(), open.end(), 0);
  for (int e = 0; e < want && !open.empty(); ++e) {
    std::size_t slot = rng.below(open.size());
    if (++counts[open[slot]] >= p.max_fiber) open.erase(open.begin() + static_cast<std::ptrdiff_t>(slot));
  }
  std::vector<Element> elems, images;
  int label = 0;
  for (std::size_t k = 0; k < points.size(); ++k)
    for (int j = 0; j < counts[k]; ++j) {
      elems.push_back(Element::atom(name + std::to_string(label++)));
      images.push_back(points[k]);
    }
  return Cell1::from_images(src, dst, FinSet::trusted(name, std::move(elems)), std::move(images), false);
}

/// A random map a → c over the context, or nothing when some a has no
/// candidate image.
inline std::optional<SpaceMap> random_map(Rng& rng, const IndexedSpace& a, const IndexedSpace& c) {
  std::unordered_map<Element, std::vector<Element>, ElementHash> by_point;
  for (std::size_t j = 0; j < c.size(); ++j) by_point[c.to_base.image_at(j)].push_back(c.space.at(j));
  std::vector<Element> images;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = by_point.find(a.to_base.image_at(i));
    if (it == by_point.end()) return std::nullopt;
    images.push_back(rng.pick(it->second));
  }
  return SpaceMap(a, c, FinMap::tabled(a.space, c.space, std::move(images), false));
}

/// A new 0-cell with a random map into `target`; structure maps to the
/// context are induced from the images, so the map always exists.
inline SpaceMap random_space_into(Rng& rng, const GenParams& p, const std::string& name, const IndexedSpace& target) {
  int n = target.size() == 0 ? 0 : detail::draw_size(rng, 0, p.max_size);
  FinSet s = FinSet::trusted(name, detail::labelled(name, n));
  std::vector<Element> images, points;
  for (int i = 0; i < n; ++i) {
    std::size_t j = rng.below(target.size());
    images.push_back(target.space.at(j));
    points.push_back(target.to_base.image_at(j));
  }
  IndexedSpace a(s, FinMap::tabled(s, p.ctx.base, std::move(points), false));
  return {a, target, FinMap::tabled(s, target.space, std::move(images), false)};
}

/// A random map of 1-cells x → y over the identity of the base, or nothing if
/// some nonempty fiber of x lies over an empty fiber of y.
inline std::optional<Cell2> random_2cell(Rng& rng, const Cell1& x, const Cell1& y) {
  std::unordered_map<Element, std::vector<Element>, ElementHash> fibers;
  for (std::size_t j = 0; j < y.size(); ++j) fibers[y.proj_at(j)].push_back(y.total().at(j));
  std::vector<Element> images;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = fibers.find(x.proj_at(i));
    if (it == fibers.end()) return std::nullopt;
    images.push_back(rng.pick(it->second));
  }
  return Cell2(x, y, FinMap::tabled(x.total(), y.total(), std::move(images), false));
}

/// A random fiber-preserving permutation of x.
inline Iso2 random_automorphism(Rng& rng, const Cell1& x) {
  std::unordered_map<Element, std::vector<std::size_t>, ElementHash> fibers;
  std::vector<Element> keys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto [it, fresh] = fibers.try_emplace(x.proj_at(i));
    if (fresh) keys.push_back(x.proj_at(i));
    it->second.push_back(i);
  }
  std::vector<Element> fwd(x.size()), bwd(x.size());
  for (const auto& k : keys) {
    auto idx = fibers[k];
    auto perm = idx;
    rng.shuffle(perm);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      fwd[idx[j]] = x.total().at(perm[j]);
      bwd[perm[j]] = x.total().at(idx[j]);
    }
  }
  return {Cell2(x, x, FinMap::tabled(x.total(), x.total(), fwd, false)),
          Cell2(x, x, FinMap::tabled(x.total(), x.total(), bwd, false))};
}

/// A multi-span with n inputs: B of size at most p.max_size, C at most 3,
/// inputs at most `input_size`. Redraws until every leg exists over the
/// context.
inline MultiSpan random_multispan(Rng& rng, const GenParams& p, std::size_t n, int input_size) {
  GenParams pc = p, pa = p;
  pc.max_size = std::min(p.max_size, 3);
  pa.max_size = input_size;
  while (true) {
    IndexedSpace b = random_space(rng, p, "b"), c = random_space(rng, pc, "c");
    std::vector<IndexedSpace> as;
    for (std::size_t i = 0; i < n; ++i) as.push_back(random_space(rng, pa, "a" + std::to_string(i) + "_"));
    auto f = random_map(rng, b, c);
    if (!f) continue;
    std::vector<FinMap> g;
    for (const auto& a : as)
      if (auto m = random_map(rng, b, a)) g.push_back(m->map);
    if (g.size() == n) return {p.ctx, b, c, as, f->map, g};
  }
}

}  // namespace spanshadow
