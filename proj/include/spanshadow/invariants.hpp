#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spanshadow/basechange.hpp"
#include "spanshadow/equivariant.hpp"
#include "spanshadow/fuller.hpp"

namespace spanshadow {

/// An endomorphism A → A of one 0-cell.
struct EndoMap {
  SpaceMap f;

  explicit EndoMap(SpaceMap m) : f(std::move(m)) {
    if (!(f.source == f.target)) throw SpanError("endomap needs source = target");
  }
  static EndoMap absolute(const FinMap& m) {
    if (!(m.source() == m.target())) throw SpanError("endomap needs source = target");
    IndexedSpace a = IndexedSpace::absolute(m.source());
    return EndoMap(SpaceMap(a, a, m));
  }

  const FinSet& set() const { return f.source.space; }
};

namespace detail {
inline void require_positive(std::size_t n) {
  if (n == 0) throw SpanError("period must be >= 1");
}

inline std::vector<Cell1> copies(const Cell1& x, std::size_t n) { return std::vector<Cell1>(n, x); }
}  // namespace detail

/// ⟨[f]^{⊙n}⟩ ≅ ⟨[fⁿ]⟩ = Fix(fⁿ), via m_[] on the left-nested power.
inline Bijection fixed_points_of_power(const EndoMap& e, std::size_t n) {
  detail::require_positive(n);
  return shadow_on_iso(power_to_iterate(e.f, n));
}

inline std::size_t fix_count(const EndoMap& e, std::size_t n) { return fixed_points_of_power(e, n).forward.source().size(); }

/// fix_count for n = 1..max_n from one pass over the powers of [f].
inline std::vector<std::size_t> fix_counts(const EndoMap& e, std::size_t max_n) {
  detail::require_positive(max_n);
  std::vector<std::size_t> out;
  for (const auto& iso : power_chain(e.f, max_n)) out.push_back(shadow_on_iso(iso).forward.source().size());
  return out;
}

struct FullerCount {
  std::size_t count;
  Bijection to_fixed;  // ⟨T ⊙ ⊠[f]⟩ → Fix(fⁿ)
};

namespace detail {
inline FullerCount fuller_from(const Cell1& bf, const Iso2& power, std::size_t n) {
  Bijection t = twisted_tau(copies(bf, n), power.from());
  Bijection b = compose(shadow_on_iso(power), t);
  return {b.forward.source().size(), b};
}
}  // namespace detail

/// |⟨T ⊙ ⊠_{i<n}[f]⟩| with τ followed by ⟨m_[]⟩ carrying it onto Fix(fⁿ).
inline FullerCount fuller_count(const EndoMap& e, std::size_t n) {
  detail::require_positive(n);
  return detail::fuller_from(base_change(e.f).cell, power_to_iterate(e.f, n), n);
}

inline std::vector<FullerCount> fuller_counts(const EndoMap& e, std::size_t max_n) {
  detail::require_positive(max_n);
  Cell1 bf = base_change(e.f).cell;
  auto chain = power_chain(e.f, max_n);
  std::vector<FullerCount> out;
  for (std::size_t n = 1; n <= max_n; ++n) out.push_back(detail::fuller_from(bf, chain[n - 1], n));
  return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0 || n > 1'000'000) throw SpanError("divisors: n must be in [1, 10^6]");
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

/// μ(1) = 1, μ(n) = -Σ_{d | n, d < n} μ(d).
inline int mobius(std::uint64_t n) {
  if (n == 1) return 1;
  int sum = 0;
  for (auto d : divisors(n))
    if (d < n) sum += mobius(d);
  return -sum;
}

/// Σ_{d | n} μ(n/d)·fix[d-1], for a table of fix counts covering 1..n.
inline long long mobius_invert(const std::vector<std::size_t>& fix, std::size_t n) {
  if (n == 0 || fix.size() < n) throw SpanError("fix table does not cover n");
  long long total = 0;
  for (auto d : divisors(n)) total += static_cast<long long>(mobius(n / d)) * static_cast<long long>(fix[d - 1]);
  return total;
}

/// Points of exact period n: Σ_{d | n} μ(n/d)·fix_count(f, d).
inline long long least_period_count(const EndoMap& e, std::size_t n) {
  detail::require_positive(n);
  return mobius_invert(fix_counts(e, n), n);
}

/// |{a ∈ A^H : fⁿ(a) = a}| for a G-map f: A → A, routed through
/// Φ^H[f] ≅ [f^H] before counting.
inline std::size_t equivariant_fix_count(const GMap& f, const Subgroup& h, std::size_t n) {
  detail::require_positive(n);
  if (!(f.source.space == f.target.space)) throw SpanError("equivariant endomap needs source = target");
  Weyl w = weyl(f.source.group(), h);
  Iso2 e = eta(f, h, w);  // Φ^H[f] ≅ [f^H]; throws unless valid and WH-equivariant
  GMap fh = fixed_map(f, h, w);
  if (!(e.to() == base_change(fh.map).cell)) throw SpanError("eta lands outside [f^H]");
  return fix_count(EndoMap(fh.map), n);
}

}  // namespace spanshadow
