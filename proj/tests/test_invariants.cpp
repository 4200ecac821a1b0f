#include <gtest/gtest.h>

#include <numeric>

#include "helpers.hpp"
#include "spanshadow/invariants.hpp"

using namespace spanshadow;
using namespace testing_helpers;

namespace {

EndoMap endo(const std::vector<int>& idx) {
  IndexedSpace a = space("a", static_cast<int>(idx.size()));
  return EndoMap::absolute(table(a, a, idx));
}

// Oracles on plain integer tables.
std::size_t iterate_fix(const std::vector<int>& f, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t a = 0; a < f.size(); ++a) {
    int x = static_cast<int>(a);
    for (std::size_t k = 0; k < n; ++k) x = f[static_cast<std::size_t>(x)];
    count += x == static_cast<int>(a);
  }
  return count;
}

std::size_t exact_period(const std::vector<int>& f, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t a = 0; a < f.size(); ++a) {
    int x = static_cast<int>(a);
    std::size_t first = 0;
    for (std::size_t k = 1; k <= n && !first; ++k) {
      x = f[static_cast<std::size_t>(x)];
      if (x == static_cast<int>(a)) first = k;
    }
    count += first == n;
  }
  return count;
}

// Calls fn on every map {0..m-1} → {0..m-1}.
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

}  // namespace

TEST(FixCount, Examples) {
  EXPECT_EQ(fix_count(endo({0, 1, 2, 3}), 1), 4u);
  EXPECT_EQ(fix_count(endo({0, 1, 2, 3}), 5), 4u);
  EXPECT_EQ(fix_count(endo({1, 2, 0}), 3), 3u);
  EXPECT_EQ(fix_count(endo({1, 2, 0}), 1), 0u);
  EXPECT_EQ(fix_count(endo({1, 0, 2}), 2), 3u);
}

TEST(FixCount, RejectsZeroPeriod) { EXPECT_THROW(fix_count(endo({0}), 0), SpanError); }

TEST(FixCount, EmptySet) {
  EXPECT_EQ(fix_count(endo({}), 3), 0u);
  EXPECT_EQ(fuller_count(endo({}), 3).count, 0u);
}

TEST(FullerCount, Examples) {
  EXPECT_EQ(fuller_count(endo({0, 1, 2}), 2).count, 3u);
  EXPECT_EQ(fuller_count(endo({1, 2, 3, 0}), 2).count, 0u);
  EXPECT_EQ(fuller_count(endo({1, 2, 3, 0}), 4).count, 4u);
}

TEST(FullerCount, BijectionLandsOnFixedPoints) {
  EndoMap e = endo({1, 0, 2, 2});
  FullerCount c = fuller_count(e, 2);
  ASSERT_EQ(c.count, 3u);
  for (const auto& a : c.to_fixed.forward.target().elements()) {
    Element x = e.f(e.f(a));
    EXPECT_EQ(x, a);
  }
}

TEST(FullerCount, TwistedTauAgreesWithLiteralTau) {
  EndoMap e = endo({1, 2, 0, 0});
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<Cell1> qs(n, base_change(e.f).cell);
    Bijection lit = tau(qs), fused = twisted_tau(qs);
    ASSERT_EQ(lit.forward.source().size(), fused.forward.source().size());
    for (const auto& x : lit.forward.source().elements()) {
      ASSERT_TRUE(fused.forward.source().contains(x));
      EXPECT_EQ(fused.forward(x), lit.forward(x));
    }
  }
}

TEST(LeastPeriod, Examples) {
  EXPECT_EQ(least_period_count(endo({1, 2, 0}), 3), 3);
  EXPECT_EQ(least_period_count(endo({1, 0, 2}), 2), 2);
  EXPECT_EQ(least_period_count(endo({1, 0, 2}), 1), 1);
}

TEST(Mobius, SmallValues) {
  const int expected[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0};
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(mobius(static_cast<std::uint64_t>(n)), expected[n - 1]) << n;
}

namespace {
// All endofunctions on sets of the given sizes, periods ≤ 6.
void exhaustive(int lo, int hi) {
  for (int m = lo; m <= hi; ++m)
    all_endos(m, [&](const std::vector<int>& f) {
      EndoMap e = endo(f);
      auto fix = fix_counts(e, 6);
      auto full = fuller_counts(e, 6);
      for (std::size_t n = 1; n <= 6; ++n) {
        std::size_t oracle = iterate_fix(f, n);
        ASSERT_EQ(fix[n - 1], oracle);
        ASSERT_EQ(full[n - 1].count, oracle);
        ASSERT_EQ(mobius_invert(fix, n), static_cast<long long>(exact_period(f, n)));
        long long sum = 0;
        for (auto d : divisors(n)) sum += mobius_invert(fix, d);
        ASSERT_EQ(sum, static_cast<long long>(oracle));
      }
    });
}
}  // namespace

TEST(Invariants, ExhaustiveUpToFive) { exhaustive(0, 5); }

TEST(Invariants, ExhaustiveSizeSix) { exhaustive(6, 6); }

TEST(Invariants, SingleAndBatchAgree) {
  all_endos(3, [&](const std::vector<int>& f) {
    EndoMap e = endo(f);
    auto fix = fix_counts(e, 4);
    for (std::size_t n = 1; n <= 4; ++n) {
      ASSERT_EQ(fix_count(e, n), fix[n - 1]);
      ASSERT_EQ(fuller_count(e, n).count, fix[n - 1]);
      ASSERT_EQ(least_period_count(e, n), mobius_invert(fix, n));
    }
  });
}

namespace {
GSpace c2_space(const std::vector<int>& swap) {
  FinGroup c2 = FinGroup::cyclic(2);
  IndexedSpace a = space("a", static_cast<int>(swap.size()));
  return {a, GAction::by(c2, a.space, [&](std::size_t g, const Element& x) {
            return g == 0 ? x : a.space.at(static_cast<std::size_t>(swap[a.space.require_index(x)]));
          })};
}
}  // namespace

TEST(EquivariantFixCount, Examples) {
  GSpace a = c2_space({1, 0, 2});
  GMap id = GMap::identity(a);
  FinGroup c2 = FinGroup::cyclic(2);
  EXPECT_EQ(equivariant_fix_count(id, Subgroup::whole(c2), 1), 1u);
  EXPECT_EQ(equivariant_fix_count(id, Subgroup::trivial(c2), 1), 3u);
  GSpace free = c2_space({1, 0, 3, 2});
  EXPECT_EQ(equivariant_fix_count(GMap::identity(free), Subgroup::whole(c2), 4), 0u);
}

// Every C2 action on ≤ 4 points and every equivariant endomap.
TEST(EquivariantFixCount, ExhaustiveC2) {
  FinGroup c2 = FinGroup::cyclic(2);
  for (int m = 0; m <= 4; ++m)
    all_endos(m, [&](const std::vector<int>& s) {
      for (int i = 0; i < m; ++i)
        if (s[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])] != i) return;  // not an involution
      GSpace a = c2_space(s);
      all_endos(m, [&](const std::vector<int>& f) {
        for (int i = 0; i < m; ++i)
          if (f[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])] != s[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])]) return;
        IndexedSpace sp = a.space;
        GMap g(a, a, table(sp, sp, f));
        for (std::size_t n = 1; n <= 4; ++n) {
          std::size_t all = iterate_fix(f, n), fixed = 0;
          for (int x = 0; x < m; ++x) {
            if (s[static_cast<std::size_t>(x)] != x) continue;
            int y = x;
            for (std::size_t k = 0; k < n; ++k) y = f[static_cast<std::size_t>(y)];
            fixed += y == x;
          }
          ASSERT_EQ(equivariant_fix_count(g, Subgroup::trivial(c2), n), all);
          ASSERT_EQ(equivariant_fix_count(g, Subgroup::whole(c2), n), fixed);
        }
      });
    });
}
