#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "spanshadow/fuller.hpp"

using namespace spanshadow;
using namespace testing_helpers;

namespace {

std::set<Element> as_set(const FinSet& s) { return {s.elements().begin(), s.elements().end()}; }

}  // namespace

TEST(Box, SingleCellIsItself) {
  IndexedSpace a = space("a", 2);
  Cell1 x = cell("x", a, a, {{1, 0}, {2, 1}});
  EXPECT_EQ(box({x}), x);
}

TEST(Box, SizesMultiplyAndEmptyFactor) {
  IndexedSpace a = space("a", 1), b = space("b", 1);
  Cell1 x = cell("x", a, b, {{2}}), y = cell("y", b, a, {{3}});
  EXPECT_EQ(box({x, y}).size(), 6u);
  Cell1 z = cell("z", a, a, {{0}});
  EXPECT_TRUE(box({x, z}).total().empty());
  EXPECT_THROW(box(std::vector<Cell1>{}), SpanError);
}

TEST(Box, AgreesWithTheLiteralPullback) {
  IndexedSpace a = space("a", 2), b = space("b", 2);
  Cell1 x = cell("x", a, b, {{1, 0}, {1, 2}}), y = cell("y", b, a, {{1, 1}, {0, 1}});
  BoxLiteral lit = box_literal({x, y, x});
  Cell1 direct = box({x, y, x});
  ASSERT_EQ(lit.literal.size(), direct.size());
  for (const auto& e : lit.literal.total.elements())
    EXPECT_EQ(lit.literal.proj(e), direct.body.proj(lit.to_box.forward(e)));
}

TEST(Box, FiberwiseKeepsOneBasePoint) {
  BaseContext ctx{FinSet::atoms("B", {"p", "q"})};
  IndexedSpace a = IndexedSpace::over(ctx, FinSet::atoms("A", {"a0", "a1"}), {A("p"), A("q")});
  Cell1 x = Cell1::from_images(a, a, FinSet::atoms("x", {"x0", "x1", "x2"}),
                               {P(A("a0"), A("a0")), P(A("a1"), A("a1")), P(A("a1"), A("a1"))});
  // Pairs over p: 1·1, over q: 2·2.
  EXPECT_EQ(box({x, x}).size(), 5u);
  BoxLiteral lit = box_literal({x, x});
  EXPECT_EQ(lit.literal.size(), 5u);
}

TEST(MBox, IdentityForOneAndCardinalities) {
  IndexedSpace a = space("a", 2), b = space("b", 1), c = space("c", 2);
  Cell1 m1 = cell("m", a, b, {{1}, {2}}), n1 = cell("n", b, c, {{1, 1}});
  Iso2 one = m_box({m1}, {n1});
  for (const auto& e : one.from().total().elements()) EXPECT_EQ(one.forward.map(e), e);
  Cell1 m2 = cell("p", b, a, {{2, 1}}), n2 = cell("q", a, c, {{1, 0}, {1, 1}});
  Iso2 two = m_box({m1, m2}, {n1, n2});
  EXPECT_EQ(two.from().size(), compose(m1, n1).size() * compose(m2, n2).size());
}

TEST(IBox, BothSidesAreTheProduct) {
  BaseContext ctx;
  IndexedSpace a = space("a", 2), b = space("b", 3);
  Iso2 i = i_box(ctx, {a, b});
  EXPECT_EQ(i.from().size(), 6u);
  EXPECT_TRUE(i_box(ctx, {a, space("e", 0)}).to().total().empty());
  EXPECT_EQ(i_box(ctx, {a}).from(), unit(a));
}

TEST(Twist, ShapeAndGraph) {
  BaseContext ctx;
  IndexedSpace a = space("a", 2), b = space("b", 3);
  TwistCell t = twist_cell(ctx, {a, b});
  EXPECT_EQ(t.cell.size(), 6u);
  for (const auto& e : t.cell.total().elements()) EXPECT_EQ(t.cell.body.proj(e), P(P(e.second(), e.first()), e));
  EXPECT_EQ(twist_cell(ctx, {a}).cell, unit(a));
  EXPECT_TRUE(twist_cell(ctx, {a, space("e", 0)}).cell.total().empty());
}

TEST(Vartheta, CardinalitiesAndNOne) {
  IndexedSpace a = space("a", 2), b = space("b", 2);
  Cell1 m = cell("m", a, b, {{1, 2}, {0, 1}}), n = cell("n", b, a, {{1, 0}, {2, 1}});
  Iso2 v = vartheta({m, n});
  EXPECT_EQ(v.from().size(), v.to().size());
  EXPECT_EQ(v.from().size(), m.size() * n.size());
  Iso2 v1 = vartheta({m});
  // n = 1: (a, m) ↦ (m, b), the unitor conjugate of the identity.
  for (const auto& e : v1.from().total().elements())
    EXPECT_EQ(v1.forward.map(e), P(e.second(), m.body.proj(e.second()).second()));
}

TEST(Tau, ThreeCycleGraphs) {
  // Q_i = graph of the 3-cycle on {0,1,2}: q over (k, k+1).
  IndexedSpace a = space("a", 3);
  Cell1 q = cell("q", a, a, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  Bijection t3 = tau({q, q, q});
  EXPECT_EQ(t3.forward.source().size(), 3u);
  Bijection t1 = tau({q});
  EXPECT_EQ(t1.forward.source().size(), 0u);
}

TEST(Tau, RandomishCardinalities) {
  IndexedSpace a = space("a", 2), b = space("b", 3);
  Cell1 x = cell("x", a, b, {{1, 0, 2}, {1, 1, 0}}), y = cell("y", b, a, {{1, 1}, {0, 2}, {1, 0}});
  Bijection t = tau({x, y});
  EXPECT_EQ(t.forward.source().size(), shadow(compose(x, y)).size());
}

TEST(TwistedShadow, SameElementsAsTheLiteralComposite) {
  BaseContext ctx;
  IndexedSpace a = space("a", 2), b = space("b", 3);
  Cell1 x = cell("x", a, b, {{1, 0, 2}, {1, 1, 0}}), y = cell("y", b, a, {{1, 1}, {0, 2}, {1, 0}});
  Cell1 z = cell("z", a, a, {{1, 1}, {1, 0}});
  std::vector<std::vector<Cell1>> cases{{x, y}, {z}, {z, z, z}, {x, y, z}};
  for (const auto& qs : cases) {
    std::vector<IndexedSpace> srcs;
    for (const auto& q : qs) srcs.push_back(q.src);
    FinSet literal = shadow(compose(twist_cell(ctx, srcs).cell, box(qs)));
    EXPECT_EQ(as_set(twisted_shadow(qs)), as_set(literal));
  }
}
