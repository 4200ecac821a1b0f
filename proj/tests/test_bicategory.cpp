#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace spanshadow;
using namespace testing_helpers;

TEST(Unit, Shapes) {
  EXPECT_EQ(unit(IndexedSpace::absolute(FinSet::point())).size(), 1u);
  Cell1 u = unit(space("A", 3));
  ASSERT_EQ(u.size(), 3u);
  for (const auto& e : u.total().elements()) EXPECT_EQ(u.body.proj(e), P(e, e));
  EXPECT_TRUE(unit(space("E", 0)).total().empty());
}

TEST(Compose, FiberCountsMultiplyLikeMatrices) {
  IndexedSpace a = space("a", 1), b = space("b", 2), c = space("c", 1);
  Cell1 x = cell("x", a, b, {{1, 2}});
  Cell1 y = cell("y", b, c, {{3}, {1}});
  EXPECT_EQ(compose(x, y).size(), 1u * 3 + 2u * 1);
}

TEST(Compose, EmptyMiddle) {
  IndexedSpace a = space("a", 2), e = space("e", 0), c = space("c", 2);
  Cell1 x = cell("x", a, e, {{}, {}});
  Cell1 y = cell("y", e, c, {});
  EXPECT_TRUE(compose(x, y).total().empty());
}

TEST(Compose, EndpointMismatch) {
  IndexedSpace a = space("a", 1), b = space("b", 2);
  EXPECT_THROW(compose(cell("x", a, b, {{1, 1}}), cell("y", a, b, {{1, 1}})), SpanError);
}

TEST(Compose, AgreesWithTheLiteralAction) {
  IndexedSpace a = space("a", 2), b = space("b", 2), c = space("c", 3);
  Cell1 x = cell("x", a, b, {{1, 0}, {2, 1}});
  Cell1 y = cell("y", b, c, {{1, 1, 0}, {0, 2, 1}});
  ComposeViaAction lit = compose_via_action(x, y);
  Cell1 direct = compose(x, y);
  EXPECT_EQ(lit.action.size(), direct.size());
  for (const auto& e : lit.action.total.elements())
    EXPECT_EQ(lit.action.proj(e), direct.body.proj(lit.to_compose.forward(e)));
}

TEST(Associator, RebracketsTriples) {
  IndexedSpace a = space("a", 2), b = space("b", 1);
  Cell1 x = cell("x", a, b, {{1}, {2}}), y = cell("y", b, b, {{2}}), z = cell("z", b, a, {{1, 1}});
  Iso2 al = associator(x, y, z);
  for (const auto& e : al.from().total().elements())
    EXPECT_EQ(al.forward.map(e), P(e.first().first(), P(e.first().second(), e.second())));
  EXPECT_EQ(al.from().size(), 2u * 3 * 2);
}

TEST(Unitors, SizesAndEmpty) {
  IndexedSpace a = space("a", 2), b = space("b", 2);
  Cell1 x = cell("x", a, b, {{1, 0}, {2, 3}});
  EXPECT_EQ(left_unitor(x).from().size(), x.size());
  EXPECT_EQ(right_unitor(x).from().size(), x.size());
  Cell1 e = cell("e", a, b, {{0, 0}, {0, 0}});
  EXPECT_TRUE(left_unitor(e).forward.map.source().empty());
}

TEST(Shadow, GraphOfAPermutation) {
  // f = (1)(2 3): its graph as a cell over A × A has one diagonal element.
  IndexedSpace a = space("p", 3);
  Cell1 g = cell("g", a, a, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  EXPECT_EQ(shadow(g).size(), 1u);
  EXPECT_EQ(shadow(unit(a)).size(), 3u);
  EXPECT_TRUE(shadow(cell("e", a, a, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}})).empty());
  EXPECT_THROW(shadow(cell("x", a, space("q", 1), {{1}, {1}, {1}})), SpanError);
}

TEST(Rotator, InvolutionAndSizes) {
  IndexedSpace a = space("a", 2), e = space("e", 3);
  Cell1 x = cell("x", a, e, {{1, 0, 2}, {1, 1, 0}});
  Cell1 y = cell("y", e, a, {{1, 1}, {0, 2}, {1, 0}});
  Bijection t = rotator(x, y);
  Bijection back = rotator(y, x);
  EXPECT_EQ(t.forward.source().size(), t.forward.target().size());
  for (const auto& el : t.forward.source().elements()) EXPECT_EQ(back.forward(t.forward(el)), el);
}

TEST(TwoCells, InterchangeLaw) {
  IndexedSpace a = space("a", 2), b = space("b", 2), c = space("c", 1);
  Cell1 x = cell("x", a, b, {{1, 1}, {0, 2}});
  Cell1 y = cell("y", b, c, {{2}, {1}});
  // Swap the two elements of x over (a1,b1); rotate y's fiber over (b0,c0).
  Cell2 phi = Cell2::by(x, x, [&](const Element& e) {
    const auto& es = x.total().elements();
    if (e == es[2]) return es[3];
    if (e == es[3]) return es[2];
    return e;
  });
  Cell2 psi = Cell2::by(y, y, [&](const Element& e) {
    const auto& es = y.total().elements();
    if (e == es[0]) return es[1];
    if (e == es[1]) return es[0];
    return e;
  });
  Cell2 lhs = hcomp(vcomp(phi, phi), vcomp(psi, Cell2::identity(y)));
  Cell2 rhs = vcomp(hcomp(phi, psi), hcomp(phi, Cell2::identity(y)));
  EXPECT_EQ(lhs.map, rhs.map);
}

TEST(TwoCells, RejectsMapsThatMoveFibers) {
  IndexedSpace a = space("a", 2), b = space("b", 1);
  Cell1 x = cell("x", a, b, {{1}, {1}});
  EXPECT_THROW(Cell2::by(x, x, [&](const Element&) { return x.total().at(0); }), SpanError);
}

TEST(ShadowFunctoriality, OnComposites) {
  IndexedSpace a = space("a", 2);
  Cell1 x = cell("x", a, a, {{2, 1}, {0, 3}});
  Cell2 phi = Cell2::by(x, x, [&](const Element& e) {
    const auto& es = x.total().elements();
    if (e == es[0]) return es[1];
    if (e == es[1]) return es[0];
    return e;
  });
  Cell2 psi = Cell2::by(x, x, [&](const Element& e) {
    const auto& es = x.total().elements();
    if (e == es[3]) return es[4];
    return e;
  });
  EXPECT_EQ(shadow_on_2cells(vcomp(psi, phi)), compose(shadow_on_2cells(psi), shadow_on_2cells(phi)));
}

TEST(Rebracket, MatchesAssociatorChain) {
  IndexedSpace a = space("a", 2);
  Cell1 w = cell("w", a, a, {{1, 1}, {0, 1}});
  Cell1 x = cell("x", a, a, {{1, 0}, {1, 1}});
  Cell1 y = cell("y", a, a, {{0, 2}, {1, 0}});
  Cell1 z = cell("z", a, a, {{1, 1}, {1, 0}});
  std::vector<Cell1> cells{w, x, y, z};
  Iso2 r = rebracket(cells, Bracketing::left_nested(0, 4), Bracketing::right_nested(0, 4));
  // ((wx)y)z → (wx)(yz) → w(x(yz))
  Iso2 chain = vcomp(associator(w, x, compose(y, z)), associator(compose(w, x), y, z));
  EXPECT_EQ(r.forward.map, chain.forward.map);
}
