#include <gtest/gtest.h>

#include <fstream>

#include "spanshadow/json_io.hpp"

using namespace spanshadow;

namespace {

Json load(const std::string& name) {
  std::ifstream in(std::string(SPANSHADOW_DATA) + "/" + name);
  return Json::parse(in);
}

std::size_t order_of(const FinGroup& g, std::size_t x) {
  std::size_t k = 1;
  for (std::size_t y = x; y != g.unit(); y = g.mul(y, x)) ++k;
  return k;
}

}  // namespace

TEST(FinGroup, S3Structure) {
  FinGroup g = FinGroup::s3();
  EXPECT_EQ(g.order(), 6u);
  EXPECT_EQ(order_of(g, g.index("r")), 3u);
  EXPECT_EQ(order_of(g, g.index("s")), 2u);
  // Not abelian: sr ≠ rs.
  EXPECT_NE(g.mul(g.index("s"), g.index("r")), g.mul(g.index("r"), g.index("s")));
}

TEST(FinGroup, RejectsBrokenTables) {
  EXPECT_THROW(FinGroup::from_labels("X", {"e", "a"}, {{"e", "a"}, {"a", "a"}}), SpanError);
  EXPECT_THROW(FinGroup::from_labels("X", {"e", "a"}, {{"e", "a"}, {"a", "b"}}), SpanError);
}

TEST(Subgroups, Counts) {
  EXPECT_EQ(all_subgroups(FinGroup::cyclic(2)).size(), 2u);
  EXPECT_EQ(all_subgroups(FinGroup::cyclic(3)).size(), 2u);
  EXPECT_EQ(all_subgroups(FinGroup::cyclic(4)).size(), 3u);
  auto s3 = all_subgroups(FinGroup::s3());
  ASSERT_EQ(s3.size(), 6u);  // 1, three of order 2, A3, S3
  EXPECT_EQ(s3.front().members.size(), 1u);
  EXPECT_EQ(s3.back().members.size(), 6u);
}

TEST(Weyl, S3) {
  FinGroup g = FinGroup::s3();
  for (const auto& h : all_subgroups(g)) {
    Weyl w = weyl(g, h);
    switch (h.members.size()) {
      case 1: EXPECT_EQ(w.group.order(), 6u); break;
      case 2: EXPECT_EQ(w.group.order(), 1u); break;  // self-normalizing
      case 3: EXPECT_EQ(w.group.order(), 2u); break;
      case 6: EXPECT_EQ(w.group.order(), 1u); break;
      default: ADD_FAILURE() << h.name;
    }
  }
  Subgroup s = Subgroup::make(g, "<s>", {0, g.index("s")});
  EXPECT_THROW(weyl(g, s).of(g.index("r")), SpanError);
}

TEST(GroupJson, DataFilesLoad) {
  GroupDoc s3 = group_from_json(load("S3.json"));
  EXPECT_EQ(s3.group.order(), 6u);
  EXPECT_EQ(s3.subgroup("A3").members.size(), 3u);
  EXPECT_EQ(s3.subgroup("S3").members.size(), 6u);
  EXPECT_EQ(s3.subgroup("1").members.size(), 1u);
  EXPECT_THROW(s3.subgroup("nope"), InputError);
  // The file agrees with the built-in S3 element by element.
  FinGroup b = FinGroup::s3();
  for (std::size_t x = 0; x < 6; ++x)
    for (std::size_t y = 0; y < 6; ++y) EXPECT_EQ(s3.group.label(s3.group.mul(x, y)), b.label(b.mul(x, y)));
  EXPECT_EQ(group_from_json(load("C3.json")).group.order(), 3u);
}

TEST(GroupJson, RoundTrip) {
  FinGroup g = FinGroup::s3();
  GroupDoc d = group_from_json(to_json(g));
  EXPECT_EQ(d.group.labels(), g.labels());
  EXPECT_EQ(d.group.table(), g.table());
}

TEST(GroupJson, Malformed) {
  EXPECT_THROW(group_from_json(Json::array()), InputError);
  EXPECT_THROW(group_from_json(Json{{"elements", {"e"}}}), InputError);
  EXPECT_THROW(group_from_json(Json::parse(R"({"elements": ["e","a"], "table": [["e","a"],["a","a"]]})")), InputError);
  EXPECT_THROW(group_from_json(Json::parse(
                   R"({"elements": ["e","a"], "table": [["e","a"],["a","e"]], "subgroups": [{"name": "H", "members": ["a"]}]})")),
               InputError);
}

TEST(ActionJson, ClosesGenerators) {
  FinGroup g = FinGroup::s3();
  FinSet x = FinSet::atoms("X", {"0", "1", "2"});
  // r: 0→1→2→0, s swaps 1 and 2.
  GAction a = action_from_json(g, x, Json::parse(R"({"r": [["0","1"],["1","2"],["2","0"]],
                                                    "s": [["0","0"],["1","2"],["2","1"]]})"));
  EXPECT_EQ(a.apply(g.index("r2"), Element::atom("0")), Element::atom("2"));
  // sr = s∘r: 0 ↦ 1 ↦ 2.
  EXPECT_EQ(a.apply(g.index("sr"), Element::atom("0")), Element::atom("2"));
}

TEST(ActionJson, TripleForm) {
  FinGroup c2 = FinGroup::cyclic(2);
  FinSet x = FinSet::atoms("X", {"0", "1"});
  GAction a = action_from_json(c2, x, Json::parse(R"([["r", "0", "1"], ["r", "1", "0"]])"));
  EXPECT_EQ(a.apply(c2.index("r"), Element::atom("0")), Element::atom("1"));
  EXPECT_THROW(action_from_json(c2, x, Json::parse(R"([["r", "0"]])")), InputError);
}

TEST(ActionJson, Rejections) {
  FinGroup c2 = FinGroup::cyclic(2);
  FinSet x = FinSet::atoms("X", {"0", "1", "2"});
  // A 3-cycle cannot be the image of an element of order 2.
  EXPECT_THROW(action_from_json(c2, x, Json::parse(R"({"r": [["0","1"],["1","2"],["2","0"]]})")), InputError);
  EXPECT_THROW(action_from_json(c2, x, Json::parse(R"({"q": [["0","0"],["1","1"],["2","2"]]})")), InputError);
  EXPECT_THROW(action_from_json(c2, x, Json::array()), InputError);
  // Generators that miss part of the group.
  EXPECT_THROW(action_from_json(FinGroup::s3(), x, Json::parse(R"({"r": [["0","1"],["1","2"],["2","0"]]})")),
               InputError);
}

TEST(EndomapJson, DataFiles) {
  EndoMap e = endomap_from_json(load("cycle3.json"));
  EXPECT_EQ(e.f.source.size(), 3u);
  EXPECT_THROW(endomap_from_json(Json{{"set", {{"name", "A"}, {"elements", {"x"}}}}}), InputError);
}
