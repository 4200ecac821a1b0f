#include <gtest/gtest.h>

#include "spanshadow/suites.hpp"

using namespace spanshadow;

TEST(Suites, EveryNonSelftestSuitePassesSmallRuns) {
  SuiteParams p;
  p.seed = 7;
  p.instances = 20;
  for (const auto& s : all_suites()) {
    if (s.name.rfind("selftest", 0) == 0) continue;
    SuiteReport r = run_suite(s, p, 1);
    EXPECT_TRUE(r.passed()) << s.name << ": " << r.to_json().dump();
  }
}
