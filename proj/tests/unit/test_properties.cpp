#include <gtest/gtest.h>

#include "properties.hpp"

TEST(InvariantSuite, AllPropertiesHoldOnRandomInputs) {
  const auto outcomes = simcorr::testing::run_invariant_suite(20261016, 2000);
  ASSERT_FALSE(outcomes.empty());
  for (const auto& o : outcomes) {
    EXPECT_TRUE(o.passed()) << o.name << ": " << o.failures << "/" << o.cases << " failed, first: " << o.first_failure;
  }
}
