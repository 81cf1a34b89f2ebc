#include <gtest/gtest.h>

#include "evcs/stats.hpp"

namespace evcs::stats {
namespace {

// Reference values from scipy.stats (ttest_ind with equal_var=False, ttest_rel).

TEST(Summarize, SampleStandardDeviation) {
  const Summary s = summarize({1, 2, 3, 4, 5});
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_NEAR(s.sd, 1.5811388300841898, 1e-12);
  EXPECT_EQ(summarize({7}).sd, 0.0);
  EXPECT_EQ(summarize({}).n, 0);
}

TEST(WelchTTest, MatchesReference) {
  const TTest r = welch_t_test({1, 2, 3, 4, 5}, {2, 4, 6, 8, 10});
  EXPECT_NEAR(r.t, -1.8973665961010275, 1e-10);
  EXPECT_NEAR(r.df, 5.882352941176471, 1e-10);
  EXPECT_NEAR(r.p_value, 0.10753119493062718, 1e-8);
}

TEST(WelchTTest, Degenerate) {
  EXPECT_EQ(welch_t_test({1}, {2, 3}).p_value, 1.0);
  EXPECT_EQ(welch_t_test({2, 2}, {2, 2}).p_value, 1.0);
  EXPECT_EQ(welch_t_test({1, 1}, {2, 2}).p_value, 0.0);
}

TEST(PairedTTest, MatchesReference) {
  const TTest r = paired_t_test({1.5, 2.0, 3.1, 4.4}, {1.0, 2.2, 2.5, 3.9});
  EXPECT_NEAR(r.t, 1.8935062328016077, 1e-10);
  EXPECT_NEAR(r.p_value, 0.15461852312844915, 1e-8);
  EXPECT_THROW(paired_t_test({1}, {1, 2}), std::invalid_argument);
}

}  // namespace
}  // namespace evcs::stats
