#pragma once

#include <vector>

namespace evcs::stats {

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for fewer than two values
  int n = 0;
};

Summary summarize(const std::vector<double>& values);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;  // two-sided
};

/// Welch's unequal-variance two-sample test of mean(a) == mean(b).
/// Degenerate inputs (fewer than two values on a side, or zero spread) give p = 1
/// when the means agree and p = 0 when they differ with zero spread.
TTest welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// Paired test on a[i] - b[i] (one-sample test of the differences against 0).
TTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace evcs::stats
