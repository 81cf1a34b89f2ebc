#include "evcs/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace evcs::stats {

namespace {

double two_sided_p(double t, double df) {
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

/// Zero spread: the difference is either exactly zero or certain.
TTest degenerate(double diff) {
  if (diff == 0.0) return {0.0, 0.0, 1.0};
  return {std::copysign(INFINITY, diff), 0.0, 0.0};
}

}  // namespace

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  for (double v : values) s.mean += v;
  s.mean /= s.n;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / (s.n - 1));
  return s;
}

TTest welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  const Summary sa = summarize(a);
  const Summary sb = summarize(b);
  if (sa.n < 2 || sb.n < 2) return {0.0, 0.0, 1.0};
  const double va = sa.sd * sa.sd / sa.n;
  const double vb = sb.sd * sb.sd / sb.n;
  const double diff = sa.mean - sb.mean;
  if (va + vb == 0.0) return degenerate(diff);
  TTest r;
  r.t = diff / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) / (va * va / (sa.n - 1) + vb * vb / (sb.n - 1));
  r.p_value = two_sided_p(r.t, r.df);
  return r;
}

TTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_t_test: sizes differ");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const Summary s = summarize(d);
  if (s.n < 2) return {0.0, 0.0, 1.0};
  if (s.sd == 0.0) return degenerate(s.mean);
  TTest r;
  r.t = s.mean / (s.sd / std::sqrt(s.n));
  r.df = s.n - 1;
  r.p_value = two_sided_p(r.t, r.df);
  return r;
}

}  // namespace evcs::stats
