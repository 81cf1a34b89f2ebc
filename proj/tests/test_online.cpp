#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "evcs/online.hpp"
#include "fixtures.hpp"

namespace evcs {
namespace {

using fixtures::make_ev;
using fixtures::make_flat;
using fixtures::make_station;
using fixtures::money;

OnlineOptions vcg() {
  OnlineOptions o;
  o.mechanism = Mechanism::Vcg;
  return o;
}

TEST(ClearingSchedule, Evenly) {
  EXPECT_EQ(ClearingSchedule::evenly(50, 5).points, (std::vector<int>{10, 20, 30, 40, 50}));
  EXPECT_EQ(ClearingSchedule::evenly(24, 5).points, (std::vector<int>{5, 10, 14, 19, 24}));
}

TEST(RunOnline, RejectsBadSchedules) {
  const Instance inst = fixtures::tiny2();
  EXPECT_THROW(run_online(inst, {{1, 1}}, vcg()), Error);
  EXPECT_THROW(run_online(inst, {{2, 1}}, vcg()), Error);
  EXPECT_THROW(run_online(inst, {{3}}, vcg()), Error);
}

TEST(RunOnline, LaterArrivalFindsTheSlotTaken) {
  // a1 reports at 0 and is cleared at t=1 into [1, 3); a2 reports at 1, is cleared at
  // t=2 and needs t=2, which a1 already holds.
  const Instance inst = make_flat(3, {make_station("L1", 1, 0.0, {0, 0, 0})},
                                  {make_ev("a1", 0, 3, 2, 5.0), make_ev("a2", 1, 2, 1, 4.0)}, 0.0);
  const OnlineResult r = run_online(inst, {{1, 2}}, vcg());
  ASSERT_EQ(r.clearings.size(), 2u);
  EXPECT_EQ(r.clearings[0].eligible, std::vector<int>{0});
  EXPECT_EQ(r.clearings[1].eligible, std::vector<int>{1});
  EXPECT_TRUE(r.outcome.charged[0]);
  EXPECT_EQ(r.outcome.payments[0], Money{});
  EXPECT_FALSE(r.outcome.charged[1]);
  EXPECT_EQ(r.combined.schedule, (std::vector<ChargeSlot>{{0, 0, 1}, {0, 0, 2}}));
}

TEST(RunOnline, EmptyClearingIsANoOp) {
  const Instance inst = fixtures::tiny2();
  const OnlineResult r = run_online(inst, {{1, 2}}, vcg());
  EXPECT_TRUE(r.clearings[1].eligible.empty());
  EXPECT_TRUE(r.clearings[1].added.empty());
}

/// Offers clipped to t >= from, written independently of the online module.
Instance without_past(const Instance& inst, int from) {
  Instance out = inst;
  for (auto& r : out.requests) {
    std::vector<StationOffer> kept;
    for (StationOffer o : r.offers) {
      o.arrival = std::max(o.arrival, from);
      if (o.departure - o.arrival < o.charge_slots_needed) continue;
      o.charge_slots_allowed = std::min(o.charge_slots_allowed, o.departure - o.arrival);
      kept.push_back(o);
    }
    r.offers = kept;
  }
  return out;
}

class OnlineRandom : public ::testing::TestWithParam<int> {
 protected:
  Instance market() {
    std::mt19937_64 rng(500 + GetParam());
    return fixtures::random_small(rng, {4, 3, 10});
  }
};

TEST_P(OnlineRandom, SingleClearingMatchesOfflineWithoutThePast) {
  Instance inst = market();
  for (auto& r : inst.requests) r.ev.start_time = 0;
  const OnlineResult online = run_online(inst, {{1}}, vcg());
  const Allocation offline = solve_bruteforce(without_past(inst, 1));
  EXPECT_EQ(online.combined.objective, social_welfare(inst, offline));
}

TEST_P(OnlineRandom, CommitmentsOnlyGrowAndNeverPrecedeTheirClearing) {
  const Instance inst = market();
  const ClearingSchedule schedule = ClearingSchedule::evenly(inst.time_grid.horizon_len, 3);
  const OnlineResult r = run_online(inst, schedule, vcg());
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& c : r.clearings) {
    for (const auto& pin : c.added) {
      for (int t : pin.times) {
        EXPECT_GE(t, c.time);
        EXPECT_TRUE(seen.insert({pin.request, pin.station, t}).second);
      }
    }
    if (c.eligible.empty()) continue;  // no program is built
    // Every earlier commitment is pinned, unchanged, in this clearing's program.
    std::set<std::tuple<int, int, int>> pinned;
    for (const auto& pin : c.instance.pinned)
      for (int t : pin.times) pinned.insert({c.request_map[pin.request], pin.station, t});
    for (const auto& triple : seen)
      if (std::none_of(c.added.begin(), c.added.end(),
                       [&](const Pin& p) { return p.request == std::get<0>(triple); }))
        EXPECT_TRUE(pinned.contains(triple));
  }
  std::set<std::tuple<int, int, int>> combined;
  for (const auto& s : r.combined.schedule) combined.insert({s.request, s.station, s.time});
  EXPECT_EQ(combined, seen);
  EXPECT_TRUE(validate_allocation(inst, r.combined).empty());
}

TEST_P(OnlineRandom, OfflineWelfareDominates) {
  const Instance inst = market();
  for (const bool carry : {false, true}) {
    OnlineOptions o = vcg();
    o.carryover = carry;
    const OnlineResult r = run_online(inst, ClearingSchedule::evenly(inst.time_grid.horizon_len, 3), o);
    EXPECT_LE(r.combined.objective, solve_bruteforce(inst).objective);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, OnlineRandom, ::testing::Range(0, 25));

TEST(RunOnline, CarryoverKeepsUnservedAgentsEligible) {
  // a2 loses the slot at t=1 and its window still fits at t=2.
  const Instance inst = make_flat(3, {make_station("L1", 1, 0.0, {0, 0, 0})},
                                  {make_ev("a1", 0, 3, 2, 5.0), make_ev("a2", 0, 3, 1, 4.0)}, 0.0);
  OnlineOptions o = vcg();
  const OnlineResult single = run_online(inst, {{1, 2}}, o);
  o.carryover = true;
  const OnlineResult carried = run_online(inst, {{1, 2}}, o);
  EXPECT_FALSE(single.outcome.charged[1]);
  EXPECT_TRUE(single.clearings[1].eligible.empty());
  EXPECT_EQ(carried.clearings[1].eligible, std::vector<int>{1});
  EXPECT_FALSE(carried.outcome.charged[1]);
}

}  // namespace
}  // namespace evcs
