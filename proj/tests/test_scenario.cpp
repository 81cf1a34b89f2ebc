#include <gtest/gtest.h>

#include "evcs/io.hpp"
#include "evcs/scenario.hpp"

namespace evcs {
namespace {

TEST(Generate, FullSizeMarketIsFullyServiceable) {
  ScenarioParams p;
  p.n_evs = 130;
  p.n_stations = 8;
  p.horizon = 50;
  p.seed = 7;
  const Instance inst = resolve(generate(p));
  ASSERT_EQ(inst.requests.size(), 130u);
  EXPECT_EQ(inst.stations.size(), 8u);
  for (const auto& r : inst.requests) EXPECT_FALSE(r.offers.empty()) << r.ev.id;
}

TEST(Generate, EmptyMarket) {
  ScenarioParams p;
  p.n_evs = 0;
  const Scenario sc = generate(p);
  EXPECT_TRUE(sc.evs.empty());
  EXPECT_EQ(resolve(sc).requests.size(), 0u);
}

TEST(Generate, SameSeedSameBytes) {
  ScenarioParams p;
  p.n_evs = 40;
  p.seed = 11;
  EXPECT_EQ(io::scenario_to_json(generate(p)), io::scenario_to_json(generate(p)));
  ScenarioParams q = p;
  q.seed = 12;
  EXPECT_NE(io::scenario_to_json(generate(p)), io::scenario_to_json(generate(q)));
}

TEST(Generate, DrawsStayInTheirSupports) {
  ScenarioParams p;
  p.n_evs = 200;
  p.n_stations = 5;
  p.horizon = 30;
  p.seed = 3;
  const Scenario sc = generate(p);
  for (const auto& s : sc.stations) {
    EXPECT_EQ(s.rate, Energy::whole(1));
    EXPECT_GE(s.slots, p.min_slots);
    EXPECT_LE(s.slots, p.max_slots);
    ASSERT_EQ(static_cast<int>(s.expected_demand.size()), p.horizon);
    for (int d : s.expected_demand) {
      EXPECT_GE(d, 1);
      EXPECT_LE(d, 3);
    }
  }
  for (const auto& ev : sc.evs) {
    EXPECT_GE(ev.start_time, 0);
    EXPECT_LE(ev.start_time, static_cast<int>(0.6 * p.horizon));
    EXPECT_GE(ev.park_duration, 1);
    EXPECT_LE(ev.start_time + ev.park_duration, p.horizon);
    // Whole units, at least one, never more than the parking time.
    EXPECT_EQ(ev.energy_demand.raw() % kScale, 0);
    EXPECT_GE(ev.energy_demand, Energy::whole(1));
    EXPECT_LE(ev.energy_demand, Energy::whole(ev.park_duration));
    EXPECT_GE(ev.base_valuation, Money{});
    EXPECT_LE(ev.base_valuation.raw(), ev.energy_demand.raw());  // v' <= 1 per unit
    EXPECT_LE(ev.battery_initial + ev.energy_demand, ev.battery_capacity);
  }
}

TEST(Generate, InconsistentOverridesHitTheResampleLimit) {
  ScenarioParams p;
  p.n_evs = 3;
  p.unit_value_mean = 0.0;  // worthless charging: no station is ever worth visiting
  p.unit_value_spread = 0.0;
  p.max_resamples = 20;
  EXPECT_THROW(generate(p), ResampleLimit);
}

TEST(PerturbReports, FloorOfTheFraction) {
  ScenarioParams p;
  p.n_evs = 10;
  p.seed = 5;
  const Scenario sc = generate(p);
  const PerturbedReports r = perturb_reports(sc, 0.10, 1.8, 99);
  int liars = 0;
  for (std::size_t a = 0; a < sc.evs.size(); ++a) {
    if (!r.liar[a]) {
      EXPECT_EQ(r.reported.evs[a].base_valuation, sc.evs[a].base_valuation);
      continue;
    }
    ++liars;
    EXPECT_EQ(r.reported.evs[a].base_valuation.raw(),
              round_to_raw(static_cast<long double>(sc.evs[a].base_valuation.raw()) * 1.8L));
  }
  EXPECT_EQ(liars, 1);
}

TEST(PerturbReports, NoLiarsMeansTruth) {
  ScenarioParams p;
  p.n_evs = 15;
  const Scenario sc = generate(p);
  const PerturbedReports r = perturb_reports(sc, 0.0, 1.8, 1);
  EXPECT_EQ(io::scenario_to_json(r.reported), io::scenario_to_json(sc));
  EXPECT_EQ(r.truth, reported_valuations(resolve(sc)));
  EXPECT_THROW(perturb_reports(sc, 1.5, 1.8, 1), Error);
}

TEST(PerturbReports, TruthTableUsesTrueTypes) {
  ScenarioParams p;
  p.n_evs = 20;
  const Scenario sc = generate(p);
  const PerturbedReports r = perturb_reports(sc, 1.0, 1.8, 4);
  const Instance reported = resolve(r.reported);
  for (std::size_t a = 0; a < reported.requests.size(); ++a)
    for (const auto& o : reported.requests[a].offers)
      EXPECT_EQ(r.truth[a][o.station], valuation(sc.evs[a], o.time_cost, sc.evs[a].energy_demand));
}

}  // namespace
}  // namespace evcs
