#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "evcs/allocator.hpp"
#include "evcs/model.hpp"
#include "evcs/pricing.hpp"
#include "evcs/transport.hpp"

namespace evcs::fixtures {

inline Money money(double v) { return Money::from_double(v); }
inline Energy energy(double v) { return Energy::from_double(v); }

inline EvType make_ev(std::string id, int start, int park, double demand, double base_valuation,
                      double battery_capacity = 100.0, double battery_initial = 0.0) {
  EvType ev;
  ev.id = std::move(id);
  ev.discharge_rate = energy(0.0);
  ev.battery_capacity = energy(battery_capacity);
  ev.battery_initial = energy(battery_initial);
  ev.start_time = start;
  ev.park_duration = park;
  ev.energy_demand = energy(demand);
  ev.base_valuation = money(base_valuation);
  return ev;
}

inline Station make_station(std::string id, int slots, double elec_cost, std::vector<int> demand,
                            double rate = 1.0) {
  Station s;
  s.id = std::move(id);
  s.slots = slots;
  s.rate = energy(rate);
  s.elec_cost = money(elec_cost);
  s.expected_demand = std::move(demand);
  return s;
}

inline Instance make_flat(int horizon, std::vector<Station> stations, std::vector<EvType> evs,
                          double imbalance_cost,
                          const std::vector<std::vector<Money>>& time_costs = {}) {
  Instance inst;
  inst.time_grid.horizon_len = horizon;
  inst.stations = std::move(stations);
  inst.requests = build_requests_flat(evs, inst.stations, inst.time_grid, time_costs);
  inst.imbalance_unit_cost = money(imbalance_cost);
  return inst;
}

/// Two uncontested stations; both EVs served, welfare (5 - 2) + (4 - 3) = 4.
inline Instance tiny1() {
  return make_flat(4,
                   {make_station("L1", 1, 1.0, {0, 0, 0, 0}),
                    make_station("L2", 1, 1.0, {0, 0, 0, 0})},
                   {make_ev("a1", 0, 4, 2, 5), make_ev("a2", 0, 4, 3, 4)}, 0.0);
}

/// One slot, two EVs wanting all of it; only a1 fits.
inline Instance tiny2() {
  return make_flat(2, {make_station("L1", 1, 0.0, {0, 0})},
                   {make_ev("a1", 0, 2, 2, 5), make_ev("a2", 0, 2, 2, 4)}, 0.0);
}

struct SmallShape {
  int max_evs = 4;
  int max_stations = 3;
  int max_horizon = 10;
};

/// The raw ingredients of a flat-mode market, so that reports can be altered and
/// the requests rebuilt.
struct FlatMarket {
  int horizon = 1;
  std::vector<Station> stations;
  std::vector<EvType> evs;
  double imbalance = 0.0;
  std::vector<std::vector<Money>> kappa;

  Instance instance() const { return make_flat(horizon, stations, evs, imbalance, kappa); }
};

/// Random oracle-sized market with a mix of fractional demands, rates, prices and
/// time costs, so that ceilings, battery limits and imbalance all come into play.
inline FlatMarket random_small_market(std::mt19937_64& rng, SmallShape shape = {}) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int horizon = pick(1, shape.max_horizon);
  const int n_st = pick(1, shape.max_stations);
  const int n_ev = pick(0, shape.max_evs);

  std::vector<Station> stations;
  for (int l = 0; l < n_st; ++l) {
    std::vector<int> dem(horizon);
    for (int& d : dem) d = pick(0, 2);
    stations.push_back(make_station("L" + std::to_string(l + 1), pick(1, 2), pick(0, 6) * 0.25,
                                    dem, pick(0, 3) == 0 ? 2.0 : 1.0));
  }
  std::vector<EvType> evs;
  std::vector<std::vector<Money>> kappa(n_ev, std::vector<Money>(n_st));
  for (int a = 0; a < n_ev; ++a) {
    const double demand = pick(2, 8) * 0.5;
    const double initial = pick(0, 4) * 0.5;
    const double capacity = initial + demand + pick(-1, 4) * 0.5;
    evs.push_back(make_ev("a" + std::to_string(a + 1), pick(0, horizon - 1), pick(1, horizon), demand,
                          pick(2, 40) * 0.25, capacity, initial));
    for (auto& k : kappa[a]) k = money(pick(0, 8) * 0.25);
  }
  return {horizon, std::move(stations), std::move(evs), pick(0, 4) * 0.25, std::move(kappa)};
}

inline Instance random_small(std::mt19937_64& rng, SmallShape shape = {}) {
  return random_small_market(rng, shape).instance();
}

enum class Misreport { HalfValue, InflatedValue, LateArrival, EarlyDeparture, ExtraDemand };
inline constexpr Misreport kMisreports[] = {Misreport::HalfValue, Misreport::InflatedValue,
                                            Misreport::LateArrival, Misreport::EarlyDeparture,
                                            Misreport::ExtraDemand};

/// Agent `a`'s type after the misreport, or nullopt when the report would be invalid.
/// A later arrival keeps the departure, so reported windows only ever shrink.
inline std::optional<EvType> misreport(const EvType& truth, Misreport kind, int horizon) {
  EvType ev = truth;
  auto scale = [](Money m, long double f) { return Money::from_raw(round_to_raw(m.raw() * f)); };
  switch (kind) {
    case Misreport::HalfValue: ev.base_valuation = scale(ev.base_valuation, 0.5L); break;
    case Misreport::InflatedValue: ev.base_valuation = scale(ev.base_valuation, 1.8L); break;
    case Misreport::LateArrival:
      if (ev.park_duration < 2 || ev.start_time + 1 >= horizon) return std::nullopt;
      ++ev.start_time;
      --ev.park_duration;
      break;
    case Misreport::EarlyDeparture:
      if (ev.park_duration < 2) return std::nullopt;
      --ev.park_duration;
      break;
    case Misreport::ExtraDemand:
      ev.energy_demand += Energy::whole(1);
      if (ev.energy_demand > ev.battery_capacity) return std::nullopt;
      break;
  }
  return ev;
}

/// True utility of agent `a` under VCG on `reported`, brute-force solved; the value of
/// the outcome is judged against `truth`.
inline Money vcg_true_utility(const Instance& truth, const Instance& reported, int a) {
  auto solver = make_bruteforce_solver(reported);
  const Allocation alloc = solver->solve().allocation;
  if (alloc.station_of(a) < 0) return Money{};
  const Money p = vcg_payment(reported, alloc, *solver, a);
  return realized_valuation(truth, alloc, a) - p;
}

/// Pins the slots of one served request of `allocation`, if any.
inline bool pin_one(Instance& instance, const Allocation& allocation, std::mt19937_64& rng) {
  if (allocation.assignments.empty()) return false;
  const auto& asg = allocation.assignments[std::uniform_int_distribution<std::size_t>(
      0, allocation.assignments.size() - 1)(rng)];
  Pin pin{asg.request, asg.station, {}};
  for (const auto& s : allocation.schedule)
    if (s.request == asg.request) pin.times.push_back(s.time);
  instance.pinned.push_back(pin);
  return true;
}

}  // namespace evcs::fixtures
