#include "evcs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace evcs {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Uniform on [mean - spread, mean + spread] intersected with [lo, hi], as an integer.
  int centered(double mean, double spread, int lo, int hi) {
    const int a = std::clamp(static_cast<int>(std::ceil(mean - spread)), lo, hi);
    const int b = std::clamp(static_cast<int>(std::floor(mean + spread)), lo, hi);
    return integer(std::min(a, b), std::max(a, b));
  }

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

RoadNetwork ring_road(int n_stations, Draw& draw, double avg_speed, std::vector<int>& station_nodes) {
  const int n = std::max(3, 2 * n_stations);
  std::vector<int> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 1);
  std::vector<RoadEdge> edges;
  for (int i = 0; i < n; ++i)
    edges.push_back({nodes[i], nodes[(i + 1) % n], draw.integer(10, 30) / 10.0});
  for (int c = 0; c < n / 4; ++c) {
    const int a = draw.integer(0, n - 1);
    const int b = (a + n / 2) % n;
    edges.push_back({nodes[a], nodes[b], draw.integer(20, 60) / 10.0});
  }
  station_nodes.clear();
  for (int l = 0; l < n_stations; ++l) station_nodes.push_back(nodes[l * n / n_stations]);
  std::vector<int> charging = station_nodes;
  std::sort(charging.begin(), charging.end());
  charging.erase(std::unique(charging.begin(), charging.end()), charging.end());
  return RoadNetwork(nodes, edges, charging, avg_speed);
}

}  // namespace

Scenario generate(const ScenarioParams& p) {
  if (p.horizon < 1 || p.n_evs < 0 || p.n_stations < 0 || p.min_slots < 0 || p.max_slots < p.min_slots)
    throw Error("scenario: invalid sizes");
  Draw draw(p.seed);
  Scenario sc;
  sc.time_grid.horizon_len = p.horizon;
  sc.imbalance_unit_cost = Money::from_double(p.imbalance_cost);
  sc.time_cost_params = {Money::from_double(p.per_drive_point), Money::from_double(p.per_walk_km)};

  std::vector<int> station_nodes;
  sc.network = ring_road(p.n_stations, draw, p.avg_speed, station_nodes);
  for (int l = 0; l < p.n_stations; ++l) {
    Station st;
    st.id = "S" + std::to_string(l + 1);
    st.node = station_nodes[l];
    st.slots = draw.integer(p.min_slots, p.max_slots);
    st.rate = Energy::whole(1);
    st.elec_cost = Money::from_double(p.elec_cost);
    st.expected_demand.resize(p.horizon);
    for (int& d : st.expected_demand)
      d = draw.centered(p.expected_demand_mean, p.expected_demand_spread, 0, 1 << 20);
    sc.stations.push_back(std::move(st));
  }

  const double arr_mean = p.arrival_mean.value_or(0.3 * p.horizon);
  const double arr_spread = p.arrival_spread.value_or(0.3 * p.horizon);
  const auto& nodes = sc.network->nodes();
  for (int a = 0; a < p.n_evs; ++a) {
    bool placed = false;
    for (int attempt = 0; attempt < p.max_resamples && !placed; ++attempt) {
      EvType ev;
      ev.id = "EV" + std::to_string(a + 1);
      ev.start_time = draw.centered(arr_mean, arr_spread, 0, p.horizon - 1);
      ev.park_duration = draw.integer(1, p.horizon - ev.start_time);
      const int demand = draw.integer(1, ev.park_duration);
      ev.energy_demand = Energy::whole(demand);
      const double unit = std::max(0.0, draw.real(p.unit_value_mean - p.unit_value_spread,
                                                  p.unit_value_mean + p.unit_value_spread));
      ev.base_valuation = Money::from_double(unit * demand);
      ev.discharge_rate = Energy::from_double(p.discharge_rate);
      ev.battery_initial = Energy::whole(draw.integer(2, 6));
      ev.battery_capacity = ev.battery_initial + ev.energy_demand + Energy::whole(draw.integer(0, 4));
      ev.start_location = nodes[draw.integer(0, static_cast<int>(nodes.size()) - 1)];
      ev.end_location = nodes[draw.integer(0, static_cast<int>(nodes.size()) - 1)];
      // Keep the EV only if some reachable station fits its demand and is worth the trip.
      const auto req = build_requests(*sc.network, {ev}, sc.stations, sc.time_grid, sc.time_cost_params);
      const auto& offers = req.front().offers;
      if (p.n_stations == 0 ||
          std::any_of(offers.begin(), offers.end(), [](const StationOffer& o) { return o.valuation > Money{}; })) {
        sc.evs.push_back(std::move(ev));
        placed = true;
      }
    }
    if (!placed)
      throw ResampleLimit("scenario: EV" + std::to_string(a + 1) + " infeasible after " +
                          std::to_string(p.max_resamples) + " draws");
  }
  return sc;
}

ValuationTable true_valuations(const Instance& reported, const std::vector<EvType>& truth) {
  ValuationTable table(reported.requests.size(),
                       std::vector<Money>(reported.stations.size(), Money{}));
  for (std::size_t a = 0; a < reported.requests.size(); ++a)
    for (const auto& o : reported.requests[a].offers)
      table[a][o.station] = valuation(truth[a], o.time_cost, truth[a].energy_demand);
  return table;
}

PerturbedReports perturb_reports(const Scenario& scenario, double liar_fraction,
                                 double valuation_multiplier, std::uint64_t seed) {
  if (liar_fraction < 0 || liar_fraction > 1) throw Error("perturb_reports: fraction outside [0, 1]");
  const std::size_t n = scenario.evs.size();
  const auto liars = static_cast<std::size_t>(std::floor(liar_fraction * static_cast<double>(n) + 1e-9));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  PerturbedReports out;
  out.reported = scenario;
  out.liar.assign(n, false);
  for (std::size_t i = 0; i < liars; ++i) {
    EvType& ev = out.reported.evs[order[i]];
    ev.base_valuation = Money::from_raw(round_to_raw(
        static_cast<long double>(ev.base_valuation.raw()) * valuation_multiplier));
    out.liar[order[i]] = true;
  }
  out.truth = true_valuations(resolve(out.reported), scenario.evs);
  return out;
}

}  // namespace evcs
