#include "evcs/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace evcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-9;
}  // namespace

RoadNetwork::RoadNetwork(std::vector<int> nodes, std::vector<RoadEdge> edges,
                         std::vector<int> charging_nodes, double avg_speed)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      charging_nodes_(std::move(charging_nodes)),
      avg_speed_(avg_speed) {
  if (!(avg_speed_ > 0)) throw Error("road network: avg_speed must be positive");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], static_cast<int>(i)).second)
      throw Error("road network: duplicate node " + std::to_string(nodes_[i]));
  }
  adjacency_.resize(nodes_.size());
  for (const auto& e : edges_) {
    if (!(e.km > 0)) throw Error("road network: edge lengths must be positive");
    const int a = index_of(e.a);
    const int b = index_of(e.b);
    adjacency_[a].push_back({b, e.km});
    adjacency_[b].push_back({a, e.km});
  }
  for (int c : charging_nodes_)
    if (!has_node(c)) throw Error("road network: charging node " + std::to_string(c) + " not a node");
}

int RoadNetwork::index_of(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("road network: unknown node " + std::to_string(id));
  return it->second;
}

ShortestPathTree::ShortestPathTree(const RoadNetwork& network, int from)
    : network_(&network), from_(from) {
  const auto& adj = network.adjacency();
  const std::size_t n = adj.size();
  dist_.assign(n, kInf);
  path_.assign(n, {});
  const auto& ids = network.nodes();
  auto id_path_less = [&](const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](int x, int y) { return ids[x] < ids[y]; });
  };

  const int src = network.index_of(from);
  dist_[src] = 0.0;
  path_[src] = {src};
  std::vector<bool> done(n, false);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.emplace(0.0, src);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (done[u] || d > dist_[u]) continue;
    done[u] = true;
    for (const auto& arc : adj[u]) {
      if (done[arc.to]) continue;
      const double nd = d + arc.km;
      std::vector<int> candidate = path_[u];
      candidate.push_back(arc.to);
      const bool shorter = nd < dist_[arc.to] - kTieEps;
      const bool tie = !shorter && std::abs(nd - dist_[arc.to]) <= kTieEps;
      if (shorter || (tie && id_path_less(candidate, path_[arc.to]))) {
        if (shorter) dist_[arc.to] = nd;
        path_[arc.to] = std::move(candidate);
        heap.emplace(dist_[arc.to], arc.to);
      }
    }
  }
}

bool ShortestPathTree::reachable(int to) const {
  return std::isfinite(dist_[network_->index_of(to)]);
}

double ShortestPathTree::distance(int to) const {
  const double d = dist_[network_->index_of(to)];
  if (!std::isfinite(d))
    throw NoPath("no path from " + std::to_string(from_) + " to " + std::to_string(to));
  return d;
}

Route ShortestPathTree::route_to(int to) const {
  Route r;
  r.from = from_;
  r.to = to;
  r.distance_km = distance(to);
  r.drive_time = drive_time_for(r.distance_km, network_->avg_speed());
  for (int i : path_[network_->index_of(to)]) r.path.push_back(network_->nodes()[i]);
  return r;
}

Route shortest_route(const RoadNetwork& network, int from, int to) {
  network.index_of(to);
  return ShortestPathTree(network, from).route_to(to);
}

int drive_time_for(double distance_km, double avg_speed) {
  if (distance_km <= 0) return 0;
  return static_cast<int>(std::ceil(distance_km / avg_speed - 1e-9));
}

Energy energy_need(double distance_km, Energy discharge_rate) {
  const long double raw = static_cast<long double>(distance_km) * discharge_rate.raw();
  return Energy::from_raw(static_cast<std::int64_t>(std::ceil(raw - 1e-9L)));
}

std::optional<StationOffer> make_offer(const EvType& ev, int station_index, const Station& station,
                                       const TimeGrid& grid, int drive_time, Energy route_energy,
                                       Money time_cost) {
  if (ev.battery_initial < route_energy) return std::nullopt;
  StationOffer o;
  o.station = station_index;
  o.arrival = ev.start_time + drive_time;
  if (o.arrival >= grid.horizon_len) return std::nullopt;
  o.departure = std::min(o.arrival + ev.park_duration, grid.horizon_len);
  o.time_cost = time_cost;
  o.battery_on_arrival = ev.battery_initial - route_energy;
  o.charge_slots_needed = static_cast<int>(slots_to_cover(ev.energy_demand, station.rate));
  if (o.window_length() < o.charge_slots_needed) return std::nullopt;
  o.charge_slots_allowed = static_cast<int>(std::min<std::int64_t>(
      slots_within(ev.battery_capacity - o.battery_on_arrival, station.rate), o.window_length()));
  // A zero valuation still leaves the station usable: serving there can lower imbalance,
  // and dropping it would let a misreport widen the agent's options.
  o.valuation = valuation(ev, time_cost, ev.energy_demand);
  return o;
}

std::vector<EvRequest> build_requests(const RoadNetwork& network, const std::vector<EvType>& evs,
                                      const std::vector<Station>& stations, const TimeGrid& grid,
                                      const TimeCostParams& params) {
  // Walking distances only depend on the station, so one tree per station.
  std::vector<ShortestPathTree> from_station;
  from_station.reserve(stations.size());
  for (const auto& s : stations) from_station.emplace_back(network, s.node);

  std::vector<EvRequest> out;
  out.reserve(evs.size());
  for (const auto& ev : evs) {
    EvRequest req{ev, {}};
    const ShortestPathTree from_start(network, ev.start_location);
    network.index_of(ev.end_location);
    for (std::size_t l = 0; l < stations.size(); ++l) {
      if (!from_start.reachable(stations[l].node)) continue;
      if (!from_station[l].reachable(ev.end_location)) continue;
      const Route drive = from_start.route_to(stations[l].node);
      const double walk_km = from_station[l].distance(ev.end_location);
      const Money kappa = params.per_drive_point * drive.drive_time +
                          Money::from_raw(round_to_raw(static_cast<long double>(walk_km) *
                                                       params.per_walk_km.raw()));
      if (auto offer = make_offer(ev, static_cast<int>(l), stations[l], grid, drive.drive_time,
                                  energy_need(drive.distance_km, ev.discharge_rate), kappa))
        req.offers.push_back(*offer);
    }
    out.push_back(std::move(req));
  }
  return out;
}

std::vector<EvRequest> build_requests_flat(const std::vector<EvType>& evs,
                                           const std::vector<Station>& stations,
                                           const TimeGrid& grid,
                                           const std::vector<std::vector<Money>>& time_costs) {
  std::vector<EvRequest> out;
  out.reserve(evs.size());
  for (std::size_t a = 0; a < evs.size(); ++a) {
    EvRequest req{evs[a], {}};
    for (std::size_t l = 0; l < stations.size(); ++l) {
      Money kappa;
      if (a < time_costs.size() && l < time_costs[a].size()) kappa = time_costs[a][l];
      if (auto offer = make_offer(evs[a], static_cast<int>(l), stations[l], grid, 0, Energy{}, kappa))
        req.offers.push_back(*offer);
    }
    out.push_back(std::move(req));
  }
  return out;
}

Instance resolve(const Scenario& scenario) {
  Instance inst;
  inst.time_grid = scenario.time_grid;
  inst.stations = scenario.stations;
  inst.imbalance_unit_cost = scenario.imbalance_unit_cost;
  inst.pinned = scenario.pinned;
  inst.requests = scenario.network
                      ? build_requests(*scenario.network, scenario.evs, scenario.stations,
                                       scenario.time_grid, scenario.time_cost_params)
                      : build_requests_flat(scenario.evs, scenario.stations, scenario.time_grid,
                                            scenario.flat_time_costs);
  return inst;
}

}  // namespace evcs
