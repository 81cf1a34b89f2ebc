#pragma once

#include <map>
#include <optional>
#include <vector>

#include "evcs/model.hpp"

namespace evcs {

class NoPath : public Error {
 public:
  using Error::Error;
};

struct RoadEdge {
  int a = 0;
  int b = 0;
  double km = 0.0;
};

/// Undirected road graph. Node ids are arbitrary integers.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  RoadNetwork(std::vector<int> nodes, std::vector<RoadEdge> edges, std::vector<int> charging_nodes,
              double avg_speed = 1.0);

  const std::vector<int>& nodes() const { return nodes_; }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  const std::vector<int>& charging_nodes() const { return charging_nodes_; }
  double avg_speed() const { return avg_speed_; }

  bool has_node(int id) const { return index_.contains(id); }
  int index_of(int id) const;

  struct Arc {
    int to = 0;  // dense index
    double km = 0.0;
  };
  const std::vector<std::vector<Arc>>& adjacency() const { return adjacency_; }

 private:
  std::vector<int> nodes_;
  std::vector<RoadEdge> edges_;
  std::vector<int> charging_nodes_;
  double avg_speed_ = 1.0;
  std::map<int, int> index_;
  std::vector<std::vector<Arc>> adjacency_;
};

struct Route {
  int from = 0;
  int to = 0;
  double distance_km = 0.0;
  int drive_time = 0;
  std::vector<int> path;  // node ids, from .. to
};

/// Single-source shortest paths. Equal-length paths resolve to the lexicographically
/// smallest node-id sequence.
class ShortestPathTree {
 public:
  ShortestPathTree(const RoadNetwork& network, int from);

  bool reachable(int to) const;
  double distance(int to) const;
  Route route_to(int to) const;

 private:
  const RoadNetwork* network_;
  int from_;
  std::vector<double> dist_;
  std::vector<std::vector<int>> path_;  // dense indices
};

Route shortest_route(const RoadNetwork& network, int from, int to);

/// Ceil(distance / speed) with a small tolerance for representation error.
int drive_time_for(double distance_km, double avg_speed);

/// Energy to cover `distance_km` at `discharge_rate` per km, rounded up.
Energy energy_need(double distance_km, Energy discharge_rate);

struct TimeCostParams {
  Money per_drive_point;
  Money per_walk_km;
};

/// Derives the per-station offers of every EV on a road network. Stations the EV
/// cannot reach or whose window cannot fit the demand are left out; a time cost above
/// the base valuation clamps the offer's valuation to zero but keeps the station.
std::vector<EvRequest> build_requests(const RoadNetwork& network, const std::vector<EvType>& evs,
                                      const std::vector<Station>& stations, const TimeGrid& grid,
                                      const TimeCostParams& params);

/// Flat mode: no driving. `time_costs[a][l]` gives kappa explicitly (empty means 0).
std::vector<EvRequest> build_requests_flat(const std::vector<EvType>& evs,
                                           const std::vector<Station>& stations,
                                           const TimeGrid& grid,
                                           const std::vector<std::vector<Money>>& time_costs);

/// Offer for one (EV, station) pair given the route figures, or nullopt when infeasible.
std::optional<StationOffer> make_offer(const EvType& ev, int station_index, const Station& station,
                                       const TimeGrid& grid, int drive_time, Energy route_energy,
                                       Money time_cost);

/// A market as reported: raw EV types plus the geography that turns them into
/// requests. This is what instance files hold.
struct Scenario {
  TimeGrid time_grid;
  std::vector<Station> stations;
  std::vector<EvType> evs;
  Money imbalance_unit_cost;
  std::optional<RoadNetwork> network;  // absent: flat mode
  TimeCostParams time_cost_params;
  /// Flat mode only: kappa per [ev][station]; missing entries are 0.
  std::vector<std::vector<Money>> flat_time_costs;
  std::vector<Pin> pinned;
};

/// Derives the requests (network or flat mode) and copies everything else.
Instance resolve(const Scenario& scenario);

}  // namespace evcs
