#include <gtest/gtest.h>

#include <functional>
#include <limits>
#include <random>

#include "fixtures.hpp"

using namespace evcs;
using namespace evcs::fixtures;

namespace {

struct RandomGraph {
  std::vector<int> nodes;
  std::vector<RoadEdge> edges;
};

RandomGraph random_graph(std::mt19937_64& rng, int n) {
  RandomGraph g;
  // Sparse, non-contiguous ids so that id order differs from insertion order.
  for (int i = 0; i < n; ++i) g.nodes.push_back((i * 7 + 3) % 23 + 100);
  std::uniform_int_distribution<int> coin(0, 2), km(1, 4);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) == 0) g.edges.push_back({g.nodes[i], g.nodes[j], static_cast<double>(km(rng))});
  return g;
}

/// Bellman-Ford over the undirected edge list.
std::map<int, double> bellman_ford(const RandomGraph& g, int from) {
  const double inf = std::numeric_limits<double>::infinity();
  std::map<int, double> dist;
  for (int v : g.nodes) dist[v] = inf;
  dist[from] = 0;
  for (std::size_t round = 0; round < g.nodes.size(); ++round)
    for (const auto& e : g.edges) {
      dist[e.b] = std::min(dist[e.b], dist[e.a] + e.km);
      dist[e.a] = std::min(dist[e.a], dist[e.b] + e.km);
    }
  return dist;
}

/// Every simple path, keeping the shortest and, among equals, the smallest id sequence.
std::vector<int> best_path_exhaustive(const RandomGraph& g, int from, int to) {
  std::vector<int> best;
  double best_len = std::numeric_limits<double>::infinity();
  std::vector<int> path{from};
  std::function<void(int, double)> dfs = [&](int at, double len) {
    if (at == to) {
      if (len < best_len - 1e-9 || (len < best_len + 1e-9 && path < best)) {
        best_len = len;
        best = path;
      }
      return;
    }
    for (const auto& e : g.edges) {
      int next = e.a == at ? e.b : e.b == at ? e.a : -1;
      if (next < 0 || std::find(path.begin(), path.end(), next) != path.end()) continue;
      path.push_back(next);
      dfs(next, len + e.km);
      path.pop_back();
    }
  };
  dfs(from, 0.0);
  return best;
}

}  // namespace

TEST(Transport, DijkstraMatchesBellmanFordAndExhaustivePaths) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const RandomGraph g = random_graph(rng, 3 + trial % 5);
    const RoadNetwork net(g.nodes, g.edges, {});
    for (int from : g.nodes) {
      const ShortestPathTree tree(net, from);
      const auto oracle = bellman_ford(g, from);
      for (int to : g.nodes) {
        if (std::isinf(oracle.at(to))) {
          EXPECT_FALSE(tree.reachable(to));
          EXPECT_THROW(tree.distance(to), NoPath);
          continue;
        }
        ASSERT_TRUE(tree.reachable(to));
        EXPECT_NEAR(tree.distance(to), oracle.at(to), 1e-9);
        EXPECT_EQ(tree.route_to(to).path, best_path_exhaustive(g, from, to));
      }
    }
  }
}

TEST(Transport, TiesResolveToSmallestIdSequence) {
  // Two routes of length 2 from 1 to 4: via 3 and via 2.
  const RoadNetwork net({1, 2, 3, 4}, {{1, 3, 1}, {3, 4, 1}, {1, 2, 1}, {2, 4, 1}}, {4});
  EXPECT_EQ(shortest_route(net, 1, 4).path, (std::vector<int>{1, 2, 4}));
}

TEST(Transport, RejectsBadNetworks) {
  EXPECT_THROW(RoadNetwork({1, 1}, {}, {}), Error);
  EXPECT_THROW(RoadNetwork({1, 2}, {{1, 5, 1.0}}, {}), Error);
  EXPECT_THROW(RoadNetwork({1, 2}, {{1, 2, -1.0}}, {}), Error);
  EXPECT_THROW(RoadNetwork({1, 2}, {}, {}, 0.0), Error);
}

TEST(Transport, DriveTimeAndEnergyRoundUp) {
  EXPECT_EQ(drive_time_for(3.0, 1.5), 2);
  EXPECT_EQ(drive_time_for(3.1, 1.5), 3);
  EXPECT_EQ(drive_time_for(0.3 * 3, 0.3), 3);  // representation error must not add a point
  EXPECT_EQ(energy_need(2.5, energy(0.5)), energy(1.25));
  EXPECT_EQ(energy_need(1.01, energy(0.33)), energy(0.34));
}

TEST(Transport, OfferWindowAndBattery) {
  const TimeGrid grid{10};
  const Station st = make_station("L", 1, 1.0, std::vector<int>(10, 0));
  const EvType ev = make_ev("a", 2, 5, 2.5, 6, 5.0, 2.0);
  const auto o = make_offer(ev, 0, st, grid, 1, energy(0.5), money(1));
  ASSERT_TRUE(o);
  EXPECT_EQ(o->arrival, 3);
  EXPECT_EQ(o->departure, 8);
  EXPECT_EQ(o->charge_slots_needed, 3);
  EXPECT_EQ(o->battery_on_arrival, energy(1.5));
  EXPECT_EQ(o->charge_slots_allowed, 3);  // floor((5 - 1.5) / 1)
  EXPECT_EQ(o->valuation, money(5));
}

TEST(Transport, OfferRejections) {
  const TimeGrid grid{6};
  const Station st = make_station("L", 1, 1.0, std::vector<int>(6, 0));
  // Not enough battery to drive there.
  EXPECT_FALSE(make_offer(make_ev("a", 0, 6, 1, 5, 10, 0.5), 0, st, grid, 1, energy(1), Money{}));
  // Arrives after the horizon.
  EXPECT_FALSE(make_offer(make_ev("a", 4, 6, 1, 5), 0, st, grid, 2, Energy{}, Money{}));
  // Window clipped at the horizon is too short for 3 slots.
  EXPECT_FALSE(make_offer(make_ev("a", 4, 6, 3, 5), 0, st, grid, 0, Energy{}, Money{}));
}

TEST(Transport, WorthlessStationStaysFeasible) {
  const TimeGrid grid{6};
  const Station st = make_station("L", 1, 1.0, std::vector<int>(6, 0));
  const auto o = make_offer(make_ev("a", 0, 6, 1, 5), 0, st, grid, 0, Energy{}, money(7));
  ASSERT_TRUE(o);
  EXPECT_EQ(o->valuation, Money{});
}

TEST(Transport, BuildRequestsOnARoad) {
  // 1 -- 2 -- 3 with stations at 1 and 3; the EV starts at 1 and parks at 3.
  const RoadNetwork net({1, 2, 3}, {{1, 2, 1.0}, {2, 3, 1.0}}, {1, 3}, 1.0);
  Station s1 = make_station("S1", 1, 1.0, std::vector<int>(8, 0));
  s1.node = 1;
  Station s3 = make_station("S3", 1, 1.0, std::vector<int>(8, 0));
  s3.node = 3;
  EvType ev = make_ev("a", 0, 4, 2, 10, 20, 5);
  ev.discharge_rate = energy(0.5);
  ev.start_location = 1;
  ev.end_location = 3;
  const auto reqs = build_requests(net, {ev}, {s1, s3}, TimeGrid{8}, {money(0.5), money(1.0)});
  ASSERT_EQ(reqs.size(), 1u);
  ASSERT_EQ(reqs[0].offers.size(), 2u);
  const auto* at1 = reqs[0].offer_at(0);
  const auto* at3 = reqs[0].offer_at(1);
  EXPECT_EQ(at1->arrival, 0);
  EXPECT_EQ(at1->time_cost, money(2.0));  // walk 2 km
  EXPECT_EQ(at3->arrival, 2);
  EXPECT_EQ(at3->time_cost, money(1.0));  // drive 2 points
  EXPECT_EQ(at3->battery_on_arrival, energy(4));
  EXPECT_EQ(reqs[0].feasible_stations(), (std::vector<int>{0, 1}));
}
