#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "evcs/fixed_point.hpp"

namespace evcs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeGrid {
  int horizon_len = 1;
  double minutes_per_point = 15.0;
};

struct Station {
  std::string id;
  int node = -1;  // road-network node, -1 in flat mode
  int slots = 0;
  Energy rate = Energy::whole(1);
  Money elec_cost;  // per energy unit
  std::vector<int> expected_demand;  // EVs per time point, length horizon_len

  /// Money paid to the provider for one time point of charging.
  Money slot_cost() const { return price_of(rate, elec_cost); }
};

/// One agent's reported type.
struct EvType {
  std::string id;
  Energy discharge_rate;  // per km
  Energy battery_capacity;
  Energy battery_initial;
  int start_location = -1;
  int start_time = 0;
  int end_location = -1;
  int park_duration = 1;
  Energy energy_demand;
  Money base_valuation;
};

/// What an agent can get at one feasible station.
struct StationOffer {
  int station = -1;  // index into Instance::stations
  int arrival = 0;
  int departure = 0;  // exclusive
  Money valuation;
  Money time_cost;
  Energy battery_on_arrival;
  int charge_slots_needed = 0;
  /// Most slots the battery can absorb at this station.
  int charge_slots_allowed = 0;

  int window_length() const { return departure - arrival; }
  bool in_window(int t) const { return t >= arrival && t < departure; }
};

struct EvRequest {
  EvType ev;
  std::vector<StationOffer> offers;  // one per station in the feasible set, ordered by station

  const StationOffer* offer_at(int station) const;
  std::vector<int> feasible_stations() const;
};

/// Station assignment phi_{a,l} = 1.
struct Assignment {
  int request = -1;
  int station = -1;
  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// charge_{a,l,t} = 1.
struct ChargeSlot {
  int request = -1;
  int station = -1;
  int time = 0;
  friend bool operator==(const ChargeSlot&, const ChargeSlot&) = default;
  friend auto operator<=>(const ChargeSlot&, const ChargeSlot&) = default;
};

struct Allocation {
  std::vector<Assignment> assignments;  // sorted
  std::vector<ChargeSlot> schedule;     // sorted
  Money objective;

  /// Station index for a request, -1 when unassigned. First match when malformed.
  int station_of(int request) const;
  int slots_of(int request) const;
  void normalize();

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// A prior commitment: the request is served at `station` exactly at `times`.
struct Pin {
  int request = -1;
  int station = -1;
  std::vector<int> times;
};

struct Instance {
  TimeGrid time_grid;
  std::vector<Station> stations;
  std::vector<EvRequest> requests;
  Money imbalance_unit_cost;
  std::vector<Pin> pinned;

  int station_index(const std::string& id) const;
  int request_index(const std::string& id) const;
  const Pin* pin_for(int request) const;
  bool is_pinned(int request) const { return pin_for(request) != nullptr; }
};

struct PricingOutcome {
  std::vector<Money> payments;    // per request
  std::vector<Money> valuations;  // per request, valuation of the received service
  std::vector<Money> utilities;   // per request
  std::vector<bool> charged;      // per request
  Money total_imbalance_cost;
  Money budget;
  Allocation final_allocation;  // schedule after agents decline

  int charged_count() const;
};

// ---------------------------------------------------------------------------

/// Actual charging load per (station, time).
Eigen::MatrixXi load_matrix(const Instance& instance, const Allocation& allocation);
Eigen::MatrixXi demand_matrix(const Instance& instance);

struct ImbalanceCost {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> per_cell;  // raw money
  Money total;
};

ImbalanceCost imbalance_cost(const Allocation& schedule, const Instance& instance);

/// Station valuation of an agent: base valuation less time cost if the demand is met,
/// otherwise zero. Never negative.
Money valuation(const EvType& ev, Money time_cost, Energy delivered_energy);

Money utility(Money valuation, Money payment, bool charged);

/// Electricity bill of one request's scheduled slots.
Money electricity_cost(const Instance& instance, const Allocation& allocation, int request);

/// Welfare F(X): valuations of served agents minus electricity and imbalance costs.
Money social_welfare(const Instance& instance, const Allocation& allocation);

}  // namespace evcs
