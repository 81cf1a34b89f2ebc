#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evcs/pricing.hpp"
#include "evcs/transport.hpp"

namespace evcs {

class ResampleLimit : public Error {
 public:
  using Error::Error;
};

/// Synthetic market shape. Every "mean/spread" pair is a uniform draw on
/// [mean - spread, mean + spread], clamped to the valid domain.
struct ScenarioParams {
  int n_evs = 130;
  int n_stations = 8;
  int horizon = 50;
  std::uint64_t seed = 1;

  /// Start (report) time; unset means 0.3 x horizon for both, i.e. 15 +- 15 at 50 points.
  std::optional<double> arrival_mean;
  std::optional<double> arrival_spread;
  double unit_value_mean = 0.5;  // v' per energy unit
  double unit_value_spread = 0.5;
  double expected_demand_mean = 2.0;  // dem per (station, time)
  double expected_demand_spread = 1.0;
  int min_slots = 1;
  int max_slots = 3;

  double elec_cost = 0.2;       // per energy unit
  double imbalance_cost = 0.1;  // per unit of deviation
  double per_drive_point = 0.05;
  double per_walk_km = 0.05;
  double avg_speed = 5.0;  // km per time point
  double discharge_rate = 0.2;  // energy per km

  int max_resamples = 1000;
};

/// Random market on a ring road with a few chords; stations spread evenly around it.
Scenario generate(const ScenarioParams& params);

struct PerturbedReports {
  Scenario reported;
  ValuationTable truth;  // true v_{a,l} for every station of the reported instance
  std::vector<bool> liar;
};

/// Picks floor(fraction x n) agents uniformly and scales their reported base valuation.
PerturbedReports perturb_reports(const Scenario& scenario, double liar_fraction,
                                 double valuation_multiplier, std::uint64_t seed);

/// True station valuations given the true EV types and the (report-independent) time costs
/// of `reported`.
ValuationTable true_valuations(const Instance& reported, const std::vector<EvType>& truth);

}  // namespace evcs
