#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evcs/online.hpp"
#include "evcs/scenario.hpp"

namespace evcs::exp {

struct Config {
  std::vector<int> ev_counts{10, 20, 30};
  int repetitions = 5;
  std::uint64_t seed = 1;
  ScenarioParams market;  // n_evs and seed are overwritten per run
  double incr = 0.025;
  int clearings = 5;
  double time_limit_seconds = 300.0;
  int jobs = 1;

  std::vector<int> station_counts{6, 8, 10, 12, 14, 16, 18};
  int station_sweep_evs = 80;

  double liar_fraction = 0.10;
  double liar_multiplier = 1.80;
};

/// Seed of one repetition, mixed from the base seed and the sweep coordinates.
std::uint64_t run_seed(std::uint64_t base, int sweep_value, int repetition);

/// Runs fn(0..count-1) on up to `jobs` threads. Each index must own its state.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

/// One mechanism on one market, offline or online.
struct MechanismRun {
  Mechanism mechanism = Mechanism::Vcg;
  bool online = false;
  /// optimal, feasible_time_limited, or counterfactual_not_optimal (no VCG payments).
  std::string status = "optimal";
  double seconds = 0.0;
  int serviced = 0;
  double mean_utility = 0.0;  // over charged agents
  double mean_payment = 0.0;  // over charged agents
  double budget = 0.0;
  bool flagged() const { return status != "optimal"; }
};

/// Offline Coop, offline VCG, online Coop, online VCG, in that order. The offline pair
/// shares one exact solve; each reported time includes it.
std::vector<MechanismRun> run_market(const Instance& instance, const Config& config);

struct MarketRow {
  int sweep_value = 0;  // EV count, or station count for the station sweep
  int repetition = 0;
  std::uint64_t seed = 0;
  MechanismRun run;
};

/// EV-count sweep shared by EXP1 to EXP3.
std::vector<MarketRow> sweep_evs(const Config& config);

/// Offline station-count sweep at a fixed EV count.
std::vector<MarketRow> sweep_stations(const Config& config);

struct LiarRow {
  int repetition = 0;
  std::uint64_t seed = 0;
  Mechanism mechanism = Mechanism::Vcg;
  std::string status = "optimal";
  int liars = 0;
  int charged_truthful = 0;  // liars charged when everyone reports truthfully
  int charged_lying = 0;
  /// True utilities of the liars, indexed like the liar list.
  std::vector<double> utility_truthful;
  std::vector<double> utility_lying;
};

/// Same markets with and without the liars' inflated reports; utilities are measured
/// with true valuations. Under VCG only the liars are priced.
std::vector<LiarRow> run_liars(const Config& config, int n_evs);

/// CSV writers. Each file starts with a schema comment line; aggregated files carry the
/// base seed and mean/sd over the unflagged repetitions plus a flagged-run count.
std::string exp1_runs_csv(const std::vector<MarketRow>& rows, bool with_time = true);
std::string exp1_csv(const std::vector<MarketRow>& rows, std::uint64_t base_seed);
std::string exp2_csv(const std::vector<MarketRow>& rows, std::uint64_t base_seed);
std::string exp3_csv(const std::vector<MarketRow>& rows, std::uint64_t base_seed);
std::string exp3_stations_csv(const std::vector<MarketRow>& rows, std::uint64_t base_seed);
std::string exp4_runs_csv(const std::vector<LiarRow>& rows);
std::string exp4_csv(const std::vector<LiarRow>& rows, std::uint64_t base_seed);

struct LiarEffect {
  int samples = 0;           // liar observations used
  double mean_delta = 0.0;   // mean of lying minus truthful utility per liar
  double percent = 0.0;      // relative change of the liars' total utility
  double charged_percent = 0.0;  // relative change of charged liars
  double p_value = 1.0;      // Welch two-sample test, lying vs truthful utilities
  double p_value_paired = 1.0;
};

LiarEffect liar_effect(const std::vector<LiarRow>& rows, Mechanism mechanism);

/// Smallest swept station count whose mean VCG budget is negative, or -1.
int budget_crossover(const std::vector<MarketRow>& station_rows);

}  // namespace evcs::exp
