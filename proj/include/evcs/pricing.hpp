#pragma once

#include <vector>

#include "evcs/allocator.hpp"
#include "evcs/model.hpp"

namespace evcs {

class CounterfactualNotOptimal : public Error {
 public:
  using Error::Error;
};

class NoBreakeven : public Error {
 public:
  using Error::Error;
};

/// valuations[request][station]; zero where the station is not offered.
using ValuationTable = std::vector<std::vector<Money>>;

ValuationTable reported_valuations(const Instance& instance);

/// Fixed-price mechanism: demand x electricity cost x (1 + incr). Agents whose price
/// exceeds their valuation walk away; their slots stay empty (no re-optimization).
/// `truth`, when given, is what agents use to decide and what utilities are measured in.
/// Pinned requests are history: they are neither priced nor counted as charged.
PricingOutcome price_coop(const Instance& instance, const Allocation& allocation, double incr,
                          const ValuationTable* truth = nullptr);

/// VCG payments. `allocation` must be an optimum of `instance`, and `solver` must be
/// bound to the same instance; one counterfactual solve per served agent.
PricingOutcome price_vcg(const Instance& instance, const Allocation& allocation,
                         AllocationSolver& solver, const ValuationTable* truth = nullptr);

/// VCG payment of one served agent: welfare of the others without it minus their
/// welfare with it. Throws CounterfactualNotOptimal when the re-solve is not proven.
Money vcg_payment(const Instance& instance, const Allocation& allocation, AllocationSolver& solver,
                  int request);

/// What the allocation is truly worth to `request` given its true request: the true
/// station valuation if the slots inside its true window cover its true demand, else 0.
Money realized_valuation(const Instance& truth, const Allocation& allocation, int request);

/// Payments minus electricity of charged agents, minus imbalance of the final schedule.
Money budget(const Instance& instance, const PricingOutcome& outcome);

/// Coop price of one agent at a station.
Money coop_price(const Instance& instance, int request, int station, double incr);

struct IncrCalibration {
  double mean = 0.0;
  std::vector<double> per_scenario;
};

/// For each scenario, the first incr in 0.001, 0.001 + step, ... at which the Coop
/// budget turns positive; the allocation is solved once per scenario since it does
/// not depend on incr.
IncrCalibration calibrate_incr(const std::vector<Instance>& scenarios, double step = 0.001,
                               const SolveOptions& options = {});

}  // namespace evcs
