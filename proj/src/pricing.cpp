#include "evcs/pricing.hpp"

#include <algorithm>

namespace evcs {

namespace {

PricingOutcome empty_outcome(const Instance& instance) {
  const std::size_t n = instance.requests.size();
  PricingOutcome out;
  out.payments.assign(n, Money{});
  out.valuations.assign(n, Money{});
  out.utilities.assign(n, Money{});
  out.charged.assign(n, false);
  return out;
}

Money valuation_for(const Instance& instance, const ValuationTable* truth, int a, int l) {
  if (truth != nullptr) return (*truth)[a][l];
  return instance.requests[a].offer_at(l)->valuation;
}

void finish(const Instance& instance, PricingOutcome& out) {
  out.final_allocation.objective = social_welfare(instance, out.final_allocation);
  out.total_imbalance_cost = imbalance_cost(out.final_allocation, instance).total;
  out.budget = budget(instance, out);
}

}  // namespace

ValuationTable reported_valuations(const Instance& instance) {
  ValuationTable table(instance.requests.size(),
                       std::vector<Money>(instance.stations.size(), Money{}));
  for (std::size_t a = 0; a < instance.requests.size(); ++a)
    for (const auto& o : instance.requests[a].offers) table[a][o.station] = o.valuation;
  return table;
}

Money coop_price(const Instance& instance, int request, int station, double incr) {
  const Money base =
      price_of(instance.requests[request].ev.energy_demand, instance.stations[station].elec_cost);
  return Money::from_raw(round_to_raw(static_cast<long double>(base.raw()) * (1.0L + incr)));
}

PricingOutcome price_coop(const Instance& instance, const Allocation& allocation, double incr,
                          const ValuationTable* truth) {
  PricingOutcome out = empty_outcome(instance);
  std::vector<bool> dropped(instance.requests.size(), false);
  for (const auto& asg : allocation.assignments) {
    const int a = asg.request;
    if (instance.is_pinned(a)) continue;
    const Money p = coop_price(instance, a, asg.station, incr);
    const Money v = valuation_for(instance, truth, a, asg.station);
    if (p > v) {
      dropped[a] = true;
      continue;
    }
    out.payments[a] = p;
    out.valuations[a] = v;
    out.utilities[a] = utility(v, p, true);
    out.charged[a] = true;
  }
  for (const auto& asg : allocation.assignments)
    if (!dropped[asg.request]) out.final_allocation.assignments.push_back(asg);
  for (const auto& s : allocation.schedule)
    if (!dropped[s.request]) out.final_allocation.schedule.push_back(s);
  finish(instance, out);
  return out;
}

PricingOutcome price_vcg(const Instance& instance, const Allocation& allocation,
                         AllocationSolver& solver, const ValuationTable* truth) {
  PricingOutcome out = empty_outcome(instance);
  for (const auto& asg : allocation.assignments) {
    const int a = asg.request;
    if (instance.is_pinned(a)) continue;
    const Money p = vcg_payment(instance, allocation, solver, a);
    const Money v = valuation_for(instance, truth, a, asg.station);
    out.payments[a] = p;
    out.valuations[a] = v;
    out.utilities[a] = utility(v, p, true);
    out.charged[a] = true;
  }
  out.final_allocation = allocation;
  finish(instance, out);
  return out;
}

Money vcg_payment(const Instance& instance, const Allocation& allocation, AllocationSolver& solver,
                  int request) {
  const int l = allocation.station_of(request);
  if (l < 0) return Money{};
  const SolveResult without = solver.solve({request});
  if (without.status != SolveStatus::Optimal)
    throw CounterfactualNotOptimal("counterfactual without " + instance.requests[request].ev.id +
                                   " is not proven optimal");
  const Money reported = instance.requests[request].offer_at(l)->valuation;
  return without.allocation.objective - allocation.objective + reported;
}

Money realized_valuation(const Instance& truth, const Allocation& allocation, int request) {
  const int l = allocation.station_of(request);
  if (l < 0) return Money{};
  const StationOffer* offer = truth.requests[request].offer_at(l);
  if (offer == nullptr) return Money{};
  std::int64_t slots = 0;
  for (const auto& s : allocation.schedule)
    if (s.request == request && s.station == l && offer->in_window(s.time)) ++slots;
  const Energy delivered = Energy::from_raw(slots * truth.stations[l].rate.raw());
  return valuation(truth.requests[request].ev, offer->time_cost, delivered);
}

Money budget(const Instance& instance, const PricingOutcome& outcome) {
  Money total;
  for (std::size_t a = 0; a < outcome.charged.size(); ++a) {
    if (!outcome.charged[a]) continue;
    total += outcome.payments[a] -
             electricity_cost(instance, outcome.final_allocation, static_cast<int>(a));
  }
  return total - imbalance_cost(outcome.final_allocation, instance).total;
}

IncrCalibration calibrate_incr(const std::vector<Instance>& scenarios, double step,
                               const SolveOptions& options) {
  if (!(step > 0)) throw Error("calibrate_incr: step must be positive");
  IncrCalibration result;
  for (const auto& inst : scenarios) {
    const SolveResult solved = solve_exact(inst, options);
    double found = -1.0;
    for (int k = 0;; ++k) {
      const double incr = 0.001 + k * step;
      if (incr > 1.0 + 1e-12) break;
      if (price_coop(inst, solved.allocation, incr).budget > Money{}) {
        found = incr;
        break;
      }
    }
    if (found < 0) throw NoBreakeven("Coop budget stays nonpositive for incr <= 1.0");
    result.per_scenario.push_back(found);
  }
  if (!result.per_scenario.empty()) {
    double s = 0;
    for (double v : result.per_scenario) s += v;
    result.mean = s / static_cast<double>(result.per_scenario.size());
  }
  return result;
}

}  // namespace evcs
