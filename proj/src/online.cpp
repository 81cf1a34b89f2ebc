#include "evcs/online.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace evcs {

ClearingSchedule ClearingSchedule::evenly(int horizon, int count) {
  ClearingSchedule s;
  for (int k = 1; k <= count; ++k) {
    const int t = static_cast<int>(std::lround(static_cast<double>(k) * horizon / count));
    if (s.points.empty() || t > s.points.back()) s.points.push_back(t);
  }
  return s;
}

std::string to_string(Mechanism m) { return m == Mechanism::Coop ? "coop" : "vcg"; }

Mechanism mechanism_from_string(const std::string& s) {
  if (s == "coop") return Mechanism::Coop;
  if (s == "vcg") return Mechanism::Vcg;
  throw Error("unknown mechanism '" + s + "' (expected coop or vcg)");
}

namespace {

/// Offers restricted to [from, departure); stations whose window no longer fits drop out.
std::vector<StationOffer> offers_from(const EvRequest& req, int from) {
  std::vector<StationOffer> out;
  for (StationOffer o : req.offers) {
    o.arrival = std::max(o.arrival, from);
    if (o.arrival >= o.departure || o.window_length() < o.charge_slots_needed) continue;
    o.charge_slots_allowed = std::min(o.charge_slots_allowed, o.window_length());
    out.push_back(o);
  }
  return out;
}

void check_schedule(const ClearingSchedule& schedule, int horizon) {
  for (std::size_t i = 0; i < schedule.points.size(); ++i) {
    const int t = schedule.points[i];
    if (t < 0 || t > horizon || (t == horizon && i + 1 != schedule.points.size()))
      throw Error("clearing point " + std::to_string(t) + " outside the horizon");
    if (i > 0 && t <= schedule.points[i - 1]) throw Error("clearing points must strictly increase");
  }
}

}  // namespace

OnlineResult run_online(const Instance& instance, const ClearingSchedule& schedule,
                        const OnlineOptions& options) {
  if (!instance.pinned.empty()) throw Error("online: the input instance must not carry pins");
  check_schedule(schedule, instance.time_grid.horizon_len);
  const int n = static_cast<int>(instance.requests.size());

  OnlineResult result;
  result.outcome.payments.assign(n, Money{});
  result.outcome.valuations.assign(n, Money{});
  result.outcome.utilities.assign(n, Money{});
  result.outcome.charged.assign(n, false);
  std::vector<std::optional<Pin>> committed(n);
  std::vector<bool> participated(n, false);

  int previous = 0;
  for (const int tp : schedule.points) {
    Clearing c;
    c.time = tp;
    std::vector<std::vector<StationOffer>> offers(n);
    for (int a = 0; a < n; ++a) {
      if (committed[a]) continue;
      const int report = instance.requests[a].ev.start_time;
      const bool fresh = report >= previous && report < tp;
      const bool carried = options.carryover && participated[a];
      if (!fresh && !carried) continue;
      offers[a] = offers_from(instance.requests[a], tp);
      if (!offers[a].empty()) c.eligible.push_back(a);
    }
    previous = tp;
    if (c.eligible.empty()) {
      result.clearings.push_back(std::move(c));
      continue;
    }

    Instance& ci = c.instance;
    ci.time_grid = instance.time_grid;
    ci.stations = instance.stations;
    ci.imbalance_unit_cost = instance.imbalance_unit_cost;
    for (int a = 0; a < n; ++a) {
      if (!committed[a]) continue;
      Pin pin = *committed[a];
      pin.request = static_cast<int>(ci.requests.size());
      ci.pinned.push_back(pin);
      ci.requests.push_back(instance.requests[a]);
      c.request_map.push_back(a);
    }
    for (int a : c.eligible) {
      ci.requests.push_back({instance.requests[a].ev, offers[a]});
      c.request_map.push_back(a);
      participated[a] = true;
    }

    auto solver = make_exact_solver(ci, options.solve);
    const SolveResult solved = solver->solve();
    c.status = solved.status;
    if (solved.status != SolveStatus::Optimal) result.time_limited = true;
    if (options.mechanism == Mechanism::Vcg) {
      if (solved.status != SolveStatus::Optimal)
        throw CounterfactualNotOptimal("clearing at t=" + std::to_string(tp) +
                                       " hit the time limit; VCG payments would be unsound");
      c.outcome = price_vcg(ci, solved.allocation, *solver);
    } else {
      c.outcome = price_coop(ci, solved.allocation, options.incr);
    }

    for (std::size_t i = 0; i < ci.requests.size(); ++i) {
      if (!c.outcome.charged[i]) continue;
      const int a = c.request_map[i];
      Pin pin{a, c.outcome.final_allocation.station_of(static_cast<int>(i)), {}};
      for (const auto& s : c.outcome.final_allocation.schedule)
        if (s.request == static_cast<int>(i)) pin.times.push_back(s.time);
      committed[a] = pin;
      c.added.push_back(pin);
      result.outcome.payments[a] = c.outcome.payments[i];
      result.outcome.valuations[a] = c.outcome.valuations[i];
      result.outcome.utilities[a] = c.outcome.utilities[i];
      result.outcome.charged[a] = true;
    }
    result.clearings.push_back(std::move(c));
  }

  for (int a = 0; a < n; ++a) {
    if (!committed[a]) continue;
    result.combined.assignments.push_back({a, committed[a]->station});
    for (int t : committed[a]->times) result.combined.schedule.push_back({a, committed[a]->station, t});
  }
  result.combined.normalize();
  result.combined.objective = social_welfare(instance, result.combined);
  result.outcome.final_allocation = result.combined;
  result.outcome.total_imbalance_cost = imbalance_cost(result.combined, instance).total;
  result.outcome.budget = budget(instance, result.outcome);
  return result;
}

}  // namespace evcs
