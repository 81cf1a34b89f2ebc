#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <map>

#include "evcs/allocator.hpp"

namespace evcs {

namespace {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min() / 4;

struct StationPlan {
  std::int64_t value = kNegInf;  // -(electricity of free agents) - imbalance, raw money
  std::vector<ChargeSlot> slots;
};

/// Best schedule at one station for a fixed set of free agents, on top of the pinned load.
/// Dynamic program over time; the state is the vector of per-agent charge counts.
StationPlan plan_station(const Instance& instance, int l, const std::vector<int>& agents,
                         const std::vector<int>& pinned_load) {
  const Station& st = instance.stations[l];
  const int horizon = instance.time_grid.horizon_len;
  const int k = static_cast<int>(agents.size());
  std::vector<const StationOffer*> offers;
  std::vector<int> cap(k), radix(k);
  int states = 1;
  for (int i = 0; i < k; ++i) {
    offers.push_back(instance.requests[agents[i]].offer_at(l));
    cap[i] = offers[i]->charge_slots_allowed;
    if (cap[i] < offers[i]->charge_slots_needed) return {};
    radix[i] = states;
    states *= cap[i] + 1;
  }
  const std::int64_t slot_cost = st.slot_cost().raw();
  const std::int64_t imbl = instance.imbalance_unit_cost.raw();

  std::vector<std::int64_t> cur(states, kNegInf), nxt(states);
  std::vector<std::vector<std::uint8_t>> choice(horizon, std::vector<std::uint8_t>(states, 0));
  cur[0] = 0;
  for (int t = 0; t < horizon; ++t) {
    std::fill(nxt.begin(), nxt.end(), kNegInf);
    int present = 0;
    for (int i = 0; i < k; ++i)
      if (offers[i]->in_window(t)) present |= 1 << i;
    const int dem = st.expected_demand[t];
    for (int s = 0; s < states; ++s) {
      if (cur[s] == kNegInf) continue;
      for (int mask = present;; mask = (mask - 1) & present) {
        const int n = std::popcount(static_cast<unsigned>(mask));
        const int load = n + pinned_load[t];
        if (load <= st.slots) {
          int ns = s;
          bool ok = true;
          for (int i = 0; i < k && ok; ++i) {
            if (!(mask >> i & 1)) continue;
            if ((s / radix[i]) % (cap[i] + 1) == cap[i]) ok = false;
            ns += radix[i];
          }
          if (ok) {
            const std::int64_t v = cur[s] - slot_cost * n - imbl * std::abs(load - dem);
            if (v > nxt[ns]) {
              nxt[ns] = v;
              choice[t][ns] = static_cast<std::uint8_t>(mask);
            }
          }
        }
        if (mask == 0) break;
      }
    }
    std::swap(cur, nxt);
  }

  StationPlan best;
  int best_state = -1;
  for (int s = 0; s < states; ++s) {
    if (cur[s] == kNegInf || cur[s] <= best.value) continue;
    bool ok = true;
    for (int i = 0; i < k; ++i)
      if ((s / radix[i]) % (cap[i] + 1) < offers[i]->charge_slots_needed) ok = false;
    if (ok) {
      best.value = cur[s];
      best_state = s;
    }
  }
  if (best_state < 0) return {};
  int s = best_state;
  for (int t = horizon - 1; t >= 0; --t) {
    const int mask = choice[t][s];
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      best.slots.push_back({agents[i], l, t});
      s -= radix[i];
    }
  }
  return best;
}

}  // namespace

Allocation solve_bruteforce(const Instance& instance, const std::vector<int>& excluded) {
  const int n_req = static_cast<int>(instance.requests.size());
  const int n_st = static_cast<int>(instance.stations.size());
  const int horizon = instance.time_grid.horizon_len;
  if (n_req > 4 || n_st > 3 || horizon > 10)
    throw TooLarge("brute force is limited to 4 EVs, 3 stations and 10 time points");
  build_model(instance);  // pin consistency

  std::vector<std::vector<int>> pinned_load(n_st, std::vector<int>(horizon, 0));
  std::int64_t pinned_value = 0;
  for (const auto& pin : instance.pinned) {
    pinned_value += instance.requests[pin.request].offer_at(pin.station)->valuation.raw();
    for (int t : pin.times) {
      ++pinned_load[pin.station][t];
      pinned_value -= instance.stations[pin.station].slot_cost().raw();
    }
  }

  // Choices per request: -1 (unserved) or one of its offered stations.
  std::vector<std::vector<int>> choices(n_req);
  for (int a = 0; a < n_req; ++a) {
    if (instance.is_pinned(a)) {
      choices[a] = {-2};  // held by the pin
    } else if (std::find(excluded.begin(), excluded.end(), a) != excluded.end()) {
      choices[a] = {-1};
    } else {
      choices[a] = {-1};
      for (const auto& o : instance.requests[a].offers) choices[a].push_back(o.station);
    }
  }

  std::map<std::pair<int, int>, StationPlan> memo;
  auto plan = [&](int l, int mask) -> const StationPlan& {
    auto key = std::make_pair(l, mask);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<int> agents;
    for (int a = 0; a < n_req; ++a)
      if (mask >> a & 1) agents.push_back(a);
    return memo.emplace(key, plan_station(instance, l, agents, pinned_load[l])).first->second;
  };

  std::int64_t best_value = kNegInf;
  std::vector<int> best_pick;
  std::vector<int> pick(n_req, 0);
  while (true) {
    std::vector<int> mask(n_st, 0);
    std::int64_t value = pinned_value;
    for (int a = 0; a < n_req; ++a) {
      const int l = choices[a][pick[a]];
      if (l < 0) continue;
      mask[l] |= 1 << a;
      value += instance.requests[a].offer_at(l)->valuation.raw();
    }
    for (int l = 0; l < n_st && value > kNegInf; ++l) {
      const StationPlan& p = plan(l, mask[l]);
      value = p.value == kNegInf ? kNegInf : value + p.value;
    }
    if (value > best_value) {
      best_value = value;
      best_pick = pick;
    }
    int a = 0;
    while (a < n_req && ++pick[a] == static_cast<int>(choices[a].size())) pick[a++] = 0;
    if (a == n_req) break;
  }
  if (best_value == kNegInf) throw Error("brute force found no feasible allocation");

  Allocation alloc;
  std::vector<int> mask(n_st, 0);
  for (int a = 0; a < n_req; ++a) {
    const int l = choices[a][best_pick[a]];
    if (l >= 0) {
      mask[l] |= 1 << a;
      alloc.assignments.push_back({a, l});
    }
  }
  for (const auto& pin : instance.pinned) {
    alloc.assignments.push_back({pin.request, pin.station});
    for (int t : pin.times) alloc.schedule.push_back({pin.request, pin.station, t});
  }
  for (int l = 0; l < n_st; ++l) {
    const auto& slots = plan(l, mask[l]).slots;
    alloc.schedule.insert(alloc.schedule.end(), slots.begin(), slots.end());
  }
  alloc.objective = Money::from_raw(best_value);
  alloc.normalize();
  return alloc;
}

std::vector<Violation> validate_allocation(const Instance& instance, const Allocation& allocation) {
  std::vector<Violation> out;
  const int n_req = static_cast<int>(instance.requests.size());
  const int n_st = static_cast<int>(instance.stations.size());
  const int horizon = instance.time_grid.horizon_len;
  auto add = [&](Constraint c, int a, int l, int t, std::string msg) {
    out.push_back({c, a, l, t, to_string(c) + ": " + std::move(msg)});
  };
  auto who = [&](int a) {
    return a >= 0 && a < n_req ? instance.requests[a].ev.id : "#" + std::to_string(a);
  };

  std::vector<int> assigned(n_req, -1);
  for (const auto& asg : allocation.assignments) {
    if (asg.request < 0 || asg.request >= n_req || asg.station < 0 || asg.station >= n_st) {
      add(Constraint::Reachability, asg.request, asg.station, -1, "assignment outside the instance");
      continue;
    }
    if (assigned[asg.request] >= 0) {
      add(Constraint::SingleStation, asg.request, asg.station, -1,
          who(asg.request) + " assigned to more than one station");
      continue;
    }
    assigned[asg.request] = asg.station;
    if (instance.requests[asg.request].offer_at(asg.station) == nullptr)
      add(Constraint::Reachability, asg.request, asg.station, -1,
          who(asg.request) + " cannot use station " + instance.stations[asg.station].id);
  }

  std::vector<int> count(n_req, 0);
  std::map<std::pair<int, int>, int> load;
  std::vector<ChargeSlot> sorted = allocation.schedule;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const ChargeSlot& s = sorted[i];
    if (s.request < 0 || s.request >= n_req || s.station < 0 || s.station >= n_st || s.time < 0 ||
        s.time >= horizon) {
      add(Constraint::ChargingWindow, s.request, s.station, s.time, "slot outside the instance");
      continue;
    }
    if (i > 0 && sorted[i - 1] == s) {
      add(Constraint::ChargingWindow, s.request, s.station, s.time, "duplicate slot");
      continue;
    }
    if (assigned[s.request] != s.station) {
      add(Constraint::Unassigned, s.request, s.station, s.time,
          who(s.request) + " charges at a station it is not assigned to");
      continue;
    }
    const StationOffer* offer = instance.requests[s.request].offer_at(s.station);
    if (offer != nullptr && !offer->in_window(s.time))
      add(Constraint::ChargingWindow, s.request, s.station, s.time,
          who(s.request) + " charges outside its window at t=" + std::to_string(s.time));
    ++count[s.request];
    ++load[{s.station, s.time}];
  }

  for (int a = 0; a < n_req; ++a) {
    const int l = assigned[a];
    if (l < 0) continue;
    const StationOffer* offer = instance.requests[a].offer_at(l);
    if (offer == nullptr) continue;
    if (count[a] < offer->charge_slots_needed)
      add(Constraint::MinimumCharge, a, l, -1,
          who(a) + " gets " + std::to_string(count[a]) + " slots, needs " +
              std::to_string(offer->charge_slots_needed));
    const Energy delivered = instance.stations[l].rate * count[a];
    if (delivered + offer->battery_on_arrival > instance.requests[a].ev.battery_capacity)
      add(Constraint::BatteryCapacity, a, l, -1, who(a) + " overfills its battery");
  }

  for (const auto& [cell, n] : load) {
    if (n > instance.stations[cell.first].slots)
      add(Constraint::StationCapacity, -1, cell.first, cell.second,
          std::to_string(n) + " EVs at " + instance.stations[cell.first].id +
              " t=" + std::to_string(cell.second));
  }

  for (const auto& pin : instance.pinned) {
    if (pin.request < 0 || pin.request >= n_req) continue;
    std::vector<int> times;
    for (const auto& s : sorted)
      if (s.request == pin.request) times.push_back(s.time);
    std::vector<int> want = pin.times;
    std::sort(want.begin(), want.end());
    if (assigned[pin.request] != pin.station || times != want)
      add(Constraint::Pin, pin.request, pin.station, -1, who(pin.request) + " moved from its commitment");
  }
  return out;
}

}  // namespace evcs
