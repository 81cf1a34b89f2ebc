#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "evcs/allocator.hpp"

namespace evcs {

std::string to_string(Constraint c) {
  switch (c) {
    case Constraint::SingleStation: return "single-station";
    case Constraint::Reachability: return "reachability";
    case Constraint::MinimumCharge: return "minimum-charge";
    case Constraint::ChargingWindow: return "charging-window";
    case Constraint::BatteryCapacity: return "battery-capacity";
    case Constraint::StationCapacity: return "station-capacity";
    case Constraint::ImbalanceAbove: return "imbalance-above";
    case Constraint::ImbalanceBelow: return "imbalance-below";
    case Constraint::Unassigned: return "unassigned-charging";
    case Constraint::Pin: return "pinned-commitment";
  }
  return "unknown";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleTimeLimited: return "feasible_time_limited";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

int IpModel::count(VarKind kind) const {
  return static_cast<int>(
      std::count_if(vars.begin(), vars.end(), [&](const IpVar& v) { return v.kind == kind; }));
}

int IpModel::count(Constraint family) const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [&](const IpRow& r) { return r.family == family; }));
}

namespace {

void check_pins(const Instance& instance) {
  const int horizon = instance.time_grid.horizon_len;
  std::map<std::pair<int, int>, int> pinned_load;
  std::vector<bool> seen(instance.requests.size(), false);
  for (const auto& pin : instance.pinned) {
    if (pin.request < 0 || pin.request >= static_cast<int>(instance.requests.size()))
      throw InfeasiblePin("pin references an unknown request");
    if (seen[pin.request])
      throw InfeasiblePin("request " + instance.requests[pin.request].ev.id + " pinned twice");
    seen[pin.request] = true;
    const auto& req = instance.requests[pin.request];
    const StationOffer* offer = req.offer_at(pin.station);
    if (offer == nullptr)
      throw InfeasiblePin("pin for " + req.ev.id + ": station outside the feasible set");
    std::vector<int> times = pin.times;
    std::sort(times.begin(), times.end());
    if (std::adjacent_find(times.begin(), times.end()) != times.end())
      throw InfeasiblePin("pin for " + req.ev.id + ": duplicate time point");
    for (int t : times) {
      if (t < 0 || t >= horizon || !offer->in_window(t))
        throw InfeasiblePin("pin for " + req.ev.id + " violates " +
                            to_string(Constraint::ChargingWindow) + " at t=" + std::to_string(t));
      if (++pinned_load[{pin.station, t}] > instance.stations[pin.station].slots)
        throw InfeasiblePin("pins violate " + to_string(Constraint::StationCapacity) + " at " +
                            instance.stations[pin.station].id + " t=" + std::to_string(t));
    }
    const int n = static_cast<int>(times.size());
    if (n < offer->charge_slots_needed)
      throw InfeasiblePin("pin for " + req.ev.id + " violates " + to_string(Constraint::MinimumCharge));
    if (n > offer->charge_slots_allowed)
      throw InfeasiblePin("pin for " + req.ev.id + " violates " +
                          to_string(Constraint::BatteryCapacity));
  }
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  return out;
}

}  // namespace

IpModel build_model(const Instance& instance) {
  check_pins(instance);

  IpModel model;
  const int horizon = instance.time_grid.horizon_len;
  const int n_stations = static_cast<int>(instance.stations.size());
  model.horizon = horizon;
  model.station_count = n_stations;
  model.imbalance_unit_cost = instance.imbalance_unit_cost.raw();
  const Eigen::MatrixXi dem = demand_matrix(instance);
  model.demand.resize(static_cast<std::size_t>(n_stations) * horizon);
  for (int l = 0; l < n_stations; ++l)
    for (int t = 0; t < horizon; ++t) model.demand[l * horizon + t] = dem(l, t);
  for (const auto& r : instance.requests) model.request_ids.push_back(r.ev.id);
  for (const auto& s : instance.stations) model.station_ids.push_back(s.id);

  // Charge variables per cell, to build the capacity and imbalance rows afterwards.
  std::vector<std::vector<int>> cell_vars(static_cast<std::size_t>(n_stations) * horizon);

  for (int a = 0; a < static_cast<int>(instance.requests.size()); ++a) {
    const auto& req = instance.requests[a];
    if (req.offers.empty()) continue;
    const Pin* pin = instance.pin_for(a);

    IpRow single{Constraint::SingleStation, Sense::LessEq, 1, {}, a, -1, -1};
    for (const auto& offer : req.offers) {
      const int l = offer.station;
      const bool pinned_here = pin != nullptr && pin->station == l;
      const int phi = static_cast<int>(model.vars.size());
      IpVar assign{VarKind::Assign, a, l, -1, 0, 1, offer.valuation.raw()};
      if (pin != nullptr) assign.lower = assign.upper = pinned_here ? 1 : 0;
      model.vars.push_back(assign);
      single.terms.emplace_back(phi, 1);

      IpRow min_charge{Constraint::MinimumCharge, Sense::GreaterEq, 0, {}, a, l, -1};
      IpRow battery{Constraint::BatteryCapacity, Sense::LessEq, 0, {}, a, l, -1};
      const std::int64_t slot_cost = instance.stations[l].slot_cost().raw();
      for (int t = offer.arrival; t < offer.departure; ++t) {
        const int x = static_cast<int>(model.vars.size());
        IpVar charge{VarKind::Charge, a, l, t, 0, 1, -slot_cost};
        if (pin != nullptr) {
          const bool on = pinned_here &&
                          std::find(pin->times.begin(), pin->times.end(), t) != pin->times.end();
          charge.lower = charge.upper = on ? 1 : 0;
        }
        model.vars.push_back(charge);
        min_charge.terms.emplace_back(x, 1);
        battery.terms.emplace_back(x, 1);
        cell_vars[l * horizon + t].push_back(x);
      }
      min_charge.terms.emplace_back(phi, -offer.charge_slots_needed);
      // Battery limit written against phi so that it also ties charging to the assignment.
      battery.terms.emplace_back(phi, -offer.charge_slots_allowed);
      model.rows.push_back(std::move(min_charge));
      model.rows.push_back(std::move(battery));
    }
    model.rows.push_back(std::move(single));
  }

  for (int l = 0; l < n_stations; ++l) {
    for (int t = 0; t < horizon; ++t) {
      const auto& xs = cell_vars[l * horizon + t];
      const int d = dem(l, t);
      const int m = static_cast<int>(model.vars.size());
      const int cap = instance.stations[l].slots;
      model.vars.push_back(
          {VarKind::Imbalance, -1, l, t, 0, std::max(d, cap), -instance.imbalance_unit_cost.raw()});

      IpRow capacity{Constraint::StationCapacity, Sense::LessEq, cap, {}, -1, l, t};
      IpRow above{Constraint::ImbalanceAbove, Sense::GreaterEq, -d, {{m, 1}}, -1, l, t};
      IpRow below{Constraint::ImbalanceBelow, Sense::GreaterEq, d, {{m, 1}}, -1, l, t};
      for (int x : xs) {
        capacity.terms.emplace_back(x, 1);
        above.terms.emplace_back(x, -1);
        below.terms.emplace_back(x, 1);
      }
      model.rows.push_back(std::move(capacity));
      model.rows.push_back(std::move(above));
      model.rows.push_back(std::move(below));
    }
  }
  return model;
}

std::string IpModel::to_lp_format() const {
  auto name = [&](int j) {
    const IpVar& v = vars[j];
    switch (v.kind) {
      case VarKind::Assign:
        return "phi_" + sanitize(request_ids[v.request]) + "_" + sanitize(station_ids[v.station]);
      case VarKind::Charge:
        return "x_" + sanitize(request_ids[v.request]) + "_" + sanitize(station_ids[v.station]) +
               "_" + std::to_string(v.time);
      case VarKind::Imbalance:
        return "m_" + sanitize(station_ids[v.station]) + "_" + std::to_string(v.time);
    }
    return std::string("v") + std::to_string(j);
  };
  auto term = [&](std::ostringstream& os, std::int64_t coef, int j, bool first) {
    if (coef < 0) os << (first ? "-" : " - ");
    else if (!first) os << " + ";
    const std::int64_t a = coef < 0 ? -coef : coef;
    if (a != 1) os << a << " ";
    os << name(j);
  };

  std::ostringstream os;
  os << "\\ EV charging allocation, money in 1/" << kScale << " units\nMaximize\n obj:";
  bool first = true;
  for (int j = 0; j < static_cast<int>(vars.size()); ++j) {
    if (vars[j].objective == 0) continue;
    os << ' ';
    term(os, vars[j].objective, j, first);
    first = false;
  }
  if (first) os << " 0";
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const IpRow& r = rows[i];
    os << " " << sanitize(to_string(r.family)) << "_" << i << ":";
    if (r.terms.empty()) os << " 0";
    bool f = true;
    for (const auto& [j, c] : r.terms) {
      os << ' ';
      term(os, c, j, f);
      f = false;
    }
    os << (r.sense == Sense::LessEq ? " <= " : r.sense == Sense::GreaterEq ? " >= " : " = ")
       << r.rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < static_cast<int>(vars.size()); ++j)
    os << " " << vars[j].lower << " <= " << name(j) << " <= " << vars[j].upper << "\n";
  os << "Binaries\n";
  for (int j = 0; j < static_cast<int>(vars.size()); ++j)
    if (vars[j].kind != VarKind::Imbalance) os << " " << name(j) << "\n";
  os << "End\n";
  return os.str();
}

Allocation allocation_from_values(const IpModel& model, const std::vector<int>& values) {
  Allocation alloc;
  std::int64_t objective = 0;
  std::vector<int> load(model.demand.size(), 0);
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    const IpVar& v = model.vars[j];
    if (v.kind == VarKind::Imbalance || values[j] == 0) continue;
    objective += v.objective;
    if (v.kind == VarKind::Assign) {
      alloc.assignments.push_back({v.request, v.station});
    } else {
      alloc.schedule.push_back({v.request, v.station, v.time});
      ++load[v.station * model.horizon + v.time];
    }
  }
  for (std::size_t c = 0; c < load.size(); ++c)
    objective -= model.imbalance_unit_cost * std::abs(load[c] - model.demand[c]);
  alloc.objective = Money::from_raw(objective);
  alloc.normalize();
  return alloc;
}

}  // namespace evcs
