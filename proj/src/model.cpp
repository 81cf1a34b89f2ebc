#include "evcs/model.hpp"

#include <algorithm>

namespace evcs {

const StationOffer* EvRequest::offer_at(int station) const {
  for (const auto& o : offers)
    if (o.station == station) return &o;
  return nullptr;
}

std::vector<int> EvRequest::feasible_stations() const {
  std::vector<int> out;
  out.reserve(offers.size());
  for (const auto& o : offers) out.push_back(o.station);
  return out;
}

int Allocation::station_of(int request) const {
  for (const auto& a : assignments)
    if (a.request == request) return a.station;
  return -1;
}

int Allocation::slots_of(int request) const {
  return static_cast<int>(std::count_if(schedule.begin(), schedule.end(),
                                        [&](const ChargeSlot& s) { return s.request == request; }));
}

void Allocation::normalize() {
  std::sort(assignments.begin(), assignments.end());
  std::sort(schedule.begin(), schedule.end());
}

int Instance::station_index(const std::string& id) const {
  for (std::size_t i = 0; i < stations.size(); ++i)
    if (stations[i].id == id) return static_cast<int>(i);
  return -1;
}

int Instance::request_index(const std::string& id) const {
  for (std::size_t i = 0; i < requests.size(); ++i)
    if (requests[i].ev.id == id) return static_cast<int>(i);
  return -1;
}

const Pin* Instance::pin_for(int request) const {
  for (const auto& p : pinned)
    if (p.request == request) return &p;
  return nullptr;
}

int PricingOutcome::charged_count() const {
  return static_cast<int>(std::count(charged.begin(), charged.end(), true));
}

Eigen::MatrixXi load_matrix(const Instance& instance, const Allocation& allocation) {
  Eigen::MatrixXi load =
      Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(instance.stations.size()),
                            instance.time_grid.horizon_len);
  for (const auto& s : allocation.schedule) {
    if (s.station < 0 || s.station >= load.rows() || s.time < 0 || s.time >= load.cols())
      throw Error("schedule entry outside the station/time grid");
    load(s.station, s.time) += 1;
  }
  return load;
}

Eigen::MatrixXi demand_matrix(const Instance& instance) {
  const int horizon = instance.time_grid.horizon_len;
  Eigen::MatrixXi dem(static_cast<Eigen::Index>(instance.stations.size()), horizon);
  for (std::size_t l = 0; l < instance.stations.size(); ++l) {
    const auto& d = instance.stations[l].expected_demand;
    if (static_cast<int>(d.size()) != horizon)
      throw Error("station " + instance.stations[l].id + ": expected_demand length != horizon");
    for (int t = 0; t < horizon; ++t) dem(static_cast<Eigen::Index>(l), t) = d[t];
  }
  return dem;
}

ImbalanceCost imbalance_cost(const Allocation& schedule, const Instance& instance) {
  const Eigen::MatrixXi deviation = (load_matrix(instance, schedule) - demand_matrix(instance)).cwiseAbs();
  ImbalanceCost out;
  out.per_cell = deviation.cast<std::int64_t>() * instance.imbalance_unit_cost.raw();
  out.total = Money::from_raw(out.per_cell.sum());
  return out;
}

Money valuation(const EvType& ev, Money time_cost, Energy delivered_energy) {
  if (delivered_energy < ev.energy_demand) return Money{};
  return std::max(Money{}, ev.base_valuation - time_cost);
}

Money utility(Money valuation, Money payment, bool charged) {
  return charged ? valuation - payment : Money{};
}

Money electricity_cost(const Instance& instance, const Allocation& allocation, int request) {
  Money total;
  for (const auto& s : allocation.schedule)
    if (s.request == request) total += instance.stations[s.station].slot_cost();
  return total;
}

Money social_welfare(const Instance& instance, const Allocation& allocation) {
  Money total;
  for (const auto& a : allocation.assignments) {
    const auto& req = instance.requests[a.request];
    const StationOffer* offer = req.offer_at(a.station);
    if (offer == nullptr) continue;
    const Energy delivered = instance.stations[a.station].rate * allocation.slots_of(a.request);
    if (delivered >= req.ev.energy_demand) total += offer->valuation;
  }
  for (const auto& s : allocation.schedule) total -= instance.stations[s.station].slot_cost();
  total -= imbalance_cost(allocation, instance).total;
  return total;
}

}  // namespace evcs
