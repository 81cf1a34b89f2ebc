#include "evcs/io.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace evcs::io {

namespace {

using Json = nlohmann::ordered_json;

/// A JSON value plus the key path that led to it, so every error can name its location.
class Node {
 public:
  Node(const Json& value, std::string path, std::int64_t scale)
      : value_(&value), path_(std::move(path)), scale_(scale) {}

  const std::string& path() const { return path_; }
  const Json& raw() const { return *value_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError((path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

  bool has(const std::string& key) const {
    expect_object();
    return value_->contains(key) && !(*value_)[key].is_null();
  }

  Node at(const std::string& key) const {
    expect_object();
    const std::string p = path_.empty() ? key : path_ + "." + key;
    if (!value_->contains(key)) throw ParseError(p + ": missing");
    return Node((*value_)[key], p, scale_);
  }

  std::optional<Node> maybe(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  std::size_t size() const {
    if (!value_->is_array()) fail("expected an array");
    return value_->size();
  }

  Node operator[](std::size_t i) const {
    return Node((*value_)[i], path_ + "[" + std::to_string(i) + "]", scale_);
  }

  std::int64_t int64() const {
    if (!value_->is_number_integer()) fail("expected an integer");
    return value_->get<std::int64_t>();
  }

  int integer() const {
    const std::int64_t v = int64();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      fail("integer out of range");
    return static_cast<int>(v);
  }

  double number() const {
    if (!value_->is_number()) fail("expected a number");
    return value_->get<double>();
  }

  std::string string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }

  /// Integer in file units converted exactly to raw internal units.
  std::int64_t scaled() const {
    const std::int64_t v = int64();
    if (v > std::numeric_limits<std::int64_t>::max() / kScale ||
        v < std::numeric_limits<std::int64_t>::min() / kScale)
      fail("value out of range");
    const std::int64_t num = v * kScale;
    if (num % scale_ != 0)
      fail(std::to_string(v) + " at scale " + std::to_string(scale_) +
           " is not representable at the internal scale " + std::to_string(kScale));
    return num / scale_;
  }

  Money money() const { return Money::from_raw(scaled()); }
  Energy energy() const { return Energy::from_raw(scaled()); }

  std::vector<int> int_list() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].integer());
    return out;
  }

 private:
  void expect_object() const {
    if (!value_->is_object()) fail("expected an object");
  }

  const Json* value_;
  std::string path_;
  std::int64_t scale_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Station read_station(const Node& n, int horizon, bool networked) {
  Station s;
  s.id = n.at("id").string();
  if (s.id.empty()) n.at("id").fail("empty id");
  if (networked) s.node = n.at("location").integer();
  else if (auto loc = n.maybe("location")) s.node = loc->integer();
  s.slots = n.at("slots").integer();
  if (s.slots < 0) n.at("slots").fail("must be >= 0");
  s.rate = n.at("rate").energy();
  if (s.rate.raw() <= 0) n.at("rate").fail("must be > 0");
  s.elec_cost = n.at("elec_cost").money();
  if (s.elec_cost.raw() < 0) n.at("elec_cost").fail("must be >= 0");
  const Node dem = n.at("expected_demand");
  s.expected_demand = dem.int_list();
  if (static_cast<int>(s.expected_demand.size()) != horizon)
    dem.fail("length " + std::to_string(s.expected_demand.size()) + " differs from horizon_len " +
             std::to_string(horizon));
  for (std::size_t t = 0; t < s.expected_demand.size(); ++t)
    if (s.expected_demand[t] < 0) dem[t].fail("must be >= 0");
  return s;
}

EvType read_ev(const Node& n, int horizon, bool networked) {
  EvType ev;
  ev.id = n.at("id").string();
  if (ev.id.empty()) n.at("id").fail("empty id");
  ev.discharge_rate = n.at("discharge_rate").energy();
  if (ev.discharge_rate.raw() < 0) n.at("discharge_rate").fail("must be >= 0");
  ev.battery_capacity = n.at("battery_capacity").energy();
  ev.battery_initial = n.at("battery_initial").energy();
  if (ev.battery_initial.raw() < 0 || ev.battery_initial > ev.battery_capacity)
    n.at("battery_initial").fail("must lie in [0, battery_capacity]");
  if (networked) {
    ev.start_location = n.at("start_location").integer();
    ev.end_location = n.at("end_location").integer();
  } else {
    if (auto v = n.maybe("start_location")) ev.start_location = v->integer();
    if (auto v = n.maybe("end_location")) ev.end_location = v->integer();
  }
  ev.start_time = n.at("start_time").integer();
  if (ev.start_time < 0 || ev.start_time >= horizon)
    n.at("start_time").fail("must lie in [0, horizon_len)");
  ev.park_duration = n.at("park_duration").integer();
  if (ev.park_duration < 1) n.at("park_duration").fail("must be >= 1");
  ev.energy_demand = n.at("energy_demand").energy();
  if (ev.energy_demand.raw() <= 0 || ev.energy_demand > ev.battery_capacity)
    n.at("energy_demand").fail("must lie in (0, battery_capacity]");
  ev.base_valuation = n.at("base_valuation").money();
  if (ev.base_valuation.raw() < 0) n.at("base_valuation").fail("must be >= 0");
  return ev;
}

RoadNetwork read_network(const Node& n) {
  std::vector<RoadEdge> edges;
  const Node e = n.at("edges");
  for (std::size_t i = 0; i < e.size(); ++i) {
    RoadEdge edge{e[i].at("a").integer(), e[i].at("b").integer(), e[i].at("km").number()};
    if (!(edge.km > 0)) e[i].at("km").fail("must be > 0");
    edges.push_back(edge);
  }
  const double speed = n.at("avg_speed").number();
  if (!(speed > 0)) n.at("avg_speed").fail("must be > 0");
  try {
    return RoadNetwork(n.at("nodes").int_list(), std::move(edges), n.at("charging_nodes").int_list(),
                       speed);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& err) {
    n.fail(err.what());
  }
}

Json money_list(const std::vector<Money>& values) {
  Json out = Json::array();
  for (Money m : values) out.push_back(m.raw());
  return out;
}

Json id_or_null(const Instance& instance, int station) {
  return station < 0 ? Json(nullptr) : Json(instance.stations[station].id);
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
  const bool networked = sc.network.has_value();
  Json j;
  j["schema"] = kInstanceSchema;
  j["scale"] = kScale;
  j["time_grid"] = {{"horizon_len", sc.time_grid.horizon_len},
                    {"minutes_per_point", sc.time_grid.minutes_per_point}};
  j["imbalance_unit_cost"] = sc.imbalance_unit_cost.raw();
  Json stations = Json::array();
  for (const auto& s : sc.stations) {
    Json o;
    o["id"] = s.id;
    if (networked) o["location"] = s.node;
    o["slots"] = s.slots;
    o["rate"] = s.rate.raw();
    o["elec_cost"] = s.elec_cost.raw();
    o["expected_demand"] = s.expected_demand;
    stations.push_back(std::move(o));
  }
  j["stations"] = std::move(stations);
  Json evs = Json::array();
  for (const auto& ev : sc.evs) {
    Json o;
    o["id"] = ev.id;
    o["discharge_rate"] = ev.discharge_rate.raw();
    o["battery_capacity"] = ev.battery_capacity.raw();
    o["battery_initial"] = ev.battery_initial.raw();
    if (networked) o["start_location"] = ev.start_location;
    o["start_time"] = ev.start_time;
    if (networked) o["end_location"] = ev.end_location;
    o["park_duration"] = ev.park_duration;
    o["energy_demand"] = ev.energy_demand.raw();
    o["base_valuation"] = ev.base_valuation.raw();
    evs.push_back(std::move(o));
  }
  j["evs"] = std::move(evs);
  if (networked) {
    const RoadNetwork& net = *sc.network;
    Json edges = Json::array();
    for (const auto& e : net.edges()) edges.push_back({{"a", e.a}, {"b", e.b}, {"km", e.km}});
    j["network"] = {{"nodes", net.nodes()},
                    {"edges", std::move(edges)},
                    {"charging_nodes", net.charging_nodes()},
                    {"avg_speed", net.avg_speed()}};
    j["time_cost_params"] = {{"per_drive_point", sc.time_cost_params.per_drive_point.raw()},
                             {"per_walk_km", sc.time_cost_params.per_walk_km.raw()}};
  } else if (!sc.flat_time_costs.empty()) {
    Json rows = Json::array();
    for (const auto& row : sc.flat_time_costs) rows.push_back(money_list(row));
    j["flat_time_costs"] = std::move(rows);
  }
  if (!sc.pinned.empty()) {
    Json pins = Json::array();
    for (const auto& p : sc.pinned)
      pins.push_back({{"ev", sc.evs.at(p.request).id},
                      {"station", sc.stations.at(p.station).id},
                      {"times", p.times}});
    j["pinned"] = std::move(pins);
  }
  return dump(j);
}

Scenario parse_scenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("<input>: invalid JSON: ") + err.what());
  }
  const Node probe(doc, "", kScale);
  if (!doc.is_object()) probe.fail("expected an object");
  const std::int64_t scale = probe.at("scale").int64();
  if (scale <= 0) probe.at("scale").fail("must be > 0");
  const Node root(doc, "", scale);
  if (auto schema = root.maybe("schema"); schema && schema->string() != kInstanceSchema)
    schema->fail("unsupported schema '" + schema->string() + "'");

  Scenario sc;
  const Node grid = root.at("time_grid");
  sc.time_grid.horizon_len = grid.at("horizon_len").integer();
  if (sc.time_grid.horizon_len < 1) grid.at("horizon_len").fail("must be >= 1");
  if (auto m = grid.maybe("minutes_per_point")) sc.time_grid.minutes_per_point = m->number();
  const int horizon = sc.time_grid.horizon_len;

  sc.imbalance_unit_cost = root.at("imbalance_unit_cost").money();
  if (sc.imbalance_unit_cost.raw() < 0) root.at("imbalance_unit_cost").fail("must be >= 0");

  const bool networked = root.has("network");
  if (networked) sc.network = read_network(root.at("network"));

  const Node stations = root.at("stations");
  std::map<std::string, int> station_ids;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    Station s = read_station(stations[i], horizon, networked);
    if (!station_ids.emplace(s.id, static_cast<int>(i)).second)
      stations[i].at("id").fail("duplicate station id '" + s.id + "'");
    if (networked && !sc.network->has_node(s.node))
      stations[i].at("location").fail("node " + std::to_string(s.node) + " not in network.nodes");
    sc.stations.push_back(std::move(s));
  }

  const Node evs = root.at("evs");
  std::map<std::string, int> ev_ids;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    EvType ev = read_ev(evs[i], horizon, networked);
    if (!ev_ids.emplace(ev.id, static_cast<int>(i)).second)
      evs[i].at("id").fail("duplicate ev id '" + ev.id + "'");
    if (networked) {
      if (!sc.network->has_node(ev.start_location))
        evs[i].at("start_location").fail("node not in network.nodes");
      if (!sc.network->has_node(ev.end_location))
        evs[i].at("end_location").fail("node not in network.nodes");
    }
    sc.evs.push_back(std::move(ev));
  }

  if (auto p = root.maybe("time_cost_params")) {
    sc.time_cost_params.per_drive_point = p->at("per_drive_point").money();
    sc.time_cost_params.per_walk_km = p->at("per_walk_km").money();
    if (sc.time_cost_params.per_drive_point.raw() < 0) p->at("per_drive_point").fail("must be >= 0");
    if (sc.time_cost_params.per_walk_km.raw() < 0) p->at("per_walk_km").fail("must be >= 0");
  }
  if (auto rows = root.maybe("flat_time_costs")) {
    if (networked) rows->fail("only allowed without a network");
    if (rows->size() != sc.evs.size()) rows->fail("needs one row per ev");
    for (std::size_t a = 0; a < rows->size(); ++a) {
      const Node row = (*rows)[a];
      if (row.size() != sc.stations.size()) row.fail("needs one entry per station");
      std::vector<Money> costs;
      for (std::size_t l = 0; l < row.size(); ++l) {
        costs.push_back(row[l].money());
        if (costs.back().raw() < 0) row[l].fail("must be >= 0");
      }
      sc.flat_time_costs.push_back(std::move(costs));
    }
  }
  if (auto pins = root.maybe("pinned")) {
    for (std::size_t i = 0; i < pins->size(); ++i) {
      const Node pn = (*pins)[i];
      Pin pin;
      const std::string ev = pn.at("ev").string();
      const std::string st = pn.at("station").string();
      if (!ev_ids.contains(ev)) pn.at("ev").fail("unknown ev '" + ev + "'");
      if (!station_ids.contains(st)) pn.at("station").fail("unknown station '" + st + "'");
      pin.request = ev_ids[ev];
      pin.station = station_ids[st];
      pin.times = pn.at("times").int_list();
      sc.pinned.push_back(std::move(pin));
    }
  }
  return sc;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(path.string() + ": write failed");
}

Scenario read_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_text(path));
  } catch (const ParseError& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

std::string allocation_to_json(const Instance& instance, const Allocation& allocation) {
  Json j;
  j["schema"] = kReportSchema;
  j["scale"] = kScale;
  j["objective"] = allocation.objective.raw();
  Json assigned = Json::array();
  for (std::size_t a = 0; a < instance.requests.size(); ++a)
    assigned.push_back({{"agent_id", instance.requests[a].ev.id},
                        {"station", id_or_null(instance, allocation.station_of(static_cast<int>(a)))}});
  j["assigned"] = std::move(assigned);
  Json schedule = Json::array();
  for (const auto& s : allocation.schedule)
    schedule.push_back({{"agent_id", instance.requests[s.request].ev.id},
                        {"station", instance.stations[s.station].id},
                        {"time", s.time}});
  j["schedule"] = std::move(schedule);
  return dump(j);
}

std::string pricing_to_json(const Instance& instance, const PricingOutcome& outcome) {
  Json j;
  j["schema"] = kReportSchema;
  j["scale"] = kScale;
  Json agents = Json::array();
  for (std::size_t a = 0; a < instance.requests.size(); ++a)
    agents.push_back(
        {{"agent_id", instance.requests[a].ev.id},
         {"station", id_or_null(instance, outcome.final_allocation.station_of(static_cast<int>(a)))},
         {"payment", outcome.payments[a].raw()},
         {"valuation", outcome.valuations[a].raw()},
         {"utility", outcome.utilities[a].raw()},
         {"charged", static_cast<bool>(outcome.charged[a])}});
  j["agents"] = std::move(agents);
  j["total_imbalance_cost"] = outcome.total_imbalance_cost.raw();
  j["budget"] = outcome.budget.raw();
  return dump(j);
}

std::string pricing_to_csv(const Instance& instance, const PricingOutcome& outcome) {
  std::ostringstream os;
  os << "agent_id,station,payment,valuation,utility,charged\n";
  for (std::size_t a = 0; a < instance.requests.size(); ++a) {
    const int l = outcome.final_allocation.station_of(static_cast<int>(a));
    os << instance.requests[a].ev.id << ',' << (l < 0 ? "" : instance.stations[l].id) << ','
       << outcome.payments[a] << ',' << outcome.valuations[a] << ',' << outcome.utilities[a] << ','
       << (outcome.charged[a] ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string summary_to_json(const RunSummary& s) {
  Json j;
  j["schema"] = kReportSchema;
  j["spec_version"] = "1.0";
  j["scale"] = kScale;
  j["mechanism"] = s.mechanism;
  j["mode"] = s.mode;
  j["status"] = to_string(s.status);
  j["objective"] = s.objective.raw();
  j["serviced"] = s.serviced;
  j["budget"] = s.budget.raw();
  j["total_imbalance_cost"] = s.total_imbalance_cost.raw();
  j["total_payments"] = s.total_payments.raw();
  if (s.wall_clock_seconds) j["wall_clock_seconds"] = *s.wall_clock_seconds;
  return dump(j);
}

std::string clearing_event(const Instance& instance, const Clearing& c, int index) {
  Json j;
  j["clearing"] = index;
  j["time"] = c.time;
  j["status"] = to_string(c.status);
  Json eligible = Json::array();
  for (int a : c.eligible) eligible.push_back(instance.requests[a].ev.id);
  j["eligible"] = std::move(eligible);
  Json added = Json::array();
  for (const auto& p : c.added)
    added.push_back({{"agent_id", instance.requests[p.request].ev.id},
                     {"station", instance.stations[p.station].id},
                     {"times", p.times}});
  j["added"] = std::move(added);
  Json payments = Json::array();
  for (std::size_t i = 0; i < c.instance.requests.size(); ++i) {
    if (c.outcome.charged.empty() || !c.outcome.charged[i]) continue;
    payments.push_back({{"agent_id", c.instance.requests[i].ev.id}, {"payment", c.outcome.payments[i].raw()}});
  }
  j["payments"] = std::move(payments);
  return j.dump() + "\n";
}

}  // namespace evcs::io
