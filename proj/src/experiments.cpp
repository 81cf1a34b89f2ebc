#include "evcs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "evcs/pricing.hpp"
#include "evcs/stats.hpp"

namespace evcs::exp {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string mode_name(bool online) { return online ? "online" : "offline"; }

void fill(MechanismRun& run, const PricingOutcome& outcome) {
  run.serviced = outcome.charged_count();
  Money utility;
  Money paid;
  for (std::size_t a = 0; a < outcome.charged.size(); ++a) {
    if (!outcome.charged[a]) continue;
    utility += outcome.utilities[a];
    paid += outcome.payments[a];
  }
  if (run.serviced > 0) {
    run.mean_utility = utility.to_double() / run.serviced;
    run.mean_payment = paid.to_double() / run.serviced;
  }
  run.budget = outcome.budget.to_double();
}

MechanismRun online_run(const Instance& instance, const Config& config, Mechanism mechanism) {
  MechanismRun run;
  run.mechanism = mechanism;
  run.online = true;
  OnlineOptions options;
  options.mechanism = mechanism;
  options.incr = config.incr;
  options.solve.time_limit_seconds = config.time_limit_seconds;
  const auto start = Clock::now();
  try {
    const OnlineResult result = run_online(
        instance, ClearingSchedule::evenly(instance.time_grid.horizon_len, config.clearings), options);
    fill(run, result.outcome);
    if (result.time_limited) run.status = to_string(SolveStatus::FeasibleTimeLimited);
  } catch (const CounterfactualNotOptimal&) {
    run.status = "counterfactual_not_optimal";
  }
  run.seconds = since(start);
  return run;
}

/// Rows grouped by (sweep value, mechanism, mode) in first-seen order.
using Key = std::tuple<int, int, bool>;

std::vector<std::pair<Key, std::vector<const MarketRow*>>> group(const std::vector<MarketRow>& rows) {
  std::vector<std::pair<Key, std::vector<const MarketRow*>>> groups;
  std::map<Key, std::size_t> index;
  for (const auto& r : rows) {
    const Key k{r.sweep_value, static_cast<int>(r.run.mechanism), r.run.online};
    auto [it, fresh] = index.emplace(k, groups.size());
    if (fresh) groups.push_back({k, {}});
    groups[it->second].second.push_back(&r);
  }
  return groups;
}

/// "mean,sd" of a field over the unflagged runs of a group.
template <typename F>
std::string mean_sd(const std::vector<const MarketRow*>& rows, F field) {
  std::vector<double> values;
  for (const MarketRow* r : rows)
    if (!r->run.flagged()) values.push_back(field(*r));
  const stats::Summary s = stats::summarize(values);
  if (s.n == 0) return "nan,nan";
  return num(s.mean) + "," + num(s.sd);
}

int flagged_count(const std::vector<const MarketRow*>& rows) {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const MarketRow* r) { return r->run.flagged(); }));
}

template <typename Columns>
std::string aggregate(const std::vector<MarketRow>& rows, std::uint64_t base_seed, const char* schema,
                      const char* sweep_name, const char* headers, Columns columns) {
  std::ostringstream os;
  os << "# schema " << schema << "\n";
  os << sweep_name << ",mechanism,mode,seed,reps,flagged," << headers << "\n";
  for (const auto& [key, members] : group(rows)) {
    const auto& [sweep, mech, online] = key;
    os << sweep << ',' << to_string(static_cast<Mechanism>(mech)) << ',' << mode_name(online) << ','
       << base_seed << ',' << members.size() << ',' << flagged_count(members) << ','
       << columns(members) << "\n";
  }
  return os.str();
}

Money liar_value(const ValuationTable& values, const Allocation& allocation, int a) {
  const int l = allocation.station_of(a);
  return l < 0 ? Money{} : values[a][l];
}

}  // namespace

std::uint64_t run_seed(std::uint64_t base, int sweep_value, int repetition) {
  // splitmix64 over the packed coordinates
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (1 + static_cast<std::uint64_t>(sweep_value) * 1000003ULL +
                                                    static_cast<std::uint64_t>(repetition));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::vector<MechanismRun> run_market_impl(const Instance& instance, const Config& config, bool online) {
  std::vector<MechanismRun> out;
  SolveOptions options;
  options.time_limit_seconds = config.time_limit_seconds;
  const auto start = Clock::now();
  auto solver = make_exact_solver(instance, options);
  const SolveResult solved = solver->solve();
  const double solve_seconds = since(start);

  MechanismRun coop;
  coop.mechanism = Mechanism::Coop;
  coop.status = to_string(solved.status);
  const auto coop_start = Clock::now();
  fill(coop, price_coop(instance, solved.allocation, config.incr));
  coop.seconds = solve_seconds + since(coop_start);
  out.push_back(coop);

  MechanismRun vcg;
  vcg.mechanism = Mechanism::Vcg;
  vcg.status = to_string(solved.status);
  const auto vcg_start = Clock::now();
  if (solved.status == SolveStatus::Optimal) {
    try {
      fill(vcg, price_vcg(instance, solved.allocation, *solver));
    } catch (const CounterfactualNotOptimal&) {
      vcg.status = "counterfactual_not_optimal";
    }
  }
  vcg.seconds = solve_seconds + since(vcg_start);
  out.push_back(vcg);

  if (online) {
    out.push_back(online_run(instance, config, Mechanism::Coop));
    out.push_back(online_run(instance, config, Mechanism::Vcg));
  }
  return out;
}

}  // namespace

std::vector<MechanismRun> run_market(const Instance& instance, const Config& config) {
  return run_market_impl(instance, config, true);
}

namespace {

std::vector<MarketRow> sweep(const Config& config, const std::vector<int>& values, bool stations) {
  const int reps = config.repetitions;
  const int tasks = static_cast<int>(values.size()) * reps;
  std::vector<std::vector<MarketRow>> per_task(tasks);
  parallel_for(tasks, config.jobs, [&](int i) {
    const int value = values[i / reps];
    const int rep = i % reps;
    ScenarioParams params = config.market;
    if (stations) {
      params.n_stations = value;
      params.n_evs = config.station_sweep_evs;
    } else {
      params.n_evs = value;
    }
    params.seed = run_seed(config.seed, value, rep);
    const Instance instance = resolve(generate(params));
    for (const auto& run : run_market_impl(instance, config, !stations))
      per_task[i].push_back({value, rep, params.seed, run});
  });
  std::vector<MarketRow> rows;
  for (auto& t : per_task) rows.insert(rows.end(), t.begin(), t.end());
  return rows;
}

}  // namespace

std::vector<MarketRow> sweep_evs(const Config& config) { return sweep(config, config.ev_counts, false); }

std::vector<MarketRow> sweep_stations(const Config& config) {
  return sweep(config, config.station_counts, true);
}

std::vector<LiarRow> run_liars(const Config& config, int n_evs) {
  const int reps = config.repetitions;
  std::vector<std::vector<LiarRow>> per_rep(reps);
  parallel_for(reps, config.jobs, [&](int rep) {
    ScenarioParams params = config.market;
    params.n_evs = n_evs;
    params.seed = run_seed(config.seed, n_evs, rep);
    const Scenario scenario = generate(params);
    const PerturbedReports perturbed =
        perturb_reports(scenario, config.liar_fraction, config.liar_multiplier, params.seed ^ 0x5bd1e995ULL);
    const Instance truthful = resolve(scenario);
    const Instance reported = resolve(perturbed.reported);
    const ValuationTable honest = reported_valuations(truthful);
    std::vector<int> liars;
    for (std::size_t a = 0; a < perturbed.liar.size(); ++a)
      if (perturbed.liar[a]) liars.push_back(static_cast<int>(a));

    SolveOptions options;
    options.time_limit_seconds = config.time_limit_seconds;
    auto solver_t = make_exact_solver(truthful, options);
    auto solver_r = make_exact_solver(reported, options);
    const SolveResult alloc_t = solver_t->solve();
    const SolveResult alloc_r = solver_r->solve();
    const bool proven = alloc_t.status == SolveStatus::Optimal && alloc_r.status == SolveStatus::Optimal;

    LiarRow base;
    base.repetition = rep;
    base.seed = params.seed;
    base.liars = static_cast<int>(liars.size());
    base.status = proven ? "optimal" : to_string(SolveStatus::FeasibleTimeLimited);

    LiarRow coop = base;
    coop.mechanism = Mechanism::Coop;
    if (proven) {
      const PricingOutcome t = price_coop(truthful, alloc_t.allocation, config.incr);
      const PricingOutcome r = price_coop(reported, alloc_r.allocation, config.incr, &perturbed.truth);
      for (int a : liars) {
        coop.utility_truthful.push_back(t.utilities[a].to_double());
        coop.utility_lying.push_back(r.utilities[a].to_double());
        coop.charged_truthful += t.charged[a] ? 1 : 0;
        coop.charged_lying += r.charged[a] ? 1 : 0;
      }
    }

    LiarRow vcg = base;
    vcg.mechanism = Mechanism::Vcg;
    if (proven) {
      try {
        for (int a : liars) {
          double ut = 0.0;
          double ur = 0.0;
          if (alloc_t.allocation.station_of(a) >= 0) {
            const Money p = vcg_payment(truthful, alloc_t.allocation, *solver_t, a);
            ut = (liar_value(honest, alloc_t.allocation, a) - p).to_double();
            ++vcg.charged_truthful;
          }
          if (alloc_r.allocation.station_of(a) >= 0) {
            const Money p = vcg_payment(reported, alloc_r.allocation, *solver_r, a);
            ur = (liar_value(perturbed.truth, alloc_r.allocation, a) - p).to_double();
            ++vcg.charged_lying;
          }
          vcg.utility_truthful.push_back(ut);
          vcg.utility_lying.push_back(ur);
        }
      } catch (const CounterfactualNotOptimal&) {
        vcg.status = "counterfactual_not_optimal";
        vcg.utility_truthful.clear();
        vcg.utility_lying.clear();
        vcg.charged_truthful = vcg.charged_lying = 0;
      }
    }
    per_rep[rep] = {coop, vcg};
  });
  std::vector<LiarRow> rows;
  for (auto& r : per_rep) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::string exp1_runs_csv(const std::vector<MarketRow>& rows, bool with_time) {
  std::ostringstream os;
  os << "# schema evcs-runs/1\n";
  os << "sweep_value,repetition,seed,mechanism,mode,status,serviced,mean_utility,mean_payment,budget"
     << (with_time ? ",seconds" : "") << "\n";
  for (const auto& r : rows) {
    os << r.sweep_value << ',' << r.repetition << ',' << r.seed << ',' << to_string(r.run.mechanism) << ','
       << mode_name(r.run.online) << ',' << r.run.status << ',' << r.run.serviced << ','
       << num(r.run.mean_utility) << ',' << num(r.run.mean_payment) << ',' << num(r.run.budget);
    if (with_time) os << ',' << num(r.run.seconds);
    os << "\n";
  }
  return os.str();
}

std::string exp1_csv(const std::vector<MarketRow>& rows, std::uint64_t base_seed) {
  return aggregate(rows, base_seed, "evcs-exp1/1", "n_evs", "seconds_mean,seconds_sd,serviced_mean,serviced_sd",
                   [](const auto& m) {
                     return mean_sd(m, [](const MarketRow& r) { return r.run.seconds; }) + "," +
                            mean_sd(m, [](const MarketRow& r) { return double(r.run.serviced); });
                   });
}

std::string exp2_csv(const std::vector<MarketRow>& rows, std::uint64_t base_seed) {
  return aggregate(
      rows, base_seed, "evcs-exp2/1", "n_evs",
      "serviced_mean,serviced_sd,serviced_fraction_mean,serviced_fraction_sd,utility_mean,utility_sd",
      [](const auto& m) {
        return mean_sd(m, [](const MarketRow& r) { return double(r.run.serviced); }) + "," +
               mean_sd(m,
                       [](const MarketRow& r) {
                         return r.sweep_value == 0 ? 0.0 : double(r.run.serviced) / r.sweep_value;
                       }) +
               "," + mean_sd(m, [](const MarketRow& r) { return r.run.mean_utility; });
      });
}

std::string exp3_csv(const std::vector<MarketRow>& rows, std::uint64_t base_seed) {
  return aggregate(rows, base_seed, "evcs-exp3/1", "n_evs", "payment_mean,payment_sd,budget_mean,budget_sd",
                   [](const auto& m) {
                     return mean_sd(m, [](const MarketRow& r) { return r.run.mean_payment; }) + "," +
                            mean_sd(m, [](const MarketRow& r) { return r.run.budget; });
                   });
}

std::string exp3_stations_csv(const std::vector<MarketRow>& rows, std::uint64_t base_seed) {
  return aggregate(rows, base_seed, "evcs-exp3-stations/1", "n_stations",
                   "payment_mean,payment_sd,budget_mean,budget_sd,serviced_mean,serviced_sd",
                   [](const auto& m) {
                     return mean_sd(m, [](const MarketRow& r) { return r.run.mean_payment; }) + "," +
                            mean_sd(m, [](const MarketRow& r) { return r.run.budget; }) + "," +
                            mean_sd(m, [](const MarketRow& r) { return double(r.run.serviced); });
                   });
}

std::string exp4_runs_csv(const std::vector<LiarRow>& rows) {
  std::ostringstream os;
  os << "# schema evcs-exp4-runs/1\n";
  os << "repetition,seed,mechanism,status,liars,charged_truthful,charged_lying,utility_truthful,utility_lying\n";
  for (const auto& r : rows) {
    double ut = 0.0;
    double ul = 0.0;
    for (double v : r.utility_truthful) ut += v;
    for (double v : r.utility_lying) ul += v;
    os << r.repetition << ',' << r.seed << ',' << to_string(r.mechanism) << ',' << r.status << ',' << r.liars
       << ',' << r.charged_truthful << ',' << r.charged_lying << ',' << num(ut) << ',' << num(ul) << "\n";
  }
  return os.str();
}

LiarEffect liar_effect(const std::vector<LiarRow>& rows, Mechanism mechanism) {
  std::vector<double> truthful;
  std::vector<double> lying;
  int charged_t = 0;
  int charged_l = 0;
  for (const auto& r : rows) {
    if (r.mechanism != mechanism || r.status != "optimal") continue;
    truthful.insert(truthful.end(), r.utility_truthful.begin(), r.utility_truthful.end());
    lying.insert(lying.end(), r.utility_lying.begin(), r.utility_lying.end());
    charged_t += r.charged_truthful;
    charged_l += r.charged_lying;
  }
  LiarEffect e;
  e.samples = static_cast<int>(truthful.size());
  if (e.samples == 0) return e;
  double st = 0.0;
  double sl = 0.0;
  for (std::size_t i = 0; i < truthful.size(); ++i) {
    st += truthful[i];
    sl += lying[i];
  }
  e.mean_delta = (sl - st) / e.samples;
  e.percent = st != 0.0 ? 100.0 * (sl - st) / std::fabs(st) : 0.0;
  e.charged_percent = charged_t != 0 ? 100.0 * (charged_l - charged_t) / charged_t : 0.0;
  e.p_value = stats::welch_t_test(lying, truthful).p_value;
  e.p_value_paired = stats::paired_t_test(lying, truthful).p_value;
  return e;
}

std::string exp4_csv(const std::vector<LiarRow>& rows, std::uint64_t base_seed) {
  std::ostringstream os;
  os << "# schema evcs-exp4/1\n";
  os << "mechanism,seed,reps,flagged,liar_samples,mean_utility_delta,utility_change_percent,"
        "charged_change_percent,p_value,p_value_paired\n";
  for (Mechanism m : {Mechanism::Coop, Mechanism::Vcg}) {
    int reps = 0;
    int flagged = 0;
    for (const auto& r : rows) {
      if (r.mechanism != m) continue;
      ++reps;
      flagged += r.status != "optimal";
    }
    const LiarEffect e = liar_effect(rows, m);
    os << to_string(m) << ',' << base_seed << ',' << reps << ',' << flagged << ',' << e.samples << ','
       << num(e.mean_delta) << ',' << num(e.percent) << ',' << num(e.charged_percent) << ','
       << num(e.p_value) << ',' << num(e.p_value_paired) << "\n";
  }
  return os.str();
}

int budget_crossover(const std::vector<MarketRow>& station_rows) {
  for (const auto& [key, members] : group(station_rows)) {
    const auto& [stations, mech, online] = key;
    if (static_cast<Mechanism>(mech) != Mechanism::Vcg || online) continue;
    std::vector<double> budgets;
    for (const MarketRow* r : members)
      if (!r->run.flagged()) budgets.push_back(r->run.budget);
    if (!budgets.empty() && stats::summarize(budgets).mean < 0) return stations;
  }
  return -1;
}

}  // namespace evcs::exp
