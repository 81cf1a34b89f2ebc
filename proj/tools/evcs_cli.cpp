// evcs: generate markets, solve and price them, run the experiments.
//
// Exit codes: 0 proven optimum, 2 time-limited incumbent (or VCG payments unavailable
// because a counterfactual hit the limit), 1 bad input or infeasible commitments.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evcs/allocator.hpp"
#include "evcs/experiments.hpp"
#include "evcs/io.hpp"
#include "evcs/online.hpp"
#include "evcs/pricing.hpp"
#include "evcs/scenario.hpp"

namespace fs = std::filesystem;
using namespace evcs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitTimeLimited = 2;

struct Global {
  std::uint64_t seed = 1;
  double time_limit = 300.0;
  std::string out = "out";
};

struct MarketFlags {
  int n_evs = 30;
  int n_stations = 4;
  int horizon = 24;
  double elec_cost = ScenarioParams{}.elec_cost;
  double imbalance_cost = ScenarioParams{}.imbalance_cost;

  void add(CLI::App* app) {
    app->add_option("--n-evs", n_evs, "Number of EVs")->check(CLI::NonNegativeNumber);
    app->add_option("--n-stations", n_stations, "Number of stations")->check(CLI::NonNegativeNumber);
    app->add_option("--horizon", horizon, "Time points")->check(CLI::PositiveNumber);
    app->add_option("--elec-cost", elec_cost, "Electricity cost per energy unit");
    app->add_option("--imbalance-cost", imbalance_cost, "Cost per unit of demand deviation");
  }

  ScenarioParams params(std::uint64_t seed) const {
    ScenarioParams p;
    p.n_evs = n_evs;
    p.n_stations = n_stations;
    p.horizon = horizon;
    p.seed = seed;
    p.elec_cost = elec_cost;
    p.imbalance_cost = imbalance_cost;
    return p;
  }
};

struct SolveFlags {
  std::string instance;
  std::string mechanism = "vcg";
  std::string mode = "offline";
  double incr = 0.025;
  int clearings = 5;
  bool carryover = false;
  bool timing = false;
  bool write_lp = false;
};

Money total_payments(const PricingOutcome& outcome) {
  Money sum;
  for (std::size_t a = 0; a < outcome.charged.size(); ++a)
    if (outcome.charged[a]) sum += outcome.payments[a];
  return sum;
}

void write_pricing(const fs::path& dir, const Instance& instance, const PricingOutcome& outcome) {
  io::write_text(dir / "pricing.json", io::pricing_to_json(instance, outcome));
  io::write_text(dir / "pricing.csv", io::pricing_to_csv(instance, outcome));
}

int cmd_gen(const Global& g, const MarketFlags& m) {
  const Scenario sc = generate(m.params(g.seed));
  const fs::path file = fs::path(g.out) / "instance.json";
  io::write_text(file, io::scenario_to_json(sc));
  std::cout << "wrote " << file.string() << " (" << sc.evs.size() << " EVs, " << sc.stations.size()
            << " stations)\n";
  return kExitOk;
}

int cmd_solve(const Global& g, const SolveFlags& f) {
  const auto start = std::chrono::steady_clock::now();
  const Instance instance = resolve(io::read_scenario(f.instance));
  const Mechanism mechanism = mechanism_from_string(f.mechanism);
  const fs::path dir(g.out);
  SolveOptions options;
  options.time_limit_seconds = g.time_limit;

  io::RunSummary summary;
  summary.mechanism = f.mechanism;
  summary.mode = f.mode;
  int code = kExitOk;
  std::string warning;

  if (f.write_lp) io::write_text(dir / "model.lp", build_model(instance).to_lp_format());

  if (f.mode == "offline") {
    auto solver = make_exact_solver(instance, options);
    const SolveResult solved = solver->solve();
    summary.status = solved.status;
    io::write_text(dir / "allocation.json", io::allocation_to_json(instance, solved.allocation));
    PricingOutcome outcome;
    bool priced = true;
    if (mechanism == Mechanism::Coop) {
      outcome = price_coop(instance, solved.allocation, f.incr);
    } else if (solved.status != SolveStatus::Optimal) {
      priced = false;
      warning = "allocation not proven optimal; VCG payments withheld";
    } else {
      try {
        outcome = price_vcg(instance, solved.allocation, *solver);
      } catch (const CounterfactualNotOptimal& e) {
        priced = false;
        warning = e.what();
      }
    }
    if (solved.status != SolveStatus::Optimal || !priced) code = kExitTimeLimited;
    if (priced) {
      write_pricing(dir, instance, outcome);
      summary.objective = outcome.final_allocation.objective;
      summary.serviced = outcome.charged_count();
      summary.budget = outcome.budget;
      summary.total_imbalance_cost = outcome.total_imbalance_cost;
      summary.total_payments = total_payments(outcome);
    } else {
      summary.objective = solved.allocation.objective;
      summary.serviced = static_cast<int>(solved.allocation.assignments.size());
      summary.total_imbalance_cost = imbalance_cost(solved.allocation, instance).total;
    }
  } else if (f.mode == "online") {
    OnlineOptions opts;
    opts.mechanism = mechanism;
    opts.incr = f.incr;
    opts.carryover = f.carryover;
    opts.solve = options;
    try {
      const OnlineResult result =
          run_online(instance, ClearingSchedule::evenly(instance.time_grid.horizon_len, f.clearings), opts);
      std::string events;
      for (std::size_t p = 0; p < result.clearings.size(); ++p)
        events += io::clearing_event(instance, result.clearings[p], static_cast<int>(p));
      io::write_text(dir / "events.jsonl", events);
      io::write_text(dir / "allocation.json", io::allocation_to_json(instance, result.combined));
      write_pricing(dir, instance, result.outcome);
      summary.status = result.time_limited ? SolveStatus::FeasibleTimeLimited : SolveStatus::Optimal;
      summary.objective = result.combined.objective;
      summary.serviced = result.outcome.charged_count();
      summary.budget = result.outcome.budget;
      summary.total_imbalance_cost = result.outcome.total_imbalance_cost;
      summary.total_payments = total_payments(result.outcome);
      if (result.time_limited) code = kExitTimeLimited;
    } catch (const CounterfactualNotOptimal& e) {
      summary.status = SolveStatus::FeasibleTimeLimited;
      warning = e.what();
      code = kExitTimeLimited;
    }
  } else {
    throw CLI::ValidationError("--mode", "expected offline or online");
  }

  if (f.timing)
    summary.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  io::write_text(dir / "summary.json", io::summary_to_json(summary));
  if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
  std::cout << to_string(summary.status) << ": objective " << summary.objective << ", serviced "
            << summary.serviced << ", budget " << summary.budget << "\n";
  return code;
}

int cmd_calibrate(const Global& g, const MarketFlags& m, int scenarios, double step) {
  std::vector<Instance> instances;
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < scenarios; ++k) {
    seeds.push_back(exp::run_seed(g.seed, m.n_evs, k));
    instances.push_back(resolve(generate(m.params(seeds.back()))));
  }
  SolveOptions options;
  options.time_limit_seconds = g.time_limit;
  const IncrCalibration cal = calibrate_incr(instances, step, options);
  std::ostringstream os;
  os << "scenario,seed,incr\n";
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", cal.per_scenario[k]);
    os << k << ',' << seeds[k] << ',' << buf << '\n';
  }
  io::write_text(fs::path(g.out) / "calibration.csv", os.str());
  std::printf("mean incr %.4f over %d scenarios\n", cal.mean, scenarios);
  return kExitOk;
}

struct ExpFlags {
  int which = 1;
  std::vector<int> ev_counts{10, 20, 30};
  std::vector<int> station_counts{6, 8, 10, 12, 14, 16, 18};
  int station_sweep_evs = 30;
  int reps = 5;
  int jobs = 1;
  int clearings = 5;
  double incr = 0.025;
  double liar_fraction = 0.10;
  double liar_multiplier = 1.80;
};

int cmd_exp(const Global& g, const MarketFlags& m, const ExpFlags& f) {
  exp::Config cfg;
  cfg.ev_counts = f.ev_counts;
  cfg.station_counts = f.station_counts;
  cfg.station_sweep_evs = f.station_sweep_evs;
  cfg.repetitions = f.reps;
  cfg.seed = g.seed;
  cfg.market = m.params(g.seed);
  cfg.incr = f.incr;
  cfg.clearings = f.clearings;
  cfg.time_limit_seconds = g.time_limit;
  cfg.jobs = f.jobs;
  cfg.liar_fraction = f.liar_fraction;
  cfg.liar_multiplier = f.liar_multiplier;
  const fs::path dir(g.out);

  int flagged = 0;
  auto count_flags = [&](const std::vector<exp::MarketRow>& rows) {
    for (const auto& r : rows) flagged += r.run.flagged();
  };

  switch (f.which) {
    case 1: {
      const auto rows = exp::sweep_evs(cfg);
      count_flags(rows);
      io::write_text(dir / "exp1_runs.csv", exp::exp1_runs_csv(rows));
      io::write_text(dir / "exp1.csv", exp::exp1_csv(rows, cfg.seed));
      break;
    }
    case 2: {
      const auto rows = exp::sweep_evs(cfg);
      count_flags(rows);
      io::write_text(dir / "exp2_runs.csv", exp::exp1_runs_csv(rows, false));
      io::write_text(dir / "exp2.csv", exp::exp2_csv(rows, cfg.seed));
      break;
    }
    case 3: {
      const auto rows = exp::sweep_evs(cfg);
      const auto station_rows = exp::sweep_stations(cfg);
      count_flags(rows);
      count_flags(station_rows);
      io::write_text(dir / "exp3_runs.csv", exp::exp1_runs_csv(rows, false));
      io::write_text(dir / "exp3.csv", exp::exp3_csv(rows, cfg.seed));
      io::write_text(dir / "exp3_stations_runs.csv", exp::exp1_runs_csv(station_rows, false));
      io::write_text(dir / "exp3_stations.csv", exp::exp3_stations_csv(station_rows, cfg.seed));
      const int crossover = exp::budget_crossover(station_rows);
      if (crossover < 0) std::cout << "VCG budget stays nonnegative over the station sweep\n";
      else std::cout << "VCG budget turns negative at " << crossover << " stations\n";
      break;
    }
    case 4: {
      for (int n : cfg.ev_counts) {
        const auto rows = exp::run_liars(cfg, n);
        for (const auto& r : rows) flagged += r.status != "optimal";
        const std::string tag = std::to_string(n);
        io::write_text(dir / ("exp4_runs_" + tag + ".csv"), exp::exp4_runs_csv(rows));
        io::write_text(dir / ("exp4_" + tag + ".csv"), exp::exp4_csv(rows, cfg.seed));
        for (Mechanism mech : {Mechanism::Coop, Mechanism::Vcg}) {
          const exp::LiarEffect e = exp::liar_effect(rows, mech);
          std::printf("%d EVs %s: liar utility %+.2f%% (p=%.3g), charged liars %+.2f%%\n", n,
                      to_string(mech).c_str(), e.percent, e.p_value, e.charged_percent);
        }
      }
      break;
    }
    default:
      throw CLI::ValidationError("exp", "experiment must be 1, 2, 3 or 4");
  }
  if (flagged > 0) std::cerr << "warning: " << flagged << " runs flagged (time limit), see *_runs.csv\n";
  std::cout << "wrote experiment " << f.which << " reports to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EV charging station allocation: exact scheduling with Coop and VCG pricing"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--time-limit", g.time_limit, "Seconds per exact solve")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  MarketFlags market;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance (writes instance.json)");
  market.add(gen);

  SolveFlags sf;
  auto add_solve_flags = [&](CLI::App* cmd) {
    cmd->add_option("instance", sf.instance, "Instance JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--mechanism", sf.mechanism, "coop or vcg")
        ->check(CLI::IsMember({"coop", "vcg"}))
        ->capture_default_str();
    cmd->add_option("--incr", sf.incr, "Coop markup over electricity cost")->capture_default_str();
    cmd->add_option("--clearings", sf.clearings, "Online clearing count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--carryover", sf.carryover, "Online: unserved agents stay eligible");
    cmd->add_flag("--timing", sf.timing, "Add wall-clock seconds to summary.json");
    cmd->add_flag("--write-lp", sf.write_lp, "Also write the program in LP format (model.lp)");
  };
  auto* solve = app.add_subcommand("solve", "Solve and price an instance");
  add_solve_flags(solve);
  solve->add_option("--mode", sf.mode, "offline or online")
      ->check(CLI::IsMember({"offline", "online"}))
      ->capture_default_str();
  auto* online = app.add_subcommand("online", "Same as solve --mode online; also writes events.jsonl");
  add_solve_flags(online);

  int scenarios = 10;
  double step = 0.001;
  auto* calibrate = app.add_subcommand("calibrate-incr", "Smallest Coop markup with a positive budget");
  market.add(calibrate);
  calibrate->add_option("--scenarios", scenarios, "Number of generated scenarios")->capture_default_str();
  calibrate->add_option("--step", step, "Search step")->capture_default_str();

  ExpFlags ef;
  auto* experiment = app.add_subcommand("exp", "Run experiment 1, 2, 3 or 4");
  experiment->add_option("which", ef.which, "Experiment number")->required()->check(CLI::Range(1, 4));
  market.add(experiment);
  experiment->add_option("--ev-counts", ef.ev_counts, "EV-count sweep")->delimiter(',')->capture_default_str();
  experiment->add_option("--station-counts", ef.station_counts, "Station sweep (experiment 3)")
      ->delimiter(',')
      ->capture_default_str();
  experiment->add_option("--station-sweep-evs", ef.station_sweep_evs, "EVs in the station sweep")
      ->capture_default_str();
  experiment->add_option("--reps", ef.reps, "Repetitions per sweep point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--jobs", ef.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  experiment->add_option("--clearings", ef.clearings, "Online clearing count")->capture_default_str();
  experiment->add_option("--incr", ef.incr, "Coop markup")->capture_default_str();
  experiment->add_option("--liar-fraction", ef.liar_fraction, "Experiment 4 liar share")->capture_default_str();
  experiment->add_option("--liar-multiplier", ef.liar_multiplier, "Experiment 4 valuation factor")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(g, market);
    if (solve->parsed()) return cmd_solve(g, sf);
    if (online->parsed()) {
      sf.mode = "online";
      return cmd_solve(g, sf);
    }
    if (calibrate->parsed()) return cmd_calibrate(g, market, scenarios, step);
    if (experiment->parsed()) return cmd_exp(g, market, ef);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const InfeasiblePin& e) {
    std::cerr << "error: infeasible: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
