#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "evcs/allocator.hpp"
#include "evcs/lp/dual_simplex.hpp"

namespace evcs {

namespace {

using Simplex = lp::DualSimplex<double>;
using Clock = std::chrono::steady_clock;

constexpr double kIntTol = 1e-6;
constexpr double kBoundSlack = 1e-6;
constexpr double kCutTol = 1e-4;
constexpr int kCutRounds = 10;
constexpr std::size_t kCutsPerRound = 100;
constexpr int kRoundingPeriod = 20;
constexpr int kReliable = 4;
constexpr int kStrongCandidates = 6;
constexpr int kLookahead = 4;
constexpr std::int64_t kStrongIterations = 30;
constexpr double kMinGain = 1e-2;

struct Fixing {
  int var = -1;
  int value = 0;
};

struct Node {
  std::vector<Fixing> fixings;
  double bound = 0.0;  // parent's LP value, an upper bound for this subtree
  std::int64_t id = 0;
  // Branching that created the node, to learn pseudocosts from its LP value.
  int last_var = -1;
  int last_dir = 0;
  double last_frac = 0.0;
};

struct Branch {
  int var = -1;
  bool prefer_up = false;
  bool dead[2] = {false, false};  // child proven empty or worse than the incumbent
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

/// LP relaxation used by branch and bound. Same assignment and charge columns as the
/// model, but each cell's imbalance is written with a split load instead of m:
///
///     sum_a charge(a,l,t) = within + above,  0 <= within <= min(dem, s),  0 <= above <= max(0, s - dem)
///
/// with imbalance imbl x (dem - within + above). Capacity becomes a bound and, once the
/// assignments are fixed, the schedule polytope is a bipartite flow, so its vertices are
/// integral and branching on charge variables is only a fallback.
struct Relaxation {
  Simplex lp;
  std::vector<int> column;  // model var -> LP column, -1 for imbalance variables
  double offset = 0.0;      // constant part of the objective, raw money
};

Relaxation make_relaxation(const IpModel& model) {
  std::vector<int> column(model.vars.size(), -1);
  Eigen::Index n = 0;
  std::vector<double> cost, lo, hi;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    const IpVar& v = model.vars[j];
    if (v.kind == VarKind::Imbalance) continue;
    column[j] = static_cast<int>(n++);
    cost.push_back(-static_cast<double>(v.objective));
    lo.push_back(v.lower);
    hi.push_back(v.upper);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> row_lo, row_hi;
  Eigen::Index m = 0;
  std::vector<int> capacity(model.demand.size(), 0);
  for (const IpRow& r : model.rows) {
    if (r.family == Constraint::StationCapacity) {
      capacity[r.station * model.horizon + r.time] = static_cast<int>(r.rhs);
      continue;
    }
    if (r.family == Constraint::ImbalanceAbove || r.family == Constraint::ImbalanceBelow) continue;
    for (const auto& [j, c] : r.terms) triplets.emplace_back(m, column[j], static_cast<double>(c));
    const double rhs = static_cast<double>(r.rhs);
    row_lo.push_back(r.sense == Sense::LessEq ? -Simplex::kInf : rhs);
    row_hi.push_back(r.sense == Sense::GreaterEq ? Simplex::kInf : rhs);
    ++m;
  }

  std::vector<std::vector<int>> cell_charges(model.demand.size());
  for (std::size_t j = 0; j < model.vars.size(); ++j)
    if (model.vars[j].kind == VarKind::Charge)
      cell_charges[model.vars[j].station * model.horizon + model.vars[j].time].push_back(column[j]);

  const double imbl = static_cast<double>(model.imbalance_unit_cost);
  double offset = 0.0;
  for (std::size_t c = 0; c < model.demand.size(); ++c) {
    const int d = model.demand[c];
    offset -= imbl * d;
    for (int x : cell_charges[c]) triplets.emplace_back(m, x, 1.0);
    const Eigen::Index within = n++, above = n++;
    triplets.emplace_back(m, within, -1.0);
    triplets.emplace_back(m, above, -1.0);
    cost.push_back(-imbl);
    lo.push_back(0);
    hi.push_back(std::min(d, capacity[c]));
    cost.push_back(imbl);
    lo.push_back(0);
    hi.push_back(std::max(0, capacity[c] - d));
    row_lo.push_back(0);
    row_hi.push_back(0);
    ++m;
  }

  Simplex::Sparse a(m, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  auto vec = [](const std::vector<double>& v) {
    return Simplex::Vector(
        Eigen::Map<const Simplex::Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  return {Simplex(std::move(a), vec(cost), vec(lo), vec(hi), vec(row_lo), vec(row_hi)),
          std::move(column), offset};
}

class BranchAndBound {
 public:
  BranchAndBound(const IpModel& model, SolveOptions options)
      : model_(model), options_(options), relax_(make_relaxation(model)) {
    fixed_.assign(model.vars.size(), -1);
    by_request_.resize(model.request_ids.size());
    assign_of_.assign(model.vars.size(), -1);
    int assign = -1;
    for (int j = 0; j < static_cast<int>(model.vars.size()); ++j) {
      const IpVar& v = model.vars[j];
      if (v.request >= 0) by_request_[v.request].push_back(j);
      if (v.kind == VarKind::Assign) assign = j;
      if (v.kind == VarKind::Charge) assign_of_[j] = assign;
    }
    has_cut_.assign(model.vars.size(), false);
    pseudo_.resize(model.vars.size());

    capacity_.assign(model.demand.size(), 0);
    std::vector<int> need(model.vars.size(), 0);
    for (const IpRow& r : model.rows) {
      if (r.family == Constraint::StationCapacity) capacity_[r.station * model.horizon + r.time] = static_cast<int>(r.rhs);
      if (r.family == Constraint::MinimumCharge)
        for (const auto& [j, c] : r.terms)
          if (model.vars[j].kind == VarKind::Assign) need[j] = static_cast<int>(-c);
    }
    for (int j = 0; j < static_cast<int>(model.vars.size()); ++j) {
      const IpVar& v = model.vars[j];
      if (v.kind != VarKind::Assign) continue;
      Offer o{j, v.request, v.station, need[j], model.horizon, -1};
      for (int k = j + 1; k < static_cast<int>(model.vars.size()) && model.vars[k].kind == VarKind::Charge; ++k) {
        o.begin = std::min(o.begin, model.vars[k].time);
        o.end = std::max(o.end, model.vars[k].time + 1);
      }
      offers_.push_back(o);
    }
    pinned_load_.assign(model.demand.size(), 0);
    for (const IpVar& v : model.vars)
      if (v.kind == VarKind::Charge && v.lower == 1) ++pinned_load_[v.station * model.horizon + v.time];
  }

  SolveResult solve(const std::vector<int>& excluded) {
    const auto start = Clock::now();
    SolveResult result;
    const std::int64_t lp_before = relax_.lp.iterations();

    std::vector<Fixing> base;
    for (int a : excluded) {
      if (a < 0 || a >= static_cast<int>(by_request_.size())) continue;
      for (int j : by_request_[a]) {
        if (model_.vars[j].lower > 0) throw Error("cannot exclude a pinned request");
        base.push_back({j, 0});
      }
    }

    // Pins only (everyone else unserved) is always feasible once pins are consistent.
    std::vector<int> values(model_.vars.size(), 0);
    for (std::size_t j = 0; j < model_.vars.size(); ++j)
      if (model_.vars[j].kind != VarKind::Imbalance) values[j] = model_.vars[j].lower;
    Allocation incumbent = allocation_from_values(model_, values);
    std::int64_t best = incumbent.objective.raw();
    // Dropping agents from the last unrestricted optimum keeps it feasible, which gives
    // counterfactual solves a strong incumbent from the start.
    if (!last_full_.empty()) {
      std::vector<int> start_values = last_full_;
      for (const Fixing& f : base) start_values[f.var] = 0;
      Allocation warm = allocation_from_values(model_, start_values);
      if (warm.objective.raw() > best) {
        best = warm.objective.raw();
        incumbent = std::move(warm);
      }
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::int64_t next_id = 0;
    open.push({base, std::numeric_limits<double>::infinity(), next_id++});
    bool timed_out = false;
    root_value_ = std::numeric_limits<double>::infinity();

    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      if (std::floor(node.bound + kBoundSlack) <= static_cast<double>(best)) continue;

      // Plunge: follow the rounding direction until the subtree is pruned or integral.
      while (true) {
        if (std::chrono::duration<double>(Clock::now() - start).count() >
            options_.time_limit_seconds) {
          timed_out = true;
          break;
        }
        ++result.stats.nodes;
        apply(node.fixings);
        const double cutoff = -(static_cast<double>(best) + 1.0 - relax_.offset) + kBoundSlack;
        auto status = relax_.lp.solve(cutoff);
        for (int round = 0; status == Simplex::Status::Optimal && round < kCutRounds; ++round) {
          if (!separate_charge_bounds()) break;
          status = relax_.lp.solve(cutoff);
        }
        if (status == Simplex::Status::IterationLimit) throw Error("LP iteration limit reached");
        if (status != Simplex::Status::Optimal) break;

        const double value = relax_.offset - relax_.lp.objective();
        if (result.stats.nodes == 1) root_value_ = value;
        if (options_.audit_bounds && value > node.bound + 1e-6 * std::max(1.0, std::abs(value)))
          ++result.stats.bound_audit_failures;
        if (std::floor(value + kBoundSlack) <= static_cast<double>(best)) break;

        if (node.last_var >= 0) learn(node.last_var, node.last_dir, node.last_frac, node.bound - value);
        if (pick_branch_var() >= 0 && result.stats.nodes % kRoundingPeriod == 1) {
          round_assignments(node.fixings, best, incumbent, values);
          apply(node.fixings);
          if (relax_.lp.solve() != Simplex::Status::Optimal) throw Error("LP lost a solved node");
          if (std::floor(value + kBoundSlack) <= static_cast<double>(best)) break;
        }
        const Branch branch = choose_branch(value, best);
        if (branch.var < 0) {
          for (std::size_t j = 0; j < model_.vars.size(); ++j)
            values[j] = model_.vars[j].kind == VarKind::Imbalance
                            ? 0
                            : static_cast<int>(std::lround(relax_.lp.value(relax_.column[j])));
          Allocation found = allocation_from_values(model_, values);
          if (found.objective.raw() > best) {
            best = found.objective.raw();
            incumbent = std::move(found);
          }
          break;
        }
        const double x = relax_.lp.value(relax_.column[branch.var]);
        if (branch.dead[0] && branch.dead[1]) break;
        int near = branch.prefer_up ? 1 : 0;
        if (branch.dead[near]) near = 1 - near;
        if (!branch.dead[1 - near]) {
          Node far{node.fixings, value, next_id++, branch.var, 1 - near, x};
          far.fixings.push_back({branch.var, 1 - near});
          open.push(std::move(far));
        }
        node.fixings.push_back({branch.var, near});
        node.bound = value;
        node.id = next_id++;
        node.last_var = branch.var;
        node.last_dir = near;
        node.last_frac = x;
      }
      if (timed_out) break;
    }

    if (options_.audit_bounds && !timed_out && root_value_ < static_cast<double>(best) - 1e-6)
      ++result.stats.bound_audit_failures;

    if (excluded.empty() && !timed_out) {
      last_full_.assign(model_.vars.size(), 0);
      for (const auto& asg : incumbent.assignments)
        for (int j : by_request_[asg.request]) {
          const IpVar& v = model_.vars[j];
          if (v.station != asg.station) continue;
          if (v.kind == VarKind::Assign) last_full_[j] = 1;
        }
      for (const auto& slot : incumbent.schedule)
        for (int j : by_request_[slot.request]) {
          const IpVar& v = model_.vars[j];
          if (v.kind == VarKind::Charge && v.station == slot.station && v.time == slot.time)
            last_full_[j] = 1;
        }
    }
    result.allocation = std::move(incumbent);
    result.status = timed_out ? SolveStatus::FeasibleTimeLimited : SolveStatus::Optimal;
    result.stats.lp_iterations = relax_.lp.iterations() - lp_before;
    result.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  }

 private:
  void apply(const std::vector<Fixing>& fixings) {
    ++stamp_;
    if (seen_.size() != model_.vars.size()) seen_.assign(model_.vars.size(), 0);
    for (const auto& f : fixings) {
      seen_[f.var] = stamp_;
      if (fixed_[f.var] != f.value) {
        fixed_[f.var] = f.value;
        relax_.lp.set_bounds(relax_.column[f.var], f.value, f.value);
      }
    }
    for (int j : applied_) {
      if (seen_[j] == stamp_) continue;
      fixed_[j] = -1;
      relax_.lp.set_bounds(relax_.column[j], model_.vars[j].lower, model_.vars[j].upper);
    }
    applied_.clear();
    for (const auto& f : fixings) applied_.push_back(f.var);
  }

  /// Adds charge <= assign for the charge variables whose LP value exceeds their
  /// assignment. These rows are valid everywhere, so they stay for the rest of the run.
  /// Without them the relaxation serves a fraction of an EV by charging it in full
  /// slots, which is what makes the bound weak when stations are contested.
  bool separate_charge_bounds() {
    std::vector<std::pair<double, int>> violated;
    for (int j = 0; j < static_cast<int>(model_.vars.size()); ++j) {
      if (assign_of_[j] < 0 || has_cut_[j]) continue;
      const double gap = relax_.lp.value(relax_.column[j]) -
                         relax_.lp.value(relax_.column[assign_of_[j]]);
      if (gap > kCutTol) violated.emplace_back(gap, j);
    }
    if (violated.empty()) return false;
    std::sort(violated.begin(), violated.end(), std::greater<>());
    if (violated.size() > kCutsPerRound) violated.resize(kCutsPerRound);
    std::vector<Simplex::Row> rows;
    for (const auto& [gap, j] : violated) {
      has_cut_[j] = true;
      rows.push_back({{{relax_.column[j], 1.0}, {relax_.column[assign_of_[j]], -1.0}},
                      -Simplex::kInf,
                      0.0});
    }
    relax_.lp.add_rows(rows);
    return true;
  }

  /// Pseudocost record of one variable: mean bound loss per unit of change, per direction.
  struct Pseudocost {
    double sum[2] = {0.0, 0.0};
    int count[2] = {0, 0};
  };

  void learn(int var, int dir, double frac, double loss) {
    const double dist = dir == 1 ? 1.0 - frac : frac;
    if (dist < kIntTol) return;
    Pseudocost& p = pseudo_[var];
    p.sum[dir] += std::max(0.0, loss) / dist;
    ++p.count[dir];
    all_sum_[dir] += std::max(0.0, loss) / dist;
    ++all_count_[dir];
  }

  double estimate(int var, int dir) const {
    const Pseudocost& p = pseudo_[var];
    if (p.count[dir] > 0) return p.sum[dir] / p.count[dir];
    return all_count_[dir] > 0 ? all_sum_[dir] / all_count_[dir] : 1.0;
  }

  /// Reliability branching on assignment variables: candidates whose pseudocosts rest on
  /// too few observations are evaluated by a few dual simplex iterations per child.
  /// Falls back to the most fractional charge variable when every assignment is integral.
  Branch choose_branch(double value, std::int64_t best) {
    struct Candidate {
      int var;
      double frac;
      double score;
    };
    std::vector<Candidate> cands;
    for (const Offer& o : offers_) {
      const double x = relax_.lp.value(relax_.column[o.assign]);
      if (x <= kIntTol || x >= 1.0 - kIntTol) continue;
      cands.push_back({o.assign, x, 0.0});
    }
    Branch out;
    if (cands.empty()) {
      out.var = pick_branch_var();
      if (out.var >= 0) out.prefer_up = relax_.lp.value(relax_.column[out.var]) >= 0.5;
      return out;
    }
    auto product = [](double down, double up) {
      return std::max(down, kMinGain) * std::max(up, kMinGain);
    };
    for (Candidate& c : cands)
      c.score = product(c.frac * estimate(c.var, 0), (1.0 - c.frac) * estimate(c.var, 1));
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.score > b.score; });

    const double cutoff = -(static_cast<double>(best) + 1.0 - relax_.offset) + kBoundSlack;
    bool saved = false;
    int strong = 0;
    int lookahead = 0;
    double best_score = -1.0;
    for (const Candidate& c : cands) {
      const Pseudocost& p = pseudo_[c.var];
      const bool reliable = std::min(p.count[0], p.count[1]) >= kReliable;
      double score = c.score;
      double gain[2] = {c.frac * estimate(c.var, 0), (1.0 - c.frac) * estimate(c.var, 1)};
      bool dead[2] = {false, false};
      if (!reliable && strong < kStrongCandidates) {
        ++strong;
        if (!saved) {
          relax_.lp.save(state_);
          saved = true;
        }
        const int col = relax_.column[c.var];
        for (int dir = 0; dir < 2; ++dir) {
          relax_.lp.set_bounds(col, dir, dir);
          const auto st = relax_.lp.solve(cutoff, kStrongIterations);
          if (st == Simplex::Status::Infeasible || st == Simplex::Status::Cutoff) {
            dead[dir] = true;
          } else {
            const double child = relax_.offset - relax_.lp.objective();
            gain[dir] = std::max(0.0, value - child);
            if (std::floor(child + kBoundSlack) <= static_cast<double>(best)) dead[dir] = true;
            else if (st == Simplex::Status::Optimal) learn(c.var, dir, c.frac, gain[dir]);
          }
          relax_.lp.restore(state_);
        }
        if (dead[0] || dead[1]) {
          // One side is settled, so branching here costs at most one child.
          out = {c.var, !dead[1], {dead[0], dead[1]}};
          return out;
        }
        score = product(gain[0], gain[1]);
      }
      if (score > best_score) {
        best_score = score;
        out = {c.var, gain[1] <= gain[0], {false, false}};
        lookahead = 0;
      } else if (++lookahead >= kLookahead && strong > 0) {
        break;
      }
    }
    return out;
  }

  int pick_branch_var() const {
    int best = -1;
    double best_score = 0.0;
    for (VarKind kind : {VarKind::Assign, VarKind::Charge}) {
      for (int j = 0; j < static_cast<int>(model_.vars.size()); ++j) {
        if (model_.vars[j].kind != kind) continue;
        const double x = relax_.lp.value(relax_.column[j]);
        const double frac = x - std::floor(x);
        if (frac <= kIntTol || frac >= 1.0 - kIntTol) continue;
        const double score = 0.5 - std::abs(frac - 0.5);
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
      if (best >= 0) return best;
    }
    return -1;
  }

  struct Offer {
    int assign = -1;
    int request = -1;
    int station = -1;
    int need = 0;    // minimum number of charging slots
    int begin = 0;   // charging window [begin, end)
    int end = 0;
  };

  /// Earliest-deadline-first check that the chosen offers fit one station next to the
  /// load fixed by pins. Sound for any windows, exact for contiguous ones.
  bool station_fits(int station, const std::vector<int>& chosen) const {
    const int horizon = model_.horizon;
    std::vector<int> left;
    for (int i : chosen) left.push_back(offers_[i].need);
    std::vector<int> order;
    for (int t = 0; t < horizon; ++t) {
      int free = capacity_[station * horizon + t] - pinned_load_[station * horizon + t];
      order.clear();
      for (std::size_t c = 0; c < chosen.size(); ++c) {
        const Offer& o = offers_[chosen[c]];
        if (left[c] == 0 || t < o.begin || t >= o.end) continue;
        if (left[c] > o.end - t) return false;
        order.push_back(static_cast<int>(c));
      }
      std::sort(order.begin(), order.end(),
                [&](int x, int y) { return offers_[chosen[x]].end < offers_[chosen[y]].end; });
      for (int c : order) {
        if (free == 0) break;
        --left[c];
        --free;
      }
    }
    return std::all_of(left.begin(), left.end(), [](int v) { return v == 0; });
  }

  /// LP-guided rounding: offers are taken greedily by LP assignment value and kept
  /// when the station still fits; then every assignment is fixed and the remaining LP,
  /// which has integral vertices, gives the schedule.
  bool round_assignments(const std::vector<Fixing>& fixings, std::int64_t& best,
                         Allocation& incumbent, std::vector<int>& values) {
    std::vector<double> score(offers_.size());
    std::vector<int> order;
    for (std::size_t i = 0; i < offers_.size(); ++i) {
      const int j = offers_[i].assign;
      if (model_.vars[j].lower == model_.vars[j].upper) continue;
      if (fixed_[j] == 0) continue;
      score[i] = fixed_[j] == 1 ? 2.0 : relax_.lp.value(relax_.column[j]);
      if (score[i] <= kIntTol) continue;
      order.push_back(static_cast<int>(i));
    }
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return score[x] > score[y]; });

    std::vector<bool> served(model_.request_ids.size(), false);
    std::vector<std::vector<int>> at(model_.station_count);
    std::vector<Fixing> all = fixings;
    for (const Offer& o : offers_)
      if (model_.vars[o.assign].lower == 1) served[o.request] = true;
    for (int i : order) {
      const Offer& o = offers_[i];
      if (served[o.request]) continue;
      at[o.station].push_back(i);
      if (station_fits(o.station, at[o.station])) {
        served[o.request] = true;
      } else {
        at[o.station].pop_back();
        if (fixed_[o.assign] == 1) return false;
      }
    }
    std::vector<bool> chosen(model_.vars.size(), false);
    for (const auto& list : at)
      for (int i : list) chosen[offers_[i].assign] = true;
    for (const Offer& o : offers_)
      if (model_.vars[o.assign].lower != model_.vars[o.assign].upper)
        all.push_back({o.assign, chosen[o.assign] ? 1 : 0});

    apply(all);
    const double cutoff = -(static_cast<double>(best) + 1.0 - relax_.offset) + kBoundSlack;
    if (relax_.lp.solve(cutoff) != Simplex::Status::Optimal) return false;
    if (pick_branch_var() >= 0) return false;
    for (std::size_t j = 0; j < model_.vars.size(); ++j)
      values[j] = model_.vars[j].kind == VarKind::Imbalance
                      ? 0
                      : static_cast<int>(std::lround(relax_.lp.value(relax_.column[j])));
    Allocation found = allocation_from_values(model_, values);
    if (found.objective.raw() <= best) return false;
    best = found.objective.raw();
    incumbent = std::move(found);
    return true;
  }

  const IpModel& model_;
  SolveOptions options_;
  Relaxation relax_;
  std::vector<int> fixed_;
  std::vector<int> applied_;
  std::vector<int> seen_;
  int stamp_ = 0;
  double root_value_ = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> by_request_;
  std::vector<int> assign_of_;  // charge var -> its assignment var
  std::vector<bool> has_cut_;
  std::vector<int> last_full_;  // 0/1 values of the last proven unrestricted optimum
  std::vector<Offer> offers_;
  std::vector<int> capacity_;     // per cell
  std::vector<int> pinned_load_;  // per cell
  std::vector<Pseudocost> pseudo_;
  double all_sum_[2] = {0.0, 0.0};
  int all_count_[2] = {0, 0};
  Simplex::State state_;
};

class ExactSolver final : public AllocationSolver {
 public:
  ExactSolver(const Instance& instance, const SolveOptions& options)
      : model_(build_model(instance)), bnb_(model_, options) {}

  SolveResult solve(const std::vector<int>& excluded) override { return bnb_.solve(excluded); }

 private:
  IpModel model_;
  BranchAndBound bnb_;
};

class BruteForceSolver final : public AllocationSolver {
 public:
  explicit BruteForceSolver(const Instance& instance) : instance_(instance) {}
  SolveResult solve(const std::vector<int>& excluded) override {
    const auto start = Clock::now();
    SolveResult r;
    r.allocation = solve_bruteforce(instance_, excluded);
    r.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
  }

 private:
  Instance instance_;
};

}  // namespace

SolveResult solve_exact(const IpModel& model, const SolveOptions& options) {
  BranchAndBound bnb(model, options);
  return bnb.solve({});
}

SolveResult solve_exact(const Instance& instance, const SolveOptions& options) {
  return solve_exact(build_model(instance), options);
}

std::unique_ptr<AllocationSolver> make_exact_solver(const Instance& instance,
                                                    const SolveOptions& options) {
  return std::make_unique<ExactSolver>(instance, options);
}

std::unique_ptr<AllocationSolver> make_bruteforce_solver(const Instance& instance) {
  return std::make_unique<BruteForceSolver>(instance);
}

}  // namespace evcs
