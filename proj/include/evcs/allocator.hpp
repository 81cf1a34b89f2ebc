#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "evcs/model.hpp"

namespace evcs {

class InfeasiblePin : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

/// Constraint families of the scheduling program.
enum class Constraint : std::uint8_t {
  SingleStation,    // an EV is served by at most one station
  Reachability,     // the station must be in the EV's feasible set
  MinimumCharge,    // enough time points to cover the energy demand
  ChargingWindow,   // no charging outside [arrival, departure)
  BatteryCapacity,  // delivered energy fits in the battery
  StationCapacity,  // at most `slots` EVs charge at a station at once
  ImbalanceAbove,   // m >= load - demand
  ImbalanceBelow,   // m >= demand - load
  Unassigned,       // charging at a station the EV is not assigned to
  Pin,              // prior commitments are preserved
};

std::string to_string(Constraint c);

enum class VarKind : std::uint8_t { Assign, Charge, Imbalance };
enum class Sense : std::uint8_t { LessEq, GreaterEq, Equal };

struct IpVar {
  VarKind kind = VarKind::Assign;
  int request = -1;
  int station = -1;
  int time = -1;
  int lower = 0;
  int upper = 1;
  std::int64_t objective = 0;  // raw money, maximized
};

struct IpRow {
  Constraint family = Constraint::SingleStation;
  Sense sense = Sense::LessEq;
  std::int64_t rhs = 0;
  std::vector<std::pair<int, std::int64_t>> terms;
  int request = -1;
  int station = -1;
  int time = -1;
};

/// 0-1 program of one instance. Charge variables exist only inside each EV's window
/// and imbalance is linearized with one nonnegative variable and two rows per cell.
struct IpModel {
  std::vector<IpVar> vars;
  std::vector<IpRow> rows;
  int horizon = 0;
  int station_count = 0;
  std::vector<int> demand;  // station-major, station * horizon + t
  std::int64_t imbalance_unit_cost = 0;
  std::vector<std::string> request_ids;
  std::vector<std::string> station_ids;

  int count(VarKind kind) const;
  int count(Constraint family) const;

  /// CPLEX LP-format text, for cross-checking with external solvers.
  std::string to_lp_format() const;
};

IpModel build_model(const Instance& instance);

enum class SolveStatus : std::uint8_t { Optimal, FeasibleTimeLimited, Infeasible };
std::string to_string(SolveStatus s);

struct SolveOptions {
  double time_limit_seconds = 300.0;
#ifdef NDEBUG
  bool audit_bounds = false;
#else
  bool audit_bounds = true;
#endif
};

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  std::int64_t bound_audit_failures = 0;
  double seconds = 0.0;
};

struct SolveResult {
  Allocation allocation;
  SolveStatus status = SolveStatus::Optimal;
  SolveStats stats;
};

/// Builds an allocation from 0/1 values of the assign and charge variables; the
/// objective is recomputed exactly in fixed point.
Allocation allocation_from_values(const IpModel& model, const std::vector<int>& values);

/// Exact branch and bound. The relaxation is strengthened with charge <= assignment
/// cuts added as they are violated; branching is on assignment variables (pseudocosts
/// seeded by strong branching), falling back to charge variables; LP bounds come from
/// a bounded dual simplex warm-started across nodes. An LP-guided rounding heuristic
/// supplies incumbents.
SolveResult solve_exact(const IpModel& model, const SolveOptions& options = {});
SolveResult solve_exact(const Instance& instance, const SolveOptions& options = {});

/// Exhaustive oracle for tiny instances: every station assignment, and for each
/// station a dynamic program over time on per-EV charge counts.
/// Limits: at most 4 requests, 3 stations, 10 time points.
Allocation solve_bruteforce(const Instance& instance, const std::vector<int>& excluded = {});

/// A solver bound to one instance that can re-solve with agents removed.
class AllocationSolver {
 public:
  virtual ~AllocationSolver() = default;
  virtual SolveResult solve(const std::vector<int>& excluded) = 0;
  SolveResult solve() { return solve({}); }
};

std::unique_ptr<AllocationSolver> make_exact_solver(const Instance& instance,
                                                    const SolveOptions& options = {});
std::unique_ptr<AllocationSolver> make_bruteforce_solver(const Instance& instance);

struct Violation {
  Constraint constraint = Constraint::SingleStation;
  int request = -1;
  int station = -1;
  int time = -1;
  std::string message;
};

std::vector<Violation> validate_allocation(const Instance& instance, const Allocation& allocation);

}  // namespace evcs
