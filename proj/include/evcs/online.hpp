#pragma once

#include <string>
#include <vector>

#include "evcs/allocator.hpp"
#include "evcs/pricing.hpp"

namespace evcs {

/// Strictly increasing clearing times; the last may equal the horizon.
struct ClearingSchedule {
  std::vector<int> points;

  /// k x horizon / count for k = 1..count, rounded; {10, 20, 30, 40, 50} for 5 over 50.
  static ClearingSchedule evenly(int horizon, int count);
};

enum class Mechanism { Coop, Vcg };
std::string to_string(Mechanism m);
Mechanism mechanism_from_string(const std::string& s);

struct OnlineOptions {
  Mechanism mechanism = Mechanism::Vcg;
  double incr = 0.025;
  /// Agents left unserved stay eligible at later clearings while their window still fits.
  bool carryover = false;
  SolveOptions solve;
};

struct Clearing {
  int time = 0;
  std::vector<int> eligible;  // request indices of the full instance
  Instance instance;          // requests: committed ones (pinned) followed by eligible ones
  std::vector<int> request_map;  // clearing request index -> full request index
  SolveStatus status = SolveStatus::Optimal;
  PricingOutcome outcome;  // indexed like instance.requests
  std::vector<Pin> added;  // commitments made here, in full-instance indices
};

struct OnlineResult {
  std::vector<Clearing> clearings;
  Allocation combined;  // every commitment, against the full instance
  /// Per full-instance request: payment, valuation, utility, charged at its clearing.
  PricingOutcome outcome;
  bool time_limited = false;
};

/// Periodic market clearing. Agents report at their start time; clearing p takes the
/// reports from [t_{p-1}, t_p), cannot schedule before t_p, and never touches earlier
/// commitments.
OnlineResult run_online(const Instance& instance, const ClearingSchedule& schedule,
                        const OnlineOptions& options);

}  // namespace evcs
