#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evcs/allocator.hpp"
#include "evcs/online.hpp"
#include "evcs/transport.hpp"

namespace evcs::io {

/// Malformed input. The message starts with the key path of the offending value,
/// e.g. `evs[2].energy_demand: expected an integer`.
class ParseError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kInstanceSchema = "evcs-instance/1";
inline constexpr std::string_view kReportSchema = "evcs-report/1";

/// Instance files hold the reported market (EV types plus geography). Money and energy
/// are integers in units of 1/scale; on reading they are converted exactly to the
/// internal scale, and values that would need rounding are rejected.
std::string scenario_to_json(const Scenario& scenario);
Scenario parse_scenario(std::string_view text);

Scenario read_scenario(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

std::string allocation_to_json(const Instance& instance, const Allocation& allocation);

std::string pricing_to_json(const Instance& instance, const PricingOutcome& outcome);

/// Columns: agent_id,station,payment,valuation,utility,charged. Money is printed as a
/// decimal with two places; `station` is empty for unassigned agents.
std::string pricing_to_csv(const Instance& instance, const PricingOutcome& outcome);

struct RunSummary {
  std::string mechanism;
  std::string mode;
  SolveStatus status = SolveStatus::Optimal;
  Money objective;  // welfare of the final schedule
  int serviced = 0;
  Money budget;
  Money total_imbalance_cost;
  Money total_payments;
  /// Written only when requested, so that default reports stay byte-reproducible.
  std::optional<double> wall_clock_seconds;
};

std::string summary_to_json(const RunSummary& summary);

/// One JSON object per clearing, newline terminated.
std::string clearing_event(const Instance& instance, const Clearing& clearing, int index);

}  // namespace evcs::io
