#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "drama/command.hpp"
#include "drama/config.hpp"

namespace drama {

/// Latency and energy of one or more traces on a single subarray, plus an
/// optional host-side taxon-assignment share.
struct Report {
  std::size_t act_count = 0;
  std::size_t pre_count = 0;
  std::size_t truncated_pre_count = 0;
  Duration search_latency{0};
  double command_energy_pj = 0.0;
  double background_energy_pj = 0.0;

  std::size_t assigned_queries = 0;
  Duration assignment_latency{0};
  double assignment_energy_pj = 0.0;

  std::size_t command_count() const { return act_count + pre_count; }
  double search_energy_pj() const { return command_energy_pj + background_energy_pj; }
  Duration total_latency() const { return search_latency + assignment_latency; }
  double total_energy_pj() const { return search_energy_pj() + assignment_energy_pj; }
  double search_latency_share() const;
  double search_energy_share() const;

  Report& operator+=(const Report& other);
  friend Report operator+(Report a, const Report& b) { return a += b; }
};

/// latency = sum of gaps; energy = per-command energies + background x
/// latency. Throws negative_gap.
Report account(const CommandTrace& trace, const TimingModel& timing, const EnergyModel& energy);

/// Charges the fixed per-query host assignment cost.
Report with_assignment(Report report, std::size_t queries, const EnergyModel& energy);

/// Energy of conventional refresh over an idle period (0 unless enabled).
double idle_refresh_energy_pj(Duration idle, const TimingModel& timing,
                              const EnergyModel& energy);

struct ThroughputEstimate {
  double kmers_per_second = 0.0;
  double average_power_w = 0.0;
  std::vector<std::string> assumptions;
};

/// kmers_per_compare x chips x banks / compare latency. Uses the report's
/// total latency, so host assignment, if charged, slows the estimate.
ThroughputEstimate throughput_estimate(const DeviceConfig& device, const Report& report,
                                       std::size_t kmers_per_compare);

std::string report_json(const Report& report, const ThroughputEstimate* estimate = nullptr);
std::string report_table(const Report& report, const ThroughputEstimate* estimate = nullptr);

}  // namespace drama
