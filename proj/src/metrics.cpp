#include "drama/metrics.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "drama/error.hpp"

namespace drama {

namespace {

double ratio(double part, double whole) { return whole <= 0.0 ? 0.0 : part / whole; }

}  // namespace

double Report::search_latency_share() const {
  return ratio(static_cast<double>(search_latency.count()),
               static_cast<double>(total_latency().count()));
}

double Report::search_energy_share() const {
  return ratio(search_energy_pj(), total_energy_pj());
}

Report& Report::operator+=(const Report& other) {
  act_count += other.act_count;
  pre_count += other.pre_count;
  truncated_pre_count += other.truncated_pre_count;
  search_latency += other.search_latency;
  command_energy_pj += other.command_energy_pj;
  background_energy_pj += other.background_energy_pj;
  assigned_queries += other.assigned_queries;
  assignment_latency += other.assignment_latency;
  assignment_energy_pj += other.assignment_energy_pj;
  return *this;
}

Report account(const CommandTrace& trace, const TimingModel& timing, const EnergyModel& energy) {
  Report r;
  for (const auto& cmd : trace) {
    if (cmd.gap_after < Duration{0}) fail(ErrorCode::negative_gap, "trace has a negative gap");
    if (cmd.is_act()) {
      ++r.act_count;
    } else {
      ++r.pre_count;
      if (cmd.gap_after < timing.t_rp) ++r.truncated_pre_count;
    }
    r.search_latency += cmd.gap_after;
  }
  r.command_energy_pj = static_cast<double>(r.act_count) * energy.act_pj +
                        static_cast<double>(r.pre_count) * energy.pre_pj +
                        static_cast<double>(r.truncated_pre_count) * energy.micro_op_pj;
  r.background_energy_pj = energy.background_mw_per_bank * to_ns(r.search_latency);
  return r;
}

Report with_assignment(Report report, std::size_t queries, const EnergyModel& energy) {
  report.assigned_queries += queries;
  report.assignment_latency += from_ns(energy.host_assign_ns_per_query * static_cast<double>(queries));
  report.assignment_energy_pj += energy.host_assign_pj_per_query * static_cast<double>(queries);
  return report;
}

double idle_refresh_energy_pj(Duration idle, const TimingModel& timing, const EnergyModel& energy) {
  if (!energy.conventional_refresh || idle <= Duration{0}) return 0.0;
  return energy.refresh_pj_per_interval * static_cast<double>(idle.count()) /
         static_cast<double>(timing.refresh_interval.count());
}

ThroughputEstimate throughput_estimate(const DeviceConfig& device, const Report& report,
                                       std::size_t kmers_per_compare) {
  const Duration latency = report.total_latency();
  if (latency <= Duration{0}) fail(ErrorCode::zero_latency, "throughput needs a nonzero compare latency");
  const double parallel = static_cast<double>(device.chips * device.banks_per_chip);
  const double seconds = static_cast<double>(latency.count()) * 1e-12;

  ThroughputEstimate est;
  est.kmers_per_second = static_cast<double>(kmers_per_compare) * parallel / seconds;
  // pJ per ps is W.
  est.average_power_w = report.total_energy_pj() * parallel / static_cast<double>(latency.count());

  std::ostringstream s;
  s << device.chips << " chips x " << device.banks_per_chip
    << " banks compare in parallel, one subarray per bank (no subarray-level parallelism)";
  est.assumptions.push_back(s.str());
  s.str("");
  s << kmers_per_compare << " stored k-mers checked per compare (one per column)";
  est.assumptions.push_back(s.str());
  s.str("");
  s << std::fixed << std::setprecision(2) << "compare latency " << to_ns(latency) << " ns (search "
    << to_ns(report.search_latency) << " ns + host assignment " << to_ns(report.assignment_latency)
    << " ns)";
  est.assumptions.push_back(s.str());
  est.assumptions.push_back("energy from per-command ACT/PRE/micro-op costs plus per-bank background power");
  est.assumptions.push_back("no DRAM I/O bus, refresh, or controller overhead");
  return est;
}

std::string report_json(const Report& r, const ThroughputEstimate* est) {
  nlohmann::ordered_json j;
  j["commands"] = {{"act", r.act_count}, {"pre", r.pre_count}, {"truncated_pre", r.truncated_pre_count}};
  j["latency_ns"] = {{"search", to_ns(r.search_latency)},
                     {"assignment", to_ns(r.assignment_latency)},
                     {"total", to_ns(r.total_latency())}};
  j["energy_pj"] = {{"commands", r.command_energy_pj},
                    {"background", r.background_energy_pj},
                    {"assignment", r.assignment_energy_pj},
                    {"total", r.total_energy_pj()}};
  j["split"] = {{"search_latency_share", r.search_latency_share()},
                {"search_energy_share", r.search_energy_share()}};
  j["assigned_queries"] = r.assigned_queries;
  if (est != nullptr) {
    j["throughput"] = {{"kmers_per_second", est->kmers_per_second},
                       {"gkmers_per_second", est->kmers_per_second / 1e9},
                       {"average_power_w", est->average_power_w},
                       {"assumptions", est->assumptions}};
  }
  return j.dump(2);
}

std::string report_table(const Report& r, const ThroughputEstimate* est) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "commands          ACT " << r.act_count << "  PRE " << r.pre_count << "  (truncated "
      << r.truncated_pre_count << ")\n";
  out << "latency (ns)      search " << to_ns(r.search_latency) << "  assignment "
      << to_ns(r.assignment_latency) << "  total " << to_ns(r.total_latency()) << '\n';
  out << "energy (pJ)       commands " << r.command_energy_pj << "  background "
      << r.background_energy_pj << "  assignment " << r.assignment_energy_pj << "  total "
      << r.total_energy_pj() << '\n';
  out << "search/assign     latency " << 100.0 * r.search_latency_share() << "% / "
      << 100.0 * (1.0 - r.search_latency_share()) << "%  energy "
      << 100.0 * r.search_energy_share() << "% / " << 100.0 * (1.0 - r.search_energy_share())
      << "%\n";
  if (est != nullptr) {
    out << "throughput        " << est->kmers_per_second / 1e9 << " Gkmers/s\n";
    out << "power             " << est->average_power_w << " W\n";
    out << "assumptions:\n";
    for (const auto& a : est->assumptions) out << "  - " << a << '\n';
  }
  return out.str();
}

}  // namespace drama
