#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace drama {

/// Simulation time. One tick is one picosecond; DDR timing parameters are
/// fractional nanoseconds, so picoseconds keep every preset exact.
using Duration = std::chrono::duration<std::int64_t, std::pico>;
using Timestamp = Duration;

using Row = std::uint32_t;

constexpr Duration from_ns(double ns) {
  return Duration{static_cast<std::int64_t>(ns * 1000.0 + (ns >= 0 ? 0.5 : -0.5))};
}
constexpr double to_ns(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

/// What the command decoder does with gaps that fall between the nominal and
/// truncated windows.
enum class UndefinedTimingPolicy { strict, treat_as_none };

/// DDR command timing plus the truncated gaps used by the timing-violation
/// micro-ops. Invariant: t_multi_gap < t_copy_gap < t_rp.
struct TimingModel {
  Duration t_rp = from_ns(13.75);
  Duration t_ras = from_ns(35.0);
  Duration t_rcd = from_ns(13.75);
  Duration t_ck = from_ns(1.25);
  /// PRE->ACT gap emitted for row copy; any gap <= this counts as truncated.
  Duration t_copy_gap = from_ns(2.5);
  /// ACT->PRE and PRE->ACT gap emitted for multi-row activation; any gap <=
  /// this counts as minimal.
  Duration t_multi_gap = from_ns(1.25);
  Duration refresh_interval = std::chrono::duration_cast<Duration>(std::chrono::milliseconds{64});
  UndefinedTimingPolicy undefined_timing = UndefinedTimingPolicy::strict;

  /// DDR3-1600 nominal bins.
  static TimingModel ddr3_1600() { return {}; }

  void validate() const;
};

/// Per-command energies (pJ) and static power (mW). mW x ns = pJ.
struct EnergyModel {
  double act_pj = 1100.0;
  double pre_pj = 600.0;
  /// Added to every PRE whose gap is truncated (row copy / multi-activate).
  double micro_op_pj = 150.0;
  double background_mw_per_bank = 8.4;
  /// Host-side taxon assignment, charged once per query.
  double host_assign_ns_per_query = 400.0;
  double host_assign_pj_per_query = 2000.0;
  /// Conventional refresh for idle periods; off because compares refresh.
  bool conventional_refresh = false;
  double refresh_pj_per_interval = 0.0;

  void validate() const;
};

struct DeviceConfig {
  std::size_t chips = 1;
  std::size_t banks_per_chip = 8;
  std::size_t subarrays_per_bank = 64;
  std::size_t rows_per_subarray = 128;
  std::size_t cols_per_subarray = 8192;

  /// 16 chips x 8 banks, 128 rows x 8192 columns per subarray.
  static DeviceConfig dimm16_preset();
  /// Same device read as 128 rows x 64 columns per subarray.
  static DeviceConfig dimm16_narrow_preset();

  std::size_t total_subarrays() const {
    return chips * banks_per_chip * subarrays_per_bank;
  }

  void validate() const;
};

struct SimConfig {
  DeviceConfig device;
  TimingModel timing;
  EnergyModel energy;

  void validate() const {
    device.validate();
    timing.validate();
    energy.validate();
  }
};

/// Parses the line-oriented `key = value` format. Unknown keys are an error.
/// A `preset` key, if present, is applied before every other key.
SimConfig parse_config(std::istream& in);
SimConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const SimConfig& cfg);

}  // namespace drama
