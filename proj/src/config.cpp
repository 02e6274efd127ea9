#include "drama/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "drama/error.hpp"

namespace drama {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    fail(ErrorCode::config_error, "key '" + std::string(key) + "': not a number: " + std::string(value));
  }
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    fail(ErrorCode::config_error, "key '" + std::string(key) + "': not a count: " + std::string(value));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(ErrorCode::config_error, "key '" + std::string(key) + "': not a boolean: " + std::string(value));
}

using Setter = std::function<void(SimConfig&, std::string_view key, std::string_view value)>;

Setter count_field(std::size_t DeviceConfig::*field) {
  return [field](SimConfig& c, std::string_view k, std::string_view v) {
    c.device.*field = parse_count(k, v);
  };
}

Setter ns_field(Duration TimingModel::*field) {
  return [field](SimConfig& c, std::string_view k, std::string_view v) {
    c.timing.*field = from_ns(parse_double(k, v));
  };
}

Setter energy_field(double EnergyModel::*field) {
  return [field](SimConfig& c, std::string_view k, std::string_view v) {
    c.energy.*field = parse_double(k, v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"chips", count_field(&DeviceConfig::chips)},
      {"banks_per_chip", count_field(&DeviceConfig::banks_per_chip)},
      {"subarrays_per_bank", count_field(&DeviceConfig::subarrays_per_bank)},
      {"rows_per_subarray", count_field(&DeviceConfig::rows_per_subarray)},
      {"cols_per_subarray", count_field(&DeviceConfig::cols_per_subarray)},
      {"t_rp_ns", ns_field(&TimingModel::t_rp)},
      {"t_ras_ns", ns_field(&TimingModel::t_ras)},
      {"t_rcd_ns", ns_field(&TimingModel::t_rcd)},
      {"t_ck_ns", ns_field(&TimingModel::t_ck)},
      {"t_copy_gap_ns", ns_field(&TimingModel::t_copy_gap)},
      {"t_multi_gap_ns", ns_field(&TimingModel::t_multi_gap)},
      {"refresh_interval_ms",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         c.timing.refresh_interval = from_ns(parse_double(k, v) * 1e6);
       }},
      {"undefined_timing",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         if (v == "strict") {
           c.timing.undefined_timing = UndefinedTimingPolicy::strict;
         } else if (v == "none") {
           c.timing.undefined_timing = UndefinedTimingPolicy::treat_as_none;
         } else {
           fail(ErrorCode::config_error, "key '" + std::string(k) + "': expected strict|none");
         }
       }},
      {"e_act_pj", energy_field(&EnergyModel::act_pj)},
      {"e_pre_pj", energy_field(&EnergyModel::pre_pj)},
      {"e_micro_op_pj", energy_field(&EnergyModel::micro_op_pj)},
      {"background_mw_per_bank", energy_field(&EnergyModel::background_mw_per_bank)},
      {"host_assign_ns", energy_field(&EnergyModel::host_assign_ns_per_query)},
      {"host_assign_pj", energy_field(&EnergyModel::host_assign_pj_per_query)},
      {"e_refresh_pj", energy_field(&EnergyModel::refresh_pj_per_interval)},
      {"conventional_refresh",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         c.energy.conventional_refresh = parse_bool(k, v);
       }},
  };
  return table;
}

void apply_preset(SimConfig& cfg, std::string_view name) {
  if (name == "ddr3") {
    cfg.device = DeviceConfig{};
  } else if (name == "dimm16") {
    cfg.device = DeviceConfig::dimm16_preset();
  } else if (name == "dimm16_narrow") {
    cfg.device = DeviceConfig::dimm16_narrow_preset();
  } else {
    fail(ErrorCode::config_error, "unknown preset '" + std::string(name) + "'");
  }
  cfg.timing = TimingModel::ddr3_1600();
}

}  // namespace

void TimingModel::validate() const {
  if (t_rp <= Duration{0} || t_ras <= Duration{0} || t_rcd <= Duration{0} || t_ck <= Duration{0}) {
    fail(ErrorCode::config_error, "nominal timings must be positive");
  }
  if (!(Duration{0} < t_multi_gap && t_multi_gap < t_copy_gap && t_copy_gap < t_rp)) {
    fail(ErrorCode::config_error, "timing requires 0 < t_multi_gap < t_copy_gap < t_rp");
  }
  if (t_copy_gap >= t_ras) fail(ErrorCode::config_error, "t_copy_gap must be below t_ras");
  if (refresh_interval <= Duration{0}) fail(ErrorCode::config_error, "refresh_interval must be positive");
}

void EnergyModel::validate() const {
  for (double v : {act_pj, pre_pj, micro_op_pj, background_mw_per_bank, host_assign_ns_per_query,
                   host_assign_pj_per_query, refresh_pj_per_interval}) {
    if (v < 0.0) fail(ErrorCode::config_error, "energy parameters must be nonnegative");
  }
}

DeviceConfig DeviceConfig::dimm16_preset() {
  DeviceConfig d;
  d.chips = 16;
  d.banks_per_chip = 8;
  d.subarrays_per_bank = 64;
  d.rows_per_subarray = 128;
  d.cols_per_subarray = 8192;
  return d;
}

DeviceConfig DeviceConfig::dimm16_narrow_preset() {
  DeviceConfig d = dimm16_preset();
  d.cols_per_subarray = 64;
  return d;
}

void DeviceConfig::validate() const {
  if (chips == 0 || banks_per_chip == 0 || subarrays_per_bank == 0 || rows_per_subarray == 0 ||
      cols_per_subarray == 0) {
    fail(ErrorCode::config_error, "device counts must be >= 1");
  }
  if (rows_per_subarray % 2 != 0 || rows_per_subarray < 8) {
    fail(ErrorCode::config_error, "rows_per_subarray must be even and >= 8");
  }
}

SimConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  std::string preset;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::config_error, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(view.substr(0, eq)));
    std::string value(trim(view.substr(eq + 1)));
    if (key == "preset") {
      preset = value;
      continue;
    }
    if (!setters().contains(key)) {
      fail(ErrorCode::config_error, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }

  SimConfig cfg;
  if (!preset.empty()) apply_preset(cfg, preset);
  for (const auto& [key, value] : entries) setters().find(key)->second(cfg, key, value);
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open config " + path.string());
  return parse_config(in);
}

void write_config(std::ostream& out, const SimConfig& cfg) {
  const auto& d = cfg.device;
  const auto& t = cfg.timing;
  const auto& e = cfg.energy;
  out << "chips = " << d.chips << '\n'
      << "banks_per_chip = " << d.banks_per_chip << '\n'
      << "subarrays_per_bank = " << d.subarrays_per_bank << '\n'
      << "rows_per_subarray = " << d.rows_per_subarray << '\n'
      << "cols_per_subarray = " << d.cols_per_subarray << '\n'
      << "t_rp_ns = " << to_ns(t.t_rp) << '\n'
      << "t_ras_ns = " << to_ns(t.t_ras) << '\n'
      << "t_rcd_ns = " << to_ns(t.t_rcd) << '\n'
      << "t_ck_ns = " << to_ns(t.t_ck) << '\n'
      << "t_copy_gap_ns = " << to_ns(t.t_copy_gap) << '\n'
      << "t_multi_gap_ns = " << to_ns(t.t_multi_gap) << '\n'
      << "refresh_interval_ms = " << to_ns(t.refresh_interval) / 1e6 << '\n'
      << "undefined_timing = "
      << (t.undefined_timing == UndefinedTimingPolicy::strict ? "strict" : "none") << '\n'
      << "e_act_pj = " << e.act_pj << '\n'
      << "e_pre_pj = " << e.pre_pj << '\n'
      << "e_micro_op_pj = " << e.micro_op_pj << '\n'
      << "background_mw_per_bank = " << e.background_mw_per_bank << '\n'
      << "host_assign_ns = " << e.host_assign_ns_per_query << '\n'
      << "host_assign_pj = " << e.host_assign_pj_per_query << '\n'
      << "conventional_refresh = " << (e.conventional_refresh ? "true" : "false") << '\n'
      << "e_refresh_pj = " << e.refresh_pj_per_interval << '\n';
}

}  // namespace drama
