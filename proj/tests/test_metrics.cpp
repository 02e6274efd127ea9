#include <doctest.h>

#include <random>

#include <json.hpp>

#include "drama/cam.hpp"
#include "drama/error.hpp"
#include "drama/metrics.hpp"

using namespace drama;

namespace {

const TimingModel kTiming = TimingModel::ddr3_1600();
const EnergyModel kEnergy{};

CommandTrace random_trace(std::mt19937_64& rng, std::size_t n) {
  CommandTrace t;
  for (std::size_t i = 0; i < n; ++i) {
    const Duration gap{static_cast<std::int64_t>(rng() % 40000)};
    t.push_back(rng() & 1U ? Command::act(static_cast<Row>(rng() % 128), gap) : Command::pre(gap));
  }
  return t;
}

// Independent summation straight from the command list.
struct Totals {
  double latency_ns = 0;
  double energy_pj = 0;
};

Totals sum_by_hand(const CommandTrace& t) {
  Totals out;
  for (const auto& c : t) {
    const double gap_ns = static_cast<double>(c.gap_after.count()) / 1000.0;
    out.latency_ns += gap_ns;
    if (c.kind == CommandKind::act) {
      out.energy_pj += kEnergy.act_pj;
    } else {
      out.energy_pj += kEnergy.pre_pj;
      if (gap_ns < 13.75) out.energy_pj += kEnergy.micro_op_pj;
    }
  }
  out.energy_pj += out.latency_ns * kEnergy.background_mw_per_bank;
  return out;
}

}  // namespace

TEST_CASE("empty trace costs nothing") {
  const auto r = account({}, kTiming, kEnergy);
  CHECK(r.search_latency == Duration{0});
  CHECK(r.total_energy_pj() == 0.0);
  CHECK(r.command_count() == 0);
}

TEST_CASE("n PREs with gap g take n*g") {
  for (std::size_t n : {1U, 7U, 100U}) {
    const CommandTrace t(n, Command::pre(from_ns(2.5)));
    const auto r = account(t, kTiming, kEnergy);
    CHECK(r.search_latency == from_ns(2.5 * static_cast<double>(n)));
    CHECK(r.truncated_pre_count == n);
  }
}

TEST_CASE("NAND m=32 compare matches hand summation") {
  const auto layout = LayoutMap::standard(128, 64, 32);
  std::mt19937_64 rng(6);
  BitVector q(32);
  for (std::size_t j = 0; j < 32; ++j) q.set(j, rng() & 1U);
  const auto trace = compile_nand_compare(q, layout, kTiming).trace;
  const auto r = account(trace, kTiming, kEnergy);
  const auto hand = sum_by_hand(trace);
  CHECK(to_ns(r.search_latency) == doctest::Approx(hand.latency_ns));
  CHECK(r.search_energy_pj() == doctest::Approx(hand.energy_pj));
  CHECK(r.act_count + r.pre_count == 6 + 12 * 32);
}

TEST_CASE("property: cost of a concatenation is the sum of the costs") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_trace(rng, rng() % 50);
    const auto b = random_trace(rng, rng() % 50);
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const auto whole = account(ab, kTiming, kEnergy);
    const auto parts = account(a, kTiming, kEnergy) + account(b, kTiming, kEnergy);
    REQUIRE(whole.search_latency == parts.search_latency);
    REQUIRE(whole.command_count() == parts.command_count());
    REQUIRE(whole.search_energy_pj() == doctest::Approx(parts.search_energy_pj()));
    REQUIRE(whole.search_latency >= account(a, kTiming, kEnergy).search_latency);
    REQUIRE(whole.search_energy_pj() >= account(a, kTiming, kEnergy).search_energy_pj());
  }
}

TEST_CASE("negative gaps are rejected") {
  const CommandTrace t{Command::pre(Duration{-5})};
  CHECK_THROWS_AS(account(t, kTiming, kEnergy), Error);
}

TEST_CASE("host assignment is charged per query") {
  auto r = with_assignment(account({Command::pre(from_ns(10))}, kTiming, kEnergy), 3, kEnergy);
  CHECK(r.assigned_queries == 3);
  CHECK(to_ns(r.assignment_latency) == doctest::Approx(1200.0));
  CHECK(r.assignment_energy_pj == doctest::Approx(6000.0));
  CHECK(r.search_latency_share() == doctest::Approx(10.0 / 1210.0));
  CHECK(r.search_energy_share() > 0.0);
  CHECK(r.search_energy_share() < 1.0);
}

TEST_CASE("idle refresh energy is off unless enabled") {
  auto e = kEnergy;
  CHECK(idle_refresh_energy_pj(from_ns(1e6), kTiming, e) == 0.0);
  e.conventional_refresh = true;
  e.refresh_pj_per_interval = 1000.0;
  CHECK(idle_refresh_energy_pj(kTiming.refresh_interval * 2, kTiming, e) == doctest::Approx(2000.0));
}

TEST_CASE("throughput scales with banks and drops with word length") {
  const auto device = DeviceConfig::dimm16_preset();
  auto compare = [&](std::size_t m) {
    const auto layout = LayoutMap::standard(4 * m + 16, 64, m);
    return account(compile_nand_compare(BitVector(m), layout, kTiming).trace, kTiming, kEnergy);
  };
  const auto r32 = compare(32);
  const auto base = throughput_estimate(device, r32, device.cols_per_subarray);
  auto doubled = device;
  doubled.banks_per_chip *= 2;
  CHECK(throughput_estimate(doubled, r32, device.cols_per_subarray).kmers_per_second ==
        doctest::Approx(2 * base.kmers_per_second));
  const double ratio =
      throughput_estimate(device, compare(64), device.cols_per_subarray).kmers_per_second /
      base.kmers_per_second;
  CHECK(ratio > 0.45);
  CHECK(ratio < 0.55);
  CHECK_FALSE(base.assumptions.empty());

  try {
    (void)throughput_estimate(device, Report{}, 1);
    FAIL("expected zero_latency");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_latency);
  }
}

TEST_CASE("JSON report carries the same numbers") {
  const auto r = with_assignment(account({Command::act(1, from_ns(35)), Command::pre(from_ns(13.75))},
                                         kTiming, kEnergy),
                                 1, kEnergy);
  const auto est = throughput_estimate(DeviceConfig{}, r, 8192);
  const auto j = nlohmann::json::parse(report_json(r, &est));
  CHECK(j["commands"]["act"] == 1);
  CHECK(j["latency_ns"]["search"].get<double>() == doctest::Approx(48.75));
  CHECK(j["energy_pj"]["total"].get<double>() == doctest::Approx(r.total_energy_pj()));
  CHECK(j["throughput"]["assumptions"].size() == est.assumptions.size());
  CHECK(report_table(r, &est).find("Gkmers/s") != std::string::npos);
}
