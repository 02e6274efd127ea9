#include <doctest.h>

#include <random>

#include "drama/cam.hpp"
#include "drama/error.hpp"
#include "drama/timing_ops.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace drama;

namespace {

const TimingModel kTiming = TimingModel::ddr3_1600();

// 64-row subarray; majority group at 60..63, c1 at 59.
const ComputeRows kRows = ComputeRows::in_group(60, 59);

Subarray make_sub(std::size_t cols) {
  Subarray sub(64, cols, kTiming);
  sub.write_row(kRows.c0, BitVector(cols, false));
  sub.write_row(kRows.c1, BitVector(cols, true));
  return sub;
}

void run(Subarray& sub, const CommandTrace& trace) { sub.execute(trace); }

}  // namespace

TEST_CASE("in_group places rows on the 01/10/00 address pattern") {
  CHECK(kRows.r1 == 61);
  CHECK(kRows.r2 == 62);
  CHECK(kRows.r3 == 60);
  CHECK(kRows.c0 == 63);
  CHECK_FALSE(check_row_constraints(kRows, 64).has_value());
}

TEST_CASE("check_row_constraints reports violations") {
  auto rows = kRows;
  rows.r2 = rows.r1;
  CHECK(check_row_constraints(rows).has_value());

  rows = kRows;
  rows.r2 = 58;  // 0b111010: low bits 10 but different high bits
  CHECK(check_row_constraints(rows).value().find("high-order") != std::string::npos);

  rows = kRows;
  std::swap(rows.r1, rows.r2);
  CHECK(check_row_constraints(rows).has_value());

  rows = kRows;
  rows.c0 = rows.r3;
  CHECK(check_row_constraints(rows).has_value());

  CHECK(check_row_constraints(kRows, 62).has_value());  // out of range
}

TEST_CASE("majority truth table over all eight column combinations") {
  auto sub = make_sub(8);
  sub.write_row(kRows.r1, BitVector::from_string("00001111"));
  sub.write_row(kRows.r2, BitVector::from_string("00110011"));
  sub.write_row(kRows.r3, BitVector::from_string("01010101"));
  run(sub, majority3(kRows, kTiming));
  for (Row r : {kRows.r1, kRows.r2, kRows.r3}) {
    const auto& row = sub.peek_row(r);
    for (int c = 0; c < 8; ++c) {
      const int a = (c >> 2) & 1, b = (c >> 1) & 1, d = c & 1;
      CHECK(row[static_cast<std::size_t>(c)] == static_cast<bool>(oracle::majority(a, b, d)));
    }
  }
}

TEST_CASE("preset 0 gives AND and preset 1 gives OR") {
  for (bool preset : {false, true}) {
    CAPTURE(preset);
    auto sub = make_sub(4);
    sub.write_row(kRows.r2, BitVector::from_string("0011"));  // x
    sub.write_row(kRows.r3, BitVector::from_string("0101"));  // y
    ProgramBuilder b(kTiming, kRows);
    b.cpy(kRows.r1, preset ? kRows.c1 : kRows.c0);
    if (preset) {
      b.or3();
    } else {
      b.and3();
    }
    CHECK(b.warnings().empty());
    run(sub, b.trace());
    const auto& out = sub.peek_row(kRows.r2);
    for (std::size_t c = 0; c < 4; ++c) {
      const bool x = (c >> 1) & 1, y = c & 1;
      CHECK(out[c] == (preset ? (x || y) : (x && y)));
    }
  }
}

TEST_CASE("cpy makes the target identical and leaves the source intact") {
  std::mt19937_64 rng(3);
  auto sub = make_sub(64);
  for (int i = 0; i < 200; ++i) {
    const Row source = static_cast<Row>(rng() % 56);
    const auto data = testing::random_row(rng, 64);
    sub.write_row(source, data);
    sub.write_row(kRows.r3, testing::random_row(rng, 64));
    run(sub, cpy(kRows.r3, source, kTiming));
    sub.apply(Command::pre(kTiming.t_rp));
    REQUIRE(sub.peek_row(kRows.r3) == data);
    REQUIRE(sub.peek_row(source) == data);
  }
}

TEST_CASE("cpy from c1 initializes a row to all ones") {
  auto sub = make_sub(16);
  run(sub, cpy(kRows.r2, kRows.c1, kTiming));
  CHECK(sub.peek_row(kRows.r2).all());
}

TEST_CASE("copy chain through a temp row returns the original") {
  std::mt19937_64 rng(5);
  auto sub = make_sub(32);
  const auto a = testing::random_row(rng, 32);
  sub.write_row(1, a);
  ProgramBuilder b(kTiming, kRows);
  b.cpy(2, 1).cpy(3, 2);
  run(sub, b.trace());
  CHECK(sub.peek_row(3) == a);
}

TEST_CASE("cpy onto itself is a fault") {
  try {
    (void)cpy(4, 4, kTiming);
    FAIL("expected noop_copy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::noop_copy);
  }
}

TEST_CASE("majority3 rejects rows that break the address rule") {
  auto bad = kRows;
  bad.r3 = 56;
  try {
    (void)and3(bad, kTiming);
    FAIL("expected address_constraint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::address_constraint);
  }
}

TEST_CASE("a majority without a fresh preset is reported as stale") {
  ProgramBuilder b(kTiming, kRows);
  b.cpy(kRows.r1, kRows.c0).and3();
  CHECK(b.warnings().empty());
  b.and3();
  REQUIRE(b.warnings().size() == 1);
  CHECK(b.warnings()[0].find("stale preset") != std::string::npos);
  b.cpy(kRows.r1, kRows.c0).or3();
  CHECK(b.warnings().size() == 2);
}

TEST_CASE("every window in built programs classifies unambiguously") {
  const auto layout = LayoutMap::standard(128, 64, 16);
  std::mt19937_64 rng(9);
  const auto q = testing::to_bits(oracle::random_word(rng, 16));
  for (const auto& program : {compile_nand_compare(q, layout, kTiming),
                              compile_nor_compare(q, layout, kTiming),
                              compile_approx_hd1(q, layout, kTiming)}) {
    const auto& trace = program.trace;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const std::size_t start = i >= 2 ? i - 2 : 0;
      const auto window = std::span(trace).subspan(start, i - start + 1);
      REQUIRE(detect_micro_op(window, kTiming) != MicroOp::ambiguous);
    }
    CHECK(program.warnings.empty());
  }
}
