#include <doctest.h>

#include <random>
#include <set>

#include "drama/cam.hpp"
#include "drama/cam_array.hpp"
#include "drama/error.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace drama;
using testing::CamFixture;
using testing::to_bits;
using testing::to_trits;

namespace {

const TimingModel kTiming = TimingModel::ddr3_1600();

std::vector<oracle::Word> all_words(std::size_t m) {
  std::vector<oracle::Word> out;
  for (std::uint64_t v = 0; v < (1ULL << m); ++v) out.push_back(oracle::bits_of(v, m));
  return out;
}

oracle::Word word_of(std::string_view s) {
  oracle::Word w;
  for (char c : s) w.push_back(c == '0' ? 0 : c == '1' ? 1 : 2);
  return w;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a drama::Error");
  return ErrorCode::usage_error;
}

}  // namespace

TEST_CASE("encode uses a bit and its complement per pair") {
  CHECK(encode(parse_trits("0"), std::nullopt).to_string() == "10");
  CHECK(encode(parse_trits("1"), std::nullopt).to_string() == "01");
  CHECK(encode(parse_trits("X"), CamMode::nand).to_string() == "11");
  CHECK(encode(parse_trits("X"), CamMode::nor).to_string() == "00");
  CHECK(encode(parse_trits("01X"), CamMode::nand).to_string() == "100111");
  CHECK(code_of([] { (void)encode(parse_trits("0X"), std::nullopt); }) == ErrorCode::mode_required);
  CHECK(code_of([] { (void)parse_trits("012"); }) == ErrorCode::encoding_fault);
  CHECK(code_of([] { (void)decode(BitVector::from_string("00"), CamMode::nand); }) ==
        ErrorCode::encoding_fault);
  CHECK(encode_bits(BitVector::from_string("0110")) == encode(parse_trits("0110"), std::nullopt));
}

TEST_CASE("property: decode inverts encode") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    const std::size_t m = 1 + rng() % 40;
    std::vector<Trit> word(m);
    for (auto& t : word) t = static_cast<Trit>(rng() % 3);
    for (CamMode mode : {CamMode::nand, CamMode::nor}) {
      REQUIRE(decode(encode(word, mode), mode) == word);
    }
  }
}

TEST_CASE("standard layout reserves the top of the subarray") {
  const auto layout = LayoutMap::standard(128, 8192, 32);
  CHECK(layout.compute.r3 == 124);
  CHECK(layout.compute.r1 == 125);
  CHECK(layout.compute.r2 == 126);
  CHECK(layout.compute.c0 == 127);
  CHECK(layout.compute.c1 == 123);
  CHECK(layout.temp_rows == std::vector<Row>{122, 121, 120, 119});
  CHECK(layout.data_rows == 118);
  CHECK(layout.pair_row(3, false) == 6);
  CHECK(layout.pair_row(3, true) == 7);
  CHECK(code_of([] { (void)LayoutMap::standard(128, 64, 60); }) == ErrorCode::layout_fault);

  auto broken = layout;
  broken.temp_rows.pop_back();
  CHECK(code_of([&] { broken.validate(); }) == ErrorCode::layout_fault);
  broken = layout;
  broken.temp_rows[0] = broken.compute.c1;
  CHECK(code_of([&] { broken.validate(); }) == ErrorCode::layout_fault);
}

TEST_CASE("store writes column images and reads back through ACT") {
  std::mt19937_64 rng(4);
  CamFixture fx(64, 40, 8);
  std::vector<oracle::Word> words;
  for (int i = 0; i < 40; ++i) words.push_back(oracle::random_word(rng, 8));
  fx.store_binary(words);

  std::vector<BitVector> rows;
  for (Row r = 0; r < 16; ++r) {
    fx.sub.apply(Command::act(r, kTiming.t_ras));
    rows.push_back(fx.sub.read_row_buffer());
    fx.sub.apply(Command::pre(kTiming.t_rp));
  }
  for (std::size_t c = 0; c < words.size(); ++c) {
    BitVector cells(16);
    for (std::size_t r = 0; r < 16; ++r) cells.set(r, rows[r][c]);
    REQUIRE(cells == encode_bits(to_bits(words[c])));
    auto decoded = decode(cells, CamMode::nand);
    REQUIRE(decoded == to_trits(words[c]));
  }
  CHECK(fx.sub.peek_row(fx.layout.compute.c0).none());
  CHECK(fx.sub.peek_row(fx.layout.compute.c1).all());
}

TEST_CASE("store rejects overflow and overlap with reserved rows") {
  CamFixture fx(32, 4, 4);
  std::vector<BitVector> five(5, encode_bits(BitVector(4)));
  CHECK(code_of([&] { fx.store_cells(five); }) == ErrorCode::layout_fault);
  std::vector<BitVector> tall(1, BitVector(fx.layout.data_rows + 2));
  CHECK(code_of([&] { fx.store_cells(tall); }) == ErrorCode::layout_fault);
}

TEST_CASE("NAND compare on a three-word database") {
  CamFixture fx(32, 3, 4);
  fx.store_binary({word_of("0101"), word_of("0011"), word_of("0101")});
  const auto program = compile_nand_compare(BitVector::from_string("0101"), fx.layout, kTiming);
  const auto mv = run_compare(program, fx.sub);
  CHECK(mv.polarity == Polarity::match_is_1);
  CHECK(mv.verdicts.to_string() == "101");
}

TEST_CASE("NAND compare on an all-identical database is all ones") {
  CamFixture fx(32, 16, 5);
  fx.store_binary(std::vector<oracle::Word>(16, word_of("11010")));
  const auto mv = run_compare(compile_nand_compare(BitVector::from_string("11010"), fx.layout, kTiming), fx.sub);
  CHECK(mv.verdicts.all());
}

TEST_CASE("NAND compare agrees with equality on every query, m=4") {
  std::mt19937_64 rng(12);
  CamFixture fx(32, 16, 4);
  std::vector<oracle::Word> words;
  for (int i = 0; i < 16; ++i) words.push_back(oracle::random_word(rng, 4));
  fx.store_binary(words);
  for (const auto& q : all_words(4)) {
    const auto mv = run_compare(compile_nand_compare(to_bits(q), fx.layout, kTiming), fx.sub);
    for (std::size_t c = 0; c < words.size(); ++c) REQUIRE(mv.is_match(c) == oracle::equal(words[c], q));
  }
}

TEST_CASE("NOR compare signals match with 0 and complements NAND on binary data") {
  CamFixture fx(32, 16, 4);
  const auto words = all_words(4);
  fx.store_binary(words);
  for (const auto& q : words) {
    const auto nand = run_compare(compile_nand_compare(to_bits(q), fx.layout, kTiming), fx.sub);
    const auto nor = run_compare(compile_nor_compare(to_bits(q), fx.layout, kTiming), fx.sub);
    CHECK(nor.polarity == Polarity::match_is_0);
    REQUIRE(nor.verdicts == ~nand.verdicts);
  }
  // word 0000 vs query 1111 mismatches everywhere
  const auto mv = run_compare(compile_nor_compare(BitVector::from_string("1111"), fx.layout, kTiming), fx.sub);
  CHECK(mv.verdicts[0]);
  CHECK_FALSE(mv.verdicts[15]);
}

TEST_CASE("ternary words ignore don't-care positions") {
  for (CamMode mode : {CamMode::nand, CamMode::nor}) {
    CAPTURE(to_string(mode));
    CamFixture fx(32, 1, 3);
    fx.store_cells({encode(parse_trits("0X1"), mode)});
    auto verdict = [&](std::string_view q) {
      const auto bits = BitVector::from_string(q);
      const auto program = mode == CamMode::nand ? compile_nand_compare(bits, fx.layout, kTiming)
                                                 : compile_nor_compare(bits, fx.layout, kTiming);
      return run_compare(program, fx.sub).is_match(0);
    };
    CHECK(verdict("001"));
    CHECK(verdict("011"));
    CHECK_FALSE(verdict("111"));
    CHECK_FALSE(verdict("000"));
  }
}

TEST_CASE("ternary compare equals masked equality on random databases") {
  std::mt19937_64 rng(31);
  CamFixture fx(32, 64, 4);
  std::vector<oracle::Word> words;
  std::vector<BitVector> cells;
  for (int i = 0; i < 64; ++i) {
    oracle::Word w(4);
    for (auto& t : w) t = static_cast<int>(rng() % 3);
    words.push_back(w);
    cells.push_back(encode(to_trits(w), CamMode::nand));
  }
  fx.store_cells(cells);
  for (const auto& q : all_words(4)) {
    const auto mv = run_compare(compile_nand_compare(to_bits(q), fx.layout, kTiming), fx.sub);
    for (std::size_t c = 0; c < words.size(); ++c) {
      REQUIRE(mv.is_match(c) == oracle::masked_equal(words[c], q));
    }
  }
}

TEST_CASE("query mask skips positions") {
  CamFixture fx(32, 2, 4);
  fx.store_binary({word_of("0110"), word_of("1111")});
  const auto mask = BitVector::from_string("0110");
  const auto mv = run_compare(
      compile_nand_compare(BitVector::from_string("1110"), fx.layout, kTiming, mask), fx.sub);
  CHECK(mv.verdicts.to_string() == "11");
  const auto none = run_compare(
      compile_nand_compare(BitVector::from_string("1110"), fx.layout, kTiming, BitVector(4)), fx.sub);
  CHECK(none.verdicts.all());
}

TEST_CASE("HD<=1 compare: examples") {
  CamFixture fx(64, 4, 6);
  fx.store_binary({word_of("010011"), word_of("110011"), word_of("100011"), word_of("101100")});
  const auto mv = run_compare(compile_approx_hd1(BitVector::from_string("010011"), fx.layout, kTiming), fx.sub);
  CHECK(mv.verdicts.to_string() == "1100");
}

TEST_CASE("HD<=1 compare agrees with the Hamming oracle, m=4 exhaustive") {
  CamFixture fx(32, 16, 4);
  const auto words = all_words(4);
  fx.store_binary(words);
  for (const auto& q : words) {
    const auto approx = run_compare(compile_approx_hd1(to_bits(q), fx.layout, kTiming), fx.sub);
    const auto exact = run_compare(compile_nand_compare(to_bits(q), fx.layout, kTiming), fx.sub);
    for (std::size_t c = 0; c < words.size(); ++c) {
      REQUIRE(approx.is_match(c) == (oracle::hamming(words[c], q) <= 1));
      if (exact.is_match(c)) REQUIRE(approx.is_match(c));
    }
  }
}

TEST_CASE("compare programs leave data rows untouched") {
  std::mt19937_64 rng(8);
  CamFixture fx(64, 128, 12);
  std::vector<oracle::Word> words;
  for (int i = 0; i < 128; ++i) words.push_back(oracle::random_word(rng, 12));
  fx.store_binary(words);
  std::vector<BitVector> before;
  for (Row r = 0; r < fx.layout.data_rows; ++r) before.push_back(fx.sub.peek_row(r));
  const auto q = to_bits(oracle::random_word(rng, 12));
  (void)run_compare(compile_nand_compare(q, fx.layout, kTiming), fx.sub);
  (void)run_compare(compile_nor_compare(q, fx.layout, kTiming), fx.sub);
  (void)run_compare(compile_approx_hd1(q, fx.layout, kTiming), fx.sub);
  for (Row r = 0; r < fx.layout.data_rows; ++r) REQUIRE(fx.sub.peek_row(r) == before[r]);
  CHECK(fx.sub.peek_row(fx.layout.compute.c0).none());
  CHECK(fx.sub.peek_row(fx.layout.compute.c1).all());
}

TEST_CASE("compile and run faults") {
  CamFixture fx(32, 4, 4);
  CHECK(code_of([&] { (void)compile_nand_compare(BitVector(3), fx.layout, kTiming); }) ==
        ErrorCode::length_mismatch);
  CHECK(code_of([&] { (void)run_compare(CompareProgram{}, fx.sub); }) == ErrorCode::empty_trace);
  const std::array<Row, 1> reserved{fx.layout.compute.c1};
  CHECK(code_of([&] { (void)compile_and_chain(reserved, fx.layout, kTiming); }) == ErrorCode::layout_fault);
  auto no_temps = fx.layout;
  no_temps.temp_rows.clear();
  CHECK(code_of([&] { (void)compile_approx_hd1(BitVector(4), no_temps, kTiming); }) ==
        ErrorCode::layout_fault);
}

TEST_CASE("NAND trace length is 6 + 12 m with one data ACT per bit") {
  std::mt19937_64 rng(2);
  for (std::size_t m = 1; m <= 40; ++m) {
    const auto layout = LayoutMap::standard(128, 64, m);
    const auto q = to_bits(oracle::random_word(rng, m));
    const auto program = compile_nand_compare(q, layout, kTiming);
    REQUIRE(program.trace.size() == 6 + 12 * m);
    REQUIRE(count_data_activations(program.trace, layout.data_rows) == m);
    std::set<Row> opened;
    for (const auto& cmd : program.trace) {
      if (cmd.is_act() && cmd.row < layout.data_rows) opened.insert(cmd.row);
    }
    for (std::size_t j = 0; j < m; ++j) {
      REQUIRE(opened.count(layout.pair_row(j, q[j])) == 1);
      REQUIRE(opened.count(layout.pair_row(j, !q[j])) == 0);
    }
    CHECK(program.trace.front().is_pre());
    CHECK(program.trace.back() == Command::act(layout.compute.r2, kTiming.t_ras));
  }
}

TEST_CASE("compiled programs never write constant or data rows") {
  const auto layout = LayoutMap::standard(64, 8, 8);
  const auto q = BitVector::from_string("01101001");
  for (const auto& program : {compile_nand_compare(q, layout, kTiming), compile_nor_compare(q, layout, kTiming),
                              compile_approx_hd1(q, layout, kTiming)}) {
    const auto& t = program.trace;
    for (std::size_t i = 2; i < t.size(); ++i) {
      if (t[i].is_act() && detect_micro_op(std::span(t).subspan(i - 2, 3), kTiming) == MicroOp::row_copy) {
        REQUIRE(t[i].row >= layout.data_rows);
        REQUIRE(t[i].row != layout.compute.c0);
        REQUIRE(t[i].row != layout.compute.c1);
      }
    }
  }
}

TEST_CASE("OR folding accumulates successive match vectors") {
  std::mt19937_64 rng(17);
  CamFixture fx(32, 32, 3);
  const auto words = all_words(3);
  std::vector<oracle::Word> stored;
  for (int i = 0; i < 32; ++i) stored.push_back(words[rng() % words.size()]);
  fx.store_binary(stored);

  fx.sub.execute(compile_fold_init(fx.layout, kTiming, Fold::or_fold));
  BitVector expected(32);
  MatchVector last;
  for (const char* q : {"010", "111", "001"}) {
    const auto query = BitVector::from_string(q);
    expected |= run_compare(compile_nand_compare(query, fx.layout, kTiming), fx.sub).verdicts;
    last = run_compare(with_fold(compile_nand_compare(query, fx.layout, kTiming), fx.layout, kTiming,
                                 Fold::or_fold),
                       fx.sub);
  }
  CHECK(last.verdicts == expected);

  fx.sub.execute(compile_fold_init(fx.layout, kTiming, Fold::and_fold));
  BitVector both(32, true);
  for (const char* q : {"010", "011"}) {
    const auto query = BitVector::from_string(q);
    both &= run_compare(compile_approx_hd1(query, fx.layout, kTiming), fx.sub).verdicts;
    last = run_compare(with_fold(compile_approx_hd1(query, fx.layout, kTiming), fx.layout, kTiming,
                                 Fold::and_fold),
                       fx.sub);
  }
  CHECK(last.verdicts == both);
}

TEST_CASE("property: NAND exactness for wide words") {
  std::mt19937_64 rng(99);
  CamFixture fx(160, 256, 64);
  std::vector<oracle::Word> words;
  for (int i = 0; i < 256; ++i) words.push_back(oracle::random_word(rng, 64));
  // plant near-misses and duplicates
  for (int i = 0; i < 32; ++i) {
    words[static_cast<std::size_t>(i + 32)] = words[static_cast<std::size_t>(i)];
    words[static_cast<std::size_t>(i + 64)] = words[static_cast<std::size_t>(i)];
    words[static_cast<std::size_t>(i + 64)][rng() % 64] ^= 1;
  }
  fx.store_binary(words);
  for (int t = 0; t < 20; ++t) {
    const auto& q = words[rng() % 96];
    const auto mv = run_compare(compile_nand_compare(to_bits(q), fx.layout, kTiming), fx.sub);
    for (std::size_t c = 0; c < words.size(); ++c) REQUIRE(mv.is_match(c) == oracle::equal(words[c], q));
  }
}

TEST_CASE("CamArray spreads words over tiles and agrees with the oracle") {
  std::mt19937_64 rng(55);
  SimConfig cfg;
  cfg.device.rows_per_subarray = 64;
  cfg.device.cols_per_subarray = 16;
  std::vector<oracle::Word> words;
  std::vector<BitVector> cells;
  for (int i = 0; i < 50; ++i) {
    words.push_back(oracle::random_word(rng, 10));
    cells.push_back(encode_bits(to_bits(words.back())));
  }
  words[49] = words[3];
  cells[49] = cells[3];
  for (CamMode mode : {CamMode::nand, CamMode::nor}) {
    CamArray array(cells, 10, mode, cfg);
    CHECK(array.tile_count() == 4);
    for (int t = 0; t < 20; ++t) {
      const auto& q = t % 2 ? words[rng() % 50] : oracle::random_word(rng, 10);
      const auto result = array.search(to_bits(q), SearchKind::exact);
      REQUIRE(result.matches.size() == 50);
      for (std::size_t c = 0; c < 50; ++c) REQUIRE(result.matches.is_match(c) == oracle::equal(words[c], q));
      if (mode == CamMode::nand) {
        const auto approx = array.search(to_bits(q), SearchKind::hd1);
        for (std::size_t c = 0; c < 50; ++c) {
          REQUIRE(approx.matches.is_match(c) == (oracle::hamming(words[c], q) <= 1));
        }
      }
    }
    CHECK(array.search(to_bits(words[0]), SearchKind::exact).report.search_latency > Duration{0});
  }
  CamArray nor(cells, 10, CamMode::nor, cfg);
  CHECK(code_of([&] { (void)nor.compile(BitVector(10), SearchKind::hd1); }) == ErrorCode::mode_mismatch);
  CHECK(code_of([&] { CamArray empty({}, 10, CamMode::nand, cfg); }) == ErrorCode::empty_db);
}
