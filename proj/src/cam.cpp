#include "drama/cam.hpp"

#include <algorithm>
#include <set>

#include "drama/error.hpp"

namespace drama {

std::string_view to_string(CamMode mode) { return mode == CamMode::nand ? "nand" : "nor"; }

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::match_is_1 ? "match_is_1" : "match_is_0";
}

std::vector<Trit> parse_trits(std::string_view text) {
  std::vector<Trit> out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '0': out.push_back(Trit::zero); break;
      case '1': out.push_back(Trit::one); break;
      case 'X':
      case 'x': out.push_back(Trit::x); break;
      default:
        fail(ErrorCode::encoding_fault, "invalid trit '" + std::string(1, c) + "'");
    }
  }
  return out;
}

std::string format_trits(std::span<const Trit> trits) {
  std::string s;
  s.reserve(trits.size());
  for (Trit t : trits) s.push_back(t == Trit::zero ? '0' : t == Trit::one ? '1' : 'X');
  return s;
}

LayoutMap LayoutMap::reserve(std::size_t rows_per_subarray, std::size_t cols) {
  if (rows_per_subarray < 16) {
    fail(ErrorCode::layout_fault, "a CAM layout needs at least 16 rows per subarray");
  }
  LayoutMap layout;
  layout.rows_per_subarray = rows_per_subarray;
  layout.column_capacity = cols;
  const Row group = static_cast<Row>(((rows_per_subarray - 4) / 4) * 4);
  layout.compute = ComputeRows::in_group(group, group - 1);
  layout.temp_rows = {group - 2, group - 3, group - 4, group - 5};
  layout.data_rows = (group - 5) & ~std::size_t{1};
  return layout;
}

LayoutMap LayoutMap::standard(std::size_t rows_per_subarray, std::size_t cols, std::size_t m) {
  LayoutMap layout = reserve(rows_per_subarray, cols);
  if (m == 0) fail(ErrorCode::layout_fault, "word length must be >= 1");
  if (2 * m > layout.data_rows) {
    fail(ErrorCode::layout_fault, std::to_string(m) + "-bit words need " + std::to_string(2 * m) +
                                      " data rows; only " + std::to_string(layout.data_rows) +
                                      " are free below the reserved rows");
  }
  layout.word_length = m;
  return layout;
}

std::vector<Row> LayoutMap::reserved() const {
  std::vector<Row> out = {compute.r1, compute.r2, compute.r3, compute.c0, compute.c1};
  out.insert(out.end(), temp_rows.begin(), temp_rows.end());
  return out;
}

void LayoutMap::validate() const {
  if (auto why = check_row_constraints(compute, rows_per_subarray)) {
    fail(ErrorCode::layout_fault, "compute rows: " + *why);
  }
  if (temp_rows.size() != temp_count) fail(ErrorCode::layout_fault, "layout needs 4 temp rows");
  if (data_rows % 2 != 0) fail(ErrorCode::layout_fault, "data region must hold whole row pairs");
  if (2 * word_length > data_rows) fail(ErrorCode::layout_fault, "words overlap reserved rows");
  const auto res = reserved();
  const std::set<Row> unique(res.begin(), res.end());
  if (unique.size() != res.size()) fail(ErrorCode::layout_fault, "reserved rows overlap");
  for (Row r : res) {
    if (r < data_rows || r >= rows_per_subarray) {
      fail(ErrorCode::layout_fault, "reserved row " + std::to_string(r) + " outside reserved region");
    }
  }
}

BitVector encode(std::span<const Trit> word, std::optional<CamMode> mode) {
  BitVector cells(2 * word.size());
  for (std::size_t j = 0; j < word.size(); ++j) {
    switch (word[j]) {
      case Trit::zero:
        cells.set(2 * j, true);
        break;
      case Trit::one:
        cells.set(2 * j + 1, true);
        break;
      case Trit::x:
        if (!mode) fail(ErrorCode::mode_required, "don't-care bits need a CAM mode to encode");
        if (*mode == CamMode::nand) {
          cells.set(2 * j, true);
          cells.set(2 * j + 1, true);
        }
        break;
    }
  }
  return cells;
}

BitVector encode_bits(const BitVector& bits) {
  BitVector cells(2 * bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j) cells.set(2 * j + (bits[j] ? 1 : 0), true);
  return cells;
}

std::vector<Trit> decode(const BitVector& cells, CamMode mode) {
  if (cells.size() % 2 != 0) fail(ErrorCode::encoding_fault, "cell image has an odd length");
  std::vector<Trit> out(cells.size() / 2);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const bool even = cells[2 * j], odd = cells[2 * j + 1];
    if (even != odd) {
      out[j] = even ? Trit::zero : Trit::one;
    } else if (even == (mode == CamMode::nand)) {
      out[j] = Trit::x;
    } else {
      fail(ErrorCode::encoding_fault, "cell pair " + std::to_string(j) + " is invalid for " +
                                          std::string(to_string(mode)) + " encoding");
    }
  }
  return out;
}

void store(std::span<const BitVector> words, const LayoutMap& layout, Subarray& sub) {
  layout.validate();
  if (sub.rows() != layout.rows_per_subarray) {
    fail(ErrorCode::layout_fault, "layout was built for a different subarray height");
  }
  if (words.size() > std::min(layout.column_capacity, sub.cols())) {
    fail(ErrorCode::layout_fault, std::to_string(words.size()) + " words exceed the column capacity");
  }
  const std::size_t cells = words.empty() ? 0 : words.front().size();
  if (cells > layout.data_rows) {
    fail(ErrorCode::layout_fault, "a " + std::to_string(cells) +
                                      "-cell column would overlap reserved rows");
  }
  for (const auto& w : words) {
    if (w.size() != cells) fail(ErrorCode::length_mismatch, "stored words differ in length");
  }

  std::vector<BitVector> rows(cells, BitVector(sub.cols()));
  for (std::size_t c = 0; c < words.size(); ++c) {
    for (std::size_t i : words[c].set_indices()) rows[i].set(c, true);
  }
  for (std::size_t i = 0; i < cells; ++i) sub.write_row(static_cast<Row>(i), rows[i]);
  sub.write_row(layout.compute.c0, BitVector(sub.cols(), false));
  sub.write_row(layout.compute.c1, BitVector(sub.cols(), true));
}

namespace {

void check_match_rows(std::span<const Row> rows, const LayoutMap& layout) {
  layout.validate();
  for (Row r : rows) {
    if (r >= layout.data_rows) {
      fail(ErrorCode::layout_fault, "match row " + std::to_string(r) + " is not a data row");
    }
  }
}

std::vector<Row> query_rows(const BitVector& query, const LayoutMap& layout, bool invert,
                            const std::optional<BitVector>& mask) {
  if (query.size() != layout.word_length) {
    fail(ErrorCode::length_mismatch, "query has " + std::to_string(query.size()) +
                                         " bits; layout holds " +
                                         std::to_string(layout.word_length) + "-bit words");
  }
  if (mask && mask->size() != query.size()) {
    fail(ErrorCode::length_mismatch, "query mask length differs from query");
  }
  std::vector<Row> rows;
  rows.reserve(query.size());
  for (std::size_t j = 0; j < query.size(); ++j) {
    if (mask && !mask->get(j)) continue;
    rows.push_back(layout.pair_row(j, query[j] != invert));
  }
  return rows;
}

CompareProgram finish(ProgramBuilder& b, Row result, Polarity polarity) {
  b.activate(result);
  CompareProgram program;
  program.warnings = b.warnings();
  program.trace = b.take();
  program.polarity = polarity;
  program.result_row = result;
  return program;
}

}  // namespace

CompareProgram compile_and_chain(std::span<const Row> match_rows, const LayoutMap& layout,
                                 const TimingModel& timing) {
  check_match_rows(match_rows, layout);
  const auto& cr = layout.compute;
  ProgramBuilder b(timing, cr);
  b.precharge();
  b.cpy(cr.r2, cr.c1);
  for (Row row : match_rows) {
    b.cpy(cr.r3, row);
    b.cpy(cr.r1, cr.c0);
    b.and3();
  }
  return finish(b, cr.r2, Polarity::match_is_1);
}

CompareProgram compile_or_chain(std::span<const Row> match_rows, const LayoutMap& layout,
                                const TimingModel& timing) {
  check_match_rows(match_rows, layout);
  const auto& cr = layout.compute;
  ProgramBuilder b(timing, cr);
  b.precharge();
  b.cpy(cr.r2, cr.c0);
  for (Row row : match_rows) {
    b.cpy(cr.r3, row);
    b.cpy(cr.r1, cr.c1);
    b.or3();
  }
  return finish(b, cr.r2, Polarity::match_is_0);
}

CompareProgram compile_hd1_chain(std::span<const Row> match_rows, const LayoutMap& layout,
                                 const TimingModel& timing) {
  check_match_rows(match_rows, layout);
  const auto& cr = layout.compute;
  const Row x = layout.xnor_row();
  const Row exact = layout.exact_row();
  const Row approx = layout.approx_row();
  ProgramBuilder b(timing, cr);
  b.precharge();
  b.cpy(exact, cr.c1);
  b.cpy(approx, cr.c1);
  for (Row row : match_rows) {
    b.cpy(x, row);
    // approx <- (approx & x) | exact, using the exact match before this bit
    b.cpy(cr.r1, cr.c0);
    b.cpy(cr.r2, approx);
    b.cpy(cr.r3, x);
    b.and3();
    b.cpy(cr.r1, cr.c1);
    b.cpy(cr.r3, exact);
    b.or3();
    b.cpy(approx, cr.r2);
    // exact <- exact & x
    b.cpy(cr.r1, cr.c0);
    b.cpy(cr.r2, exact);
    b.cpy(cr.r3, x);
    b.and3();
    b.cpy(exact, cr.r2);
  }
  return finish(b, approx, Polarity::match_is_1);
}

CompareProgram compile_nand_compare(const BitVector& query, const LayoutMap& layout,
                                    const TimingModel& timing,
                                    const std::optional<BitVector>& mask) {
  const auto rows = query_rows(query, layout, false, mask);
  return compile_and_chain(rows, layout, timing);
}

CompareProgram compile_nor_compare(const BitVector& query, const LayoutMap& layout,
                                   const TimingModel& timing,
                                   const std::optional<BitVector>& mask) {
  const auto rows = query_rows(query, layout, true, mask);
  return compile_or_chain(rows, layout, timing);
}

CompareProgram compile_approx_hd1(const BitVector& query, const LayoutMap& layout,
                                  const TimingModel& timing) {
  const auto rows = query_rows(query, layout, false, std::nullopt);
  return compile_hd1_chain(rows, layout, timing);
}

CommandTrace compile_fold_init(const LayoutMap& layout, const TimingModel& timing, Fold fold) {
  layout.validate();
  ProgramBuilder b(timing, layout.compute);
  b.precharge();
  b.cpy(layout.accumulator_row(), fold == Fold::or_fold ? layout.compute.c0 : layout.compute.c1);
  return b.take();
}

CompareProgram with_fold(CompareProgram program, const LayoutMap& layout,
                         const TimingModel& timing, Fold fold) {
  layout.validate();
  auto& trace = program.trace;
  if (trace.size() < 2 || !trace.back().is_act() || trace.back().row != program.result_row) {
    fail(ErrorCode::protocol_fault, "program does not end with its readout ACT");
  }
  trace.pop_back();  // readout ACT
  if (!trace.empty() && trace.back().is_pre()) trace.pop_back();

  const auto& cr = layout.compute;
  const Row acc = layout.accumulator_row();
  ProgramBuilder b(timing, cr);
  b.precharge();
  b.cpy(cr.r1, fold == Fold::or_fold ? cr.c1 : cr.c0);
  if (program.result_row != cr.r2) b.cpy(cr.r2, program.result_row);
  b.cpy(cr.r3, acc);
  if (fold == Fold::or_fold) {
    b.or3();
  } else {
    b.and3();
  }
  b.cpy(acc, cr.r2);
  b.activate(acc);

  const auto tail = b.take();
  trace.insert(trace.end(), tail.begin(), tail.end());
  program.warnings.insert(program.warnings.end(), b.warnings().begin(), b.warnings().end());
  program.result_row = acc;
  return program;
}

MatchVector run_compare(const CompareProgram& program, Subarray& sub) {
  if (program.trace.empty()) fail(ErrorCode::empty_trace, "cannot run an empty compare trace");
  sub.execute(program.trace);
  return MatchVector{sub.read_row_buffer(), program.polarity};
}

std::size_t count_data_activations(const CommandTrace& trace, std::size_t data_rows) {
  return static_cast<std::size_t>(std::count_if(trace.begin(), trace.end(), [&](const Command& c) {
    return c.is_act() && c.row < data_rows;
  }));
}

}  // namespace drama
