#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drama/bitvector.hpp"
#include "drama/command.hpp"
#include "drama/subarray.hpp"
#include "drama/timing_ops.hpp"

namespace drama {

enum class CamMode { nand, nor };
enum class Polarity { match_is_1, match_is_0 };
enum class Trit : std::uint8_t { zero, one, x };

std::string_view to_string(CamMode mode);
std::string_view to_string(Polarity polarity);

std::vector<Trit> parse_trits(std::string_view text);
std::string format_trits(std::span<const Trit> trits);

/// Row roles inside one subarray. Data occupies rows [0, data_rows): bit j
/// of a word sits in the pair (2j, 2j + 1). Compute, constant and temp rows
/// sit at the top of the address space.
struct LayoutMap {
  static constexpr std::size_t temp_count = 4;

  std::size_t rows_per_subarray = 0;
  std::size_t word_length = 0;  // m
  std::size_t data_rows = 0;    // usable data rows (even)
  std::size_t column_capacity = 0;
  ComputeRows compute;
  /// xnor scratch, exact running match, HD<=1 running match, accumulator.
  std::vector<Row> temp_rows;

  /// Reserves the top rows and sizes the data region for `m`-bit words.
  /// Throws layout_fault if 2m data rows do not fit.
  static LayoutMap standard(std::size_t rows_per_subarray, std::size_t cols, std::size_t m);
  /// Reserved rows only; data_rows is everything below them.
  static LayoutMap reserve(std::size_t rows_per_subarray, std::size_t cols);

  /// Row Q(2j + v): opening it compares bit j against query value `v`.
  Row pair_row(std::size_t bit, bool value) const {
    return static_cast<Row>(2 * bit + (value ? 1 : 0));
  }
  Row xnor_row() const { return temp_rows[0]; }
  Row exact_row() const { return temp_rows[1]; }
  Row approx_row() const { return temp_rows[2]; }
  Row accumulator_row() const { return temp_rows[3]; }

  std::vector<Row> reserved() const;
  void validate() const;
};

/// Two cells per bit: 0 -> (1,0), 1 -> (0,1). Don't-care is (1,1) for NAND
/// and (0,0) for NOR; a word containing X requires a mode.
BitVector encode(std::span<const Trit> word, std::optional<CamMode> mode);
BitVector encode_bits(const BitVector& bits);
std::vector<Trit> decode(const BitVector& cells, CamMode mode);

/// Per-column verdicts read from the result row.
struct MatchVector {
  BitVector verdicts;
  Polarity polarity = Polarity::match_is_1;

  bool is_match(std::size_t column) const {
    return verdicts.get(column) == (polarity == Polarity::match_is_1);
  }
  /// Verdicts normalized so that 1 means match.
  BitVector matches() const {
    return polarity == Polarity::match_is_1 ? verdicts : ~verdicts;
  }
  std::size_t size() const { return verdicts.size(); }
};

/// A compiled search: the command trace plus where and how to read it.
/// The trace starts with PRE and ends with the readout ACT of `result_row`.
struct CompareProgram {
  CommandTrace trace;
  Polarity polarity = Polarity::match_is_1;
  Row result_row = 0;
  std::vector<std::string> warnings;
};

/// Writes column images (cell j of word c -> row j, column c) and
/// initializes the constant rows.
void store(std::span<const BitVector> words, const LayoutMap& layout, Subarray& sub);

/// AND-accumulates the cell values of `match_rows` (one ACT each) into the
/// exact running-match row. Verdict 1 = every opened cell held 1.
CompareProgram compile_and_chain(std::span<const Row> match_rows, const LayoutMap& layout,
                                 const TimingModel& timing);
/// OR-accumulates; verdict 1 = some opened cell held 1.
CompareProgram compile_or_chain(std::span<const Row> match_rows, const LayoutMap& layout,
                                const TimingModel& timing);
/// Verdict 1 = at most one opened cell held 0.
CompareProgram compile_hd1_chain(std::span<const Row> match_rows, const LayoutMap& layout,
                                 const TimingModel& timing);

/// Positions with mask bit 0 are skipped.
CompareProgram compile_nand_compare(const BitVector& query, const LayoutMap& layout,
                                    const TimingModel& timing,
                                    const std::optional<BitVector>& mask = std::nullopt);
CompareProgram compile_nor_compare(const BitVector& query, const LayoutMap& layout,
                                   const TimingModel& timing,
                                   const std::optional<BitVector>& mask = std::nullopt);
CompareProgram compile_approx_hd1(const BitVector& query, const LayoutMap& layout,
                                  const TimingModel& timing);

enum class Fold { or_fold, and_fold };

/// Seeds the accumulator with the identity of `fold`.
CommandTrace compile_fold_init(const LayoutMap& layout, const TimingModel& timing, Fold fold);
/// Replaces the readout of `program` with: fold result into the accumulator,
/// read the accumulator. Raw verdict rows are folded; polarity is kept.
CompareProgram with_fold(CompareProgram program, const LayoutMap& layout,
                         const TimingModel& timing, Fold fold);

/// Executes the program and reads the result row buffer. The subarray is
/// left with the result row open; the next program's leading PRE closes it.
MatchVector run_compare(const CompareProgram& program, Subarray& sub);

/// Number of data-row activations (rows below `data_rows`) in a trace.
std::size_t count_data_activations(const CommandTrace& trace, std::size_t data_rows);

}  // namespace drama
