#include "drama/cam_array.hpp"

#include <algorithm>

#include "drama/error.hpp"

namespace drama {

CamArray::CamArray(std::span<const BitVector> cells, std::size_t word_length, CamMode mode,
                   const SimConfig& config)
    : config_(config), mode_(mode), words_(cells.size()) {
  config_.validate();
  if (cells.empty()) fail(ErrorCode::empty_db, "database has no words");
  const auto& dev = config_.device;
  layout_ = LayoutMap::standard(dev.rows_per_subarray, dev.cols_per_subarray, word_length);
  const std::size_t cols = dev.cols_per_subarray;
  const std::size_t tiles = (cells.size() + cols - 1) / cols;
  if (tiles > dev.total_subarrays()) {
    fail(ErrorCode::layout_fault, std::to_string(cells.size()) + " words need " + std::to_string(tiles) +
                                      " subarrays; device has " + std::to_string(dev.total_subarrays()));
  }
  for (std::size_t t = 0; t < tiles; ++t) {
    const std::size_t first = t * cols;
    const std::size_t n = std::min(cols, cells.size() - first);
    Subarray sub(dev.rows_per_subarray, cols, config_.timing);
    store(cells.subspan(first, n), layout_, sub);
    tiles_.push_back(std::move(sub));
  }
}

CompareProgram CamArray::compile(const BitVector& query, SearchKind kind) const {
  if (kind == SearchKind::hd1) {
    if (mode_ != CamMode::nand) fail(ErrorCode::mode_mismatch, "hd1 search needs a nand database");
    return compile_approx_hd1(query, layout_, config_.timing);
  }
  return mode_ == CamMode::nand ? compile_nand_compare(query, layout_, config_.timing)
                                : compile_nor_compare(query, layout_, config_.timing);
}

SearchResult CamArray::search(const BitVector& query, SearchKind kind) {
  SearchResult out;
  out.program = compile(query, kind);
  out.matches.polarity = out.program.polarity;
  out.matches.verdicts = BitVector(words_);
  const std::size_t cols = config_.device.cols_per_subarray;
  for (std::size_t t = 0; t < tiles_.size(); ++t) {
    const auto part = run_compare(out.program, tiles_[t]);
    const std::size_t first = t * cols;
    for (std::size_t c = 0; c < cols && first + c < words_; ++c) {
      out.matches.verdicts.set(first + c, part.verdicts[c]);
    }
  }
  // Tiles in distinct banks run concurrently; beyond chips x banks they queue.
  const std::size_t banks = config_.device.chips * config_.device.banks_per_chip;
  const std::size_t waves = (tiles_.size() + banks - 1) / banks;
  const auto one = account(out.program.trace, config_.timing, config_.energy);
  for (std::size_t w = 0; w < waves; ++w) out.report += one;
  return out;
}

}  // namespace drama
