#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drama/cam.hpp"
#include "drama/config.hpp"
#include "drama/metrics.hpp"

namespace drama {

enum class SearchKind { exact, hd1 };

struct SearchResult {
  MatchVector matches;     // one verdict per stored word, program polarity
  CompareProgram program;  // identical for every tile
  Report report;
};

/// A word database spread over as many subarrays as its column count needs.
/// Every tile uses the same layout, so one compiled program serves them all.
class CamArray {
 public:
  CamArray(std::span<const BitVector> cells, std::size_t word_length, CamMode mode,
           const SimConfig& config);

  std::size_t word_length() const noexcept { return layout_.word_length; }
  std::size_t word_count() const noexcept { return words_; }
  std::size_t tile_count() const noexcept { return tiles_.size(); }
  CamMode mode() const noexcept { return mode_; }
  const LayoutMap& layout() const noexcept { return layout_; }

  /// hd1 needs NAND-encoded data.
  CompareProgram compile(const BitVector& query, SearchKind kind) const;
  SearchResult search(const BitVector& query, SearchKind kind);

 private:
  SimConfig config_;
  CamMode mode_;
  LayoutMap layout_;
  std::size_t words_ = 0;
  std::vector<Subarray> tiles_;
};

}  // namespace drama
