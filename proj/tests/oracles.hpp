#pragma once

// Brute-force reference models used only by tests. None of these touch the
// subarray model or the trace compilers.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

using Word = std::vector<int>;  // 0, 1, or 2 for don't-care

inline Word bits_of(std::uint64_t value, std::size_t m) {
  Word w(m);
  for (std::size_t j = 0; j < m; ++j) w[j] = static_cast<int>((value >> j) & 1U);
  return w;
}

inline bool equal(const Word& a, const Word& b) { return a == b; }

inline bool masked_equal(const Word& stored, const Word& query) {
  for (std::size_t j = 0; j < stored.size(); ++j) {
    if (stored[j] != 2 && stored[j] != query[j]) return false;
  }
  return true;
}

inline std::size_t hamming(const Word& a, const Word& b) {
  std::size_t d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) d += a[j] != b[j] ? 1 : 0;
  return d;
}

inline std::size_t base_mismatches(std::string_view a, std::string_view b) {
  std::size_t d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) d += a[j] != b[j] ? 1 : 0;
  return d;
}

inline int majority(int a, int b, int c) { return (a + b + c) >= 2 ? 1 : 0; }

/// Every stored (kmer, taxon) whose base mismatch count is within `tolerance`.
inline std::vector<std::string> linear_scan(const std::vector<std::string>& kmers,
                                            const std::vector<std::string>& taxa_of_record,
                                            const std::vector<std::string>& taxon_order,
                                            std::string_view query, std::size_t tolerance) {
  std::vector<bool> hit(taxon_order.size(), false);
  for (std::size_t i = 0; i < kmers.size(); ++i) {
    if (base_mismatches(kmers[i], query) <= tolerance) {
      for (std::size_t t = 0; t < taxon_order.size(); ++t) {
        if (taxon_order[t] == taxa_of_record[i]) hit[t] = true;
      }
    }
  }
  std::vector<std::string> out;
  for (std::size_t t = 0; t < taxon_order.size(); ++t) {
    if (hit[t]) out.push_back(taxon_order[t]);
  }
  return out;
}

inline Word random_word(std::mt19937_64& rng, std::size_t m) {
  Word w(m);
  for (auto& b : w) b = static_cast<int>(rng() & 1U);
  return w;
}

}  // namespace oracle
