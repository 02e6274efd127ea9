#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace drama {

/// Fixed-length bit sequence packed into 64-bit words. Used for DRAM rows,
/// row buffers, column cell images and match vectors.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  /// Parses a string of '0'/'1' characters (index 0 = first character).
  static BitVector from_string(std::string_view bits);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool get(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  bool operator[](std::size_t i) const noexcept { return get(i); }

  void fill(bool value) noexcept;
  std::size_t count() const noexcept;
  bool all() const noexcept { return count() == size_; }
  bool none() const noexcept { return count() == 0; }

  BitVector operator~() const;
  BitVector& operator&=(const BitVector& other);
  BitVector& operator|=(const BitVector& other);
  BitVector& operator^=(const BitVector& other);

  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  /// Column-wise majority of three equally sized vectors.
  static BitVector majority(const BitVector& a, const BitVector& b,
                            const BitVector& c);

  std::vector<std::size_t> set_indices() const;
  std::string to_string() const;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  void trim() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace drama
