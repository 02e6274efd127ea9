#include "drama/bitvector.hpp"

#include <bit>

#include "drama/error.hpp"

namespace drama {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  trim();
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      fail(ErrorCode::parse_error, "invalid bit character '" + std::string(1, bits[i]) + "'");
    }
  }
  return v;
}

void BitVector::fill(bool value) noexcept {
  for (auto& w : words_) w = value ? ~std::uint64_t{0} : 0;
  trim();
}

std::size_t BitVector::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BitVector BitVector::operator~() const {
  BitVector r = *this;
  for (auto& w : r.words_) w = ~w;
  r.trim();
  return r;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  if (other.size_ != size_) fail(ErrorCode::length_mismatch, "bit vector size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) {
  if (other.size_ != size_) fail(ErrorCode::length_mismatch, "bit vector size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) fail(ErrorCode::length_mismatch, "bit vector size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVector BitVector::majority(const BitVector& a, const BitVector& b, const BitVector& c) {
  if (a.size_ != b.size_ || a.size_ != c.size_) {
    fail(ErrorCode::length_mismatch, "majority operands differ in size");
  }
  BitVector r(a.size_);
  for (std::size_t i = 0; i < r.words_.size(); ++i) {
    const auto x = a.words_[i], y = b.words_[i], z = c.words_[i];
    r.words_[i] = (x & y) | (y & z) | (x & z);
  }
  return r;
}

std::vector<std::size_t> BitVector::set_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    auto w = words_[wi];
    while (w != 0) {
      out.push_back(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

void BitVector::trim() noexcept {
  if (size_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }
}

}  // namespace drama
