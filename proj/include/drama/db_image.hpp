#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "drama/bitvector.hpp"

namespace drama {

enum class ImageEncoding : std::uint8_t { nand = 0, nor = 1, onehot = 2 };

std::string_view to_string(ImageEncoding encoding);

/// Column images of a CAM database, one per stored word.
///
/// On-disk layout, all integers little-endian:
///
///   offset size  field
///   0      8     magic "DRAMACAM"
///   8      2     version (1)
///   10     1     encoding (0 nand, 1 nor, 2 onehot)
///   11     1     reserved, 0
///   12     4     word_length   (bits, or bases for onehot)
///   16     4     cells_per_word
///   20     4     word_count
///   24     ...   word_count records of ceil(cells_per_word / 8) bytes;
///                cell i of a word is bit (i % 8) of byte (i / 8), unused
///                high bits of the last byte are 0.
struct CamImage {
  ImageEncoding encoding = ImageEncoding::nand;
  std::uint32_t word_length = 0;
  std::uint32_t cells_per_word = 0;
  std::vector<BitVector> words;

  friend bool operator==(const CamImage&, const CamImage&) = default;
};

void write_image(std::ostream& out, const CamImage& image);
CamImage read_image(std::istream& in);
void save_image(const std::filesystem::path& path, const CamImage& image);
CamImage load_image(const std::filesystem::path& path);

}  // namespace drama
