#include "drama/db_image.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "drama/error.hpp"

namespace drama {

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'R', 'A', 'M', 'A', 'C', 'A', 'M'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get_le(std::istream& in) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int byte = in.get();
    if (byte == std::char_traits<char>::eof()) fail(ErrorCode::parse_error, "truncated image header");
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(byte)) << (8 * i);
  }
  return static_cast<T>(value);
}

}  // namespace

std::string_view to_string(ImageEncoding encoding) {
  switch (encoding) {
    case ImageEncoding::nand: return "nand";
    case ImageEncoding::nor: return "nor";
    case ImageEncoding::onehot: return "onehot";
  }
  return "unknown";
}

void write_image(std::ostream& out, const CamImage& image) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(image.encoding));
  put_le<std::uint8_t>(out, 0);
  put_le<std::uint32_t>(out, image.word_length);
  put_le<std::uint32_t>(out, image.cells_per_word);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(image.words.size()));

  const std::size_t bytes = (image.cells_per_word + 7) / 8;
  std::string record(bytes, '\0');
  for (const auto& word : image.words) {
    if (word.size() != image.cells_per_word) {
      fail(ErrorCode::length_mismatch, "image word does not have cells_per_word cells");
    }
    std::fill(record.begin(), record.end(), '\0');
    for (std::size_t i : word.set_indices()) {
      record[i / 8] = static_cast<char>(static_cast<unsigned char>(record[i / 8]) | (1U << (i % 8)));
    }
    out.write(record.data(), static_cast<std::streamsize>(record.size()));
  }
  if (!out) fail(ErrorCode::io_error, "failed writing database image");
}

CamImage read_image(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) fail(ErrorCode::parse_error, "not a DRAMACAM image");
  const auto version = get_le<std::uint16_t>(in);
  if (version != kVersion) fail(ErrorCode::parse_error, "unsupported image version " + std::to_string(version));
  const auto encoding = get_le<std::uint8_t>(in);
  if (encoding > 2) fail(ErrorCode::parse_error, "unknown image encoding");
  (void)get_le<std::uint8_t>(in);

  CamImage image;
  image.encoding = static_cast<ImageEncoding>(encoding);
  image.word_length = get_le<std::uint32_t>(in);
  image.cells_per_word = get_le<std::uint32_t>(in);
  const auto count = get_le<std::uint32_t>(in);

  const std::size_t bytes = (image.cells_per_word + 7) / 8;
  std::string record(bytes, '\0');
  image.words.reserve(count);
  for (std::uint32_t w = 0; w < count; ++w) {
    in.read(record.data(), static_cast<std::streamsize>(bytes));
    if (!in) fail(ErrorCode::parse_error, "truncated image body");
    BitVector word(image.cells_per_word);
    for (std::size_t i = 0; i < image.cells_per_word; ++i) {
      if ((static_cast<unsigned char>(record[i / 8]) >> (i % 8)) & 1U) word.set(i, true);
    }
    image.words.push_back(std::move(word));
  }
  return image;
}

void save_image(const std::filesystem::path& path, const CamImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path.string());
  write_image(out, image);
}

CamImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path.string());
  return read_image(in);
}

}  // namespace drama
