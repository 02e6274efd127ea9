#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drama/bitvector.hpp"
#include "drama/cam.hpp"
#include "drama/config.hpp"
#include "drama/db_image.hpp"
#include "drama/metrics.hpp"
#include "drama/subarray.hpp"

namespace drama::genomics {

/// Bases in one-hot row order: offset 0 = A, 1 = G, 2 = C, 3 = T, so that
/// reading a 4-cell slice high-to-low gives A=0001 G=0010 C=0100 T=1000.
enum class Base : std::uint8_t { A = 0, G = 1, C = 2, T = 3 };

std::optional<Base> base_from_char(char c);
char to_char(Base b);

/// 4 cells per base, exactly one set.
BitVector encode_kmer_onehot(std::string_view kmer);
std::string decode_kmer_onehot(const BitVector& cells);

struct SequenceRecord {
  std::string taxon;  // first whitespace-delimited header token
  std::string sequence;
};

/// `>`-header records; sequence lines are concatenated and upper-cased.
std::vector<SequenceRecord> parse_fasta(std::istream& in);

/// Length-k windows with step 1. Windows containing non-ACGT characters are
/// skipped; the number skipped is added to `skipped` when given.
std::vector<std::string> kmerize(std::string_view sequence, std::size_t k,
                                 std::size_t* skipped = nullptr);

/// Random reference genomes, one per taxon, named taxon0..taxonN-1.
std::vector<SequenceRecord> synthetic_reference(std::size_t taxa, std::size_t length,
                                                std::uint64_t seed);

struct TaxonGroup {
  std::string name;
  std::size_t first_record = 0;
  std::size_t record_count = 0;
  std::size_t first_column = 0;
  std::size_t column_count = 0;
};

struct Placement {
  std::size_t column = 0;  // global column across tiles
  std::size_t stratum = 0;
};

/// One-hot k-mer database. Each taxon owns a contiguous column group; a
/// column stacks up to `strata` k-mers vertically at 4k-row strides.
class KmerDatabase {
 public:
  KmerDatabase() = default;

  std::size_t k() const noexcept { return k_; }
  std::size_t strata() const noexcept { return strata_; }
  std::size_t rows_per_subarray() const noexcept { return rows_; }
  std::size_t cols_per_subarray() const noexcept { return cols_; }
  std::size_t column_count() const noexcept { return columns_; }
  std::size_t tile_count() const noexcept {
    return columns_ == 0 ? 0 : (columns_ + cols_ - 1) / cols_;
  }

  const std::vector<std::string>& kmers() const noexcept { return kmers_; }
  const std::vector<std::size_t>& record_taxon() const noexcept { return record_taxon_; }
  const std::vector<TaxonGroup>& taxa() const noexcept { return taxa_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  Placement placement(std::size_t record) const;
  std::optional<std::size_t> taxon_of_column(std::size_t column) const;
  /// First row of the given stratum.
  Row stratum_base(std::size_t stratum) const { return static_cast<Row>(stratum * 4 * k_); }

  /// Cell rows of one tile, ready for write_row (data region only).
  std::vector<BitVector> tile_rows(std::size_t tile) const;

  CamImage to_image() const;
  void write_manifest(std::ostream& out) const;
  static KmerDatabase from_image(const CamImage& image, std::istream& manifest);

  friend KmerDatabase ingest(std::span<const SequenceRecord>, std::size_t, const DeviceConfig&);

 private:
  void place();

  std::size_t k_ = 0;
  std::size_t strata_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t columns_ = 0;
  std::vector<std::string> kmers_;
  std::vector<std::size_t> record_taxon_;
  std::vector<TaxonGroup> taxa_;
  std::vector<std::string> warnings_;
};

/// Deduplicates k-mers per taxon (first occurrence order) and lays taxa out
/// in first-appearance order. Records with the same taxon are merged.
KmerDatabase ingest(std::span<const SequenceRecord> reference, std::size_t k,
                    const DeviceConfig& device);

enum class MatchKind { exact, hd1 };

std::string_view to_string(MatchKind kind);

struct ClassificationResult {
  std::string query;
  MatchKind kind = MatchKind::exact;
  std::vector<std::size_t> columns;  // global, ascending
  std::vector<std::string> taxa;     // layout order
};

struct BatchSummary {
  std::size_t queries = 0;
  std::size_t matched = 0;
  double match_rate = 0.0;
  Duration simulated_latency{0};
  double queries_per_second = 0.0;
  std::map<std::string, std::size_t> per_taxon;
  Report report;
};

struct BatchResult {
  std::vector<ClassificationResult> results;
  BatchSummary summary;
};

/// Owns one simulated subarray per tile of the database and runs one-hot
/// compares against it.
class Classifier {
 public:
  Classifier(const KmerDatabase& db, const SimConfig& config);

  /// One ACT per base; exact programs AND-accumulate per-base matches,
  /// hd1 programs tolerate one mismatching base.
  CompareProgram compile(std::string_view kmer, std::size_t stratum, MatchKind kind) const;

  ClassificationResult classify(std::string_view kmer, MatchKind kind = MatchKind::exact);

  /// Results are in query order regardless of `parallel`.
  BatchResult classify_batch(std::span<const std::string> queries, MatchKind kind,
                             std::size_t parallel = 1);

  const LayoutMap& layout() const noexcept { return layout_; }
  const KmerDatabase& database() const noexcept { return *db_; }
  const Subarray& tile(std::size_t i) const { return tiles_.at(i); }

 private:
  std::vector<Row> match_rows(std::string_view kmer, std::size_t stratum) const;
  void check_query(std::string_view kmer) const;
  std::vector<std::size_t> search_tile(std::size_t tile, std::span<const CompareProgram> programs);
  ClassificationResult assemble(std::string_view kmer, MatchKind kind,
                                std::vector<std::size_t> columns) const;

  const KmerDatabase* db_;
  SimConfig config_;
  LayoutMap layout_;
  std::vector<Subarray> tiles_;
};

/// `query,kind,columns,taxa` lines, then a `#`-prefixed summary block.
void write_results(std::ostream& out, const BatchResult& batch);

}  // namespace drama::genomics
