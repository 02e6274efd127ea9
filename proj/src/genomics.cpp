#include "drama/genomics.hpp"

#include <algorithm>
#include <future>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "drama/error.hpp"

namespace drama::genomics {

std::optional<Base> base_from_char(char c) {
  switch (c) {
    case 'A': case 'a': return Base::A;
    case 'G': case 'g': return Base::G;
    case 'C': case 'c': return Base::C;
    case 'T': case 't': return Base::T;
    default: return std::nullopt;
  }
}

char to_char(Base b) {
  constexpr char letters[] = {'A', 'G', 'C', 'T'};
  return letters[static_cast<std::size_t>(b)];
}

BitVector encode_kmer_onehot(std::string_view kmer) {
  BitVector cells(4 * kmer.size());
  for (std::size_t j = 0; j < kmer.size(); ++j) {
    const auto base = base_from_char(kmer[j]);
    if (!base) fail(ErrorCode::encoding_fault, "invalid base '" + std::string(1, kmer[j]) + "'");
    cells.set(4 * j + static_cast<std::size_t>(*base), true);
  }
  return cells;
}

std::string decode_kmer_onehot(const BitVector& cells) {
  if (cells.size() % 4 != 0) fail(ErrorCode::encoding_fault, "one-hot image length is not a multiple of 4");
  std::string out(cells.size() / 4, '?');
  for (std::size_t j = 0; j < out.size(); ++j) {
    int hot = -1;
    for (std::size_t o = 0; o < 4; ++o) {
      if (!cells[4 * j + o]) continue;
      if (hot >= 0) fail(ErrorCode::encoding_fault, "base slice has more than one hot cell");
      hot = static_cast<int>(o);
    }
    if (hot < 0) fail(ErrorCode::encoding_fault, "base slice has no hot cell");
    out[j] = to_char(static_cast<Base>(hot));
  }
  return out;
}

std::vector<SequenceRecord> parse_fasta(std::istream& in) {
  std::vector<SequenceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '>') {
      std::istringstream header(line.substr(1));
      SequenceRecord rec;
      header >> rec.taxon;
      if (rec.taxon.empty()) {
        fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": header without taxon id");
      }
      records.push_back(std::move(rec));
      continue;
    }
    if (records.empty()) {
      fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": sequence before first header");
    }
    for (char c : line) {
      if (c == ' ' || c == '\t') continue;
      records.back().sequence.push_back(
          static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return records;
}

std::vector<std::string> kmerize(std::string_view sequence, std::size_t k, std::size_t* skipped) {
  std::vector<std::string> out;
  if (k == 0 || sequence.size() < k) return out;
  // Position of the most recent non-ACGT character, or npos.
  std::size_t last_bad = std::string_view::npos;
  for (std::size_t i = 0; i < k - 1; ++i) {
    if (!base_from_char(sequence[i])) last_bad = i;
  }
  for (std::size_t end = k - 1; end < sequence.size(); ++end) {
    if (!base_from_char(sequence[end])) last_bad = end;
    const std::size_t start = end + 1 - k;
    if (last_bad != std::string_view::npos && last_bad >= start) {
      if (skipped != nullptr) ++*skipped;
      continue;
    }
    std::string kmer(sequence.substr(start, k));
    for (auto& c : kmer) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    out.push_back(std::move(kmer));
  }
  return out;
}

std::vector<SequenceRecord> synthetic_reference(std::size_t taxa, std::size_t length,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SequenceRecord> out;
  out.reserve(taxa);
  for (std::size_t t = 0; t < taxa; ++t) {
    SequenceRecord rec{"taxon" + std::to_string(t), std::string(length, 'A')};
    for (auto& c : rec.sequence) c = to_char(static_cast<Base>(rng() >> 62));
    out.push_back(std::move(rec));
  }
  return out;
}

KmerDatabase ingest(std::span<const SequenceRecord> reference, std::size_t k,
                    const DeviceConfig& device) {
  if (reference.empty()) fail(ErrorCode::empty_db, "reference input has no records");
  if (k == 0) fail(ErrorCode::layout_fault, "k must be >= 1");
  device.validate();

  KmerDatabase db;
  db.k_ = k;
  db.rows_ = device.rows_per_subarray;
  db.cols_ = device.cols_per_subarray;
  const auto layout = LayoutMap::reserve(db.rows_, db.cols_);
  db.strata_ = layout.data_rows / (4 * k);
  if (db.strata_ == 0) {
    fail(ErrorCode::layout_fault, "k=" + std::to_string(k) + " needs " + std::to_string(4 * k) +
                                      " data rows; only " + std::to_string(layout.data_rows) +
                                      " are free per subarray");
  }

  std::unordered_map<std::string, std::size_t> taxon_index;
  std::vector<std::vector<std::string>> per_taxon;
  std::vector<std::unordered_set<std::string>> seen;
  for (const auto& rec : reference) {
    auto [it, inserted] = taxon_index.try_emplace(rec.taxon, db.taxa_.size());
    if (inserted) {
      db.taxa_.push_back(TaxonGroup{rec.taxon});
      per_taxon.emplace_back();
      seen.emplace_back();
    }
    const std::size_t t = it->second;
    std::size_t skipped = 0;
    for (auto& kmer : kmerize(rec.sequence, k, &skipped)) {
      if (seen[t].insert(kmer).second) per_taxon[t].push_back(std::move(kmer));
    }
    if (skipped > 0) {
      db.warnings_.push_back("taxon " + rec.taxon + ": skipped " + std::to_string(skipped) +
                             " windows containing non-ACGT characters");
    }
  }

  for (std::size_t t = 0; t < per_taxon.size(); ++t) {
    db.taxa_[t].first_record = db.kmers_.size();
    db.taxa_[t].record_count = per_taxon[t].size();
    for (auto& kmer : per_taxon[t]) {
      db.kmers_.push_back(std::move(kmer));
      db.record_taxon_.push_back(t);
    }
  }
  if (db.kmers_.empty()) fail(ErrorCode::empty_db, "no k-mers of length " + std::to_string(k));
  db.place();

  const std::size_t capacity = device.total_subarrays() * device.cols_per_subarray;
  if (db.columns_ > capacity) {
    fail(ErrorCode::layout_fault, "database needs " + std::to_string(db.columns_) +
                                      " columns; device holds " + std::to_string(capacity));
  }
  return db;
}

void KmerDatabase::place() {
  std::size_t cursor = 0;
  for (auto& group : taxa_) {
    group.first_column = cursor;
    group.column_count = (group.record_count + strata_ - 1) / strata_;
    cursor += group.column_count;
  }
  columns_ = cursor;
}

Placement KmerDatabase::placement(std::size_t record) const {
  const auto& group = taxa_.at(record_taxon_.at(record));
  const std::size_t local = record - group.first_record;
  return {group.first_column + local / strata_, local % strata_};
}

std::optional<std::size_t> KmerDatabase::taxon_of_column(std::size_t column) const {
  auto it = std::upper_bound(taxa_.begin(), taxa_.end(), column,
                             [](std::size_t c, const TaxonGroup& g) { return c < g.first_column; });
  if (it == taxa_.begin()) return std::nullopt;
  --it;
  if (column >= it->first_column + it->column_count) return std::nullopt;
  return static_cast<std::size_t>(it - taxa_.begin());
}

std::vector<BitVector> KmerDatabase::tile_rows(std::size_t tile) const {
  std::vector<BitVector> rows(strata_ * 4 * k_, BitVector(cols_));
  const std::size_t first = tile * cols_;
  for (std::size_t rec = 0; rec < kmers_.size(); ++rec) {
    const auto p = placement(rec);
    if (p.column < first || p.column >= first + cols_) continue;
    const auto cells = encode_kmer_onehot(kmers_[rec]);
    const Row base = stratum_base(p.stratum);
    for (std::size_t i : cells.set_indices()) rows[base + i].set(p.column - first, true);
  }
  return rows;
}

CamImage KmerDatabase::to_image() const {
  CamImage image;
  image.encoding = ImageEncoding::onehot;
  image.word_length = static_cast<std::uint32_t>(k_);
  image.cells_per_word = static_cast<std::uint32_t>(4 * k_);
  image.words.reserve(kmers_.size());
  for (const auto& kmer : kmers_) image.words.push_back(encode_kmer_onehot(kmer));
  return image;
}

void KmerDatabase::write_manifest(std::ostream& out) const {
  out << "# DRAMA k-mer database manifest\n"
      << "version = 1\n"
      << "k = " << k_ << '\n'
      << "rows_per_subarray = " << rows_ << '\n'
      << "cols_per_subarray = " << cols_ << '\n'
      << "strata = " << strata_ << '\n'
      << "records = " << kmers_.size() << '\n'
      << "columns = " << columns_ << '\n'
      << "# group <taxon> <first_record> <record_count> <first_column> <column_count>\n";
  for (const auto& g : taxa_) {
    out << "group " << g.name << ' ' << g.first_record << ' ' << g.record_count << ' '
        << g.first_column << ' ' << g.column_count << '\n';
  }
}

KmerDatabase KmerDatabase::from_image(const CamImage& image, std::istream& manifest) {
  if (image.encoding != ImageEncoding::onehot) {
    fail(ErrorCode::mode_mismatch, "k-mer databases need a onehot image");
  }
  KmerDatabase db;
  std::size_t records = 0, columns = 0;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream in(line);
    std::string key;
    in >> key;
    if (key == "group") {
      TaxonGroup g;
      in >> g.name >> g.first_record >> g.record_count >> g.first_column >> g.column_count;
      if (!in) fail(ErrorCode::parse_error, "bad manifest group line: " + line);
      db.taxa_.push_back(std::move(g));
      continue;
    }
    std::string eq;
    std::size_t value = 0;
    in >> eq >> value;
    if (!in || eq != "=") fail(ErrorCode::parse_error, "bad manifest line: " + line);
    if (key == "k") db.k_ = value;
    else if (key == "rows_per_subarray") db.rows_ = value;
    else if (key == "cols_per_subarray") db.cols_ = value;
    else if (key == "strata") db.strata_ = value;
    else if (key == "records") records = value;
    else if (key == "columns") columns = value;
    else if (key != "version") fail(ErrorCode::parse_error, "unknown manifest key " + key);
  }
  if (db.k_ != image.word_length || records != image.words.size() || db.strata_ == 0 || db.cols_ == 0) {
    fail(ErrorCode::parse_error, "manifest does not describe this image");
  }
  db.kmers_.reserve(records);
  for (const auto& w : image.words) db.kmers_.push_back(decode_kmer_onehot(w));
  db.record_taxon_.assign(records, 0);
  std::size_t expected_first = 0;
  for (std::size_t t = 0; t < db.taxa_.size(); ++t) {
    const auto& g = db.taxa_[t];
    if (g.first_record != expected_first || g.first_record + g.record_count > records) {
      fail(ErrorCode::parse_error, "manifest groups do not tile the records");
    }
    std::fill_n(db.record_taxon_.begin() + static_cast<std::ptrdiff_t>(g.first_record),
                g.record_count, t);
    expected_first += g.record_count;
  }
  if (expected_first != records) fail(ErrorCode::parse_error, "manifest groups do not cover all records");
  const auto declared = db.taxa_;
  db.place();
  for (std::size_t t = 0; t < declared.size(); ++t) {
    if (declared[t].first_column != db.taxa_[t].first_column ||
        declared[t].column_count != db.taxa_[t].column_count) {
      fail(ErrorCode::parse_error, "manifest column groups disagree with the placement rule");
    }
  }
  if (columns != db.columns_) fail(ErrorCode::parse_error, "manifest column count mismatch");
  return db;
}

std::string_view to_string(MatchKind kind) { return kind == MatchKind::exact ? "exact" : "hd1"; }

Classifier::Classifier(const KmerDatabase& db, const SimConfig& config)
    : db_(&db), config_(config), layout_(LayoutMap::reserve(db.rows_per_subarray(), db.cols_per_subarray())) {
  if (db.kmers().empty()) fail(ErrorCode::empty_db, "database has no k-mers");
  layout_.word_length = db.strata() * 2 * db.k();
  layout_.validate();
  tiles_.reserve(db.tile_count());
  for (std::size_t t = 0; t < db.tile_count(); ++t) {
    Subarray sub(db.rows_per_subarray(), db.cols_per_subarray(), config_.timing);
    const auto rows = db.tile_rows(t);
    for (std::size_t r = 0; r < rows.size(); ++r) sub.write_row(static_cast<Row>(r), rows[r]);
    sub.write_row(layout_.compute.c0, BitVector(sub.cols(), false));
    sub.write_row(layout_.compute.c1, BitVector(sub.cols(), true));
    tiles_.push_back(std::move(sub));
  }
}

void Classifier::check_query(std::string_view kmer) const {
  if (kmer.size() != db_->k()) {
    fail(ErrorCode::length_mismatch, "query length " + std::to_string(kmer.size()) +
                                         " differs from k=" + std::to_string(db_->k()));
  }
  for (char c : kmer) {
    if (!base_from_char(c)) fail(ErrorCode::encoding_fault, "invalid base '" + std::string(1, c) + "'");
  }
}

std::vector<Row> Classifier::match_rows(std::string_view kmer, std::size_t stratum) const {
  std::vector<Row> rows;
  rows.reserve(kmer.size());
  const Row base = db_->stratum_base(stratum);
  for (std::size_t j = 0; j < kmer.size(); ++j) {
    rows.push_back(base + static_cast<Row>(4 * j + static_cast<std::size_t>(*base_from_char(kmer[j]))));
  }
  return rows;
}

CompareProgram Classifier::compile(std::string_view kmer, std::size_t stratum, MatchKind kind) const {
  check_query(kmer);
  if (stratum >= db_->strata()) fail(ErrorCode::address_fault, "stratum out of range");
  const auto rows = match_rows(kmer, stratum);
  return kind == MatchKind::exact ? compile_and_chain(rows, layout_, config_.timing)
                                  : compile_hd1_chain(rows, layout_, config_.timing);
}

std::vector<std::size_t> Classifier::search_tile(std::size_t tile,
                                                 std::span<const CompareProgram> programs) {
  // programs are stratum-major for one query
  std::vector<std::size_t> columns;
  auto& sub = tiles_[tile];
  const std::size_t first = tile * db_->cols_per_subarray();
  for (std::size_t s = 0; s < programs.size(); ++s) {
    const auto hits = run_compare(programs[s], sub).matches();
    for (std::size_t c : hits.set_indices()) {
      const std::size_t column = first + c;
      const auto taxon = db_->taxon_of_column(column);
      if (!taxon) continue;
      const auto& g = db_->taxa()[*taxon];
      // Skip empty stack slots in a group's last column.
      if ((column - g.first_column) * db_->strata() + s >= g.record_count) continue;
      columns.push_back(column);
    }
  }
  return columns;
}

ClassificationResult Classifier::assemble(std::string_view kmer, MatchKind kind,
                                          std::vector<std::size_t> columns) const {
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  ClassificationResult result{std::string(kmer), kind, std::move(columns), {}};
  std::vector<bool> hit(db_->taxa().size(), false);
  for (std::size_t c : result.columns) hit[*db_->taxon_of_column(c)] = true;
  for (std::size_t t = 0; t < hit.size(); ++t) {
    if (hit[t]) result.taxa.push_back(db_->taxa()[t].name);
  }
  return result;
}

ClassificationResult Classifier::classify(std::string_view kmer, MatchKind kind) {
  std::vector<CompareProgram> programs;
  for (std::size_t s = 0; s < db_->strata(); ++s) programs.push_back(compile(kmer, s, kind));
  std::vector<std::size_t> columns;
  for (std::size_t t = 0; t < tiles_.size(); ++t) {
    auto part = search_tile(t, programs);
    columns.insert(columns.end(), part.begin(), part.end());
  }
  return assemble(kmer, kind, std::move(columns));
}

BatchResult Classifier::classify_batch(std::span<const std::string> queries, MatchKind kind,
                                       std::size_t parallel) {
  BatchResult batch;
  if (queries.empty()) return batch;
  for (const auto& q : queries) {
    if (q.size() != queries.front().size()) {
      fail(ErrorCode::length_mismatch, "batch mixes k-mer lengths");
    }
  }

  const std::size_t strata = db_->strata();
  std::vector<CompareProgram> programs;
  programs.reserve(queries.size() * strata);
  for (const auto& q : queries) {
    for (std::size_t s = 0; s < strata; ++s) programs.push_back(compile(q, s, kind));
  }

  // hits[tile][query] -> columns; each worker owns a disjoint set of tiles.
  std::vector<std::vector<std::vector<std::size_t>>> hits(tiles_.size());
  auto work = [&](std::size_t worker, std::size_t workers) {
    for (std::size_t t = worker; t < tiles_.size(); t += workers) {
      hits[t].resize(queries.size());
      for (std::size_t q = 0; q < queries.size(); ++q) {
        hits[t][q] = search_tile(t, std::span(programs).subspan(q * strata, strata));
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(parallel, 1, std::max<std::size_t>(1, tiles_.size()));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < workers; ++w) futures.push_back(std::async(std::launch::async, work, w, workers));
    for (auto& f : futures) f.get();
  }

  auto& summary = batch.summary;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::vector<std::size_t> columns;
    for (std::size_t t = 0; t < tiles_.size(); ++t) {
      columns.insert(columns.end(), hits[t][q].begin(), hits[t][q].end());
    }
    batch.results.push_back(assemble(queries[q], kind, std::move(columns)));
    const auto& res = batch.results.back();
    if (!res.taxa.empty()) ++summary.matched;
    for (const auto& name : res.taxa) ++summary.per_taxon[name];
  }

  // Tiles in distinct banks run concurrently; beyond chips x banks they queue.
  const std::size_t banks = config_.device.chips * config_.device.banks_per_chip;
  const std::size_t waves = (tiles_.size() + banks - 1) / banks;
  Report per_tile;
  for (const auto& p : programs) per_tile += account(p.trace, config_.timing, config_.energy);
  for (std::size_t w = 0; w < waves; ++w) summary.report += per_tile;
  summary.report = with_assignment(summary.report, queries.size(), config_.energy);

  summary.queries = queries.size();
  summary.match_rate = static_cast<double>(summary.matched) / static_cast<double>(summary.queries);
  summary.simulated_latency = summary.report.total_latency();
  const double seconds = static_cast<double>(summary.simulated_latency.count()) * 1e-12;
  summary.queries_per_second = seconds > 0.0 ? static_cast<double>(summary.queries) / seconds : 0.0;
  return batch;
}

void write_results(std::ostream& out, const BatchResult& batch) {
  out << "query,kind,columns,taxa\n";
  for (const auto& r : batch.results) {
    out << r.query << ',' << to_string(r.kind) << ',';
    for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? ";" : "") << r.columns[i];
    out << ',';
    for (std::size_t i = 0; i < r.taxa.size(); ++i) out << (i ? ";" : "") << r.taxa[i];
    out << '\n';
  }
  const auto& s = batch.summary;
  out << "# queries = " << s.queries << '\n'
      << "# matched = " << s.matched << '\n'
      << "# match_rate = " << s.match_rate << '\n'
      << "# simulated_latency_ns = " << to_ns(s.simulated_latency) << '\n'
      << "# queries_per_second = " << s.queries_per_second << '\n';
  for (const auto& [name, count] : s.per_taxon) out << "# taxon " << name << " = " << count << '\n';
}

}  // namespace drama::genomics
