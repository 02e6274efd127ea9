#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drama/cam.hpp"
#include "drama/cam_array.hpp"
#include "drama/command.hpp"
#include "drama/config.hpp"
#include "drama/db_image.hpp"
#include "drama/error.hpp"
#include "drama/genomics.hpp"
#include "drama/metrics.hpp"

using namespace drama;

namespace {

struct Common {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;  // key=value

  SimConfig load() const {
    std::ostringstream text;
    if (!preset.empty()) text << "preset = " << preset << '\n';
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) fail(ErrorCode::io_error, "cannot open config " + config_path);
      text << in.rdbuf() << '\n';
    }
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) fail(ErrorCode::usage_error, "--set expects key=value, got " + kv);
      text << kv.substr(0, eq) << " = " << kv.substr(eq + 1) << '\n';
    }
    std::istringstream in(text.str());
    return parse_config(in);
  }

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app->add_option("--preset", preset, "device/timing preset applied first")
        ->check(CLI::IsMember({"ddr3", "dimm16", "dimm16_narrow"}));
    app->add_option("--set", overrides, "override one config key (key=value), repeatable");
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

// k-mer queries: one per line, or FASTA records to k-merize with the
// database's k.
std::vector<std::string> read_kmer_queries(const std::string& path, std::size_t k) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  if (in.peek() == '>') {
    std::vector<std::string> out;
    for (const auto& rec : genomics::parse_fasta(in)) {
      auto kmers = genomics::kmerize(rec.sequence, k);
      out.insert(out.end(), kmers.begin(), kmers.end());
    }
    return out;
  }
  in.close();
  auto lines = read_lines(path);
  for (auto& l : lines) {
    for (auto& c : l) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return lines;
}

std::string manifest_path(const std::string& db, const std::string& given) {
  return given.empty() ? db + ".manifest" : given;
}

void write_report(const std::string& path, const Report& report, const ThroughputEstimate* est) {
  if (path.empty()) return;
  auto out = open_out(path);
  out << report_json(report, est) << '\n';
}

class TraceSink {
 public:
  explicit TraceSink(const std::string& path) {
    if (!path.empty()) out_ = std::make_unique<std::ofstream>(open_out(path));
  }
  void add(const std::string& label, const CommandTrace& trace) {
    if (!out_) return;
    *out_ << "# " << label << '\n';
    emit_trace(*out_, trace);
  }

 private:
  std::unique_ptr<std::ofstream> out_;
};

// ---- build-db

struct BuildArgs {
  Common common;
  std::string reference;
  std::size_t synthetic = 0;
  std::size_t length = 1031;
  std::uint64_t seed = 1;
  std::string write_reference;
  std::size_t k = 0;
  std::string words;
  std::string mode = "nand";
  std::string out;
  std::string manifest;
};

int build_db(const BuildArgs& a) {
  const auto cfg = a.common.load();
  if (!a.words.empty()) {
    CamImage image;
    image.encoding = a.mode == "nor" ? ImageEncoding::nor : ImageEncoding::nand;
    const CamMode mode = a.mode == "nor" ? CamMode::nor : CamMode::nand;
    for (const auto& line : read_lines(a.words)) {
      const auto trits = parse_trits(line);
      if (image.words.empty()) image.word_length = static_cast<std::uint32_t>(trits.size());
      if (trits.size() != image.word_length) fail(ErrorCode::length_mismatch, "words differ in length: " + line);
      image.words.push_back(encode(trits, mode));
    }
    if (image.words.empty()) fail(ErrorCode::empty_db, a.words + " has no words");
    image.cells_per_word = 2 * image.word_length;
    // fails early if the words do not fit the configured device
    CamArray check(image.words, image.word_length, mode, cfg);
    save_image(a.out, image);
    std::printf("words %zu  word_length %u  encoding %s  subarrays %zu  data_rows %zu/%zu\n",
                image.words.size(), image.word_length, std::string(to_string(image.encoding)).c_str(),
                check.tile_count(), 2 * check.word_length(), cfg.device.rows_per_subarray);
    return 0;
  }

  std::vector<genomics::SequenceRecord> ref;
  if (!a.reference.empty()) {
    std::ifstream in(a.reference);
    if (!in) fail(ErrorCode::io_error, "cannot open " + a.reference);
    ref = genomics::parse_fasta(in);
  } else {
    ref = genomics::synthetic_reference(a.synthetic, a.length, a.seed);
  }
  if (!a.write_reference.empty()) {
    auto out = open_out(a.write_reference);
    for (const auto& r : ref) out << '>' << r.taxon << '\n' << r.sequence << '\n';
  }
  const auto db = genomics::ingest(ref, a.k, cfg.device);
  save_image(a.out, db.to_image());
  auto mf = open_out(manifest_path(a.out, a.manifest));
  db.write_manifest(mf);
  for (const auto& w : db.warnings()) std::fprintf(stderr, "warning: %s\n", w.c_str());
  const std::size_t capacity = cfg.device.total_subarrays() * cfg.device.cols_per_subarray;
  std::printf("k %zu  kmers %zu  taxa %zu  columns %zu/%zu  subarrays %zu  kmers/column %zu\n", db.k(),
              db.kmers().size(), db.taxa().size(), db.column_count(), capacity, db.tile_count(), db.strata());
  for (const auto& g : db.taxa()) {
    std::printf("  %s  kmers %zu  columns %zu..%zu\n", g.name.c_str(), g.record_count, g.first_column,
                g.first_column + g.column_count - 1);
  }
  return 0;
}

// ---- search

struct SearchArgs {
  Common common;
  std::string db;
  std::string manifest;
  std::string queries;
  std::string mode;
  std::string out;
  std::string emit_trace;
  std::string report;
};

genomics::MatchKind kmer_kind(const std::string& mode) {
  if (mode.empty() || mode == "nand") return genomics::MatchKind::exact;
  if (mode == "hd1") return genomics::MatchKind::hd1;
  fail(ErrorCode::mode_mismatch, "k-mer databases support --mode nand or hd1, not " + mode);
}

genomics::KmerDatabase load_kmer_db(const std::string& db, const std::string& manifest, const CamImage& image) {
  std::ifstream mf(manifest_path(db, manifest));
  if (!mf) fail(ErrorCode::io_error, "cannot open manifest " + manifest_path(db, manifest));
  return genomics::KmerDatabase::from_image(image, mf);
}

int search(const SearchArgs& a) {
  auto cfg = a.common.load();
  const auto image = load_image(a.db);
  std::ofstream file;
  if (!a.out.empty()) file = open_out(a.out);
  std::ostream& out = a.out.empty() ? std::cout : file;
  TraceSink traces(a.emit_trace);
  Report total;

  if (image.encoding == ImageEncoding::onehot) {
    const auto kind = kmer_kind(a.mode);
    const auto db = load_kmer_db(a.db, a.manifest, image);
    genomics::Classifier classifier(db, cfg);
    const auto queries = read_kmer_queries(a.queries, db.k());
    const auto batch = classifier.classify_batch(queries, kind);
    for (const auto& result : batch.results) {
      for (std::size_t s = 0; s < db.strata(); ++s) {
        traces.add("query " + result.query + " stratum " + std::to_string(s),
                   classifier.compile(result.query, s, kind).trace);
      }
      BitVector verdicts(db.column_count());
      for (std::size_t c : result.columns) verdicts.set(c, true);
      out << result.query << ' ' << verdicts.to_string() << " polarity=" << to_string(Polarity::match_is_1)
          << '\n';
    }
    total = batch.summary.report;
    write_report(a.report, total, nullptr);
    return 0;
  }

  const CamMode mode = image.encoding == ImageEncoding::nor ? CamMode::nor : CamMode::nand;
  const std::string m = a.mode.empty() ? std::string(to_string(mode)) : a.mode;
  if ((m == "nand" || m == "hd1") && mode != CamMode::nand) {
    fail(ErrorCode::mode_mismatch, "--mode " + m + " needs a nand image; this one is nor");
  }
  if (m == "nor" && mode != CamMode::nor) fail(ErrorCode::mode_mismatch, "--mode nor needs a nor image");
  const SearchKind kind = m == "hd1" ? SearchKind::hd1 : SearchKind::exact;
  CamArray array(image.words, image.word_length, mode, cfg);
  for (const auto& q : read_lines(a.queries)) {
    const auto result = array.search(BitVector::from_string(q), kind);
    traces.add("query " + q, result.program.trace);
    out << q << ' ' << result.matches.verdicts.to_string()
        << " polarity=" << to_string(result.matches.polarity) << '\n';
    total += result.report;
  }
  write_report(a.report, total, nullptr);
  return 0;
}

// ---- classify

struct ClassifyArgs {
  Common common;
  std::string db;
  std::string manifest;
  std::string queries;
  std::string mode;
  std::string out;
  std::string emit_trace;
  std::string report;
  std::size_t parallel = 1;
};

int classify(const ClassifyArgs& a) {
  const auto cfg = a.common.load();
  const auto image = load_image(a.db);
  if (image.encoding != ImageEncoding::onehot) {
    fail(ErrorCode::mode_mismatch, "classify needs a k-mer database; use search for word databases");
  }
  const auto kind = kmer_kind(a.mode);
  const auto db = load_kmer_db(a.db, a.manifest, image);
  genomics::Classifier classifier(db, cfg);
  const auto queries = read_kmer_queries(a.queries, db.k());
  const auto batch = classifier.classify_batch(queries, kind, a.parallel);

  TraceSink traces(a.emit_trace);
  for (const auto& q : queries) {
    for (std::size_t s = 0; s < db.strata(); ++s) {
      traces.add("query " + q + " stratum " + std::to_string(s), classifier.compile(q, s, kind).trace);
    }
  }
  if (a.out.empty()) {
    genomics::write_results(std::cout, batch);
  } else {
    auto out = open_out(a.out);
    genomics::write_results(out, batch);
  }
  write_report(a.report, batch.summary.report, nullptr);
  return 0;
}

// ---- bench

struct BenchArgs {
  Common common;
  std::size_t k = 32;
  std::size_t bits = 0;
  std::string mode = "nand";
  std::uint64_t seed = 1;
  std::string report;
  std::string emit_trace;
};

int bench(const BenchArgs& a) {
  Common common = a.common;
  if (common.preset.empty() && common.config_path.empty()) common.preset = "dimm16";
  const auto cfg = common.load();
  std::mt19937_64 rng(a.seed);

  CompareProgram program;
  std::string workload;
  if (a.bits > 0) {
    const auto layout = LayoutMap::standard(std::max(cfg.device.rows_per_subarray, 2 * a.bits + 16),
                                            cfg.device.cols_per_subarray, a.bits);
    BitVector q(a.bits);
    for (std::size_t j = 0; j < a.bits; ++j) q.set(j, rng() & 1U);
    program = a.mode == "nor"   ? compile_nor_compare(q, layout, cfg.timing)
              : a.mode == "hd1" ? compile_approx_hd1(q, layout, cfg.timing)
                                : compile_nand_compare(q, layout, cfg.timing);
    workload = std::to_string(a.bits) + "-bit " + a.mode + " word compare";
  } else {
    const auto kind = kmer_kind(a.mode);
    // one-hot needs 4k data rows; compile on a tall enough layout if the
    // configured subarray is shorter (command count does not depend on it)
    const std::size_t rows = std::max(cfg.device.rows_per_subarray, 4 * a.k + 16);
    const auto layout = LayoutMap::reserve(rows, cfg.device.cols_per_subarray);
    std::vector<Row> match;
    for (std::size_t j = 0; j < a.k; ++j) match.push_back(static_cast<Row>(4 * j + rng() % 4));
    program = kind == genomics::MatchKind::exact ? compile_and_chain(match, layout, cfg.timing)
                                                 : compile_hd1_chain(match, layout, cfg.timing);
    workload = "k=" + std::to_string(a.k) + " one-hot " + std::string(genomics::to_string(kind)) + " compare";
    if (rows != cfg.device.rows_per_subarray) {
      workload += " (compiled on a " + std::to_string(rows) + "-row layout)";
    }
  }
  TraceSink traces(a.emit_trace);
  traces.add(workload, program.trace);

  const auto report = with_assignment(account(program.trace, cfg.timing, cfg.energy), 1, cfg.energy);
  auto est = throughput_estimate(cfg.device, report, cfg.device.cols_per_subarray);
  est.assumptions.insert(est.assumptions.begin(), "workload: " + workload);
  est.assumptions.push_back("host taxon assignment charged once per compare");
  std::cout << report_table(report, &est);
  write_report(a.report, report, &est);
  return 0;
}

// ---- trace

struct TraceArgs {
  Common common;
  std::string in;
  std::string out;
  std::string report;
};

int trace(const TraceArgs& a) {
  const auto cfg = a.common.load();
  std::ifstream in(a.in);
  if (!in) fail(ErrorCode::io_error, "cannot open " + a.in);
  const auto parsed = parse_trace(in);
  if (a.out.empty()) {
    emit_trace(std::cout, parsed);
  } else {
    auto out = open_out(a.out);
    emit_trace(out, parsed);
  }
  write_report(a.report, account(parsed, cfg.timing, cfg.energy), nullptr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content-addressable search on commodity DRAM via timing-violation ACT/PRE sequences"};
  app.require_subcommand(1);
  const std::vector<std::string> modes{"nand", "nor", "tcam", "hd1"};

  BuildArgs build;
  auto* b = app.add_subcommand("build-db", "build a database image (k-mer or word)");
  build.common.add_to(b);
  auto* src = b->add_option_group("source");
  src->add_option("--reference", build.reference, "FASTA reference; header token 1 is the taxon")
      ->check(CLI::ExistingFile);
  src->add_option("--synthetic", build.synthetic, "generate this many random taxa");
  src->add_option("--words", build.words, "word file: one 0/1/X word per line");
  src->require_option(1);
  b->add_option("--length", build.length, "synthetic genome length");
  b->add_option("--seed", build.seed, "seed for synthetic data");
  b->add_option("--write-reference", build.write_reference, "save the (synthetic) reference as FASTA");
  b->add_option("--k", build.k, "k-mer length");
  b->add_option("--mode", build.mode, "word encoding")->check(CLI::IsMember({"nand", "nor", "tcam"}));
  b->add_option("--out,--db", build.out, "output image")->required();
  b->add_option("--manifest", build.manifest, "layout manifest (default <image>.manifest)");

  SearchArgs srch;
  auto* s = app.add_subcommand("search", "per-query match vectors");
  srch.common.add_to(s);
  s->add_option("--db", srch.db, "database image")->required()->check(CLI::ExistingFile);
  s->add_option("--manifest", srch.manifest, "layout manifest for k-mer images");
  s->add_option("--queries", srch.queries, "query file")->required()->check(CLI::ExistingFile);
  s->add_option("--mode", srch.mode, "compare kind")->check(CLI::IsMember(modes));
  s->add_option("--out", srch.out, "verdict file (default stdout)");
  s->add_option("--emit-trace", srch.emit_trace, "write the command traces");
  s->add_option("--report", srch.report, "write a JSON report");

  ClassifyArgs cls;
  auto* c = app.add_subcommand("classify", "assign taxa to k-mer queries");
  cls.common.add_to(c);
  c->add_option("--db", cls.db, "k-mer database image")->required()->check(CLI::ExistingFile);
  c->add_option("--manifest", cls.manifest, "layout manifest (default <image>.manifest)");
  c->add_option("--queries", cls.queries, "k-mers, one per line, or FASTA")->required()->check(CLI::ExistingFile);
  c->add_option("--mode", cls.mode, "nand = exact, hd1 = one base substitution")->check(CLI::IsMember(modes));
  c->add_option("--out", cls.out, "results file (default stdout)");
  c->add_option("--emit-trace", cls.emit_trace, "write the command traces");
  c->add_option("--report", cls.report, "write a JSON report");
  c->add_option("--parallel", cls.parallel, "worker threads across subarrays")->check(CLI::PositiveNumber);

  BenchArgs bn;
  auto* bm = app.add_subcommand("bench", "latency, energy and throughput of one compare");
  bn.common.add_to(bm);
  bm->add_option("--k", bn.k, "k-mer length for the one-hot compare")->check(CLI::PositiveNumber);
  bm->add_option("--bits", bn.bits, "benchmark an m-bit word compare instead");
  bm->add_option("--mode", bn.mode, "compare kind")->check(CLI::IsMember(modes));
  bm->add_option("--seed", bn.seed, "seed for the query content");
  bm->add_option("--report", bn.report, "write a JSON report");
  bm->add_option("--emit-trace", bn.emit_trace, "write the command trace");

  TraceArgs tr;
  auto* t = app.add_subcommand("trace", "re-emit a command trace in canonical form and account it");
  tr.common.add_to(t);
  t->add_option("--in", tr.in, "trace file")->required()->check(CLI::ExistingFile);
  t->add_option("--out", tr.out, "output (default stdout)");
  t->add_option("--report", tr.report, "write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error[%s]: %s\n", std::string(to_string(ErrorCode::usage_error)).c_str(), e.what());
    return 2;
  }

  try {
    if (b->parsed()) {
      if (build.words.empty() && build.k == 0) fail(ErrorCode::usage_error, "k-mer databases need --k");
      return build_db(build);
    }
    if (s->parsed()) return search(srch);
    if (c->parsed()) return classify(cls);
    if (t->parsed()) return trace(tr);
    return bench(bn);
  } catch (const Error& e) {
    std::fprintf(stderr, "error[%s]: %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error[INTERNAL]: %s\n", e.what());
    return 1;
  }
}
