#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "drama/cam.hpp"
#include "drama/cam_array.hpp"
#include "drama/command.hpp"
#include "drama/config.hpp"
#include "drama/error.hpp"
#include "drama/genomics.hpp"
#include "drama/metrics.hpp"
#include "drama/subarray.hpp"

namespace py = pybind11;
using namespace drama;

namespace {

// Bit vectors cross the boundary as '0'/'1' strings.
BitVector bits(const std::string& s) { return BitVector::from_string(s); }

py::dict report_dict(const Report& r) {
  py::dict d;
  d["act_count"] = r.act_count;
  d["pre_count"] = r.pre_count;
  d["truncated_pre_count"] = r.truncated_pre_count;
  d["search_latency_ns"] = to_ns(r.search_latency);
  d["assignment_latency_ns"] = to_ns(r.assignment_latency);
  d["total_latency_ns"] = to_ns(r.total_latency());
  d["command_energy_pj"] = r.command_energy_pj;
  d["background_energy_pj"] = r.background_energy_pj;
  d["assignment_energy_pj"] = r.assignment_energy_pj;
  d["total_energy_pj"] = r.total_energy_pj();
  return d;
}

SimConfig config_from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

PYBIND11_MODULE(_drama, m) {
  m.doc() = "DRAM timing-violation CAM simulator";

  static py::exception<Error> error_type(m, "DramaError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::reinterpret_borrow<py::object>(error_type);
      py::object err = type(std::string(to_string(e.code())) + ": " + e.what());
      err.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  // config
  py::class_<TimingModel>(m, "TimingModel")
      .def(py::init<>())
      .def_property_readonly("t_rp_ns", [](const TimingModel& t) { return to_ns(t.t_rp); })
      .def_property_readonly("t_ras_ns", [](const TimingModel& t) { return to_ns(t.t_ras); })
      .def_property_readonly("t_copy_gap_ns", [](const TimingModel& t) { return to_ns(t.t_copy_gap); })
      .def_property_readonly("t_multi_gap_ns", [](const TimingModel& t) { return to_ns(t.t_multi_gap); });

  py::class_<DeviceConfig>(m, "DeviceConfig")
      .def(py::init<>())
      .def_static("dimm16_preset", &DeviceConfig::dimm16_preset)
      .def_static("dimm16_narrow_preset", &DeviceConfig::dimm16_narrow_preset)
      .def_readwrite("chips", &DeviceConfig::chips)
      .def_readwrite("banks_per_chip", &DeviceConfig::banks_per_chip)
      .def_readwrite("subarrays_per_bank", &DeviceConfig::subarrays_per_bank)
      .def_readwrite("rows_per_subarray", &DeviceConfig::rows_per_subarray)
      .def_readwrite("cols_per_subarray", &DeviceConfig::cols_per_subarray);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("device", &SimConfig::device)
      .def_readwrite("timing", &SimConfig::timing)
      .def_static("from_text", &config_from_text, py::arg("text"))
      .def("to_text", [](const SimConfig& c) {
        std::ostringstream out;
        write_config(out, c);
        return out.str();
      });

  // commands and the subarray model
  py::class_<Command>(m, "Command")
      .def_static("act", [](Row row, std::int64_t gap_ps) { return Command::act(row, Duration{gap_ps}); })
      .def_static("pre", [](std::int64_t gap_ps) { return Command::pre(Duration{gap_ps}); })
      .def_property_readonly("is_act", &Command::is_act)
      .def_readonly("row", &Command::row)
      .def_property_readonly("gap_ps", [](const Command& c) { return c.gap_after.count(); })
      .def("__eq__", [](const Command& a, const Command& b) { return a == b; })
      .def("__repr__", &format_command);

  m.def("parse_trace", py::overload_cast<std::string_view>(&parse_trace), py::arg("text"));
  m.def("emit_trace", py::overload_cast<const CommandTrace&>(&emit_trace), py::arg("trace"));

  py::class_<Subarray>(m, "Subarray")
      .def(py::init([](std::size_t rows, std::size_t cols, const TimingModel& t) { return Subarray(rows, cols, t); }),
           py::arg("rows"), py::arg("cols"), py::arg("timing") = TimingModel{})
      .def("apply", &Subarray::apply)
      .def("execute", [](Subarray& s, const CommandTrace& t) { s.execute(t); })
      .def("write_row", [](Subarray& s, Row r, const std::string& v) { s.write_row(r, bits(v)); })
      .def("read_row_buffer", [](const Subarray& s) { return s.read_row_buffer().to_string(); })
      .def("peek_row", [](const Subarray& s, Row r) { return s.peek_row(r).to_string(); })
      .def_property_readonly("open_rows", [](const Subarray& s) {
        return std::vector<Row>(s.open_rows().begin(), s.open_rows().end());
      })
      .def_property_readonly("clock_ps", [](const Subarray& s) { return s.clock().count(); });

  // CAM
  py::enum_<CamMode>(m, "CamMode").value("nand", CamMode::nand).value("nor", CamMode::nor);
  py::enum_<SearchKind>(m, "SearchKind").value("exact", SearchKind::exact).value("hd1", SearchKind::hd1);

  m.def(
      "encode",
      [](const std::string& word, std::optional<CamMode> mode) { return encode(parse_trits(word), mode).to_string(); },
      py::arg("word"), py::arg("mode") = std::nullopt);

  py::class_<CamArray>(m, "CamArray")
      .def(py::init([](const std::vector<std::string>& words, CamMode mode, const SimConfig& cfg) {
             if (words.empty()) fail(ErrorCode::empty_db, "no words given");
             std::vector<BitVector> cells;
             for (const auto& w : words) {
               const auto t = parse_trits(w);
               if (t.size() != words.front().size()) fail(ErrorCode::length_mismatch, "words differ in length");
               cells.push_back(encode(t, mode));
             }
             return CamArray(cells, words.front().size(), mode, cfg);
           }),
           py::arg("words"), py::arg("mode") = CamMode::nand, py::arg("config") = SimConfig{})
      .def_property_readonly("word_count", &CamArray::word_count)
      .def_property_readonly("tile_count", &CamArray::tile_count)
      .def(
          "trace",
          [](const CamArray& a, const std::string& q, SearchKind kind) { return a.compile(bits(q), kind).trace; },
          py::arg("query"), py::arg("kind") = SearchKind::exact)
      .def(
          "search",
          [](CamArray& a, const std::string& q, SearchKind kind) {
            const auto r = a.search(bits(q), kind);
            py::dict d;
            d["verdicts"] = r.matches.verdicts.to_string();
            d["polarity"] = std::string(to_string(r.matches.polarity));
            d["matches"] = r.matches.matches().set_indices();
            d["report"] = report_dict(r.report);
            return d;
          },
          py::arg("query"), py::arg("kind") = SearchKind::exact);

  // genomics
  py::class_<genomics::SequenceRecord>(m, "SequenceRecord")
      .def(py::init([](std::string taxon, std::string seq) {
             return genomics::SequenceRecord{std::move(taxon), std::move(seq)};
           }),
           py::arg("taxon"), py::arg("sequence"))
      .def_readonly("taxon", &genomics::SequenceRecord::taxon)
      .def_readonly("sequence", &genomics::SequenceRecord::sequence);

  m.def("synthetic_reference", &genomics::synthetic_reference, py::arg("taxa"), py::arg("length"),
        py::arg("seed"));
  m.def("kmerize", [](const std::string& s, std::size_t k) { return genomics::kmerize(s, k); });

  py::class_<genomics::KmerDatabase>(m, "KmerDatabase")
      .def_property_readonly("k", &genomics::KmerDatabase::k)
      .def_property_readonly("kmers", &genomics::KmerDatabase::kmers)
      .def_property_readonly("column_count", &genomics::KmerDatabase::column_count)
      .def_property_readonly("tile_count", &genomics::KmerDatabase::tile_count)
      .def_property_readonly("taxa", [](const genomics::KmerDatabase& db) {
        std::vector<std::string> out;
        for (const auto& g : db.taxa()) out.push_back(g.name);
        return out;
      });

  m.def(
      "ingest",
      [](const std::vector<genomics::SequenceRecord>& ref, std::size_t k, const DeviceConfig& dev) {
        return genomics::ingest(ref, k, dev);
      },
      py::arg("reference"), py::arg("k"), py::arg("device") = DeviceConfig{});

  // keep_alive: the classifier holds a pointer to the database
  py::class_<genomics::Classifier>(m, "Classifier")
      .def(py::init<const genomics::KmerDatabase&, const SimConfig&>(), py::arg("db"),
           py::arg("config") = SimConfig{}, py::keep_alive<1, 2>())
      .def(
          "classify",
          [](genomics::Classifier& c, const std::string& q, bool hd1) {
            return c.classify(q, hd1 ? genomics::MatchKind::hd1 : genomics::MatchKind::exact).taxa;
          },
          py::arg("kmer"), py::arg("hd1") = false)
      .def(
          "classify_batch",
          [](genomics::Classifier& c, const std::vector<std::string>& qs, bool hd1, std::size_t parallel) {
            const auto b = c.classify_batch(qs, hd1 ? genomics::MatchKind::hd1 : genomics::MatchKind::exact,
                                            parallel);
            std::vector<std::vector<std::string>> taxa;
            for (const auto& r : b.results) taxa.push_back(r.taxa);
            py::dict d;
            d["taxa"] = taxa;
            d["matched"] = b.summary.matched;
            d["report"] = report_dict(b.summary.report);
            return d;
          },
          py::arg("kmers"), py::arg("hd1") = false, py::arg("parallel") = 1);

  // metrics
  m.def(
      "account",
      [](const CommandTrace& t, const SimConfig& cfg) { return report_dict(account(t, cfg.timing, cfg.energy)); },
      py::arg("trace"), py::arg("config") = SimConfig{});
  m.def(
      "throughput_estimate",
      [](const CommandTrace& t, const SimConfig& cfg, std::size_t kmers_per_compare) {
        const auto est = throughput_estimate(cfg.device, account(t, cfg.timing, cfg.energy), kmers_per_compare);
        py::dict d;
        d["kmers_per_second"] = est.kmers_per_second;
        d["average_power_w"] = est.average_power_w;
        d["assumptions"] = est.assumptions;
        return d;
      },
      py::arg("trace"), py::arg("config"), py::arg("kmers_per_compare"));
}
