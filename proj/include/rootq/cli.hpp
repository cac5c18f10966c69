#ifndef ROOTQ_CLI_HPP
#define ROOTQ_CLI_HPP

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rootq/classifier.hpp"
#include "rootq/ingest.hpp"
#include "rootq/name_parser.hpp"
#include "rootq/report.hpp"
#include "rootq/synth.hpp"
#include "rootq/tld_registry.hpp"

#ifndef ROOTQ_DEFAULT_TLD_LIST
#define ROOTQ_DEFAULT_TLD_LIST "data/tlds-alpha-by-domain.txt"
#endif

namespace rootq {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kTldListEnv = "ROOTQ_TLD_LIST";

enum class ExitCode : int { Ok = 0, Usage = 1, Runtime = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Classify, Report, TopSenders, Trend, Gen };

struct RunConfig {
  Command command = Command::Classify;
  std::vector<std::string> inputs;
  std::string out = "-";

  // classify
  std::string input_format = "tsv";  // tsv | pcap
  std::optional<std::string> registry_path;
  std::vector<std::string> appletalk{"appletalk"};
  double sample_rate = 1.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> window;
  std::optional<std::uint64_t> day_origin_us;
  std::string label;
  std::string policy = "default";
  bool track_senders = true;
  unsigned jobs = 1;

  // report / trend
  std::string output_format;  // report: json|csv|plotdata; trend: csv|plotdata

  // top-senders
  std::size_t k = 10;
  bool empty_senders = false;

  // gen
  std::optional<std::string> spec_path;
  std::optional<int> year;
  std::size_t count = 0;
  std::optional<std::string> truth_path;
};

inline void validate(const RunConfig& c) {
  auto need_inputs = [&](std::size_t min, std::size_t max) {
    if (c.inputs.size() < min) throw UsageError("missing --in");
    if (c.inputs.size() > max) throw UsageError("too many --in files");
  };
  switch (c.command) {
    case Command::Classify:
      need_inputs(1, SIZE_MAX);
      if (c.input_format != "tsv" && c.input_format != "pcap")
        throw UsageError("--format must be tsv or pcap");
      if (!(c.sample_rate > 0.0 && c.sample_rate <= 1.0))
        throw UsageError("--sample-rate must be in (0, 1]");
      if (c.window && !c.day_origin_us) throw UsageError("--window requires --day-origin");
      if (c.day_origin_us && !c.window) throw UsageError("--day-origin is only used with --window");
      if (c.window) {
        try {
          TimeWindow::parse(*c.window);
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("--window: ") + e.what());
        }
      }
      if (c.jobs == 0) throw UsageError("--jobs must be positive");
      try {
        UnexpectedPolicy::by_name(c.policy);
      } catch (const ReportError& e) {
        throw UsageError(std::string("--policy: ") + e.what());
      }
      break;
    case Command::Report:
      need_inputs(1, 1);
      if (!c.output_format.empty() && c.output_format != "json" && c.output_format != "csv" &&
          c.output_format != "plotdata")
        throw UsageError("--format must be json, csv or plotdata");
      break;
    case Command::TopSenders:
      need_inputs(1, 1);
      if (c.k == 0) throw UsageError("--k must be positive");
      break;
    case Command::Trend:
      need_inputs(1, SIZE_MAX);
      if (!c.output_format.empty() && c.output_format != "csv" && c.output_format != "plotdata")
        throw UsageError("--format must be csv or plotdata");
      break;
    case Command::Gen:
      if (c.spec_path.has_value() == c.year.has_value())
        throw UsageError("gen needs exactly one of --spec or --year");
      if (c.out == "-" && c.truth_path && *c.truth_path == "-")
        throw UsageError("--out and --truth cannot both be stdout");
      break;
  }
}

/// Flag, then $ROOTQ_TLD_LIST, then the pinned snapshot.
inline std::string resolve_registry_path(const RunConfig& c) {
  if (c.registry_path) return *c.registry_path;
  if (const char* env = std::getenv(kTldListEnv); env && *env) return env;
  return ROOTQ_DEFAULT_TLD_LIST;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Output {
  std::string path;
  std::string bytes;
};

inline void write_outputs(const std::vector<Output>& outputs, std::ostream& stdout_stream) {
  for (const auto& o : outputs) {
    if (o.path == "-") {
      stdout_stream << o.bytes;
      continue;
    }
    std::ofstream f(o.path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + o.path);
    f << o.bytes;
    if (!f.flush()) throw std::runtime_error("write failed: " + o.path);
  }
}

struct ClassifyOptions {
  std::optional<TimeWindow> window;
  std::uint64_t day_origin_us = 0;
  double sample_rate = 1.0;
  std::uint64_t seed = 0;
  bool track_senders = true;
};

struct StreamResult {
  Report report;
  IngestStats ingest;
  std::uint64_t name_failures = 0;
};

template <typename Reader>
StreamResult classify_with(Reader& reader, const Classifier& classifier,
                           const ClassifyOptions& opt) {
  StreamResult result{Report({}, opt.track_senders), {}, 0};
  Sampler sampler(opt.sample_rate, opt.seed);
  while (auto record = reader.next()) {
    if (opt.window && !opt.window->contains(record->timestamp_us, opt.day_origin_us)) continue;
    if (!sampler.keep()) continue;
    auto parsed = parse_presentation(record->qname);
    if (!parsed) {
      ++result.name_failures;
      continue;
    }
    result.report.add(*record, classifier(parsed.name()));
  }
  result.ingest = reader.stats();
  result.report.add_dropped(result.ingest.records_dropped_unparseable + result.name_failures);
  return result;
}

}  // namespace detail

/// ingest -> window -> sample -> parse -> classify -> fold, for one stream.
inline detail::StreamResult classify_stream(std::istream& in, std::string_view format,
                                            const Classifier& classifier,
                                            const detail::ClassifyOptions& opt) {
  if (format == "pcap") {
    PcapReader reader(in);
    return detail::classify_with(reader, classifier, opt);
  }
  TsvReader reader(in);
  return detail::classify_with(reader, classifier, opt);
}

namespace detail {

// Per-file sampling seeds are derived from the run seed so that files can be
// processed in any order.
inline std::uint64_t file_seed(std::uint64_t seed, std::size_t index) {
  return seed + 0x9E3779B97F4A7C15ULL * index;
}

inline std::vector<Output> run_classify(const RunConfig& c) {
  const std::string registry_path = resolve_registry_path(c);
  const TldRegistry registry = TldRegistry::load_file(registry_path);
  AppleTalkSet appletalk;
  for (const auto& a : c.appletalk) appletalk.insert(ascii_lowercase(a));
  const Classifier classifier(registry, appletalk);
  const auto policy = UnexpectedPolicy::by_name(c.policy);

  for (const auto& path : c.inputs)
    if (!std::filesystem::is_regular_file(path)) throw std::runtime_error("no such file: " + path);

  ClassifyOptions base;
  if (c.window) base.window = TimeWindow::parse(*c.window);
  base.day_origin_us = c.day_origin_us.value_or(0);
  base.sample_rate = c.sample_rate;
  base.track_senders = c.track_senders;
  const std::uint64_t seed = c.seed.value_or(0);

  auto one = [&](std::size_t i) {
    std::ifstream in(c.inputs[i], std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + c.inputs[i]);
    ClassifyOptions opt = base;
    opt.seed = file_seed(seed, i);
    return classify_stream(in, c.input_format, classifier, opt);
  };

  std::vector<StreamResult> results(c.inputs.size());
  for (std::size_t start = 0; start < c.inputs.size(); start += c.jobs) {
    const std::size_t end = std::min(c.inputs.size(), start + c.jobs);
    std::vector<std::future<StreamResult>> batch;
    for (std::size_t i = start; i < end; ++i)
      batch.push_back(std::async(c.jobs > 1 ? std::launch::async : std::launch::deferred, one, i));
    for (std::size_t i = start; i < end; ++i) results[i] = batch[i - start].get();
  }

  Report total({}, c.track_senders);
  IngestStats ingest;
  std::uint64_t name_failures = 0;
  nlohmann::json per_input = nlohmann::json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    total = merge(total, r.report);
    ingest.records_emitted += r.ingest.records_emitted;
    ingest.records_dropped_unparseable += r.ingest.records_dropped_unparseable;
    ingest.packets_skipped += r.ingest.packets_skipped;
    ingest.bytes_read += r.ingest.bytes_read;
    name_failures += r.name_failures;
    per_input.push_back({{"path", c.inputs[i]},
                         {"seed", file_seed(seed, i)},
                         {"records_emitted", r.ingest.records_emitted},
                         {"records_dropped_unparseable", r.ingest.records_dropped_unparseable},
                         {"packets_skipped", r.ingest.packets_skipped},
                         {"bytes_read", r.ingest.bytes_read},
                         {"name_parse_failures", r.name_failures}});
  }
  total.set_label(c.label);

  ReportDocument doc{std::move(total), nlohmann::json::object(), policy};
  doc.meta = {
      {"tool", "rootq"},
      {"version", kVersion},
      {"command", "classify"},
      {"format", c.input_format},
      {"registry", registry.source_description()},
      {"appletalk", std::vector<std::string>(appletalk.begin(), appletalk.end())},
      {"sample_rate", c.sample_rate},
      {"seed", seed},
      {"window", c.window ? nlohmann::json(base.window->to_string()) : nlohmann::json(nullptr)},
      {"day_origin_us", c.day_origin_us ? nlohmann::json(*c.day_origin_us) : nlohmann::json(nullptr)},
      {"inputs", std::move(per_input)},
      {"ingest",
       {{"records_emitted", ingest.records_emitted},
        {"records_dropped_unparseable", ingest.records_dropped_unparseable},
        {"packets_skipped", ingest.packets_skipped},
        {"bytes_read", ingest.bytes_read},
        {"name_parse_failures", name_failures}}},
  };
  return {{c.out, write_report_json(doc)}};
}

inline ReportDocument load_report(const std::string& path) {
  return read_report_json(read_file(path));
}

inline std::vector<Output> run_report(const RunConfig& c) {
  const auto doc = load_report(c.inputs.front());
  const std::string format = c.output_format.empty() ? "csv" : c.output_format;
  if (format == "json") return {{c.out, write_report_json(doc)}};
  if (format == "plotdata")
    return {{c.out, write_plotdata(std::span<const Report>(&doc.report, 1), doc.policy, c.k)}};
  return {{c.out, write_report_csv(doc.report)}};
}

inline std::vector<Output> run_top_senders(const RunConfig& c) {
  const auto doc = load_report(c.inputs.front());
  if (c.empty_senders) return {{c.out, write_empty_senders_csv(doc.report, c.k)}};
  return {{c.out, write_top_senders_csv(doc.report, c.k)}};
}

inline std::vector<Output> run_trend(const RunConfig& c) {
  std::vector<Report> reports;
  UnexpectedPolicy policy = UnexpectedPolicy::standard();
  for (const auto& path : c.inputs) {
    auto doc = load_report(path);
    if (doc.report.label().empty())
      doc.report.set_label(std::filesystem::path(path).stem().string());
    policy = doc.policy;
    reports.push_back(std::move(doc.report));
  }
  if (c.output_format == "plotdata") return {{c.out, write_plotdata(reports, policy, c.k)}};
  const auto rows = trend_table(reports);
  return {{c.out, write_trend_csv(rows)}};
}

inline std::vector<Output> run_gen(const RunConfig& c) {
  const TldRegistry registry = TldRegistry::load_file(resolve_registry_path(c));
  AppleTalkSet appletalk;
  for (const auto& a : c.appletalk) appletalk.insert(ascii_lowercase(a));

  MixSpec spec;
  if (c.year) {
    spec = MixSpec::for_year(*c.year);
  } else {
    std::ifstream in(*c.spec_path);
    if (!in) throw std::runtime_error("cannot open " + *c.spec_path);
    spec = MixSpec::parse(in);
  }
  if (c.seed) spec.seed = *c.seed;

  Generator gen(spec, registry, appletalk);
  std::ostringstream tsv;
  std::ostringstream truth;
  for (std::size_t i = 0; i < c.count; ++i) {
    const auto r = gen.next();
    write_tsv_line(tsv, r.record);
    if (c.truth_path) truth << to_string(r.classification) << '\n';
  }
  std::vector<Output> out{{c.out, tsv.str()}};
  if (c.truth_path) out.push_back({*c.truth_path, truth.str()});
  return out;
}

}  // namespace detail

/// Runs one subcommand. All output is produced in memory and written only
/// after the command succeeds, so a failing run leaves no partial files.
inline int run(const RunConfig& config, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  try {
    validate(config);
    std::vector<detail::Output> outputs;
    switch (config.command) {
      case Command::Classify: outputs = detail::run_classify(config); break;
      case Command::Report: outputs = detail::run_report(config); break;
      case Command::TopSenders: outputs = detail::run_top_senders(config); break;
      case Command::Trend: outputs = detail::run_trend(config); break;
      case Command::Gen: outputs = detail::run_gen(config); break;
    }
    detail::write_outputs(outputs, out);
    return static_cast<int>(ExitCode::Ok);
  } catch (const UsageError& e) {
    err << "rootq: usage error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  } catch (const RegistryError& e) {
    err << "rootq: TLD registry: " << e.what() << '\n';
  } catch (const IngestError& e) {
    err << "rootq: ingest: " << e.what() << '\n';
  } catch (const ReportError& e) {
    err << "rootq: report: " << e.what() << '\n';
  } catch (const SpecError& e) {
    err << "rootq: mix spec: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "rootq: " << e.what() << '\n';
  }
  return static_cast<int>(ExitCode::Runtime);
}

}  // namespace rootq

#endif  // ROOTQ_CLI_HPP
