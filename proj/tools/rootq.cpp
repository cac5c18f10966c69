// rootq: classify DNS root-server query traces and build aggregate reports.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rootq/cli.hpp"

namespace {

void add_registry_flags(CLI::App* cmd, rootq::RunConfig& c) {
  cmd->add_option("--tld-list", c.registry_path,
                  "IANA TLD list (default: $ROOTQ_TLD_LIST, then the pinned snapshot)");
  cmd->add_option("--appletalk", c.appletalk, "TLDs treated as AppleTalk leakage")
      ->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify DNS root-server query traces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rootq::kVersion);

  rootq::RunConfig c;

  auto* classify = app.add_subcommand("classify", "ingest, classify and fold into a JSON report");
  classify->add_option("--in", c.inputs, "input capture(s)")->required();
  classify->add_option("--format", c.input_format, "input format")
      ->check(CLI::IsMember({"tsv", "pcap"}));
  add_registry_flags(classify, c);
  classify->add_option("--sample-rate", c.sample_rate, "keep probability per record");
  classify->add_option("--seed", c.seed, "sampling seed");
  classify->add_option("--window", c.window, "time-of-day window HH:MM-HH:MM");
  classify->add_option("--day-origin", c.day_origin_us, "epoch microseconds of the day start");
  classify->add_option("--label", c.label, "report label, e.g. the year");
  classify->add_option("--policy", c.policy,
                       "unexpected-traffic policy: default, exclude-empty, leaves:<a>,<b>");
  classify->add_flag("!--no-senders", c.track_senders, "skip per-prefix tables");
  classify->add_option("--jobs", c.jobs, "files processed concurrently");
  classify->add_option("--out", c.out, "output JSON (default stdout)");

  auto* report = app.add_subcommand("report", "reformat a JSON report");
  report->add_option("--in", c.inputs, "report JSON")->required();
  report->add_option("--format", c.output_format, "json, csv or plotdata (default csv)");
  report->add_option("--k", c.k, "top-k for sender series in plotdata");
  report->add_option("--out", c.out, "output file (default stdout)");

  auto* top = app.add_subcommand("top-senders", "top sending prefixes of a report");
  top->add_option("--in", c.inputs, "report JSON")->required();
  top->add_option("--k", c.k, "number of prefixes");
  top->add_flag("--empty", c.empty_senders, "rank by empty (root) queries instead");
  top->add_option("--out", c.out, "output CSV (default stdout)");

  auto* trend = app.add_subcommand("trend", "combine labelled reports into a trend table");
  trend->add_option("--in", c.inputs, "report JSONs in row order")->required();
  trend->add_option("--format", c.output_format, "csv or plotdata (default csv)");
  trend->add_option("--out", c.out, "output file (default stdout)");

  auto* gen = app.add_subcommand("gen", "synthesise a TSV trace from a mix spec");
  gen->add_option("--spec", c.spec_path, "mix spec config file");
  gen->add_option("--year", c.year, "canonical 2013-2022 profile instead of --spec");
  gen->add_option("--count", c.count, "records to generate")->required();
  gen->add_option("--seed", c.seed, "override the spec's seed");
  add_registry_flags(gen, c);
  gen->add_option("--truth", c.truth_path, "also write one ground-truth leaf per line");
  gen->add_option("--out", c.out, "output TSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(rootq::ExitCode::Usage);
  }

  if (classify->parsed()) c.command = rootq::Command::Classify;
  else if (report->parsed()) c.command = rootq::Command::Report;
  else if (top->parsed()) c.command = rootq::Command::TopSenders;
  else if (trend->parsed()) c.command = rootq::Command::Trend;
  else c.command = rootq::Command::Gen;

  return rootq::run(c);
}
