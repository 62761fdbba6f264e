// nwtb: run scenarios, rebuild analytics reports and evaluate next-cell
// predictors from an event log.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "nwtb/domain/errors.hpp"
#include "nwtb/harness/report.hpp"
#include "nwtb/harness/scenario.hpp"
#include "nwtb/harness/simulation.hpp"
#include "nwtb/harness/train_eval.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NWDAF testbed: simulate, report, train and evaluate"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
  std::string scenario_path, run_out, transport;
  std::optional<std::uint64_t> seed;
  run->add_option("--scenario", scenario_path, "Scenario YAML")->required();
  run->add_option("--out", run_out, "Output directory (default: the scenario's output_dir)");
  run->add_option("--transport", transport, "inproc or tcp")->check(CLI::IsMember({"inproc", "tcp"}));
  run->add_option("--seed", seed, "Override the scenario seed");

  auto* report = app.add_subcommand("report", "Rebuild analytics CSVs from an event log");
  std::string log_path, report_out, meta_path;
  report->add_option("--log", log_path, "NDJSON event log")->required();
  report->add_option("--out", report_out, "Output directory")->required();
  report->add_option("--meta", meta_path, "Run meta.json (default: beside the log)");

  auto* train = app.add_subcommand("train-eval", "Train and evaluate next-cell predictors");
  std::string train_log, models = "dt,knn", train_meta, eval_out, split_mode = "random";
  std::uint64_t split_seed = 0;
  bool drop_supi = false;
  train->add_option("--log", train_log, "NDJSON event log")->required();
  train->add_option("--models", models, "Comma-separated: dt,knn,rf,gb");
  train->add_option("--split-seed", split_seed, "Shuffle seed for the 70/30 split");
  train->add_option("--split", split_mode, "random or chronological")
      ->check(CLI::IsMember({"random", "chronological"}));
  train->add_flag("--drop-supi", drop_supi, "Leave the SUPI out of the features");
  train->add_option("--meta", train_meta, "Run meta.json (default: beside the log)");
  train->add_option("--out", eval_out, "Write the evaluation JSON here");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*run) {
      const auto scenario = nwtb::harness::load_scenario(scenario_path);
      nwtb::harness::RunOptions options;
      if (!transport.empty()) {
        options.transport = transport == "tcp" ? nwtb::sba::TransportKind::kTcp : nwtb::sba::TransportKind::kInProc;
      }
      options.seed = seed;
      if (!run_out.empty()) options.output_dir = run_out;
      const auto summary = nwtb::harness::run(scenario, options);
      std::cout << nwtb::harness::to_json(summary).dump(2) << '\n';
      return kOk;
    }
    if (*report) {
      std::optional<std::filesystem::path> meta;
      if (!meta_path.empty()) meta = meta_path;
      const auto result = nwtb::harness::write_report(log_path, report_out, meta);
      std::cout << "lines=" << result.total_lines << " corrupt=" << result.corrupt_lines
                << " handovers=" << result.report.handovers.total() << '\n';
      return result.too_corrupt() ? kRuntimeError : kOk;
    }
    nwtb::harness::TrainEvalOptions options;
    options.models = split_list(models);
    options.split.seed = split_seed;
    options.split.strategy =
        split_mode == "chronological" ? nwtb::predict::SplitStrategy::kChronological : nwtb::predict::SplitStrategy::kRandom;
    options.encoder.drop_supi = drop_supi;
    if (!train_meta.empty()) options.meta_path = train_meta;
    const auto result = nwtb::harness::train_eval(train_log, options);
    std::cout << nwtb::harness::format_table(result);
    if (!eval_out.empty()) {
      std::ofstream out(eval_out);
      out << nwtb::harness::to_json(result, options).dump(2) << '\n';
    }
    return kOk;
  } catch (const nwtb::ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntimeError;
  }
}
