// Command-line driver for the verification lab: `list` enumerates the
// experiments, `run` executes one and emits its JSON report. Exit status is
// 0 for a PASS verdict, 1 for FAIL, 2 for usage or runtime errors.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "regenlab/experiments.hpp"

namespace {

using nlohmann::ordered_json;

int cmd_list(bool show_params) {
  for (const auto& d : regenlab::experiment_manifest()) {
    std::cout << d.name << "  " << d.summary << "\n";
    if (show_params) std::cout << "    defaults: " << d.default_params.dump()
                               << "\n";
  }
  return 0;
}

int cmd_run(const std::string& experiment, const std::string& config_path,
            std::uint64_t seed, std::int64_t replicas,
            const std::string& out_path, const std::string& samples_path) {
  ordered_json overrides = ordered_json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config: " + config_path);
    overrides = ordered_json::parse(in);
    if (!overrides.is_object())
      throw std::runtime_error("config must be a JSON object");
  }
  if (replicas >= 0) overrides["replicas"] = replicas;

  const regenlab::ExperimentResult result =
      regenlab::run_experiment(experiment, overrides, seed);

  const std::string text = result.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output: " + out_path);
    out << text;
    std::cout << result.report["verdict"].get<std::string>() << " "
              << experiment << "\n";
  }
  if (!samples_path.empty()) {
    if (result.samples.empty())
      throw std::runtime_error("experiment produced no sample dump");
    std::ofstream out(samples_path);
    if (!out) throw std::runtime_error("cannot open samples: " + samples_path);
    out << regenlab::samples_to_csv(result.samples.front().second);
  }
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regenerative-process verification lab"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list available experiments");
  bool show_params = false;
  list->add_flag("--params", show_params, "also print default parameters");

  auto* run = app.add_subcommand("run", "run one experiment");
  std::string experiment;
  std::string config_path;
  std::string out_path;
  std::string samples_path;
  std::uint64_t seed = 42;
  std::int64_t replicas = -1;
  run->add_option("--experiment", experiment, "experiment name")->required();
  run->add_option("--config", config_path,
                  "JSON file of parameter overrides");
  run->add_option("--seed", seed, "master seed (default 42)");
  run->add_option("--replicas", replicas,
                  "override the replica count parameter");
  run->add_option("--out", out_path, "write the JSON report here instead of "
                                     "stdout");
  run->add_option("--samples", samples_path,
                  "write the primary per-replica values as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) return cmd_list(show_params);
    return cmd_run(experiment, config_path, seed, replicas, out_path,
                   samples_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
