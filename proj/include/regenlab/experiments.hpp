#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

// The experiment registry: every statistical verification the lab can run,
// with its default parameter set (sample sizes, grids, tolerances) and a
// uniform report format. Reports are deterministic for a fixed (experiment,
// params, seed) triple, byte for byte, apart from the runtime_ms field.

namespace regenlab {

// Version of the default-parameter/tolerance table below; bumped whenever a
// default or tolerance changes meaning.
inline constexpr int kParamManifestVersion = 1;

struct ExperimentDescriptor {
  std::string name;
  std::string summary;  // one line for the `list` subcommand
  nlohmann::ordered_json default_params;
};

// All experiments, in their canonical order.
const std::vector<ExperimentDescriptor>& experiment_manifest();

// Descriptor lookup; throws std::invalid_argument for an unknown name.
const ExperimentDescriptor& find_experiment(const std::string& name);

struct ExperimentResult {
  nlohmann::ordered_json report;
  bool pass = false;
  // Named sample vectors for --samples dumps; first entry is the primary.
  std::vector<std::pair<std::string, std::vector<double>>> samples;
};

// Runs one experiment with the descriptor defaults overlaid by `overrides`
// (one level deep). The report object carries, in order: experiment, params,
// seed, grid, verdict, runtime_ms, version.
ExperimentResult run_experiment(const std::string& name,
                                const nlohmann::ordered_json& overrides,
                                std::uint64_t seed);

// Serializes sample values as "replica_id,value" lines with a header.
std::string samples_to_csv(const std::vector<double>& values);

}  // namespace regenlab
