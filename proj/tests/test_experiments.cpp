#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "json.hpp"
#include "regenlab/experiments.hpp"

using namespace regenlab;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCanonicalOrder = {
    "gw-extinction",      "reflected-ssrw-localtime", "reflected-ssrw-arcsine",
    "vague-convergence",  "stable-walk-scaling",      "gwi-renewal",
    "gwi-glaw",           "negbin-check",             "laplace-gd",
    "cutout-coverage",    "negative-control"};

ordered_json strip_runtime(ordered_json report) {
  report.erase("runtime_ms");
  return report;
}

void check_report_schema(const ordered_json& report,
                         const std::string& name) {
  const std::vector<std::string> keys = {"experiment", "params", "seed",
                                         "grid",       "verdict", "runtime_ms",
                                         "version"};
  REQUIRE(report.size() == keys.size());
  std::size_t k = 0;
  for (auto it = report.begin(); it != report.end(); ++it, ++k) {
    CHECK(it.key() == keys[k]);
  }
  CHECK(report["experiment"] == name);
  CHECK(report["grid"].is_array());
  CHECK(!report["grid"].empty());
  const std::vector<std::string> row_keys = {
      "n", "estimate", "reference", "ks", "ci_low", "ci_high", "pass"};
  for (const auto& row : report["grid"]) {
    REQUIRE(row.size() == row_keys.size());
    std::size_t j = 0;
    for (auto it = row.begin(); it != row.end(); ++it, ++j) {
      CHECK(it.key() == row_keys[j]);
    }
    CHECK(row["pass"].is_boolean());
  }
  const std::string verdict = report["verdict"].get<std::string>();
  CHECK((verdict == "PASS" || verdict == "FAIL"));
  const std::string version = report["version"].get<std::string>();
  CHECK(version.find("+manifest.") != std::string::npos);
}

}  // namespace

TEST_CASE("manifest lists every experiment in canonical order") {
  const auto& manifest = experiment_manifest();
  REQUIRE(manifest.size() == kCanonicalOrder.size());
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    CHECK(manifest[i].name == kCanonicalOrder[i]);
    CHECK(!manifest[i].summary.empty());
    CHECK(manifest[i].default_params.is_object());
    CHECK(!manifest[i].default_params.empty());
  }
}

TEST_CASE("experiment lookup") {
  CHECK(find_experiment("gwi-renewal").name == "gwi-renewal");
  CHECK_THROWS_AS(find_experiment("no-such-thing"), std::invalid_argument);
  CHECK_THROWS_AS(
      run_experiment("gw-extinction", ordered_json{{"bogus_knob", 1}}, 1),
      std::invalid_argument);
}

TEST_CASE("reports are deterministic apart from the runtime field") {
  const ordered_json overrides{{"replicas", 300}};
  const ExperimentResult a =
      run_experiment("reflected-ssrw-arcsine", overrides, 7);
  const ExperimentResult b =
      run_experiment("reflected-ssrw-arcsine", overrides, 7);
  CHECK(strip_runtime(a.report) == strip_runtime(b.report));
  REQUIRE(!a.samples.empty());
  CHECK(a.samples == b.samples);

  const ExperimentResult c =
      run_experiment("reflected-ssrw-arcsine", overrides, 8);
  CHECK(c.report["grid"][0]["estimate"] != a.report["grid"][0]["estimate"]);
  check_report_schema(a.report, "reflected-ssrw-arcsine");
  CHECK(a.report["params"]["replicas"] == 300);
  CHECK(a.report["seed"] == 7);
}

TEST_CASE("csv serialization of per-replica values") {
  CHECK(samples_to_csv({0.5, 1.25}) == "replica_id,value\n0,0.5\n1,1.25\n");
  CHECK(samples_to_csv({}) == "replica_id,value\n");
}

TEST_CASE("quick battery run passes and needs no replicas") {
  const ExperimentResult r =
      run_experiment("gw-extinction", ordered_json{{"replicas", 0}}, 42);
  check_report_schema(r.report, "gw-extinction");
  CHECK(r.pass);
  CHECK(r.report["verdict"] == "PASS");
  CHECK(r.report["grid"].size() == 5);
  CHECK(r.samples.empty());
}

TEST_CASE("every experiment runs clean at reduced size") {
  struct Shrunk {
    const char* name;
    ordered_json overrides;
    bool expect_pass;
  };
  const std::vector<Shrunk> cases = {
      {"gw-extinction", {{"replicas", 2000}}, true},
      {"reflected-ssrw-localtime", {{"replicas", 2000}}, true},
      {"reflected-ssrw-arcsine", {{"replicas", 2000}}, true},
      {"vague-convergence", {{"excursions", 20000}}, true},
      {"stable-walk-scaling",
       {{"pool", 30000}, {"ks_replicas", 2000}},
       true},
      {"gwi-renewal", {{"replicas", 5000}}, true},
      {"gwi-glaw", {{"replicas", 2000}}, true},
      {"negbin-check", {{"replicas", 20000}}, true},
      {"laplace-gd", {{"replicas", 5000}}, true},
      {"cutout-coverage",
       {{"marginal_replicas", 20000},
        {"equiv_replicas", 4000},
        {"lengths_replicas", 20000}},
       true},
      {"negative-control", {{"replicas", 2000}}, false},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const ExperimentResult r = run_experiment(c.name, c.overrides, 42);
    check_report_schema(r.report, c.name);
    CHECK(r.pass == c.expect_pass);
    CHECK(r.report["verdict"] == (c.expect_pass ? "PASS" : "FAIL"));
  }
}
