// Copyright 2026 The Resonance Lab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end of libresonance.
//
//   resonance run SCENARIO
//   resonance equilibrium SCENARIO --mode pne|dsic-barring-b
//   resonance dynamics SCENARIO
//   resonance benchmarks SCENARIO
//   resonance gen thm-of|thm-fee|thm-wo|figure1 [--d N] [--k N]
//                 [--values a,b,..] [--epsilon X] [-o FILE]
//
// Global flags: --quantum, --enum-cap, --seed, --output json|csv.
// SCENARIO may be "-" for standard input. Exit status: 0 on success, 2 when
// the mechanism rejects (empty routing), 1 on any error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resonance/resonance.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRejected = 2;

struct GlobalFlags {
  std::optional<std::string> quantum;
  std::optional<std::string> enum_cap;
  std::optional<std::string> seed;
  std::string output = "json";
};

int ReportError(rsn_status status) {
  std::cerr << "error (" << rsn_status_name(status) << "): "
            << rsn_last_error() << "\n";
  return kExitError;
}

// Owns a scenario handle.
class ScenarioHandle {
 public:
  ScenarioHandle() = default;
  ScenarioHandle(const ScenarioHandle&) = delete;
  ScenarioHandle& operator=(const ScenarioHandle&) = delete;
  ~ScenarioHandle() { rsn_scenario_free(handle_); }

  rsn_status Load(const std::string& path) {
    if (path != "-") return rsn_scenario_load_file(path.c_str(), &handle_);
    const std::string text((std::istreambuf_iterator<char>(std::cin)),
                           std::istreambuf_iterator<char>());
    return rsn_scenario_load_json(text.c_str(), &handle_);
  }

  rsn_scenario* get() const { return handle_; }

 private:
  rsn_scenario* handle_ = nullptr;
};

// Prints and frees a report returned by the library.
void Emit(char* report) {
  std::fputs(report, stdout);
  rsn_string_free(report);
}

rsn_status Prepare(ScenarioHandle& scenario, const std::string& path,
                   const GlobalFlags& flags) {
  rsn_status status = scenario.Load(path);
  if (status != RSN_OK) return status;
  const std::pair<const char*, const std::optional<std::string>*> params[] = {
      {"quantum", &flags.quantum},
      {"enum_cap", &flags.enum_cap},
      {"seed", &flags.seed}};
  for (const auto& [name, value] : params) {
    if (!*value) continue;
    status = rsn_scenario_set_param(scenario.get(), name, (*value)->c_str());
    if (status != RSN_OK) return status;
  }
  return RSN_OK;
}

std::string JsonString(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact laboratory for the Resonance broker mechanism"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rsn_version()));

  GlobalFlags flags;
  app.add_option("--quantum", flags.quantum,
                 "Margin lattice step, e.g. 1/1024");
  app.add_option("--enum-cap", flags.enum_cap,
                 "Bound on the raw allocation search space");
  app.add_option("--seed", flags.seed, "Seed for sampled checks");
  app.add_option("--output", flags.output, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string scenario_path;
  std::string mode;

  CLI::App* run = app.add_subcommand("run", "Execute the mechanism once");
  run->add_option("scenario", scenario_path, "Scenario file or -")
      ->required();
  CLI::App* equilibrium =
      app.add_subcommand("equilibrium", "Check equilibrium properties");
  equilibrium->add_option("scenario", scenario_path, "Scenario file or -")
      ->required();
  equilibrium->add_option("--mode", mode, "pne or dsic-barring-b")
      ->required()
      ->check(CLI::IsMember({"pne", "dsic-barring-b"}));
  CLI::App* dynamics =
      app.add_subcommand("dynamics", "Run best-response dynamics");
  dynamics->add_option("scenario", scenario_path, "Scenario file or -")
      ->required();
  CLI::App* benchmarks =
      app.add_subcommand("benchmarks", "Compute OPT, INC, FEE and ORA");
  benchmarks->add_option("scenario", scenario_path, "Scenario file or -")
      ->required();

  std::string generator;
  std::optional<int> d, k;
  std::vector<std::string> values;
  std::optional<std::string> epsilon;
  std::string out_path;
  CLI::App* gen = app.add_subcommand("gen", "Write a generated scenario");
  gen->add_option("name", generator, "thm-of, thm-fee, thm-wo or figure1")
      ->required()
      ->check(CLI::IsMember({"thm-of", "thm-fee", "thm-wo", "figure1"}));
  gen->add_option("--d", d, "Dimension (thm-of)");
  gen->add_option("--k", k, "Family size (thm-fee, thm-wo)");
  gen->add_option("--values", values, "Increasing resource sizes (thm-wo)")
      ->delimiter(',');
  gen->add_option("--epsilon", epsilon, "Cost increment (thm-wo)");
  gen->add_option("-o,--out", out_path, "Output file (default stdout)");

  for (CLI::App* sub : {run, equilibrium, dynamics, benchmarks, gen}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  const rsn_format format =
      flags.output == "csv" ? RSN_FORMAT_CSV : RSN_FORMAT_JSON;

  if (gen->parsed()) {
    std::vector<std::string> fields;
    if (d) fields.push_back("\"d\": " + std::to_string(*d));
    if (k) fields.push_back("\"k\": " + std::to_string(*k));
    if (!values.empty()) {
      std::string list = "[";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) list += ", ";
        list += JsonString(values[i]);
      }
      fields.push_back("\"values\": " + list + "]");
    }
    if (epsilon) fields.push_back("\"epsilon\": " + JsonString(*epsilon));
    std::string params = "{";
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) params += ", ";
      params += fields[i];
    }
    params += "}";
    char* text = nullptr;
    const rsn_status status =
        rsn_generate(generator.c_str(), params.c_str(), &text);
    if (status != RSN_OK) return ReportError(status);
    if (out_path.empty()) {
      Emit(text);
      return kExitOk;
    }
    std::ofstream file(out_path, std::ios::binary);
    file << text;
    rsn_string_free(text);
    if (!file) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitError;
    }
    return kExitOk;
  }

  ScenarioHandle scenario;
  rsn_status status = Prepare(scenario, scenario_path, flags);
  if (status != RSN_OK) return ReportError(status);

  char* report = nullptr;
  int rejected = 0;
  if (run->parsed()) {
    status = rsn_run(scenario.get(), format, &report, &rejected);
  } else if (equilibrium->parsed()) {
    status = rsn_equilibrium(scenario.get(), mode.c_str(), format, &report);
  } else if (dynamics->parsed()) {
    status = rsn_dynamics(scenario.get(), format, &report);
  } else {
    status = rsn_benchmarks(scenario.get(), format, &report);
  }
  if (status != RSN_OK) return ReportError(status);
  Emit(report);
  return rejected ? kExitRejected : kExitOk;
}
