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

#include "resonance/resonance.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "commands.h"
#include "resonance/errors.h"
#include "resonance/scenario.h"

struct rsn_scenario {
  resonance::Scenario scenario;
};

namespace {

using resonance::internal::OutputFormat;

thread_local std::string last_error;

rsn_status Fail(rsn_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions to status codes.
template <typename Body>
rsn_status Guard(Body&& body) {
  try {
    last_error.clear();
    body();
    return RSN_OK;
  } catch (const resonance::MalformedInput& e) {
    return Fail(RSN_ERR_MALFORMED_INPUT, e.what());
  } catch (const resonance::PreconditionViolation& e) {
    return Fail(RSN_ERR_PRECONDITION, e.what());
  } catch (const resonance::InstanceTooLarge& e) {
    return Fail(RSN_ERR_INSTANCE_TOO_LARGE, e.what());
  } catch (const resonance::InvalidProposal& e) {
    return Fail(RSN_ERR_INVALID_PROPOSAL, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(RSN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(RSN_ERR_INTERNAL, e.what());
  }
}

char* CopyString(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

OutputFormat FormatOf(rsn_format format) {
  return format == RSN_FORMAT_CSV ? OutputFormat::kCsv : OutputFormat::kJson;
}

bool NullArgument(const void* p, const char* name, rsn_status& status) {
  if (p != nullptr) return false;
  status = Fail(RSN_ERR_INVALID_ARGUMENT,
                std::string("argument '") + name + "' must not be NULL");
  return true;
}

}  // namespace

extern "C" {

const char* rsn_version(void) { return "1.0.0"; }

const char* rsn_status_name(rsn_status status) {
  switch (status) {
    case RSN_OK:
      return "ok";
    case RSN_ERR_MALFORMED_INPUT:
      return "malformed_input";
    case RSN_ERR_PRECONDITION:
      return "precondition_violation";
    case RSN_ERR_INSTANCE_TOO_LARGE:
      return "instance_too_large";
    case RSN_ERR_INVALID_PROPOSAL:
      return "invalid_proposal";
    case RSN_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case RSN_ERR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

const char* rsn_last_error(void) { return last_error.c_str(); }

rsn_status rsn_scenario_load_file(const char* path, rsn_scenario** out) {
  rsn_status status;
  if (NullArgument(path, "path", status) || NullArgument(out, "out", status)) {
    return status;
  }
  *out = nullptr;
  return Guard([&] {
    *out = new rsn_scenario{resonance::LoadScenarioFile(path)};
  });
}

rsn_status rsn_scenario_load_json(const char* json, rsn_scenario** out) {
  rsn_status status;
  if (NullArgument(json, "json", status) || NullArgument(out, "out", status)) {
    return status;
  }
  *out = nullptr;
  return Guard([&] { *out = new rsn_scenario{resonance::ParseScenario(json)}; });
}

void rsn_scenario_free(rsn_scenario* scenario) { delete scenario; }

rsn_status rsn_scenario_set_param(rsn_scenario* scenario, const char* name,
                                  const char* value) {
  rsn_status status;
  if (NullArgument(scenario, "scenario", status) ||
      NullArgument(name, "name", status) ||
      NullArgument(value, "value", status)) {
    return status;
  }
  return Guard([&] {
    resonance::SetRunParam(scenario->scenario.params, name, value);
  });
}

rsn_status rsn_run(const rsn_scenario* scenario, rsn_format format,
                   char** report, int* rejected) {
  rsn_status status;
  if (NullArgument(scenario, "scenario", status) ||
      NullArgument(report, "report", status)) {
    return status;
  }
  *report = nullptr;
  return Guard([&] {
    const auto out =
        resonance::internal::CommandRun(scenario->scenario, FormatOf(format));
    if (rejected != nullptr) *rejected = out.rejected ? 1 : 0;
    *report = CopyString(out.text);
  });
}

rsn_status rsn_equilibrium(const rsn_scenario* scenario, const char* mode,
                           rsn_format format, char** report) {
  rsn_status status;
  if (NullArgument(scenario, "scenario", status) ||
      NullArgument(mode, "mode", status) ||
      NullArgument(report, "report", status)) {
    return status;
  }
  *report = nullptr;
  return Guard([&] {
    *report = CopyString(resonance::internal::CommandEquilibrium(
                             scenario->scenario, mode, FormatOf(format))
                             .text);
  });
}

rsn_status rsn_dynamics(const rsn_scenario* scenario, rsn_format format,
                        char** report) {
  rsn_status status;
  if (NullArgument(scenario, "scenario", status) ||
      NullArgument(report, "report", status)) {
    return status;
  }
  *report = nullptr;
  return Guard([&] {
    *report = CopyString(resonance::internal::CommandDynamics(
                             scenario->scenario, FormatOf(format))
                             .text);
  });
}

rsn_status rsn_benchmarks(const rsn_scenario* scenario, rsn_format format,
                          char** report) {
  rsn_status status;
  if (NullArgument(scenario, "scenario", status) ||
      NullArgument(report, "report", status)) {
    return status;
  }
  *report = nullptr;
  return Guard([&] {
    *report = CopyString(resonance::internal::CommandBenchmarks(
                             scenario->scenario, FormatOf(format))
                             .text);
  });
}

rsn_status rsn_generate(const char* name, const char* params,
                        char** scenario_json) {
  rsn_status status;
  if (NullArgument(name, "name", status) ||
      NullArgument(scenario_json, "scenario_json", status)) {
    return status;
  }
  *scenario_json = nullptr;
  return Guard([&] {
    *scenario_json = CopyString(resonance::internal::CommandGenerate(
        name, params == nullptr ? "" : params));
  });
}

rsn_status rsn_scenario_to_json(const rsn_scenario* scenario, char** json) {
  rsn_status status;
  if (NullArgument(scenario, "scenario", status) ||
      NullArgument(json, "json", status)) {
    return status;
  }
  *json = nullptr;
  return Guard([&] {
    *json = CopyString(resonance::SerializeScenario(scenario->scenario));
  });
}

void rsn_string_free(char* text) { std::free(text); }

}  // extern "C"
