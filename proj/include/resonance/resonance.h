/* Copyright 2026 The Resonance Lab Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libresonance. Scenarios are loaded into opaque handles;
 * every command returns a status code and writes a heap-allocated report
 * that the caller releases with rsn_string_free. On failure the message of
 * the most recent error on the calling thread is available from
 * rsn_last_error. */

#ifndef RESONANCE_RESONANCE_H_
#define RESONANCE_RESONANCE_H_

#if defined(RESONANCE_BUILDING_LIBRARY)
#define RSN_API __attribute__((visibility("default")))
#else
#define RSN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rsn_scenario rsn_scenario;

typedef enum rsn_status {
  RSN_OK = 0,
  RSN_ERR_MALFORMED_INPUT = 1,
  RSN_ERR_PRECONDITION = 2,
  RSN_ERR_INSTANCE_TOO_LARGE = 3,
  RSN_ERR_INVALID_PROPOSAL = 4,
  RSN_ERR_INVALID_ARGUMENT = 5,
  RSN_ERR_INTERNAL = 6
} rsn_status;

typedef enum rsn_format { RSN_FORMAT_JSON = 0, RSN_FORMAT_CSV = 1 } rsn_format;

RSN_API const char* rsn_version(void);
RSN_API const char* rsn_status_name(rsn_status status);
/* Message of the last failed call on this thread; empty if none. */
RSN_API const char* rsn_last_error(void);

RSN_API rsn_status rsn_scenario_load_file(const char* path,
                                          rsn_scenario** out);
RSN_API rsn_status rsn_scenario_load_json(const char* json,
                                          rsn_scenario** out);
RSN_API void rsn_scenario_free(rsn_scenario* scenario);

/* Overrides one run parameter: quantum, enum_cap, seed, others_cap,
 * max_iters, node_bundle_cap or fee_grid_steps. */
RSN_API rsn_status rsn_scenario_set_param(rsn_scenario* scenario,
                                          const char* name,
                                          const char* value);

/* Runs the mechanism. *rejected is set to 1 when the outcome is the empty
 * routing produced by a rejection, 0 otherwise. */
RSN_API rsn_status rsn_run(const rsn_scenario* scenario, rsn_format format,
                           char** report, int* rejected);

/* mode: "pne" or "dsic-barring-b". */
RSN_API rsn_status rsn_equilibrium(const rsn_scenario* scenario,
                                   const char* mode, rsn_format format,
                                   char** report);

RSN_API rsn_status rsn_dynamics(const rsn_scenario* scenario,
                                rsn_format format, char** report);

RSN_API rsn_status rsn_benchmarks(const rsn_scenario* scenario,
                                  rsn_format format, char** report);

/* name: "thm-of", "thm-fee", "thm-wo" or "figure1"; params is a JSON
 * object (may be NULL). Writes a scenario file's contents. */
RSN_API rsn_status rsn_generate(const char* name, const char* params,
                                char** scenario_json);

/* Re-serializes a loaded scenario. */
RSN_API rsn_status rsn_scenario_to_json(const rsn_scenario* scenario,
                                        char** json);

RSN_API void rsn_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* RESONANCE_RESONANCE_H_ */
