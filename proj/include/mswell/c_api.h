/*
 * Copyright 2026 The mswell Authors
 *
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

/* C interface of the mswell shared library. Every call returns a status;
 * on failure msw_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * msw_string_free. */

#ifndef MSWELL_C_API_H
#define MSWELL_C_API_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MSW_API __declspec(dllexport)
#else
#define MSW_API __attribute__((visibility("default")))
#endif

typedef enum msw_status {
  MSW_OK = 0,
  MSW_ERROR_CONFIG = 1,     /* scenario failed validation */
  MSW_ERROR_SOLVER = 2,     /* time-step underflow */
  MSW_ERROR_DOMAIN = 3,     /* state outside a law's validity range */
  MSW_ERROR_NUMERICAL = 4,  /* singular systems, monotonicity violation, no convergence */
  MSW_ERROR_MODEL = 5,      /* reduced model used outside its assumptions */
  MSW_ERROR_IO = 6,
  MSW_ERROR_ARGUMENT = 7,   /* null handle or invalid argument */
  MSW_ERROR_INTERNAL = 8
} msw_status;

/* Parsed and assembled scenario. */
typedef struct msw_scenario msw_scenario;

MSW_API const char* msw_version(void);
MSW_API const char* msw_last_error(void);
MSW_API const char* msw_status_name(msw_status status);
MSW_API void msw_string_free(char* text);

MSW_API msw_status msw_scenario_load(const char* path, msw_scenario** out);
MSW_API msw_status msw_scenario_parse(const char* text, msw_scenario** out);
MSW_API void msw_scenario_free(msw_scenario* scenario);

/* Canonical configuration text in SI units. */
MSW_API msw_status msw_scenario_to_text(const msw_scenario* scenario, char** text);
/* Scenario metadata as JSON (name, node and edge counts, leaves, fluid model). */
MSW_API msw_status msw_scenario_info(const msw_scenario* scenario, char** json);
/* Replaces the wall friction coefficient and rebuilds the model. */
MSW_API msw_status msw_scenario_set_friction(msw_scenario* scenario, double fq);

/* Runs the transient simulation and writes the output files to
 * output_directory (the scenario's own directory when NULL). The run summary
 * is returned as JSON, also after a solver failure (then completed = false). */
MSW_API msw_status msw_run(const msw_scenario* scenario, const char* output_directory, char** summary_json);

/* Compositional run against the scalar Buckley-Leverett oracle. */
MSW_API msw_status msw_bl_compare(const msw_scenario* scenario, char** report_json);

/* Multi-segmented run against the single-implicit-unknown model. */
MSW_API msw_status msw_siu_compare(const msw_scenario* scenario, char** report_json);

/* Randomized property checks of the two-point gas flux with default slip
 * parameters; passed is set to 1 when every property holds. */
MSW_API msw_status msw_flux_check(long samples, unsigned long long seed, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* MSWELL_C_API_H */
