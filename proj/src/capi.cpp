// Copyright 2026 The sbcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbcert/sbcert.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "sbcert/error.hpp"
#include "sbcert/experiment.hpp"

struct sbcert_experiment {
  sbcert::ExperimentConfig config;
  sbcert::RunOptions options;
};

namespace {

thread_local std::string last_error;

sbcert_status fail(sbcert_status status, const char* message) {
  last_error = message;
  return status;
}

template <typename F>
sbcert_status guarded(F&& body) {
  try {
    body();
    return SBCERT_OK;
  } catch (const sbcert::Error& e) {
    return fail(static_cast<sbcert_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SBCERT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SBCERT_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

sbcert_status emit(const sbcert::RunResult& result, char** out, int* verdict) {
  *out = copy_string(result.output);
  if (verdict) *verdict = result.status;
  return SBCERT_OK;
}

}  // namespace

extern "C" {

const char* sbcert_version(void) { return "0.1.0"; }

const char* sbcert_last_error(void) { return last_error.c_str(); }

void sbcert_string_free(char* text) { std::free(text); }

sbcert_status sbcert_experiment_from_json(const char* config_json, sbcert_experiment** out) {
  if (!config_json || !out) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new sbcert_experiment{sbcert::ExperimentConfig::parse(config_json), {}}; });
}

void sbcert_experiment_free(sbcert_experiment* experiment) { delete experiment; }

sbcert_status sbcert_experiment_set_seed(sbcert_experiment* experiment, uint64_t seed) {
  if (!experiment) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null experiment");
  experiment->config.seed = seed;
  return SBCERT_OK;
}

sbcert_status sbcert_experiment_set_shots(sbcert_experiment* experiment, uint64_t shots) {
  if (!experiment) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null experiment");
  if (shots == 0) return fail(SBCERT_ERR_INVALID_ARGUMENT, "shots must be >= 1");
  experiment->config.shots = shots;
  return SBCERT_OK;
}

sbcert_status sbcert_experiment_set_policy(sbcert_experiment* experiment, const char* policy) {
  if (!experiment || !policy) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null argument");
  const std::string p(policy);
  if (p == "point") {
    experiment->config.certify.policy = sbcert::StatisticalPolicy::kPoint;
  } else if (p == "conservative") {
    experiment->config.certify.policy = sbcert::StatisticalPolicy::kConservativeCi;
  } else {
    return fail(SBCERT_ERR_INVALID_ARGUMENT, "policy must be point or conservative");
  }
  return SBCERT_OK;
}

sbcert_status sbcert_experiment_set_trials(sbcert_experiment* experiment, uint64_t trials) {
  if (!experiment) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null experiment");
  experiment->config.verify.trials = trials;
  return SBCERT_OK;
}

sbcert_status sbcert_experiment_set_deterministic(sbcert_experiment* experiment, int deterministic) {
  if (!experiment) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null experiment");
  experiment->options.deterministic = deterministic != 0;
  return SBCERT_OK;
}

sbcert_status sbcert_experiment_to_json(const sbcert_experiment* experiment, char** config_json) {
  if (!experiment || !config_json) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *config_json = copy_string(experiment->config.to_json().dump(2) + "\n"); });
}

const char* sbcert_experiment_output_path(const sbcert_experiment* experiment) {
  return experiment ? experiment->config.output_path.c_str() : "";
}

sbcert_status sbcert_simulate_csv(const sbcert_experiment* experiment, char** csv) {
  if (!experiment || !csv) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { emit(sbcert::simulate(experiment->config), csv, nullptr); });
}

sbcert_status sbcert_certify(const sbcert_experiment* experiment, const char* counts_csv, char** report_json,
                             int* verdict) {
  if (!experiment || !report_json) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::optional<std::string> csv;
    if (counts_csv) csv = counts_csv;
    emit(sbcert::certify(experiment->config, csv, experiment->options), report_json, verdict);
  });
}

sbcert_status sbcert_scan_times(const sbcert_experiment* experiment, char** report_json, int* verdict) {
  if (!experiment || !report_json) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { emit(sbcert::scan_times(experiment->config, experiment->options), report_json, verdict); });
}

sbcert_status sbcert_verify(const sbcert_experiment* experiment, char** report_json, int* verdict) {
  if (!experiment || !report_json) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { emit(sbcert::verify(experiment->config, experiment->options), report_json, verdict); });
}

sbcert_status sbcert_pathology(const sbcert_experiment* experiment, char** report_json, int* verdict) {
  if (!experiment || !report_json) return fail(SBCERT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { emit(sbcert::pathology(experiment->config, experiment->options), report_json, verdict); });
}

}  // extern "C"
