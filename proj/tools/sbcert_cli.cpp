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

// Command line front end. Talks to the engine only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sbcert/sbcert.h"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> shots;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> trials;
  bool deterministic = false;
  std::string out;
  std::string counts;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Owns a string returned by the library.
struct Text {
  char* ptr = nullptr;
  ~Text() { sbcert_string_free(ptr); }
};

struct Handle {
  sbcert_experiment* ptr = nullptr;
  ~Handle() { sbcert_experiment_free(ptr); }
};

void check(sbcert_status status) {
  if (status != SBCERT_OK) throw std::runtime_error(sbcert_last_error());
}

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Override plan.seed");
  cmd->add_option("--shots", flags.shots, "Override plan.shots")->check(CLI::PositiveNumber);
  cmd->add_option("--policy", flags.policy, "Statistical policy")->check(CLI::IsMember({"point", "conservative"}));
  cmd->add_flag("--deterministic", flags.deterministic, "Omit timestamps so reruns are byte-identical");
  cmd->add_option("--out", flags.out, "Output file (default: output.path from the config, else stdout)");
}

int run(const std::string& command, const Flags& flags) {
  Handle exp;
  check(sbcert_experiment_from_json(read_file(flags.config).c_str(), &exp.ptr));
  if (flags.seed) check(sbcert_experiment_set_seed(exp.ptr, *flags.seed));
  if (flags.shots) check(sbcert_experiment_set_shots(exp.ptr, *flags.shots));
  if (flags.policy) check(sbcert_experiment_set_policy(exp.ptr, flags.policy->c_str()));
  if (flags.trials) check(sbcert_experiment_set_trials(exp.ptr, *flags.trials));
  check(sbcert_experiment_set_deterministic(exp.ptr, flags.deterministic ? 1 : 0));

  Text text;
  int verdict = 0;
  if (command == "simulate") {
    check(sbcert_simulate_csv(exp.ptr, &text.ptr));
  } else if (command == "certify") {
    std::optional<std::string> counts;
    if (!flags.counts.empty()) counts = read_file(flags.counts);
    check(sbcert_certify(exp.ptr, counts ? counts->c_str() : nullptr, &text.ptr, &verdict));
  } else if (command == "scan-times") {
    check(sbcert_scan_times(exp.ptr, &text.ptr, &verdict));
  } else if (command == "verify") {
    check(sbcert_verify(exp.ptr, &text.ptr, &verdict));
  } else {
    check(sbcert_pathology(exp.ptr, &text.ptr, &verdict));
  }

  std::string out = flags.out.empty() ? sbcert_experiment_output_path(exp.ptr) : flags.out;
  if (out.empty() || out == "-") {
    std::fputs(text.ptr, stdout);
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!(file << text.ptr)) throw std::runtime_error("cannot write " + out);
  }
  return verdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superposition and entanglement certificates from computational-basis statistics"};
  app.set_version_flag("--version", std::string(sbcert_version()));
  app.require_subcommand(1);
  Flags flags;

  auto* simulate = app.add_subcommand("simulate", "Emit simulated counts as CSV");
  auto* certify = app.add_subcommand("certify", "Emit a certificate from CSV counts or inline statistics");
  auto* scan = app.add_subcommand("scan-times", "Locate t and t_half as probability-crossing points");
  auto* verify = app.add_subcommand("verify", "Run the brute-force oracle suites");
  auto* pathology = app.add_subcommand("pathology", "Run the hidden-qubit demonstration");
  for (auto* cmd : {simulate, certify, scan, verify, pathology}) add_common(cmd, flags);
  certify->add_option("--counts", flags.counts, "Count table CSV from `simulate` or an experiment")
      ->check(CLI::ExistingFile);
  verify->add_option("--trials", flags.trials, "Soundness trials");

  CLI11_PARSE(app, argc, argv);
  try {
    return run(app.get_subcommands().front()->get_name(), flags);
  } catch (const std::exception& e) {
    std::cerr << "sbcert: " << e.what() << "\n";
    return 1;
  }
}
