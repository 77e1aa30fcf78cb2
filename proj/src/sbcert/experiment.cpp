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

#include "sbcert/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>
#include <set>

#include "sbcert/error.hpp"
#include "sbcert/oracle.hpp"
#include "sbcert/report.hpp"

namespace sbcert {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kConfig, path + ": " + what);
}

// Reads one JSON object, remembering which keys were consumed.
class Fields {
 public:
  Fields(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() || it->is_null() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(at(key), "expected a number");
    return v->get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!find(key)) return std::nullopt;
    return number(key, 0.0);
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<std::int64_t>() < 0) fail(at(key), "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(at(key), "expected a string");
    return v->get<std::string>();
  }

  template <typename T>
  T choice(const std::string& key, T fallback, const std::vector<std::pair<std::string, T>>& options) {
    const json* v = find(key);
    if (!v) return fallback;
    if (v->is_string()) {
      for (const auto& [name, value] : options) {
        if (name == v->get<std::string>()) return value;
      }
    }
    std::string names;
    for (const auto& [name, value] : options) names += (names.empty() ? "" : ", ") + name;
    fail(at(key), "expected one of " + names);
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!used_.contains(item.key())) fail(at(item.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

std::string generated_at() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

json header(const char* kind, const RunOptions& options) {
  json out{{"schema_version", kReportSchemaVersion}, {"kind", kind}};
  if (!options.deterministic) out["generated_at"] = generated_at();
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool is_not(const ExperimentConfig& config) { return config.scenario.hamiltonian.kind == GateKind::kNot; }

struct Evolved {
  std::vector<DensityMatrix> gate;
  std::vector<DensityMatrix> half;
};

// The gate-time states are the half-time states evolved for the remaining
// time, so both settings come from one trajectory.
Evolved evolve(const ExperimentConfig& config) {
  const SuperOperator to_half = propagator(config.scenario, config.half_time);
  const SuperOperator rest = propagator(config.scenario, config.gate_time - config.half_time);
  const SystemLayout layout = config.layout();
  Evolved e;
  for (const auto& label : config.prepared()) {
    const DensityMatrix half = to_half.apply(DensityMatrix::basis(layout.dim(), layout.prepared_index(label)));
    e.half.push_back(half);
    e.gate.push_back(rest.apply(half));
  }
  return e;
}

std::array<OutcomeDistribution, 2> distributions(const std::vector<DensityMatrix>& states, const SystemLayout& layout) {
  return {outcome_distribution(states[0], layout), outcome_distribution(states[1], layout)};
}

std::vector<SwapEvent> parse_schedule(const json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array");
  std::vector<SwapEvent> schedule;
  for (std::size_t k = 0; k < node.size(); ++k) {
    Fields f(node[k], path + "[" + std::to_string(k) + "]");
    SwapEvent e;
    e.start = f.number("start", -1.0);
    e.duration = f.number("duration", -1.0);
    if (e.start < 0.0) fail(f.at("start"), "required, must be >= 0");
    if (e.duration <= 0.0) fail(f.at("duration"), "required, must be > 0");
    f.finish();
    schedule.push_back(e);
  }
  return schedule;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config: not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Fields top(root, "");
  const auto version = top.count("schema_version", kConfigSchemaVersion);
  if (version != static_cast<std::uint64_t>(kConfigSchemaVersion)) {
    fail("schema_version", "unsupported version " + std::to_string(version));
  }
  if (!top.find("gate")) fail("gate", "required");
  c.scenario.hamiltonian.kind = top.choice<GateKind>("gate", GateKind::kNot, {{"NOT", GateKind::kNot}, {"SWAP", GateKind::kSwap}});
  c.scenario.hamiltonian.rate = top.number("rate", 1.0);
  if (!(c.scenario.hamiltonian.rate > 0.0)) fail("rate", "must be > 0");

  if (const json* n = top.find("noise")) {
    Fields f(*n, "noise");
    c.scenario.noise.dephasing_rate = f.number("dephasing", 0.0);
    c.scenario.noise.amplitude_damping_rate = f.number("amplitude_damping", 0.0);
    c.scenario.noise.leakage_coupling = f.number("leakage_coupling", 0.0);
    c.scenario.noise.depolarizing_rate = f.number("depolarizing", 0.0);
    for (const char* key : {"dephasing", "amplitude_damping", "leakage_coupling", "depolarizing"}) {
      if (f.number(key, 0.0) < 0.0) fail(f.at(key), "must be >= 0");
    }
    f.finish();
  }

  c.scenario.leakage = LeakageModel::exact_qubit();
  if (const json* l = top.find("leakage")) {
    Fields f(*l, "leakage");
    c.scenario.leakage.levels = f.count("levels", 2);
    if (c.scenario.leakage.levels < 2) fail(f.at("levels"), "must be >= 2");
    if (const json* d = f.find("detunings")) {
      if (!d->is_array()) fail(f.at("detunings"), "expected an array");
      for (std::size_t k = 0; k < d->size(); ++k) {
        if (!(*d)[k].is_number()) fail(f.at("detunings") + "[" + std::to_string(k) + "]", "expected a number");
        c.scenario.leakage.detunings.push_back((*d)[k].get<double>());
      }
      if (!c.scenario.leakage.detunings.empty() && c.scenario.leakage.detunings.size() != c.scenario.leakage.levels - 2) {
        fail(f.at("detunings"), "expected levels - 2 entries");
      }
    }
    f.finish();
  }

  std::optional<double> gate_time;
  std::optional<double> half_time;
  if (const json* p = top.find("plan")) {
    Fields f(*p, "plan");
    gate_time = f.optional_number("gate_time");
    half_time = f.optional_number("half_time");
    c.shots = f.count("shots", c.shots);
    c.seed = f.count("seed", c.seed);
    f.finish();
  }
  c.gate_time = gate_time.value_or(c.scenario.hamiltonian.gate_time());
  c.half_time = half_time.value_or(0.5 * c.gate_time);
  if (!(c.gate_time > 0.0)) fail("plan.gate_time", "must be > 0");
  if (!(c.half_time > 0.0 && c.half_time < c.gate_time)) fail("plan.half_time", "must lie in (0, gate_time)");

  c.statistics = top.choice<StatisticsSource>("statistics", StatisticsSource::kSampled,
                                              {{"sampled", StatisticsSource::kSampled}, {"exact", StatisticsSource::kExact}});

  if (const json* cert = top.find("certificate")) {
    Fields f(*cert, "certificate");
    c.mode = f.choice<CertificateMode>("mode", c.mode,
                                       {{"approximate", CertificateMode::kApproximate}, {"exact", CertificateMode::kExact}});
    c.certify.policy = f.choice<StatisticalPolicy>(
        "policy", c.certify.policy, {{"point", StatisticalPolicy::kPoint}, {"conservative", StatisticalPolicy::kConservativeCi}});
    c.confidence_level = f.number("confidence_level", c.confidence_level);
    c.certify.cap_formula = f.choice<CapFormula>(
        "cap_formula", c.certify.cap_formula,
        {{"vertical_separation", CapFormula::kVerticalSeparation}, {"same_prepared_sum", CapFormula::kSamePreparedSum}});
    f.finish();
  }

  if (const json* s = top.find("scan")) {
    Fields f(*s, "scan");
    c.scan.points = f.count("points", c.scan.points);
    c.scan.periods = f.number("periods", c.scan.periods);
    f.finish();
  }

  if (const json* v = top.find("verify")) {
    Fields f(*v, "verify");
    c.verify.trials = f.count("trials", c.verify.trials);
    c.verify.inequality_pairs = f.count("inequality_pairs", c.verify.inequality_pairs);
    c.verify.cap_draws = f.count("cap_draws", c.verify.cap_draws);
    c.verify.cap_grid = f.count("cap_grid", c.verify.cap_grid);
    f.finish();
  }

  if (const json* p = top.find("pathology")) {
    Fields f(*p, "pathology");
    if (const json* s = f.find("schedule")) c.pathology_schedule = parse_schedule(*s, f.at("schedule"));
    f.finish();
  }

  if (const json* o = top.find("output")) {
    Fields f(*o, "output");
    c.output_path = f.text("path", "");
    f.finish();
  }
  top.finish();
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, std::string("scenario: ") + e.what());
  }
  if (!(gate_time > 0.0)) fail("plan.gate_time", "must be > 0");
  if (!(half_time > 0.0 && half_time < gate_time)) fail("plan.half_time", "must lie in (0, gate_time)");
  if (shots < 1) fail("plan.shots", "must be >= 1");
  if (!(confidence_level > 0.0 && confidence_level < 1.0)) fail("certificate.confidence_level", "must lie in (0, 1)");
  if (!is_not(*this) && mode == CertificateMode::kExact) {
    fail("certificate.mode", "SWAP certificates use the approximate effective-qubit bound");
  }
  if (scan.points < 3) fail("scan.points", "must be >= 3");
  if (!(scan.periods > 0.0)) fail("scan.periods", "must be > 0");
  if (verify.cap_grid < 1000) fail("verify.cap_grid", "must be >= 1000");
  if (pathology_schedule) {
    try {
      HiddenQubitScenario check(*pathology_schedule, scenario.hamiltonian.rate);
    } catch (const Error& e) {
      fail("pathology.schedule", e.what());
    }
  }
}

json ExperimentConfig::to_json() const {
  json detunings = json::array();
  for (double d : scenario.leakage.detunings) detunings.push_back(d);
  json out{{"schema_version", kConfigSchemaVersion},
           {"gate", is_not(*this) ? "NOT" : "SWAP"},
           {"rate", scenario.hamiltonian.rate},
           {"noise",
            {{"dephasing", scenario.noise.dephasing_rate},
             {"amplitude_damping", scenario.noise.amplitude_damping_rate},
             {"leakage_coupling", scenario.noise.leakage_coupling},
             {"depolarizing", scenario.noise.depolarizing_rate}}},
           {"leakage", {{"levels", scenario.leakage.levels}, {"detunings", detunings}}},
           {"plan", {{"gate_time", gate_time}, {"half_time", half_time}, {"shots", shots}, {"seed", seed}}},
           {"statistics", statistics == StatisticsSource::kSampled ? "sampled" : "exact"},
           {"certificate",
            {{"mode", to_string(mode)},
             {"policy", to_string(certify.policy)},
             {"confidence_level", confidence_level},
             {"cap_formula", to_string(certify.cap_formula)}}},
           {"scan", {{"points", scan.points}, {"periods", scan.periods}}},
           {"verify",
            {{"trials", verify.trials},
             {"inequality_pairs", verify.inequality_pairs},
             {"cap_draws", verify.cap_draws},
             {"cap_grid", verify.cap_grid}}}};
  if (pathology_schedule) {
    json schedule = json::array();
    for (const auto& e : *pathology_schedule) schedule.push_back({{"start", e.start}, {"duration", e.duration}});
    out["pathology"] = {{"schedule", schedule}};
  }
  if (!output_path.empty()) out["output"] = {{"path", output_path}};
  return out;
}

SystemLayout ExperimentConfig::layout() const { return SystemLayout{scenario.subsystems(), scenario.leakage.levels}; }

std::array<std::string, 2> ExperimentConfig::prepared() const {
  return is_not(*this) ? std::array<std::string, 2>{"0", "1"} : std::array<std::string, 2>{"01", "10"};
}

CountTable simulate_counts(const ExperimentConfig& config) {
  config.validate();
  const Evolved e = evolve(config);
  const auto prepared = config.prepared();
  return sample_experiment({prepared[0], prepared[1]}, e.gate, e.half, config.layout(), config.shots, config.seed);
}

RunResult simulate(const ExperimentConfig& config) { return RunResult{simulate_counts(config).to_csv(), 0}; }

RunResult certify(const ExperimentConfig& config, const std::optional<std::string>& csv, const RunOptions& options) {
  config.validate();
  std::optional<CountTable> table;
  if (csv) {
    table = CountTable::from_csv(*csv);
  } else if (config.statistics == StatisticsSource::kSampled) {
    table = simulate_counts(config);
  }
  const SystemLayout layout = config.layout();
  const auto prepared = config.prepared();
  const std::size_t m = is_not(config) ? estimates_used(config.mode) : estimates_used_swap();
  const double level = bonferroni_level(config.confidence_level, m);

  json out = header("certificate", options);
  out["config"] = config.to_json();
  json data{{"source", table ? "counts" : "exact"}};
  if (table) {
    const auto& first = table->rows().front();
    data["shots"] = first.shots;
    data["seed"] = first.seed;
  } else {
    data["shots"] = nullptr;
    data["seed"] = config.seed;
  }
  out["data"] = data;

  int status = 0;
  std::string verdict;
  if (is_not(config)) {
    const bool with_half = config.mode == CertificateMode::kApproximate;
    NotStatistics stats;
    if (table) {
      stats = NotStatistics::from_counts(*table, prepared, {"0", "1"}, level, with_half);
    } else {
      const Evolved e = evolve(config);
      std::optional<std::array<OutcomeDistribution, 2>> half;
      if (with_half) half = distributions(e.half, layout);
      stats = NotStatistics::exact(distributions(e.gate, layout), half);
    }
    const SuperpositionCertificate cert = config.mode == CertificateMode::kExact
                                              ? certify_exact_not(stats, config.certify)
                                              : certify_approx_not(stats, config.certify);
    out["statistics"] = to_json(stats);
    out["certificate"] = to_json(cert);
    status = cert.fires() ? 0 : 2;
    verdict = cert.fires() ? "certified" : (cert.valid ? "vacuous" : "invalid");
  } else {
    SwapStatistics stats;
    if (table) {
      stats = SwapStatistics::from_counts(*table, level);
    } else {
      const Evolved e = evolve(config);
      stats = SwapStatistics::exact(distributions(e.gate, layout), distributions(e.half, layout));
    }
    const EntanglementCertificate cert = certify_swap_entanglement(stats, config.certify);
    out["statistics"] = to_json(stats);
    out["certificate"] = to_json(cert);
    status = cert.valid && cert.entangled ? 0 : 2;
    verdict = cert.entangled ? "certified" : (cert.valid ? "vacuous" : "invalid");
  }
  out["verdict"] = verdict;
  return RunResult{dump(out), status};
}

RunResult scan_times(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const SystemLayout layout = config.layout();
  const std::string prepared = config.prepared()[0];
  const std::string outcome = config.prepared()[1];
  const bool sampled = config.statistics == StatisticsSource::kSampled;
  const double period = config.scenario.hamiltonian.period();
  const double span = config.scan.periods * period;
  const double dt = span / static_cast<double>(config.scan.points - 1);
  const SuperOperator step = propagator(config.scenario, dt);

  DensityMatrix rho = DensityMatrix::basis(layout.dim(), layout.prepared_index(prepared));
  std::vector<double> times;
  std::vector<double> probability;
  json grid = json::array();
  for (std::size_t k = 0; k < config.scan.points; ++k) {
    if (k > 0) rho = step.apply(rho);
    const double t = dt * static_cast<double>(k);
    const OutcomeDistribution dist = outcome_distribution(rho, layout);
    double p = 0.0;
    json point{{"time", t}};
    if (sampled) {
      const auto counts = sample_counts(dist, config.shots, config.seed, k);
      for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i].first == outcome) {
          p = static_cast<double>(counts[i]) / static_cast<double>(config.shots);
          point["count"] = counts[i];
        }
      }
    } else {
      for (const auto& [label, value] : dist) {
        if (label == outcome) p = value;
      }
    }
    point["probability"] = p;
    grid.push_back(point);
    times.push_back(t);
    probability.push_back(p);
  }

  std::optional<double> half;
  for (std::size_t k = 1; k < times.size() && !half; ++k) {
    if (probability[k - 1] < 0.5 && probability[k] >= 0.5) {
      const double w = (0.5 - probability[k - 1]) / (probability[k] - probability[k - 1]);
      half = times[k - 1] + w * dt;
    }
  }
  std::size_t peak = 0;
  for (std::size_t k = 0; k < times.size() && times[k] <= period + 0.5 * dt; ++k) {
    if (probability[k] > probability[peak]) peak = k;
  }

  json out = header("time_scan", options);
  out["config"] = config.to_json();
  out["prepared"] = prepared;
  out["outcome"] = outcome;
  out["shots"] = sampled ? json(config.shots) : json(nullptr);
  out["grid"] = grid;
  out["estimate"] = {{"half_time", half ? json(*half) : json(nullptr)},
                     {"gate_time", times[peak]},
                     {"peak_probability", probability[peak]}};
  out["configured"] = {{"half_time", config.half_time}, {"gate_time", config.gate_time}};
  return RunResult{dump(out), half ? 0 : 2};
}

RunResult verify(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  json suites = json::array();
  std::size_t asserted_violations = 0;
  auto add = [&](const ScanReport& report, bool asserted) {
    json j = to_json(report);
    j["asserted"] = asserted;
    if (asserted) asserted_violations += report.violations;
    suites.push_back(j);
  };

  SoundnessOptions soundness;
  soundness.kind = config.scenario.hamiltonian.kind;
  soundness.trials = config.verify.trials;
  soundness.seed = config.seed;
  soundness.certify = CertifyOptions{StatisticalPolicy::kPoint, config.certify.cap_formula};
  add(soundness_scan(soundness), true);

  for (FidelityConvention convention : {FidelityConvention::kTraceProduct, FidelityConvention::kUhlmann}) {
    const InequalityReport r = inequality_scan(convention, config.verify.inequality_pairs, config.seed);
    add(r.pure_lower, true);
    add(r.mixed_lower, false);
    add(r.upper, false);
  }
  add(bloch_cap_verify(config.verify.cap_grid, config.verify.cap_draws, config.seed, CapFormula::kVerticalSeparation),
      true);
  add(bloch_cap_verify(config.verify.cap_grid, config.verify.cap_draws, config.seed, CapFormula::kSamePreparedSum), false);

  json out = header("verification", options);
  out["config"] = config.to_json();
  out["seed"] = config.seed;
  out["suites"] = suites;
  out["violations"] = asserted_violations;
  out["passed"] = asserted_violations == 0;
  return RunResult{dump(out), asserted_violations == 0 ? 0 : 2};
}

RunResult pathology(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const double rate = config.scenario.hamiltonian.rate;
  const auto schedule = config.pathology_schedule.value_or(HiddenQubitScenario::default_schedule(rate));
  const PathologyReport report = pathology_demo(schedule, rate);
  json out = header("pathology", options);
  out["config"] = config.to_json();
  out["report"] = to_json(report);
  return RunResult{dump(out), 0};
}

}  // namespace sbcert
