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

#include "commands.h"

#include <sstream>

#include "json_io.h"
#include "overloaded.h"
#include "resonance/core.h"
#include "resonance/equilibrium.h"
#include "resonance/errors.h"
#include "resonance/mdfm.h"
#include "resonance/mechanism.h"
#include "resonance/strategy.h"

namespace resonance::internal {
namespace {

Json Nullable(const std::optional<std::string>& value) {
  return value ? Json(*value) : Json(nullptr);
}

EnumerationOptions Enumeration(const RunParams& params) {
  return EnumerationOptions{params.enum_cap};
}

EquilibriumOptions EquilibriumFrom(const RunParams& params) {
  EquilibriumOptions options;
  options.best_response.quantum = params.quantum;
  options.best_response.enumeration = Enumeration(params);
  options.deviation.node_bundle_cap = params.node_bundle_cap;
  return options;
}

// CSV cell; quotes fields containing separators.
std::string Cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvLine(std::initializer_list<std::string> cells) {
  std::string line;
  bool first = true;
  for (const std::string& c : cells) {
    if (!first) line += ',';
    line += Cell(c);
    first = false;
  }
  return line + "\n";
}

Json WitnessJson(const DeviationWitness& w, const MarketInstance& instance) {
  Json deviation = std::visit(
      Overloaded{
          [](const Rational& x) { return ToJson(x); },
          [&](const CostFunction& c) { return ToJson(c, instance); },
          [&](const Proposal& p) { return ToJson(p, instance); },
      },
      w.deviation);
  Json out = {{"agent", w.agent},
              {"kind", std::string(AgentKindName(w.kind))},
              {"deviation", deviation},
              {"utility_before", ToJson(w.utility_before)},
              {"utility_after", ToJson(w.utility_after)}};
  if (w.context) out["context_reports"] = ToJson(*w.context, instance);
  return out;
}

Json PneJson(const EquilibriumReport& r, const MarketInstance& instance) {
  Json witnesses = Json::array();
  for (const DeviationWitness& w : r.witnesses) {
    witnesses.push_back(WitnessJson(w, instance));
  }
  return {{"is_pne", r.is_pne},
          {"checked_agent_deviations", r.checked_agent_deviations},
          {"checked_broker_allocations", r.checked_broker_allocations},
          {"witnesses", witnesses}};
}

void WitnessCsv(std::ostringstream& out,
                const std::vector<DeviationWitness>& witnesses) {
  for (const DeviationWitness& w : witnesses) {
    out << CsvLine({w.agent, std::string(AgentKindName(w.kind)),
                    w.utility_before.ToString(), w.utility_after.ToString()});
  }
}

Json WitnessJson(const BenchmarkWitness& w, const MarketInstance& instance) {
  Json out = Json::object();
  if (w.price) out["price"] = ToJson(*w.price);
  out["allocation"] = ToJson(w.allocation, instance);
  return out;
}

int IntParam(const Json& params, const char* key) {
  return static_cast<int>(ReadInteger(Field(params, key, ""), "/" +
                                                                  std::string(key)));
}

}  // namespace

CommandOutput CommandRun(const Scenario& scenario, OutputFormat format) {
  if (scenario.kind != ScenarioKind::kMarket) {
    throw PreconditionViolation("run needs a scenario of kind 'market'");
  }
  const MarketInstance& instance = scenario.instance;
  const ReportProfile reports = scenario.EffectiveReports();
  const std::vector<std::string> order = scenario.EffectiveBrokerOrder();
  const MechanismOutcome outcome =
      Run(instance, reports, scenario.proposals, order);

  CommandOutput result;
  result.rejected = outcome.rejection.has_value();
  const std::string reason =
      outcome.rejection ? std::string(RejectionReasonName(*outcome.rejection))
                        : std::string();
  if (format == OutputFormat::kCsv) {
    std::ostringstream out;
    out << CsvLine({"field", "value"});
    out << CsvLine({"winner", outcome.winner.value_or("")});
    out << CsvLine({"selected_broker", outcome.selected.value_or("")});
    out << CsvLine({"broker_payment", outcome.broker_payment.ToString()});
    out << CsvLine({"rejection_reason", reason});
    out << CsvLine({"ir_violator", outcome.ir_violator.value_or("")});
    out << CsvLine({"margin", Margin(outcome.routing).ToString()});
    for (int t = 0; t < instance.num_transactions(); ++t) {
      out << CsvLine({"utility:" + instance.transactions[t].id,
                      outcome.tx_utilities[t].ToString()});
    }
    for (int n = 0; n < instance.num_nodes(); ++n) {
      out << CsvLine({"utility:" + instance.nodes[n].id,
                      outcome.node_utilities[n].ToString()});
    }
    result.text = out.str();
    return result;
  }
  Json utilities = Json::object();
  for (int t = 0; t < instance.num_transactions(); ++t) {
    utilities[instance.transactions[t].id] = ToJson(outcome.tx_utilities[t]);
  }
  for (int n = 0; n < instance.num_nodes(); ++n) {
    utilities[instance.nodes[n].id] = ToJson(outcome.node_utilities[n]);
  }
  Json out = {
      {"command", "run"},
      {"winner", Nullable(outcome.winner)},
      {"selected_broker", Nullable(outcome.selected)},
      {"broker_payment", ToJson(outcome.broker_payment)},
      {"rejection_reason", reason.empty() ? Json(nullptr) : Json(reason)},
      {"ir_violator", Nullable(outcome.ir_violator)},
      {"routing", ToJson(outcome.routing, instance)},
      {"margin", ToJson(Margin(outcome.routing))},
      {"reported_surplus", ToJson(Surplus(outcome.routing, reports, instance))},
      {"reported_welfare",
       ToJson(Welfare(outcome.routing.allocation, reports, instance))},
      {"reported_utilities", utilities},
  };
  result.text = out.dump(2) + "\n";
  return result;
}

CommandOutput CommandEquilibrium(const Scenario& scenario,
                                 std::string_view mode, OutputFormat format) {
  if (scenario.kind != ScenarioKind::kMarket) {
    throw PreconditionViolation(
        "equilibrium needs a scenario of kind 'market'");
  }
  const MarketInstance& instance = scenario.instance;
  const ReportProfile truth = TruthfulReports(instance);
  const std::vector<std::string> order = scenario.EffectiveBrokerOrder();
  const EquilibriumOptions options = EquilibriumFrom(scenario.params);
  CommandOutput result;
  std::ostringstream csv;
  csv << CsvLine({"agent", "kind", "utility_before", "utility_after"});

  if (mode == "pne") {
    const EquilibriumReport report =
        CheckPNE(instance, truth, scenario.EffectiveReports(),
                 scenario.proposals, order, options);
    if (format == OutputFormat::kCsv) {
      WitnessCsv(csv, report.witnesses);
      result.text = csv.str();
      return result;
    }
    Json out = {{"command", "equilibrium"}, {"mode", "pne"}};
    const Json pne = PneJson(report, instance);
    for (const auto& [key, value] : pne.items()) out[key] = value;
    result.text = out.dump(2) + "\n";
    return result;
  }
  if (mode == "dsic-barring-b") {
    DsicOptions dsic;
    dsic.equilibrium = options;
    dsic.others_cap = scenario.params.others_cap;
    dsic.seed = scenario.params.seed;
    const DsicReport report = CheckDSICBarringB(instance, truth,
                                                scenario.proposals, order, dsic);
    if (format == OutputFormat::kCsv) {
      WitnessCsv(csv, report.witnesses);
      WitnessCsv(csv, report.pne.witnesses);
      result.text = csv.str();
      return result;
    }
    Json witnesses = Json::array();
    for (const DeviationWitness& w : report.witnesses) {
      witnesses.push_back(WitnessJson(w, instance));
    }
    Json out = {
        {"command", "equilibrium"},
        {"mode", "dsic-barring-b"},
        {"holds", report.holds()},
        {"truthful_dominant", report.truthful_dominant},
        {"broker_profile_pne", report.broker_profile_pne},
        {"method", report.exhaustive ? "exhaustive" : "sound-but-incomplete"},
        {"profiles_checked", report.profiles_checked},
        {"witnesses", witnesses},
        {"pne", PneJson(report.pne, instance)},
    };
    result.text = out.dump(2) + "\n";
    return result;
  }
  throw MalformedInput("unknown equilibrium mode '" + std::string(mode) +
                       "' (expected pne or dsic-barring-b)");
}

CommandOutput CommandDynamics(const Scenario& scenario, OutputFormat format) {
  if (scenario.kind != ScenarioKind::kMarket) {
    throw PreconditionViolation("dynamics needs a scenario of kind 'market'");
  }
  const MarketInstance& instance = scenario.instance;
  const DynamicsTrace trace = BestResponseDynamics(
      instance, scenario.EffectiveReports(), scenario.proposals,
      scenario.EffectiveBrokerOrder(), scenario.params.quantum,
      scenario.params.max_iters, Enumeration(scenario.params));
  std::ostringstream out;
  if (format == OutputFormat::kCsv) {
    out << CsvLine({"step", "round", "broker", "margin", "utility"});
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      const DynamicsStep& s = trace.steps[i];
      out << CsvLine({std::to_string(i + 1), std::to_string(s.round),
                      s.broker, Margin(s.proposal.routing).ToString(),
                      s.utility.ToString()});
    }
  } else {
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      const DynamicsStep& s = trace.steps[i];
      Json line = {{"step", i + 1},
                   {"round", s.round},
                   {"broker", s.broker},
                   {"utility", ToJson(s.utility)},
                   {"proposal", ToJson(s.proposal, instance)}};
      out << line.dump() << "\n";
    }
    Json terminal = Json::array();
    for (const Proposal& p : trace.terminal) {
      terminal.push_back(ToJson(p, instance));
    }
    Json summary = {
        {"summary", true},
        {"converged", trace.converged},
        {"rounds", trace.rounds},
        {"steps", trace.steps.size()},
        {"winner", Nullable(trace.outcome.winner)},
        {"winning_margin", ToJson(trace.outcome.broker_payment)},
        {"allocation", ToJson(trace.outcome.routing.allocation, instance)},
        {"terminal", terminal},
    };
    out << summary.dump() << "\n";
  }
  return {out.str(), false};
}

CommandOutput CommandBenchmarks(const Scenario& scenario,
                                OutputFormat format) {
  if (scenario.kind != ScenarioKind::kResourceMarket) {
    throw PreconditionViolation(
        "benchmarks need a scenario of kind 'resource_market'");
  }
  MdfmOptions options;
  options.enumeration = Enumeration(scenario.params);
  options.fee_grid_steps = scenario.params.fee_grid_steps;
  const BenchmarkResult r =
      ComputeBenchmarks(*scenario.resource_market, options);
  const MarketInstance& instance = scenario.instance;
  if (format == OutputFormat::kCsv) {
    std::ostringstream out;
    out << CsvLine({"benchmark", "value", "exact"});
    out << CsvLine({"opt", r.opt.ToString(), "true"});
    out << CsvLine({"inc", r.inc.ToString(), "true"});
    out << CsvLine({"fee", r.fee.ToString(), r.fee_exact ? "true" : "false"});
    out << CsvLine({"ora", r.ora.ToString(), "true"});
    return {out.str(), false};
  }
  Json out = {
      {"command", "benchmarks"},
      {"opt", ToJson(r.opt)},
      {"inc", ToJson(r.inc)},
      {"fee", ToJson(r.fee)},
      {"fee_exact", r.fee_exact},
      {"ora", ToJson(r.ora)},
      {"patterns", r.num_patterns},
      {"witnesses",
       {{"opt", WitnessJson(r.opt_witness, instance)},
        {"inc", WitnessJson(r.inc_witness, instance)},
        {"fee", WitnessJson(r.fee_witness, instance)},
        {"ora", WitnessJson(r.ora_witness, instance)}}},
  };
  return {out.dump(2) + "\n", false};
}

std::string CommandGenerate(std::string_view name,
                            std::string_view params_json) {
  Json params = Json::object();
  if (!params_json.empty()) {
    try {
      params = Json::parse(params_json.begin(), params_json.end());
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedInput(std::string("invalid generator parameters: ") +
                           e.what());
    }
  }
  if (name == "thm-of") {
    CheckKeys(params, {"d"}, "");
    return SerializeScenario(
        ResourceMarketScenario(GenThmOfInstance(IntParam(params, "d"))));
  }
  if (name == "thm-fee") {
    CheckKeys(params, {"k"}, "");
    return SerializeScenario(
        ResourceMarketScenario(GenThmFeeInstance(IntParam(params, "k"))));
  }
  if (name == "thm-wo") {
    CheckKeys(params, {"k", "values", "epsilon"}, "");
    const int k = IntParam(params, "k");
    std::vector<Rational> values;
    if (params.contains("values")) {
      values = ReadRationals(params["values"], "/values");
    } else {
      for (int j = 1; j <= k; ++j) values.push_back(Rational(j));
    }
    const Rational epsilon = params.contains("epsilon")
                                 ? ReadRational(params["epsilon"], "/epsilon")
                                 : Rational(1, 2);
    return SerializeScenario(
        ResourceMarketScenario(GenThmWoInstance(k, values, epsilon)));
  }
  if (name == "figure1") {
    CheckKeys(params, {}, "");
    Scenario s = MarketScenario(GenFigure1Instance());
    s.broker_order = {"b1", "b2"};
    s.proposals = ConstructFootnoteEquilibrium(
        s.instance, TruthfulReports(s.instance), s.broker_order);
    return SerializeScenario(s);
  }
  throw MalformedInput("unknown generator '" + std::string(name) +
                       "' (expected thm-of, thm-fee, thm-wo or figure1)");
}

}  // namespace resonance::internal
