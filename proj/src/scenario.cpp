// Copyright 2026 The ehopt Authors
//
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

#include "ehopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ehopt {
namespace {

using Json = nlohmann::json;
using Path = std::vector<std::string>;

std::size_t line_at(const std::string& text, std::size_t pos) {
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + std::min(pos, text.size()), '\n'));
}

// Locates an object member by following its key path through the raw text.
std::size_t locate(const std::string& text, const Path& path) {
  std::size_t pos = 0;
  bool found = false;
  for (const auto& key : path) {
    const std::size_t p = text.find("\"" + key + "\"", pos);
    if (p == std::string::npos) break;
    pos = p;
    found = true;
  }
  return found ? line_at(text, pos) : 0;
}

std::string dotted(const Path& path) {
  std::string out;
  for (const auto& k : path) out += (out.empty() ? "" : ".") + k;
  return out;
}

class Node {
 public:
  Node(const Json& json, Path path, const std::string& text, const std::string& source)
      : json_(json), path_(std::move(path)), text_(text), source_(source) {
    if (!json_.is_object()) fail("must be an object");
  }

  [[noreturn]] void fail(const std::string& message) const { fail_at(path_, message); }

  [[noreturn]] void fail_at(const Path& path, const std::string& message) const {
    throw ScenarioError(source_, locate(text_, path), (path.empty() ? "scenario" : dotted(path)) + " " + message);
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : json_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail_at(sub(key), "is not a recognized key");
    }
  }

  bool has(const std::string& key) const { return json_.contains(key); }

  Node child(const std::string& key) const {
    if (!has(key)) fail("needs a '" + key + "' section");
    return Node(json_.at(key), sub(key), text_, source_);
  }

  double number(const std::string& key) const {
    if (!has(key)) fail("needs '" + key + "'");
    return as_number(json_.at(key), sub(key));
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  double positive(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0.0)) fail_at(sub(key), "must be positive");
    return v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& j = json_.at(key);
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail_at(sub(key), "must be a non-negative integer");
    return j.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!json_.at(key).is_boolean()) fail_at(sub(key), "must be true or false");
    return json_.at(key).get<bool>();
  }

  std::string text(const std::string& key) const {
    if (!has(key)) fail("needs '" + key + "'");
    if (!json_.at(key).is_string()) fail_at(sub(key), "must be a string");
    return json_.at(key).get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) const {
    if (!has(key)) fail("needs '" + key + "'");
    const auto& j = json_.at(key);
    if (!j.is_array()) fail_at(sub(key), "must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(as_number(v, sub(key)));
    return out;
  }

  std::vector<std::vector<double>> matrix(const std::string& key) const {
    if (!has(key)) fail("needs '" + key + "'");
    const auto& j = json_.at(key);
    if (!j.is_array()) fail_at(sub(key), "must be an array of rows");
    std::vector<std::vector<double>> out;
    for (const auto& row : j) {
      if (!row.is_array()) fail_at(sub(key), "must be an array of rows");
      std::vector<double> r;
      for (const auto& v : row) r.push_back(as_number(v, sub(key)));
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const auto& j = json_.at(key);
    if (!j.is_array()) fail_at(sub(key), "must be an array of strings");
    for (const auto& v : j) {
      if (!v.is_string()) fail_at(sub(key), "must be an array of strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  Path sub(const std::string& key) const {
    Path p = path_;
    p.push_back(key);
    return p;
  }

 private:
  double as_number(const Json& j, const Path& path) const {
    if (!j.is_number()) fail_at(path, "must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail_at(path, "must be finite");
    return v;
  }

  const Json& json_;
  Path path_;
  const std::string& text_;
  const std::string& source_;
};

DiscreteDistribution parse_distribution(const Node& node) {
  node.allow({"values", "probs"});
  DiscreteDistribution d{node.numbers("values"), node.numbers("probs")};
  try {
    validate(d);
  } catch (const ConfigError& e) {
    node.fail(e.what());
  }
  return d;
}

FadingModel parse_fading(const Node& node) {
  const std::string type = node.text("type");
  FadingModel f;
  if (type == "rayleigh") {
    node.allow({"type", "mean_gain"});
    f = Rayleigh{node.number("mean_gain", 1.0)};
  } else if (type == "weibull") {
    node.allow({"type", "shape", "scale"});
    f = Weibull{node.number("shape"), node.number("scale")};
  } else if (type == "nakagami") {
    node.allow({"type", "m", "mean_gain"});
    f = Nakagami{node.number("m"), node.number("mean_gain", 1.0)};
  } else if (type == "rician") {
    node.allow({"type", "k_factor", "mean_gain"});
    f = Rician{node.number("k_factor"), node.number("mean_gain", 1.0)};
  } else if (type == "double_rayleigh") {
    node.allow({"type", "mean_gain"});
    f = DoubleRayleigh{node.number("mean_gain", 1.0)};
  } else if (type == "point_mass") {
    node.allow({"type", "gain"});
    f = PointMass{node.number("gain")};
  } else {
    node.fail_at(node.sub("type"), "'" + type + "' is not a known fading family");
  }
  try {
    validate(f);
  } catch (const ConfigError& e) {
    node.fail(e.what());
  }
  return f;
}

EhProcess parse_process(const Node& node) {
  const std::string type = node.text("type");
  EhProcess p;
  if (type == "iid") {
    node.allow({"type", "values", "probs"});
    DiscreteDistribution d{node.numbers("values"), node.numbers("probs")};
    p = IidEh{d};
  } else if (type == "markov") {
    node.allow({"type", "levels", "initial", "transition"});
    p = MarkovEh{node.numbers("levels"), node.numbers("initial"), node.matrix("transition")};
  } else {
    node.fail_at(node.sub("type"), "'" + type + "' is not a known EH process (iid, markov)");
  }
  try {
    validate(p);
  } catch (const ConfigError& e) {
    node.fail(e.what());
  }
  return p;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& source, std::size_t line, const std::string& message)
    : ConfigError(line > 0 ? fmt::format("{}:{}: {}", source, line, message)
                           : fmt::format("{}: {}", source, message)),
      line_(line) {}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  Json json;
  try {
    json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ScenarioError(source, line_at(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  const Node root(json, {}, text, source);
  root.allow({"horizon", "eh", "channel", "utility", "knowledge", "relay", "solver"});

  Scenario sc;
  const Node horizon = root.child("horizon");
  horizon.allow({"M", "N"});
  sc.num_eh_blocks = horizon.integer("M", 0);
  sc.blocks_per_eh = horizon.integer("N", 0);
  if (sc.num_eh_blocks == 0) horizon.fail_at(horizon.sub("M"), "must be a positive integer");
  if (sc.blocks_per_eh == 0) horizon.fail_at(horizon.sub("N"), "must be a positive integer");
  const std::size_t M = sc.num_eh_blocks;
  const std::size_t N = sc.blocks_per_eh;

  const Node eh = root.child("eh");
  eh.allow({"rates", "process"});
  if (eh.has("rates") == eh.has("process")) eh.fail("needs exactly one of 'rates' or 'process'");
  if (eh.has("rates")) {
    sc.eh_rates = eh.numbers("rates");
    if (sc.eh_rates->size() != M) eh.fail_at(eh.sub("rates"), fmt::format("must list M = {} rates", M));
    for (double e : *sc.eh_rates) {
      if (e < 0.0) eh.fail_at(eh.sub("rates"), "must be non-negative");
    }
  } else {
    sc.eh_process = parse_process(eh.child("process"));
  }

  if (root.has("channel")) {
    const Node ch = root.child("channel");
    ch.allow({"trace", "gain", "fading", "discrete"});
    const int count = ch.has("trace") + ch.has("gain") + ch.has("fading") + ch.has("discrete");
    if (count != 1) ch.fail("needs exactly one of 'trace', 'gain', 'fading', 'discrete'");
    if (ch.has("trace")) {
      const auto rows = ch.matrix("trace");
      if (rows.size() != M || std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.size() != N; })) {
        ch.fail_at(ch.sub("trace"), fmt::format("must be an M x N = {} x {} grid", M, N));
      }
      for (const auto& r : rows) {
        for (double g : r) {
          if (g < 0.0) ch.fail_at(ch.sub("trace"), "gains must be non-negative");
        }
      }
      sc.trace = BlockGrid(rows);
    } else if (ch.has("gain")) {
      sc.constant_gain = ch.number("gain");
      if (*sc.constant_gain < 0.0) ch.fail_at(ch.sub("gain"), "must be non-negative");
    } else if (ch.has("fading")) {
      sc.fading = parse_fading(ch.child("fading"));
    } else {
      sc.discrete_gains = parse_distribution(ch.child("discrete"));
    }
  }

  const Node util = root.child("utility");
  util.allow({"type", "rate"});
  const std::string type = util.text("type");
  if (type == "throughput") {
    sc.utility = UtilityKind::kThroughput;
  } else if (type == "outage") {
    sc.utility = UtilityKind::kOutage;
    sc.required_rate = util.positive("rate");
  } else if (type == "ergodic") {
    sc.utility = UtilityKind::kErgodic;
  } else {
    util.fail_at(util.sub("type"), "'" + type + "' is not one of throughput, outage, ergodic");
  }
  if (type != "outage" && util.has("rate")) util.fail_at(util.sub("rate"), "applies to outage only");

  if (root.has("knowledge")) {
    const Node k = root.child("knowledge");
    k.allow({"case", "esit"});
    const auto c = k.integer("case", 1);
    if (c < 1 || c > 4) k.fail_at(k.sub("case"), "must be 1, 2, 3 or 4");
    sc.knowledge_case = static_cast<int>(c);
    sc.esit = sc.knowledge_case == 2 ? Esit::kCausal : Esit::kNonCausal;
    if (k.has("esit")) {
      const std::string esit = k.text("esit");
      if (sc.knowledge_case != 4) k.fail_at(k.sub("esit"), "is implied by cases 1 to 3");
      if (esit == "causal") {
        sc.esit = Esit::kCausal;
      } else if (esit != "noncausal") {
        k.fail_at(k.sub("esit"), "must be 'causal' or 'noncausal'");
      }
    }
  }

  if (root.has("relay")) {
    const Node r = root.child("relay");
    r.allow({"relay_rates", "g_sr", "g_rd", "traffic", "sharing"});
    RelaySection rs;
    rs.relay_rates = r.numbers("relay_rates");
    if (rs.relay_rates.size() != M) r.fail_at(r.sub("relay_rates"), fmt::format("must list M = {} rates", M));
    for (double e : rs.relay_rates) {
      if (e < 0.0) r.fail_at(r.sub("relay_rates"), "must be non-negative");
    }
    rs.g_sr = r.number("g_sr");
    rs.g_rd = r.number("g_rd");
    if (rs.g_sr < 0.0) r.fail_at(r.sub("g_sr"), "must be non-negative");
    if (rs.g_rd < 0.0) r.fail_at(r.sub("g_rd"), "must be non-negative");
    const std::string traffic = r.has("traffic") ? r.text("traffic") : "delay_constrained";
    if (traffic == "delay_tolerant") {
      rs.traffic = Traffic::kDelayTolerant;
    } else if (traffic != "delay_constrained") {
      r.fail_at(r.sub("traffic"), "must be 'delay_constrained' or 'delay_tolerant'");
    }
    if (r.has("sharing")) {
      const Node s = r.child("sharing");
      s.allow({"efficiency"});
      const double a = s.number("efficiency");
      if (!(a > 0.0 && a <= 1.0)) s.fail_at(s.sub("efficiency"), "must lie in (0, 1]");
      if (rs.traffic != Traffic::kDelayConstrained) s.fail("requires delay_constrained traffic");
      rs.sharing_efficiency = a;
    }
    if (!sc.eh_rates) eh.fail("relay scenarios need source 'rates'");
    if (sc.knowledge_case != 1) root.fail_at({"knowledge"}, "relay scenarios assume case 1");
    sc.relay = rs;
  }

  if (root.has("solver")) {
    const Node s = root.child("solver");
    s.allow({"tol", "grid_points", "grid_step", "oracle_step", "seed", "trials", "policies",
             "unrestricted_actions"});
    sc.solver.tol = s.number("tol", sc.solver.tol);
    if (!(sc.solver.tol >= 0.0)) s.fail_at(s.sub("tol"), "must be non-negative");
    sc.solver.grid_points = s.integer("grid_points", sc.solver.grid_points);
    if (sc.solver.grid_points < 2) s.fail_at(s.sub("grid_points"), "must be at least 2");
    if (s.has("grid_step")) sc.solver.grid_step = s.positive("grid_step");
    if (s.has("oracle_step")) sc.solver.oracle_step = s.positive("oracle_step");
    sc.solver.seed = s.integer("seed", 0);
    sc.solver.trials = s.integer("trials", sc.solver.trials);
    if (sc.solver.trials == 0) s.fail_at(s.sub("trials"), "must be at least 1");
    sc.solver.policies = s.strings("policies");
    sc.solver.unrestricted_actions = s.boolean("unrestricted_actions", false);
  }

  // Cross-section consistency.
  if (sc.relay) return sc;
  const bool has_trace = sc.trace || sc.constant_gain;
  if (!root.has("channel")) root.fail("needs a 'channel' section");
  const Path channel{"channel"};
  switch (sc.knowledge_case) {
    case 1:
      if (!sc.eh_rates) root.fail_at({"eh"}, "case 1 needs known 'rates'");
      if (!has_trace) root.fail_at(channel, "case 1 needs a 'trace' or constant 'gain'");
      if (sc.utility == UtilityKind::kErgodic) root.fail_at({"utility"}, "ergodic utility needs case 4");
      break;
    case 2:
      if (!sc.eh_process) root.fail_at({"eh"}, "case 2 needs an EH 'process'");
      if (!sc.discrete_gains) root.fail_at(channel, "case 2 needs 'discrete' gains");
      if (sc.utility == UtilityKind::kErgodic) root.fail_at({"utility"}, "ergodic utility needs case 4");
      break;
    case 3:
      if (!sc.eh_rates) root.fail_at({"eh"}, "case 3 needs known 'rates'");
      if (!sc.discrete_gains) root.fail_at(channel, "case 3 needs 'discrete' gains");
      if (sc.utility == UtilityKind::kErgodic) root.fail_at({"utility"}, "ergodic utility needs case 4");
      break;
    default:
      if (!sc.fading) root.fail_at(channel, "case 4 needs a 'fading' model");
      if (sc.esit == Esit::kNonCausal && !sc.eh_rates) root.fail_at({"eh"}, "non-causal ESIT needs known 'rates'");
      if (sc.esit == Esit::kCausal && sc.utility != UtilityKind::kOutage) {
        root.fail_at({"utility"}, "case 4 with causal ESIT is solved for outage only");
      }
      break;
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, 0, "cannot be read");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

EhProfile Scenario::profile() const {
  if (!eh_rates) throw ConfigError("scenario has no known EH rates");
  return EhProfile(blocks_per_eh, *eh_rates);
}

ChannelTrace Scenario::channel_trace() const {
  if (trace) return ChannelTrace(*trace);
  if (constant_gain) return ChannelTrace(BlockGrid(num_eh_blocks, blocks_per_eh, *constant_gain));
  throw ConfigError("scenario has no channel trace");
}

StochasticModel Scenario::stochastic_model() const {
  if (!eh_process) throw ConfigError("scenario has no EH process");
  StochasticModel m;
  m.num_eh_blocks = num_eh_blocks;
  m.blocks_per_eh = blocks_per_eh;
  m.eh = *eh_process;
  if (discrete_gains) {
    m.channel = *discrete_gains;
  } else if (fading) {
    m.channel = *fading;
  } else {
    throw ConfigError("stochastic scenarios need 'discrete' gains or a 'fading' model");
  }
  return m;
}

UtilitySpec Scenario::utility_spec() const {
  const bool statistical = knowledge_case == 4;
  switch (utility) {
    case UtilityKind::kThroughput:
      if (statistical) return ErgodicThroughput{*fading};
      return Throughput{};
    case UtilityKind::kOutage: {
      NonOutage no{required_rate, std::nullopt};
      if (statistical) no.fading = *fading;
      return no;
    }
    case UtilityKind::kErgodic:
      if (!fading) throw ConfigError("ergodic utility needs a fading model");
      return ErgodicThroughput{*fading};
  }
  return Throughput{};
}

RelayScenario Scenario::relay_scenario() const {
  if (!relay) throw ConfigError("scenario has no relay section");
  RelayScenario r{profile(), EhProfile(blocks_per_eh, relay->relay_rates), relay->g_sr, relay->g_rd,
                  relay->traffic, NoSharing{}};
  if (relay->sharing_efficiency) r.sharing = OneWaySharing{*relay->sharing_efficiency};
  return r;
}

}  // namespace ehopt
