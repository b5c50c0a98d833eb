// Copyright 2026 The wasmflow Authors
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

#include "wasmflow/cli/config.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wasmflow/common/util.h"

namespace wasmflow::cli {
namespace {

using Json = nlohmann::ordered_json;
using orchestrator::CellSpec;

absl::Status Invalid(std::string_view detail) {
  return absl::InvalidArgumentError("invalid campaign config: " + std::string(detail));
}

std::vector<std::string> StringList(const Json& j, const char* key) {
  std::vector<std::string> out;
  for (const Json& v : j.at(key)) out.push_back(v.get<std::string>());
  return out;
}

absl::StatusOr<CellSpec> MakeCell(const std::string& env, const std::string& payload_name,
                                  const std::string& mode_name, const std::string& state_name) {
  auto size = payload::ParseSizeLabel(payload_name);
  if (!size.ok()) return Invalid("unknown payload '" + payload_name + "'");
  auto mode = protocol::ParseCompileMode(mode_name);
  if (!mode.ok()) return Invalid("unknown mode '" + mode_name + "'");
  auto state = protocol::ParseStatePolicy(state_name);
  if (!state.ok()) return Invalid("unknown state '" + state_name + "'");
  if (env.empty()) return Invalid("cell with empty env");
  return CellSpec{env, *size, *mode, *state};
}

// Either a list of {env, payload, mode, state} objects or a grid
// {envs, payloads, modes, states} expanded in that nesting order.
absl::StatusOr<std::vector<CellSpec>> ParseCells(const Json& j) {
  std::vector<CellSpec> cells;
  if (j.is_array()) {
    for (const Json& c : j) {
      auto cell = MakeCell(c.at("env").get<std::string>(), c.at("payload").get<std::string>(),
                           c.at("mode").get<std::string>(), c.at("state").get<std::string>());
      if (!cell.ok()) return cell.status();
      cells.push_back(*cell);
    }
  } else if (j.is_object()) {
    for (const std::string& env : StringList(j, "envs")) {
      for (const std::string& p : StringList(j, "payloads")) {
        for (const std::string& m : StringList(j, "modes")) {
          for (const std::string& s : StringList(j, "states")) {
            auto cell = MakeCell(env, p, m, s);
            if (!cell.ok()) return cell.status();
            cells.push_back(*cell);
          }
        }
      }
    }
  } else {
    return Invalid("'cells' must be a list or a grid object");
  }
  return cells;
}

void Dedupe(std::vector<CellSpec>& cells) {
  std::vector<CellSpec> unique;
  for (const CellSpec& c : cells) {
    if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(c);
  }
  cells = std::move(unique);
}

absl::Status Validate(const CampaignConfig& config) {
  if (config.plan.cells.empty()) return Invalid("no cells");
  if (config.plan.k < 1) return Invalid("k must be positive");
  if (config.plan.warmups < 0) return Invalid("warmups must be non-negative");
  if (config.plan.workflow.max_in_flight < 1) return Invalid("max_in_flight must be positive");
  if (config.max_discard_ratio < 0 || config.max_discard_ratio > 1) {
    return Invalid("max_discard_ratio must be within [0, 1]");
  }
  auto check_env = [&](const CellSpec& c) -> absl::Status {
    if (!config.environments.contains(c.env)) {
      return Invalid("cell " + c.Id() + " names environment '" + c.env +
                     "' without an endpoint");
    }
    return absl::OkStatus();
  };
  for (const CellSpec& c : config.plan.cells) {
    if (auto s = check_env(c); !s.ok()) return s;
  }
  if (config.throughput) {
    if (config.throughput->concurrency < 1) return Invalid("throughput concurrency must be positive");
    if (config.throughput->duration.count() <= 0) return Invalid("throughput duration must be positive");
    for (const CellSpec& c : config.throughput->cells) {
      if (auto s = check_env(c); !s.ok()) return s;
    }
  }
  return absl::OkStatus();
}

Json CellsJson(const std::vector<CellSpec>& cells) {
  Json list = Json::array();
  for (const CellSpec& c : cells) list.push_back(c.Id());
  return list;
}

}  // namespace

absl::StatusOr<CampaignConfig> ParseCampaignConfig(std::string_view text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
  if (j.is_discarded() || !j.is_object()) return Invalid("not a JSON object");
  CampaignConfig config;
  try {
    const Json environments = j.at("environments");
    for (const auto& [name, e] : environments.items()) {
      orchestrator::EndpointConfig endpoint;
      endpoint.transport = e.value("transport", std::string("http"));
      endpoint.endpoint = e.at("endpoint").get<std::string>();
      endpoint.timeout = std::chrono::milliseconds(e.value("timeout_ms", endpoint.timeout.count()));
      config.environments[name] = endpoint;
    }
    auto cells = ParseCells(j.at("cells"));
    if (!cells.ok()) return cells.status();
    config.plan.cells = *cells;
    config.plan.k = j.value("k", config.plan.k);
    config.plan.warmups = j.value("warmups", config.plan.warmups);
    config.plan.order_seed = j.value("order_seed", config.plan.order_seed);
    config.plan.payload_seed = j.value("payload_seed", config.plan.payload_seed);
    config.plan.workflow.max_in_flight =
        j.value("max_in_flight", config.plan.workflow.max_in_flight);
    config.lockfile = j.value("lockfile", config.lockfile);
    config.out_dir = j.value("out", config.out_dir);
    config.max_discard_ratio = j.value("max_discard_ratio", config.max_discard_ratio);
    if (j.contains("throughput")) {
      const Json t = j.at("throughput");
      ThroughputPlan plan;
      auto tcells = ParseCells(t.at("cells"));
      if (!tcells.ok()) return tcells.status();
      plan.cells = *tcells;
      plan.duration = std::chrono::milliseconds(t.value("duration_ms", plan.duration.count()));
      plan.concurrency = t.value("concurrency", plan.concurrency);
      config.throughput = plan;
    }
  } catch (const Json::exception& e) {
    // The JSON library reports missing keys and type errors by exception.
    return Invalid(e.what());
  }
  Dedupe(config.plan.cells);
  if (auto s = Validate(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<CampaignConfig> LoadCampaignConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError("cannot read config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseCampaignConfig(buffer.str());
}

absl::Status ApplyOverrides(const ConfigOverrides& overrides, CampaignConfig& config) {
  if (overrides.seed) config.plan.payload_seed = *overrides.seed;
  if (overrides.k) config.plan.k = *overrides.k;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  auto apply = [&](std::vector<CellSpec>& cells) {
    for (CellSpec& c : cells) {
      if (overrides.env) c.env = *overrides.env;
      if (overrides.payload) c.payload = *overrides.payload;
      if (overrides.mode) c.mode = *overrides.mode;
      if (overrides.state) c.state = *overrides.state;
    }
    Dedupe(cells);
  };
  apply(config.plan.cells);
  if (config.throughput) apply(config.throughput->cells);
  return Validate(config);
}

std::string EffectiveConfigJson(const CampaignConfig& config) {
  Json environments = Json::object();
  for (const auto& [name, e] : config.environments) {
    environments[name] = {{"transport", e.transport},
                          {"endpoint", e.endpoint},
                          {"timeout_ms", e.timeout.count()}};
  }
  Json j = {{"environments", environments},
            {"cells", CellsJson(config.plan.cells)},
            {"k", config.plan.k},
            {"warmups", config.plan.warmups},
            {"order_seed", config.plan.order_seed},
            {"payload_seed", config.plan.payload_seed},
            {"max_in_flight", config.plan.workflow.max_in_flight},
            {"lockfile", config.lockfile},
            {"max_discard_ratio", config.max_discard_ratio}};
  if (config.throughput) {
    j["throughput"] = {{"cells", CellsJson(config.throughput->cells)},
                       {"duration_ms", config.throughput->duration.count()},
                       {"concurrency", config.throughput->concurrency}};
  }
  return j.dump(2) + "\n";
}

std::string ConfigHash(const CampaignConfig& config) {
  return ToHex(Blake3Digest(AsBytes(EffectiveConfigJson(config))));
}

}  // namespace wasmflow::cli
