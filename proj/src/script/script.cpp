// Copyright 2026 The GOI Authors.
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

#include "goi/script.hpp"

#include <algorithm>

#include "goi/error.hpp"

namespace goi {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& msg) { throw Error("script", "MalformedScript", msg); }

bool is_op(const json& j) { return j.is_object() && j.contains("op"); }

}  // namespace

std::vector<ScriptTurn> parse_script(const json& script) {
  const json* turns = &script;
  if (script.is_object()) {
    if (script.value("kind", "script") != "script") malformed("kind must be 'script'");
    if (script.value("schema", kSchemaVersion) != kSchemaVersion) malformed("unsupported schema version");
    if (!script.contains("turns")) malformed("missing 'turns'");
    turns = &script.at("turns");
  }
  if (!turns->is_array()) malformed("turns must be an array");
  std::vector<ScriptTurn> out;
  for (std::size_t i = 0; i < turns->size(); ++i) {
    const json& t = turns->at(i);
    const std::string where = "turn " + std::to_string(i);
    ScriptTurn turn;
    if (is_op(t)) {
      turn.kind = TurnKind::Ops;
      turn.ops.push_back(t);
    } else if (t.is_array()) {
      if (t.empty()) malformed(where + " is empty");
      const auto ops = std::count_if(t.begin(), t.end(), is_op);
      if (ops > 0 && ops < static_cast<long>(t.size())) {
        throw Error("script", "MixedTurn", where + " mixes a visit array with interaction ops");
      }
      if (ops > 0) {
        turn.kind = TurnKind::Ops;
        turn.ops.assign(t.begin(), t.end());
      } else {
        turn.kind = TurnKind::Visit;
        turn.commands = parse_commands(t);
      }
    } else {
      malformed(where + " must be a visit array or an op object");
    }
    out.push_back(std::move(turn));
  }
  if (out.empty()) malformed("script has no turns");
  return out;
}

json TurnReport::to_json() const {
  json j{{"index", index},
         {"kind", kind == TurnKind::Visit ? "visit" : "ops"},
         {"success", success},
         {"backend_actions", backend_actions},
         {"observation", observation.to_json()}};
  if (visit) j["visit"] = visit->to_json();
  if (kind == TurnKind::Ops) {
    json results = json::array();
    for (const auto& r : ops) results.push_back(r.to_json());
    j["ops"] = results;
  }
  return j;
}

bool ScriptReport::success() const {
  return turns.size() == planned_turns &&
         std::all_of(turns.begin(), turns.end(), [](const TurnReport& t) { return t.success; });
}

json ScriptReport::to_json() const {
  json items = json::array();
  for (const auto& t : turns) items.push_back(t.to_json());
  return {{"schema", kSchemaVersion},
          {"kind", "script_report"},
          {"success", success()},
          {"turns", turns.size()},
          {"planned_turns", planned_turns},
          {"backend_actions", backend_actions},
          {"reports", items}};
}

ScriptReport run_script(const std::vector<ScriptTurn>& turns, const NavForest& forest,
                        UiBackend& backend, const ScriptOptions& options) {
  ScriptReport report;
  report.planned_turns = turns.size();
  PatternOps ops(backend, options.ops);
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const ScriptTurn& turn = turns[i];
    const std::size_t before = backend.action_count();
    TurnReport tr;
    tr.index = i;
    tr.kind = turn.kind;
    ops.refresh();
    tr.observation = ops.get_texts(TextMode::Passive);
    if (turn.kind == TurnKind::Visit) {
      tr.visit = execute_visit(turn.commands, forest, backend, options.visit);
      tr.success = tr.visit->success();
    } else {
      tr.success = true;
      for (const auto& op : turn.ops) {
        PatternResult r;
        try {
          r = run_op(ops, op);
        } catch (const Error& e) {
          r = {PatternStatus::NotFound, std::nullopt, e.what()};
        }
        tr.ops.push_back(r);
        if (!r.ok()) {
          tr.success = false;
          break;
        }
      }
    }
    tr.backend_actions = backend.action_count() - before;
    report.backend_actions += tr.backend_actions;
    const bool ok = tr.success;
    report.turns.push_back(std::move(tr));
    if (!ok) break;
  }
  return report;
}

}  // namespace goi
