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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "goi/pattern_ops.hpp"
#include "goi/visit.hpp"

namespace goi {

enum class TurnKind { Visit, Ops };

// One planning round: either a visit array or interaction ops, never both.
struct ScriptTurn {
  TurnKind kind = TurnKind::Visit;
  std::vector<VisitCommand> commands;
  std::vector<nlohmann::json> ops;
};

// Accepts a bare array of turns or {"schema":1,"kind":"script","turns":[...]}.
// A turn is a visit array, an array of ops, or a single op object.
// Throws script.MalformedScript, script.MixedTurn or visit.* parse errors.
std::vector<ScriptTurn> parse_script(const nlohmann::json& script);

struct TurnReport {
  std::size_t index = 0;
  TurnKind kind = TurnKind::Visit;
  PatternResult observation;  // passive get_texts taken before the turn
  std::optional<ExecutionReport> visit;
  std::vector<PatternResult> ops;
  std::size_t backend_actions = 0;
  bool success = false;

  nlohmann::json to_json() const;
};

struct ScriptReport {
  std::vector<TurnReport> turns;
  std::size_t planned_turns = 0;
  std::size_t backend_actions = 0;

  bool success() const;
  nlohmann::json to_json() const;
};

struct ScriptOptions {
  VisitOptions visit;
  PatternOpsConfig ops;
};

// Runs turns in order and stops after the first unsuccessful one.
ScriptReport run_script(const std::vector<ScriptTurn>& turns, const NavForest& forest,
                        UiBackend& backend, const ScriptOptions& options = {});

}  // namespace goi
