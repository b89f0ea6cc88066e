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

#include "goi/backend.hpp"
#include "goi/nav_model.hpp"

namespace goi {

struct RipContext {
  std::string name;
  std::optional<std::string> setup;  // backend context to enter; none for the plain start state
};

struct RipperConfig {
  // Glob patterns matched against the canonical identifier and the control
  // name, or exact control type names.
  std::vector<std::string> blocklist;
  std::vector<RipContext> contexts;
  int max_depth = 12;
  std::size_t max_actions = 10000;
  int settle_ticks = 3;  // backend ticks to wait after each click

  // Throws ripper.InvalidConfig.
  void validate() const;
  bool blocked(const ControlNode& n) const;
};

RipperConfig ripper_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RipperConfig& cfg);

struct CaptureDiff {
  std::vector<ControlNode> revealed;      // document order
  std::vector<std::string> new_windows;   // window handles
  std::vector<ControlIdentifier> removed;
};

// Window nodes are not controls and never show up in the diff.
CaptureDiff capture_diff(const AccTreeSnapshot& before, const AccTreeSnapshot& after);

struct RipWarning {
  std::string code;  // BudgetExhausted, ClickFailed, ReplayFailed, MetadataConflict
  std::string message;
};

struct RipResult {
  NavGraph graph;
  std::vector<RipWarning> warnings;
  std::size_t actions = 0;

  bool has_warning(std::string_view code) const;
};

// Depth-first differential exploration from the backend's start state.
// Throws ripper.BackendUnavailable when nothing is visible.
RipResult rip(UiBackend& backend, const RipperConfig& cfg);

// Rips each configured context separately and merges by identifier.
// Throws ripper.InvalidConfig when no contexts are configured.
RipResult rip_with_contexts(UiBackend& backend, const RipperConfig& cfg);

}  // namespace goi
