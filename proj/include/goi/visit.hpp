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
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "goi/backend.hpp"
#include "goi/compiler.hpp"
#include "goi/error.hpp"
#include "goi/forest.hpp"
#include "goi/topo_text.hpp"

namespace goi {

enum class CommandKind { Access, AccessInput, Shortcut, FurtherQuery };

std::string_view to_string(CommandKind k);

struct VisitCommand {
  CommandKind kind = CommandKind::Access;
  DisplayId id = -1;                  // Access, AccessInput
  std::vector<DisplayId> entry_refs;  // Access, AccessInput
  std::string text;                   // AccessInput
  std::string key_combination;        // Shortcut, normalized upper case
  std::vector<DisplayId> node_ids;    // FurtherQuery

  nlohmann::json to_json() const;
  bool operator==(const VisitCommand&) const = default;
};

// Error carrying structured diagnostics for the execution report.
class VisitError : public Error {
 public:
  VisitError(std::string code, const std::string& message, nlohmann::json details = {})
      : Error("visit", std::move(code), message), details_(std::move(details)) {}
  const nlohmann::json& details() const { return details_; }

 private:
  nlohmann::json details_;
};

// Key grammar: zero or more of CTRL, ALT, SHIFT, WIN joined by '+', then one
// key: a letter, a digit, F1-F24 or a named key (ENTER, ESC, TAB, ...).
// Case-insensitive. Returns the normalized form or nullopt.
std::optional<std::string> normalize_key_combination(std::string_view s);

// Throws visit.MalformedCommand (with index) or visit.MixedFurtherQuery.
std::vector<VisitCommand> parse_commands(const nlohmann::json& commands);
std::vector<VisitCommand> parse_commands_text(std::string_view json_text);

// Whether a JSON element looks like a visit command (as opposed to an
// interaction op).
bool is_visit_command_json(const nlohmann::json& j);

struct DroppedCommand {
  std::size_t index = 0;
  std::string reason;
};

struct FilterResult {
  std::vector<VisitCommand> kept;
  std::vector<std::size_t> kept_indices;
  std::vector<DroppedCommand> dropped;
};

// Drops accesses to navigational (non-leaf) nodes and the shortcuts
// directly following a dropped command.
FilterResult filter_commands(const std::vector<VisitCommand>& cmds, const NavForest& forest);

struct MatchPolicy {
  double name_similarity_threshold = 0.75;
  double name_weight = 0.6;
  double ancestor_weight = 0.4;
  int max_retries = 3;
  int retry_wait_ticks = 1;

  // Throws visit.InvalidPolicy.
  void validate() const;
};

// 1 - edit distance / longer length, over code points. Two empty strings
// are identical.
double name_similarity(std::string_view a, std::string_view b);
// Longest common subsequence of ancestor names over the longer path.
double ancestor_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b);
// Weighted score; 0 when the control types differ.
double match_score(const ControlIdentifier& expected, const ControlIdentifier& candidate,
                   const MatchPolicy& policy);

// Best same-type candidate scoring at least the threshold; ties go to the
// earlier candidate.
std::optional<ControlNode> fuzzy_match(const ControlIdentifier& expected,
                                       const std::vector<ControlNode>& candidates,
                                       const MatchPolicy& policy);

struct NavOutcome {
  AccNode target;
  std::size_t clicks = 0;   // navigation clicks, activation excluded
  std::size_t closes = 0;   // windows dismissed
  std::size_t retries = 0;
  std::size_t fetches = 0;
  std::size_t max_fetches_per_hop = 0;
  bool fuzzy = false;       // at least one hop matched approximately
  std::vector<std::string> notes;
};

// Drives the backend until the path target is visible in the topmost window.
// Does not activate the target. Throws VisitError ControlNotFound or
// WindowCloseFailed.
NavOutcome navigate_path(const NavPath& path, UiBackend& backend, const MatchPolicy& policy = {});

enum class CommandStatus { Executed, FilteredOut, Failed, NotAttempted };

std::string_view to_string(CommandStatus s);

struct CommandOutcome {
  std::size_t index = 0;
  CommandKind kind = CommandKind::Access;
  CommandStatus status = CommandStatus::NotAttempted;
  std::string reason;  // FilteredOut
  std::optional<std::string> error_code;
  std::string error_message;
  nlohmann::json error_details;
  std::size_t clicks = 0;  // navigation plus activation
  std::size_t retries = 0;
  std::vector<std::string> notes;
};

struct SnapshotSummary {
  long tick = 0;
  std::vector<std::string> windows;  // titles, topmost last
  std::size_t controls = 0;
};

struct ExecutionReport {
  std::vector<CommandOutcome> outcomes;
  std::size_t backend_actions = 0;
  std::size_t retries = 0;
  std::optional<std::string> topology;  // further_query answer
  SnapshotSummary final_snapshot;

  bool success() const;
  nlohmann::json to_json() const;
};

struct VisitOptions {
  MatchPolicy policy;
  SerializationConfig serialization;
};

// Filters, resolves and runs one visit array. Stops at the first failure.
ExecutionReport execute_visit(const std::vector<VisitCommand>& cmds, const NavForest& forest,
                              UiBackend& backend, const VisitOptions& options = {});

}  // namespace goi
