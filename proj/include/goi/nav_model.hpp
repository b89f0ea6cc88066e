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

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace goi {

inline constexpr int kSchemaVersion = 1;

// Capability tags a control may expose. Subset of the UIA control patterns.
enum class Pattern { Scroll, Text, Value, Select, Toggle, ExpandCollapse, Invoke };

std::string_view to_string(Pattern p);
std::optional<Pattern> parse_pattern(std::string_view s);

// Control types the library knows about. Anything outside this set is still
// accepted (backends report what they report) but validation warns.
const std::set<std::string>& known_control_types();

inline constexpr std::string_view kUnnamed = "[Unnamed]";
inline constexpr std::string_view kRootType = "Root";

// XPath-like control address: `primary_id|control_type|ancestor/path`.
// Backslash escapes `\`, `|` and `/` inside components.
struct ControlIdentifier {
  std::string primary_id;
  std::string control_type;
  std::vector<std::string> ancestor_path;  // root-first

  std::string to_string() const;
  static ControlIdentifier parse(std::string_view canonical);

  auto operator<=>(const ControlIdentifier&) const = default;
  bool operator==(const ControlIdentifier&) const = default;
};

// What a backend reports about one control before addressing is decided.
struct RawControlRecord {
  std::optional<std::string> stable_id;
  std::optional<std::string> name;
  std::optional<std::string> control_type;
  std::vector<std::string> ancestors;
};

// Fallback chain for the primary id is stable_id -> name -> "[Unnamed]".
// Empty strings count as absent. Throws nav.InvalidRecord without a type.
ControlIdentifier synthesize_identifier(const RawControlRecord& raw);

struct ControlNode {
  ControlIdentifier identifier;
  std::string name;
  std::string control_type;
  std::optional<std::string> description;
  std::set<Pattern> patterns;
  bool enabled = true;
  std::set<std::string> context_tags;

  bool has(Pattern p) const { return patterns.count(p) != 0; }
  bool operator==(const ControlNode&) const = default;
};

enum class ClickKind { Click };

struct NavEdge {
  ControlIdentifier src;
  ControlIdentifier dst;
  ClickKind action = ClickKind::Click;

  bool operator==(const NavEdge&) const = default;
};

// Single-source click-reveal graph. Node and edge order is discovery order;
// downstream passes use it to break ties.
struct NavGraph {
  ControlIdentifier source;
  std::vector<ControlNode> nodes;
  std::vector<NavEdge> edges;

  const ControlNode* find(const ControlIdentifier& id) const;
  bool operator==(const NavGraph&) const = default;
};

ControlIdentifier virtual_root_identifier();
ControlNode make_virtual_root(std::string name = "Root");

// Dense index over a NavGraph. Duplicate identifiers resolve to the first
// node in discovery order; parallel and dangling edges are skipped and
// recorded.
struct GraphIndex {
  explicit GraphIndex(const NavGraph& g);

  std::size_t size() const { return out.size(); }

  std::map<ControlIdentifier, std::size_t> lookup;
  std::optional<std::size_t> source;
  std::vector<std::vector<std::size_t>> out;  // edge-list order
  std::vector<std::vector<std::size_t>> in;
  std::vector<std::size_t> dangling_edges;     // indices into g.edges
  std::vector<std::size_t> parallel_edges;     // indices into g.edges
  std::vector<std::size_t> duplicate_nodes;    // indices into g.nodes
};

enum class Severity { Error, Warning };

struct ValidationIssue {
  Severity severity;
  std::string kind;  // DanglingEdge, MissingSource, SourceHasIncoming, ...
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  std::vector<ControlIdentifier> unreachable;

  bool ok() const;
  std::size_t count(Severity s) const;
  std::size_t count(std::string_view kind) const;
};

ValidationReport validate_graph(const NavGraph& g);

// JSON forms. Keys are emitted sorted so the output is canonical.
nlohmann::json to_json(const ControlNode& n);
ControlNode control_node_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NavGraph& g);
NavGraph nav_graph_from_json(const nlohmann::json& j);

std::string canonical_dump(const nlohmann::json& j);

}  // namespace goi
