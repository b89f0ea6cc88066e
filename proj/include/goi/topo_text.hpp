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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "goi/forest.hpp"

namespace goi {

struct SerializationConfig {
  int core_depth = 6;
  std::size_t description_char_limit = 80;
  std::set<std::string> key_types = {"Menu", "TabItem", "ComboBox", "Group", "Button"};
  std::size_t enumeration_collapse_threshold = 50;
  std::set<DisplayId> exclusion_ids;
};

// Full forest text. Line 1 is the main tree; shared subtrees and the entry
// map follow a "## shared" divider.
std::string serialize(const NavForest& forest, const SerializationConfig& cfg = {});

// Depth-limited, enumeration-collapsed view. Hidden children are advertised
// as `{more:N,further_query:ID}`.
std::string extract_core(const NavForest& forest, const SerializationConfig& cfg = {});

// Full substructures beneath each id, plus any shared subtrees they enter.
// -1 anywhere returns serialize(forest). Throws topo.UnknownId.
std::string expand_query(const NavForest& forest, std::span<const DisplayId> ids,
                         const SerializationConfig& cfg = {});

struct Placeholder {
  std::size_t hidden = 0;
  DisplayId further_query = -1;
  bool operator==(const Placeholder&) const = default;
};

struct TopologyNode {
  DisplayId id = -1;
  std::string name;
  std::string type;
  std::optional<std::string> description;
  std::vector<DisplayId> children;
  std::optional<Placeholder> more;
  bool operator==(const TopologyNode&) const = default;
};

// Parsed topology text.
struct TopologyView {
  std::map<DisplayId, TopologyNode> nodes;
  std::vector<DisplayId> roots;  // one per tree line, in order
  std::map<DisplayId, DisplayId> entry_map;

  // Equality ignoring descriptions.
  bool same_structure(const TopologyView& other) const;
};

// Throws topo.MalformedText with line and column.
TopologyView parse_topology(std::string_view text);

// The structure serialize() would emit, without descriptions.
TopologyView topology_of(const NavForest& forest);

// Proxy token count: ceil(bytes / 4).
std::size_t estimate_tokens(std::string_view text);

struct TokenStats {
  std::size_t tokens = 0;
  std::size_t controls = 0;
  double per_control = 0.0;
};

TokenStats token_stats(std::string_view text);

}  // namespace goi
