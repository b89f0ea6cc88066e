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

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "goi/nav_model.hpp"

namespace goi {

// Consecutive integer handle shown to callers in place of identifiers.
using DisplayId = int;

enum class NodeKind { Original, Clone, Reference };

std::string_view to_string(NodeKind k);

struct ForestNode {
  DisplayId id = -1;
  ControlIdentifier origin;  // graph node this was cloned or externalized from
  NodeKind kind = NodeKind::Original;
  std::vector<DisplayId> children;

  // Derived from the child lists by NavForest::relink().
  DisplayId parent = -1;
  int tree = 0;  // 0 = main tree, k = k-th shared subtree
  int depth = 0;  // tree root is 0
};

// Compiled topology: a main tree plus shared subtrees joined through
// reference leaves. `nodes[i].id == i` always holds.
class NavForest {
 public:
  std::vector<ForestNode> nodes;
  std::vector<DisplayId> tree_roots;  // main root first, then shared subtrees
  std::map<DisplayId, DisplayId> entry_map;  // reference -> subtree root
  std::map<ControlIdentifier, ControlNode> controls;  // attributes by origin

  DisplayId main_root() const { return tree_roots.front(); }
  std::span<const DisplayId> shared_roots() const {
    return std::span<const DisplayId>(tree_roots).subspan(1);
  }
  std::size_t size() const { return nodes.size(); }
  bool contains(DisplayId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < nodes.size();
  }
  const ForestNode& node(DisplayId id) const;
  const ControlNode& control(DisplayId id) const;

  // Functional nodes are topology leaves. A reference counts as a leaf only
  // when the subtree it enters is a single node.
  bool is_functional(DisplayId id) const;

  // Tree-root-to-id sequence within the node's own tree.
  std::vector<DisplayId> path_in_tree(DisplayId id) const;

  // Recomputes parent/tree/depth from children lists and tree_roots.
  void relink();

  // Structural invariant problems; empty when the forest is well formed.
  std::vector<std::string> check_invariants() const;

  bool operator==(const NavForest&) const = default;
};

nlohmann::json to_json(const NavForest& f);
NavForest nav_forest_from_json(const nlohmann::json& j);

}  // namespace goi
