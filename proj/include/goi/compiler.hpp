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

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "goi/forest.hpp"
#include "goi/nav_model.hpp"

namespace goi {

struct CompilerConfig {
  static constexpr std::uint64_t kNeverExternalize =
      std::numeric_limits<std::uint64_t>::max();

  // Cloning cost (extra nodes) above which a merge node is externalized.
  std::uint64_t externalization_threshold = 20;
  std::int64_t deterministic_seed = 0;  // reserved
  // Hard cap on the compiled forest; full cloning is exponential.
  std::size_t max_forest_nodes = 20'000'000;
};

// DFS back-edges under edge-list child order, starting at the source and
// then at any unvisited node in discovery order.
std::vector<NavEdge> back_edges(const NavGraph& g);

// Removes back_edges(g). Nodes are untouched; edge order is preserved.
NavGraph decycle(const NavGraph& g);

// Cost-based selective externalization of a single-source DAG into a forest.
// Throws compiler.NotAcyclic, compiler.MissingSource, compiler.ForestTooLarge.
NavForest externalize(const NavGraph& dag, const CompilerConfig& cfg = {});

inline NavForest compile(const NavGraph& g, const CompilerConfig& cfg = {}) {
  return externalize(decycle(g), cfg);
}

// Unique route to a forest node.
struct NavPath {
  std::vector<DisplayId> nodes;          // every forest node traversed
  std::vector<ControlIdentifier> steps;  // controls to activate, target last
  std::vector<DisplayId> refs;           // the resolved entry chain
};

// Throws compiler.UnknownId, compiler.AmbiguousEntry, compiler.RefMismatch.
// `refs` may be a suffix of the entry chain when the missing prefix is unique.
NavPath resolve_access(const NavForest& forest, DisplayId target,
                       std::span<const DisplayId> refs = {});

// All complete reference chains (main tree first) that enter tree `tree`.
// Stops after `limit` chains.
std::vector<std::vector<DisplayId>> entry_chains(const NavForest& forest,
                                                 int tree,
                                                 std::size_t limit = 1'000'000);

struct VerificationReport {
  bool ok = true;
  std::size_t dag_paths = 0;
  std::size_t access_specs = 0;
  std::vector<std::string> problems;

  std::string to_text() const;
  nlohmann::json to_json() const;
};

// Checks the bijection between DAG root-to-leaf paths and forest access
// specs (functional leaf + full entry chain).
VerificationReport verify_forest(const NavGraph& dag, const NavForest& forest,
                                 std::size_t path_limit = 2'000'000);

}  // namespace goi
