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

#include "goi/forest.hpp"

#include <algorithm>
#include <set>

#include "goi/error.hpp"

namespace goi {
namespace {

const char* kModule = "nav";

NodeKind parse_kind(const std::string& s) {
  if (s == "Original") return NodeKind::Original;
  if (s == "Clone") return NodeKind::Clone;
  if (s == "Reference") return NodeKind::Reference;
  throw Error(kModule, "MalformedForest", "unknown node kind '" + s + "'");
}

}  // namespace

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Original: return "Original";
    case NodeKind::Clone: return "Clone";
    case NodeKind::Reference: return "Reference";
  }
  return "Unknown";
}

const ForestNode& NavForest::node(DisplayId id) const {
  if (!contains(id)) {
    throw Error("compiler", "UnknownId",
                "display id " + std::to_string(id) + " does not exist");
  }
  return nodes[id];
}

const ControlNode& NavForest::control(DisplayId id) const {
  auto it = controls.find(node(id).origin);
  if (it == controls.end()) {
    throw Error(kModule, "MalformedForest",
                "no control attributes for " + node(id).origin.to_string());
  }
  return it->second;
}

bool NavForest::is_functional(DisplayId id) const {
  const ForestNode& n = node(id);
  if (n.kind == NodeKind::Reference) {
    auto it = entry_map.find(id);
    return it != entry_map.end() && nodes[it->second].children.empty();
  }
  return n.children.empty();
}

std::vector<DisplayId> NavForest::path_in_tree(DisplayId id) const {
  std::vector<DisplayId> path;
  for (DisplayId cur = node(id).id; cur >= 0; cur = nodes[cur].parent) {
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void NavForest::relink() {
  for (auto& n : nodes) {
    n.parent = -1;
    n.tree = -1;
    n.depth = 0;
  }
  for (std::size_t t = 0; t < tree_roots.size(); ++t) {
    std::vector<DisplayId> stack{tree_roots[t]};
    nodes[tree_roots[t]].tree = static_cast<int>(t);
    while (!stack.empty()) {
      const DisplayId v = stack.back();
      stack.pop_back();
      for (DisplayId c : nodes[v].children) {
        nodes[c].parent = v;
        nodes[c].tree = static_cast<int>(t);
        nodes[c].depth = nodes[v].depth + 1;
        stack.push_back(c);
      }
    }
  }
}

std::vector<std::string> NavForest::check_invariants() const {
  std::vector<std::string> problems;
  auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };
  if (tree_roots.empty()) {
    fail("forest has no main tree");
    return problems;
  }
  std::vector<int> parents(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != static_cast<DisplayId>(i)) {
      fail("node at index " + std::to_string(i) + " has id " +
           std::to_string(nodes[i].id));
    }
    for (DisplayId c : nodes[i].children) {
      if (!contains(c)) {
        fail("child id " + std::to_string(c) + " out of range");
        continue;
      }
      ++parents[c];
    }
  }
  std::set<DisplayId> roots(tree_roots.begin(), tree_roots.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int want = roots.count(static_cast<DisplayId>(i)) ? 0 : 1;
    if (parents[i] != want) {
      fail("node " + std::to_string(i) + " has " + std::to_string(parents[i]) +
           " parents");
    }
    if (nodes[i].tree < 0) fail("node " + std::to_string(i) + " is detached");
  }

  // Display ids follow one pre-order pass over the trees in order.
  DisplayId expected = 0;
  for (DisplayId root : tree_roots) {
    std::vector<DisplayId> stack{root};
    while (!stack.empty()) {
      const DisplayId v = stack.back();
      stack.pop_back();
      if (v != expected) {
        fail("pre-order expected id " + std::to_string(expected) + " got " +
             std::to_string(v));
        return problems;
      }
      ++expected;
      const auto& ch = nodes[v].children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
  }

  for (const auto& n : nodes) {
    if (n.kind == NodeKind::Reference) {
      if (!n.children.empty()) fail("reference " + std::to_string(n.id) + " has children");
      if (!entry_map.count(n.id)) fail("reference " + std::to_string(n.id) + " not in entry map");
    }
    if (!controls.count(n.origin)) {
      fail("node " + std::to_string(n.id) + " origin has no control record");
    }
  }
  std::set<DisplayId> shared(tree_roots.begin() + 1, tree_roots.end());
  for (const auto& [ref, root] : entry_map) {
    if (!contains(ref) || nodes[ref].kind != NodeKind::Reference) {
      fail("entry key " + std::to_string(ref) + " is not a reference node");
    }
    if (!shared.count(root)) {
      fail("entry value " + std::to_string(root) + " is not a subtree root");
    }
  }
  std::map<ControlIdentifier, int> non_ref_count;
  for (const auto& n : nodes) {
    if (n.kind != NodeKind::Reference) ++non_ref_count[n.origin];
  }
  for (const auto& n : nodes) {
    if (n.kind == NodeKind::Clone && non_ref_count[n.origin] < 2) {
      fail("clone " + std::to_string(n.id) + " has no sibling copy");
    }
  }
  return problems;
}

nlohmann::json to_json(const NavForest& f) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "nav_forest";
  auto nodes = nlohmann::json::array();
  for (const auto& n : f.nodes) {
    nlohmann::json jn;
    jn["id"] = n.id;
    jn["origin"] = n.origin.to_string();
    jn["kind"] = std::string(to_string(n.kind));
    jn["children"] = n.children;
    nodes.push_back(std::move(jn));
  }
  j["nodes"] = std::move(nodes);
  j["trees"] = f.tree_roots;
  auto entries = nlohmann::json::array();
  for (const auto& [ref, root] : f.entry_map) {
    entries.push_back({{"ref", ref}, {"subtree", root}});
  }
  j["entry_map"] = std::move(entries);
  auto controls = nlohmann::json::array();
  for (const auto& [id, c] : f.controls) controls.push_back(to_json(c));
  j["controls"] = std::move(controls);
  return j;
}

NavForest nav_forest_from_json(const nlohmann::json& j) {
  if (j.value("schema", 0) != kSchemaVersion) {
    throw Error(kModule, "SchemaMismatch",
                "nav forest schema must be " + std::to_string(kSchemaVersion));
  }
  NavForest f;
  try {
    for (const auto& jn : j.at("nodes")) {
      ForestNode n;
      n.id = jn.at("id").get<DisplayId>();
      n.origin = ControlIdentifier::parse(jn.at("origin").get<std::string>());
      n.kind = parse_kind(jn.at("kind").get<std::string>());
      n.children = jn.at("children").get<std::vector<DisplayId>>();
      f.nodes.push_back(std::move(n));
    }
    f.tree_roots = j.at("trees").get<std::vector<DisplayId>>();
    for (const auto& e : j.at("entry_map")) {
      f.entry_map[e.at("ref").get<DisplayId>()] = e.at("subtree").get<DisplayId>();
    }
    for (const auto& jc : j.at("controls")) {
      ControlNode c = control_node_from_json(jc);
      f.controls.emplace(c.identifier, std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(kModule, "MalformedForest", e.what());
  }
  std::vector<int> parents(f.nodes.size(), 0);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    if (f.nodes[i].id != static_cast<DisplayId>(i)) {
      throw Error(kModule, "MalformedForest", "node ids must be consecutive");
    }
    for (DisplayId c : f.nodes[i].children) {
      if (!f.contains(c) || ++parents[c] > 1) {
        throw Error(kModule, "MalformedForest",
                    "child id " + std::to_string(c) + " out of range or shared");
      }
    }
  }
  if (f.tree_roots.empty()) {
    throw Error(kModule, "MalformedForest", "forest has no trees");
  }
  for (DisplayId r : f.tree_roots) {
    if (!f.contains(r) || parents[r] != 0) {
      throw Error(kModule, "MalformedForest", "bad tree root " + std::to_string(r));
    }
  }
  f.relink();
  auto problems = f.check_invariants();
  if (!problems.empty()) throw Error(kModule, "MalformedForest", problems.front());
  return f;
}

}  // namespace goi
