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

#include "goi/compiler.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "goi/error.hpp"

namespace goi {
namespace {

const char* kModule = "compiler";

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

// Back-edge indices into g.edges.
std::vector<std::size_t> back_edge_indices(const NavGraph& g) {
  std::map<ControlIdentifier, std::size_t> lookup;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    lookup.emplace(g.nodes[i].identifier, i);
  }
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(g.nodes.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto s = lookup.find(g.edges[e].src);
    auto d = lookup.find(g.edges[e].dst);
    if (s == lookup.end() || d == lookup.end()) continue;
    out[s->second].push_back({d->second, e});
  }

  enum Color : char { kWhite, kGray, kBlack };
  std::vector<Color> color(g.nodes.size(), kWhite);
  std::vector<std::size_t> removed;

  auto run = [&](std::size_t start) {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    color[start] = kGray;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == out[v].size()) {
        color[v] = kBlack;
        stack.pop_back();
        continue;
      }
      const auto [w, e] = out[v][next++];
      if (color[w] == kGray) {
        removed.push_back(e);
      } else if (color[w] == kWhite) {
        color[w] = kGray;
        stack.push_back({w, 0});
      }
    }
  };

  if (auto it = lookup.find(g.source); it != lookup.end()) run(it->second);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    if (color[v] == kWhite) run(v);
  }
  std::sort(removed.begin(), removed.end());
  return removed;
}

struct DagView {
  const NavGraph& dag;
  GraphIndex idx;
  std::size_t source = 0;
  std::vector<bool> reachable;
  std::vector<std::size_t> indegree;  // counted over reachable predecessors

  explicit DagView(const NavGraph& g) : dag(g), idx(g) {
    if (!idx.source) {
      throw Error(kModule, "MissingSource",
                  "source " + g.source.to_string() + " is not a node");
    }
    source = *idx.source;
    reachable.assign(idx.size(), false);
    std::vector<std::size_t> stack{source};
    reachable[source] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : idx.out[v]) {
        if (!reachable[w]) {
          reachable[w] = true;
          stack.push_back(w);
        }
      }
    }
    indegree.assign(idx.size(), 0);
    for (std::size_t v = 0; v < idx.size(); ++v) {
      if (!reachable[v]) continue;
      for (std::size_t w : idx.out[v]) ++indegree[w];
    }
  }

  // Sinks first; among ready nodes the lowest discovery index goes first.
  std::vector<std::size_t> reverse_topological_order() const {
    std::vector<std::size_t> pending(idx.size(), 0);
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    std::size_t total = 0;
    for (std::size_t v = 0; v < idx.size(); ++v) {
      if (!reachable[v]) continue;
      ++total;
      pending[v] = idx.out[v].size();
      if (pending[v] == 0) ready.push(v);
    }
    std::vector<std::size_t> order;
    order.reserve(total);
    while (!ready.empty()) {
      const std::size_t v = ready.top();
      ready.pop();
      order.push_back(v);
      for (std::size_t p : idx.in[v]) {
        if (reachable[p] && --pending[p] == 0) ready.push(p);
      }
    }
    if (order.size() != total) {
      throw Error(kModule, "NotAcyclic",
                  "graph has a cycle reachable from the source; decycle first");
    }
    return order;
  }
};

}  // namespace

std::vector<NavEdge> back_edges(const NavGraph& g) {
  std::vector<NavEdge> out;
  for (std::size_t e : back_edge_indices(g)) out.push_back(g.edges[e]);
  return out;
}

NavGraph decycle(const NavGraph& g) {
  const auto removed = back_edge_indices(g);
  NavGraph dag;
  dag.source = g.source;
  dag.nodes = g.nodes;
  dag.edges.reserve(g.edges.size() - removed.size());
  std::size_t r = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (r < removed.size() && removed[r] == e) {
      ++r;
      continue;
    }
    dag.edges.push_back(g.edges[e]);
  }
  return dag;
}

NavForest externalize(const NavGraph& dag, const CompilerConfig& cfg) {
  const DagView view(dag);
  const auto order = view.reverse_topological_order();
  const std::size_t n = view.idx.size();

  // Resolved subtree size; an externalized child contributes one reference.
  std::vector<std::uint64_t> size(n, 0);
  std::vector<bool> shared(n, false);
  std::vector<std::size_t> creation;  // externalized nodes, creation order
  for (std::size_t v : order) {
    std::uint64_t t = 1;
    for (std::size_t c : view.idx.out[v]) t = sat_add(t, shared[c] ? 1 : size[c]);
    size[v] = t;
    const std::uint64_t d = view.indegree[v];
    if (d >= 2 && sat_mul(d - 1, t) > cfg.externalization_threshold) {
      shared[v] = true;
      creation.push_back(v);
    }
  }

  std::uint64_t predicted = size[view.source];
  for (std::size_t v : creation) predicted = sat_add(predicted, size[v]);
  if (predicted > cfg.max_forest_nodes) {
    throw Error(kModule, "ForestTooLarge",
                "forest would have " + std::to_string(predicted) +
                    " nodes, limit is " + std::to_string(cfg.max_forest_nodes));
  }

  NavForest forest;
  forest.nodes.reserve(predicted);
  std::vector<bool> seen(n, false);
  std::vector<std::pair<DisplayId, std::size_t>> pending_refs;
  std::map<std::size_t, DisplayId> subtree_root_of;

  auto build = [&](std::size_t root) {
    struct Item {
      std::size_t origin;
      DisplayId parent;
      bool reference;
    };
    std::vector<Item> stack{{root, -1, false}};
    DisplayId root_id = -1;
    while (!stack.empty()) {
      const Item item = stack.back();
      stack.pop_back();
      ForestNode node;
      node.id = static_cast<DisplayId>(forest.nodes.size());
      node.origin = dag.nodes[item.origin].identifier;
      if (item.reference) {
        node.kind = NodeKind::Reference;
        pending_refs.push_back({node.id, item.origin});
      } else {
        node.kind = seen[item.origin] ? NodeKind::Clone : NodeKind::Original;
        seen[item.origin] = true;
      }
      if (item.parent >= 0) {
        forest.nodes[item.parent].children.push_back(node.id);
      } else {
        root_id = node.id;
      }
      if (!item.reference) {
        const auto& kids = view.idx.out[item.origin];
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
          stack.push_back({*it, node.id, shared[*it]});
        }
      }
      forest.nodes.push_back(std::move(node));
    }
    forest.tree_roots.push_back(root_id);
    return root_id;
  };

  build(view.source);
  for (std::size_t v : creation) subtree_root_of[v] = build(v);
  for (const auto& [ref, origin] : pending_refs) {
    forest.entry_map[ref] = subtree_root_of.at(origin);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (view.reachable[v]) forest.controls.emplace(dag.nodes[v].identifier, dag.nodes[v]);
  }
  forest.relink();
  return forest;
}

namespace {

// Number of complete entry chains into `tree`, saturating at `cap`.
class ChainCounter {
 public:
  ChainCounter(const NavForest& f, std::size_t cap) : f_(f), cap_(cap) {
    for (const auto& [ref, root] : f.entry_map) refs_into_[f.nodes[root].tree].push_back(ref);
  }

  std::size_t count(int tree) {
    if (tree == 0) return 1;
    if (auto it = memo_.find(tree); it != memo_.end()) return it->second;
    std::size_t total = 0;
    for (DisplayId r : refs_into(tree)) {
      total = std::min(cap_, total + count(f_.nodes[r].tree));
    }
    memo_[tree] = total;
    return total;
  }

  const std::vector<DisplayId>& refs_into(int tree) { return refs_into_[tree]; }

 private:
  const NavForest& f_;
  std::size_t cap_;
  std::map<int, std::vector<DisplayId>> refs_into_;
  std::map<int, std::size_t> memo_;
};

void collect_chains(const NavForest& f, ChainCounter& counter, int tree,
                    std::vector<DisplayId>& suffix,
                    std::vector<std::vector<DisplayId>>& out, std::size_t limit) {
  if (out.size() >= limit) return;
  if (tree == 0) {
    out.emplace_back(suffix.rbegin(), suffix.rend());
    return;
  }
  for (DisplayId r : counter.refs_into(tree)) {
    suffix.push_back(r);
    collect_chains(f, counter, f.nodes[r].tree, suffix, out, limit);
    suffix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<DisplayId>> entry_chains(const NavForest& forest, int tree,
                                                 std::size_t limit) {
  ChainCounter counter(forest, limit);
  std::vector<std::vector<DisplayId>> out;
  std::vector<DisplayId> suffix;
  collect_chains(forest, counter, tree, suffix, out, limit);
  return out;
}

NavPath resolve_access(const NavForest& forest, DisplayId target,
                       std::span<const DisplayId> refs) {
  auto id_str = [](DisplayId id) { return std::to_string(id); };
  if (!forest.contains(target)) {
    throw Error(kModule, "UnknownId", "target id " + id_str(target) + " does not exist");
  }
  for (DisplayId r : refs) {
    if (!forest.contains(r)) {
      throw Error(kModule, "UnknownId", "reference id " + id_str(r) + " does not exist");
    }
    if (forest.nodes[r].kind != NodeKind::Reference) {
      throw Error(kModule, "RefMismatch", "id " + id_str(r) + " is not a reference node");
    }
  }
  const int target_tree = forest.nodes[target].tree;
  std::vector<DisplayId> chain(refs.begin(), refs.end());

  if (target_tree == 0) {
    if (!chain.empty()) {
      throw Error(kModule, "RefMismatch",
                  "target " + id_str(target) + " is in the main tree and takes no references");
    }
  } else {
    // Given refs must link up and end in the target's subtree.
    int expect_tree = target_tree;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const DisplayId entered = forest.entry_map.at(*it);
      if (forest.nodes[entered].tree != expect_tree) {
        throw Error(kModule, "RefMismatch",
                    "reference " + id_str(*it) + " does not lead toward target " +
                        id_str(target));
      }
      expect_tree = forest.nodes[*it].tree;
    }
    if (expect_tree != 0) {
      ChainCounter counter(forest, 2);
      const std::size_t n = counter.count(expect_tree);
      if (n != 1) {
        std::ostringstream msg;
        msg << "target " << target << " lies in shared subtree "
            << forest.tree_roots[target_tree] << "; " << (n < 2 ? "0" : "several")
            << " entry chains fit, specify entry_ref_id (candidates:";
        for (DisplayId r : counter.refs_into(expect_tree)) msg << ' ' << r;
        msg << ")";
        throw Error(kModule, "AmbiguousEntry", msg.str());
      }
      auto prefix = entry_chains(forest, expect_tree, 1).front();
      chain.insert(chain.begin(), prefix.begin(), prefix.end());
    }
  }

  NavPath path;
  path.refs = chain;
  for (DisplayId r : chain) {
    const auto seg = forest.path_in_tree(r);
    path.nodes.insert(path.nodes.end(), seg.begin(), seg.end());
  }
  const auto last = forest.path_in_tree(target);
  path.nodes.insert(path.nodes.end(), last.begin(), last.end());

  for (DisplayId id : path.nodes) {
    const ForestNode& node = forest.nodes[id];
    const bool tree_root = node.parent < 0;
    // The main root is virtual; a subtree root is the control its
    // reference already stands for.
    if (tree_root) continue;
    path.steps.push_back(node.origin);
  }
  return path;
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << "verification: " << (ok ? "OK" : "FAILED") << "\n"
      << "  dag root-to-leaf paths: " << dag_paths << "\n"
      << "  forest access specs:    " << access_specs << "\n";
  for (const auto& p : problems) out << "  problem: " << p << "\n";
  return out.str();
}

nlohmann::json VerificationReport::to_json() const {
  return {{"ok", ok},
          {"dag_paths", dag_paths},
          {"access_specs", access_specs},
          {"problems", problems}};
}

VerificationReport verify_forest(const NavGraph& dag, const NavForest& forest,
                                 std::size_t path_limit) {
  VerificationReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    if (report.problems.size() < 20) report.problems.push_back(std::move(msg));
  };

  for (auto& p : forest.check_invariants()) fail("forest: " + p);
  const GraphIndex idx(dag);
  if (!idx.source) {
    fail("dag has no source");
    return report;
  }
  for (const auto& n : forest.nodes) {
    if (!idx.lookup.count(n.origin)) {
      fail("node " + std::to_string(n.id) + " origin " + n.origin.to_string() +
           " is not in the dag");
    }
  }
  if (!report.ok) return report;

  // DAG side: every root-to-leaf path.
  std::set<std::vector<std::size_t>> dag_paths;
  {
    std::vector<std::size_t> path{*idx.source};
    std::vector<std::size_t> next{0};
    while (!path.empty() && dag_paths.size() < path_limit) {
      const std::size_t v = path.back();
      if (idx.out[v].empty()) {
        dag_paths.insert(path);
        path.pop_back();
        next.pop_back();
        continue;
      }
      if (next.back() == idx.out[v].size()) {
        path.pop_back();
        next.pop_back();
        continue;
      }
      const std::size_t w = idx.out[v][next.back()++];
      if (std::find(path.begin(), path.end(), w) != path.end()) {
        fail("dag has a cycle through " + dag.nodes[w].identifier.to_string());
        return report;
      }
      path.push_back(w);
      next.push_back(0);
    }
  }
  report.dag_paths = dag_paths.size();

  // Forest side: functional leaves with every complete entry chain.
  std::set<std::vector<std::size_t>> mapped;
  for (const auto& node : forest.nodes) {
    if (node.kind == NodeKind::Reference || !node.children.empty()) continue;
    std::vector<std::vector<DisplayId>> chains;
    if (node.tree == 0) {
      chains.emplace_back();
    } else {
      chains = entry_chains(forest, node.tree, path_limit);
    }
    for (const auto& chain : chains) {
      ++report.access_specs;
      NavPath p;
      try {
        p = resolve_access(forest, node.id, chain);
      } catch (const Error& e) {
        fail("access spec for " + std::to_string(node.id) + " failed: " + e.what());
        continue;
      }
      std::vector<std::size_t> seq{*idx.source};
      for (const auto& step : p.steps) seq.push_back(idx.lookup.at(step));
      bool edges_ok = true;
      for (std::size_t i = 1; i < seq.size(); ++i) {
        const auto& o = idx.out[seq[i - 1]];
        if (std::find(o.begin(), o.end(), seq[i]) == o.end()) edges_ok = false;
      }
      if (!edges_ok) {
        fail("access spec for " + std::to_string(node.id) + " does not follow dag edges");
        continue;
      }
      if (!mapped.insert(seq).second) {
        fail("two access specs map to the same dag path (target " +
             std::to_string(node.id) + ")");
      }
    }
  }
  if (mapped != dag_paths) {
    std::size_t missing = 0;
    for (const auto& p : dag_paths) missing += mapped.count(p) ? 0 : 1;
    fail(std::to_string(missing) + " dag paths have no access spec; " +
         std::to_string(mapped.size()) + " mapped vs " +
         std::to_string(dag_paths.size()) + " dag paths");
  }
  return report;
}

}  // namespace goi
