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

#include "goi/ripper.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <map>
#include <set>

#include "goi/error.hpp"

namespace goi {
namespace {

using nlohmann::json;

const char* kModule = "ripper";

[[noreturn]] void invalid(const std::string& msg) { throw Error(kModule, "InvalidConfig", msg); }

bool is_window(const AccNode& n) { return n.control_type == kWindowType; }

bool glob(const std::string& pattern, const std::string& text) {
  return ::fnmatch(pattern.c_str(), text.c_str(), 0) == 0;
}

// Revealed controls with the handle they were found under.
struct RawDiff {
  std::vector<const AccNode*> revealed;
  std::vector<std::string> new_windows;
  std::vector<ControlIdentifier> removed;
};

RawDiff raw_diff(const AccTreeSnapshot& before, const AccTreeSnapshot& after) {
  RawDiff d;
  std::set<ControlIdentifier> had, has;
  for (const auto& n : before.nodes) {
    if (!is_window(n)) had.insert(n.identifier);
  }
  for (const auto& n : after.nodes) {
    if (is_window(n)) continue;
    has.insert(n.identifier);
    if (!had.count(n.identifier)) d.revealed.push_back(&n);
  }
  for (const auto& n : before.nodes) {
    if (!is_window(n) && !has.count(n.identifier)) d.removed.push_back(n.identifier);
  }
  std::set<std::string> old_windows;
  for (const auto& w : before.windows) old_windows.insert(w.handle);
  for (const auto& w : after.windows) {
    if (!old_windows.count(w.handle)) d.new_windows.push_back(w.handle);
  }
  return d;
}

class Ripper {
 public:
  Ripper(UiBackend& backend, const RipperConfig& cfg, std::optional<std::string> setup)
      : backend_(backend), cfg_(cfg), setup_(std::move(setup)) {}

  RipResult run() {
    restore({});
    const AccTreeSnapshot initial = backend_.snapshot();
    std::vector<const AccNode*> controls;
    for (const auto& n : initial.nodes) {
      if (!is_window(n)) controls.push_back(&n);
    }
    if (controls.empty()) {
      throw Error(kModule, "BackendUnavailable",
                  "backend '" + backend_.app_name() + "' exposes no controls");
    }
    ControlNode root = make_virtual_root(backend_.app_name());
    result_.graph.source = root.identifier;
    add_node(root);

    // Content of the active tab disappears when another tab is selected.
    std::set<std::string> scoped;
    const AccNode* active_tab = nullptr;
    std::vector<const AccNode*> tabs;
    for (const AccNode* n : controls) {
      if (n->control_type == "TabItem") tabs.push_back(n);
    }
    if (tabs.size() > 1) {
      auto active = std::find_if(tabs.begin(), tabs.end(), [](const AccNode* t) { return t->selected; });
      auto other = std::find_if(tabs.begin(), tabs.end(), [](const AccNode* t) { return !t->selected; });
      if (active != tabs.end() && other != tabs.end() && !cfg_.blocked((*other)->to_control_node())) {
        active_tab = *active;
        if (click((*other)->handle)) {
          const AccTreeSnapshot probe = backend_.snapshot();
          for (const auto& id : raw_diff(initial, probe).removed) {
            const AccNode* n = initial.find(id);
            if (n && n->control_type != "TabItem") scoped.insert(n->handle);
          }
        }
        current_.reset();
      }
    }

    std::vector<Pending> children;
    for (const AccNode* n : controls) {
      ControlIdentifier from = root.identifier;
      if (scoped.count(n->handle)) {
        from = active_tab->identifier;
        if (scoped.count(n->parent)) from = container_id(initial, n->parent);
      } else if (!n->parent.empty() && !scoped.count(n->parent)) {
        from = container_id(initial, n->parent);
      }
      attach(from, *n, children);
    }
    explore_all(children, {});
    return std::move(result_);
  }

 private:
  struct Pending {
    const AccNode* node;
    bool fresh;
  };

  ControlIdentifier container_id(const AccTreeSnapshot& snap, const std::string& handle) {
    const AccNode* p = snap.find_handle(handle);
    return p ? p->identifier : result_.graph.source;
  }

  void add_node(ControlNode n) {
    seen_.insert(n.identifier);
    result_.graph.nodes.push_back(std::move(n));
  }

  void add_edge(const ControlIdentifier& src, const ControlIdentifier& dst) {
    if (src == dst) return;
    if (edges_.insert({src, dst}).second) result_.graph.edges.push_back({src, dst});
  }

  // Records the edge and queues the target; only fresh targets are explored.
  void attach(const ControlIdentifier& from, const AccNode& n, std::vector<Pending>& out) {
    const bool fresh = !seen_.count(n.identifier);
    if (fresh) add_node(n.to_control_node());
    add_edge(from, n.identifier);
    out.push_back({&n, fresh});
  }

  void warn(std::string code, std::string message) {
    for (const auto& w : result_.warnings) {
      if (w.code == code && w.message == message) return;
    }
    result_.warnings.push_back({std::move(code), std::move(message)});
  }

  bool budget_left() {
    if (result_.actions < cfg_.max_actions) return true;
    if (!exhausted_) {
      exhausted_ = true;
      warn("BudgetExhausted", "action budget of " + std::to_string(cfg_.max_actions) +
                                  " exhausted; graph is partial");
    }
    return false;
  }

  bool click(const std::string& handle) {
    if (!budget_left()) return false;
    ++result_.actions;
    try {
      backend_.click(handle);
    } catch (const Error& e) {
      warn("ClickFailed", "click on '" + handle + "' failed: " + e.qualified_code());
      current_.reset();
      return false;
    }
    backend_.wait(cfg_.settle_ticks);
    return true;
  }

  // Brings the backend into the state reached by clicking `path` from the start.
  bool restore(const std::vector<std::string>& path) {
    if (current_ && *current_ == path) return true;
    backend_.reset();
    if (setup_) backend_.enter_context(*setup_);
    current_ = std::vector<std::string>{};
    for (const auto& h : path) {
      if (!click(h)) {
        current_.reset();
        return false;
      }
      current_->push_back(h);
    }
    return true;
  }

  void explore_all(const std::vector<Pending>& items, const std::vector<std::string>& path) {
    // Snapshot nodes are owned by the caller's snapshot; copy what we need.
    std::vector<AccNode> todo;
    for (const auto& p : items) {
      if (p.fresh) todo.push_back(*p.node);
    }
    for (const auto& n : todo) explore(n, path);
  }

  void explore(const AccNode& n, const std::vector<std::string>& path) {
    if (!n.enabled || cfg_.blocked(n.to_control_node())) return;
    if (static_cast<int>(path.size()) >= cfg_.max_depth) {
      warn("BudgetExhausted", "depth limit " + std::to_string(cfg_.max_depth) +
                                  " reached; graph is partial");
      return;
    }
    if (!budget_left()) return;
    if (!restore(path)) {
      if (!exhausted_) warn("ReplayFailed", "could not restore state for '" + n.identifier.to_string() + "'");
      return;
    }
    const AccTreeSnapshot before = backend_.snapshot();
    const AccNode* live = before.find(n.identifier);
    if (!live) {
      warn("ReplayFailed", "'" + n.identifier.to_string() + "' not visible after replay");
      return;
    }
    if (!click(live->handle)) return;
    std::vector<std::string> next = path;
    next.push_back(live->handle);
    current_ = next;
    const AccTreeSnapshot after = backend_.snapshot();
    const RawDiff d = raw_diff(before, after);

    std::set<std::string> revealed_handles;
    for (const AccNode* r : d.revealed) revealed_handles.insert(r->handle);
    std::vector<Pending> children;
    for (const AccNode* r : d.revealed) {
      ControlIdentifier from = n.identifier;
      if (revealed_handles.count(r->parent)) {
        const AccNode* container = after.find_handle(r->parent);
        if (!cfg_.blocked(container->to_control_node())) from = container->identifier;
      }
      attach(from, *r, children);
    }
    explore_all(children, next);
  }

  UiBackend& backend_;
  const RipperConfig& cfg_;
  std::optional<std::string> setup_;
  RipResult result_;
  std::set<ControlIdentifier> seen_;
  std::set<std::pair<ControlIdentifier, ControlIdentifier>> edges_;
  std::optional<std::vector<std::string>> current_;
  bool exhausted_ = false;
};

}  // namespace

void RipperConfig::validate() const {
  if (max_depth < 1) invalid("max_depth must be at least 1");
  if (max_actions < 1) invalid("max_actions must be at least 1");
  if (settle_ticks < 0) invalid("settle_ticks must not be negative");
  std::set<std::string> names;
  for (const auto& c : contexts) {
    if (c.name.empty()) invalid("context names must not be empty");
    if (!names.insert(c.name).second) invalid("duplicate context name '" + c.name + "'");
  }
}

bool RipperConfig::blocked(const ControlNode& n) const {
  const std::string id = n.identifier.to_string();
  return std::any_of(blocklist.begin(), blocklist.end(), [&](const std::string& p) {
    return p == n.control_type || glob(p, id) || glob(p, n.name);
  });
}

RipperConfig ripper_config_from_json(const json& j) {
  if (!j.is_object()) invalid("ripper config must be an object");
  static const std::set<std::string> allowed{"schema", "kind", "blocklist", "contexts",
                                             "max_depth", "max_actions", "settle_ticks"};
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) invalid("unknown key '" + k + "'");
  }
  if (j.value("schema", kSchemaVersion) != kSchemaVersion) invalid("unsupported schema version");
  if (j.contains("kind") && j.at("kind") != "ripper_config") invalid("kind must be 'ripper_config'");
  RipperConfig cfg;
  try {
    cfg.blocklist = j.value("blocklist", std::vector<std::string>{});
    cfg.max_depth = j.value("max_depth", cfg.max_depth);
    cfg.max_actions = j.value("max_actions", cfg.max_actions);
    cfg.settle_ticks = j.value("settle_ticks", cfg.settle_ticks);
    for (const auto& c : j.value("contexts", json::array())) {
      RipContext ctx;
      ctx.name = c.at("name").get<std::string>();
      if (c.contains("setup") && !c.at("setup").is_null()) ctx.setup = c.at("setup").get<std::string>();
      cfg.contexts.push_back(ctx);
    }
  } catch (const json::exception& e) {
    invalid(std::string("malformed ripper config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json to_json(const RipperConfig& cfg) {
  json contexts = json::array();
  for (const auto& c : cfg.contexts) {
    contexts.push_back({{"name", c.name}, {"setup", c.setup ? json(*c.setup) : json(nullptr)}});
  }
  return {{"schema", kSchemaVersion}, {"kind", "ripper_config"}, {"blocklist", cfg.blocklist},
          {"contexts", contexts},    {"max_depth", cfg.max_depth}, {"max_actions", cfg.max_actions},
          {"settle_ticks", cfg.settle_ticks}};
}

CaptureDiff capture_diff(const AccTreeSnapshot& before, const AccTreeSnapshot& after) {
  RawDiff d = raw_diff(before, after);
  CaptureDiff out;
  for (const AccNode* n : d.revealed) out.revealed.push_back(n->to_control_node());
  out.new_windows = std::move(d.new_windows);
  out.removed = std::move(d.removed);
  return out;
}

bool RipResult::has_warning(std::string_view code) const {
  return std::any_of(warnings.begin(), warnings.end(),
                     [&](const RipWarning& w) { return w.code == code; });
}

RipResult rip(UiBackend& backend, const RipperConfig& cfg) {
  cfg.validate();
  return Ripper(backend, cfg, std::nullopt).run();
}

RipResult rip_with_contexts(UiBackend& backend, const RipperConfig& cfg) {
  cfg.validate();
  if (cfg.contexts.empty()) invalid("no contexts configured");
  RipResult merged;
  std::map<ControlIdentifier, std::size_t> index;
  std::set<std::pair<ControlIdentifier, ControlIdentifier>> edges;
  for (const auto& ctx : cfg.contexts) {
    RipResult part = Ripper(backend, cfg, ctx.setup).run();
    merged.actions += part.actions;
    for (auto& w : part.warnings) {
      merged.warnings.push_back({w.code, ctx.name + ": " + w.message});
    }
    if (merged.graph.nodes.empty()) merged.graph.source = part.graph.source;
    for (auto& n : part.graph.nodes) {
      const bool is_root = n.identifier == part.graph.source;
      if (!is_root) n.context_tags.insert(ctx.name);
      auto it = index.find(n.identifier);
      if (it == index.end()) {
        index[n.identifier] = merged.graph.nodes.size();
        merged.graph.nodes.push_back(std::move(n));
        continue;
      }
      ControlNode& m = merged.graph.nodes[it->second];
      const bool conflict = m.name != n.name || m.control_type != n.control_type ||
                            m.description != n.description || m.patterns != n.patterns ||
                            m.enabled != n.enabled;
      if (conflict && !is_root) {
        merged.warnings.push_back({"MetadataConflict", "'" + n.identifier.to_string() +
                                                           "' differs in context '" + ctx.name +
                                                           "'; patterns merged"});
        m.patterns.insert(n.patterns.begin(), n.patterns.end());
        if (!m.description) m.description = n.description;
        m.enabled = m.enabled || n.enabled;
      }
      m.context_tags.insert(n.context_tags.begin(), n.context_tags.end());
    }
    for (const auto& e : part.graph.edges) {
      if (edges.insert({e.src, e.dst}).second) merged.graph.edges.push_back(e);
    }
  }
  return merged;
}

}  // namespace goi
