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

#include "goi/nav_model.hpp"

#include <algorithm>
#include <deque>
#include <utility>

#include "goi/error.hpp"

namespace goi {
namespace {

constexpr std::string_view kModule = "nav";

constexpr std::pair<Pattern, std::string_view> kPatternNames[] = {
    {Pattern::Scroll, "Scroll"},
    {Pattern::Text, "Text"},
    {Pattern::Value, "Value"},
    {Pattern::Select, "Select"},
    {Pattern::Toggle, "Toggle"},
    {Pattern::ExpandCollapse, "ExpandCollapse"},
    {Pattern::Invoke, "Invoke"},
};

void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    if (c == '\\' || c == '|' || c == '/') out.push_back('\\');
    out.push_back(c);
  }
}

// Splits on unescaped `sep`, removing escapes.
std::vector<std::string> split_unescape(std::string_view s, char sep) {
  std::vector<std::string> parts(1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\\') {
      if (i + 1 >= s.size()) {
        throw Error(std::string(kModule), "MalformedIdentifier",
                    "dangling escape in identifier");
      }
      parts.back().push_back(s[++i]);
    } else if (c == sep) {
      parts.emplace_back();
    } else {
      parts.back().push_back(c);
    }
  }
  return parts;
}

// Split on the top-level `|` but keep escapes so the ancestor part can be
// split again on `/`.
std::vector<std::string> split_raw(std::string_view s, char sep) {
  std::vector<std::string> parts(1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\\' && i + 1 < s.size()) {
      parts.back().push_back(c);
      parts.back().push_back(s[++i]);
    } else if (c == sep) {
      parts.emplace_back();
    } else {
      parts.back().push_back(c);
    }
  }
  return parts;
}

std::string unescape_one(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) ++i;
    out.push_back(s[i]);
  }
  return out;
}

}  // namespace

std::string_view to_string(Pattern p) {
  for (const auto& [pat, name] : kPatternNames) {
    if (pat == p) return name;
  }
  return "Unknown";
}

std::optional<Pattern> parse_pattern(std::string_view s) {
  for (const auto& [pat, name] : kPatternNames) {
    if (name == s) return pat;
  }
  return std::nullopt;
}

const std::set<std::string>& known_control_types() {
  static const std::set<std::string> types = {
      "Button",   "CheckBox",  "ComboBox",    "DataItem", "Document",
      "Edit",     "Group",     "Hyperlink",   "List",     "ListItem",
      "Menu",     "MenuItem",  "Pane",        "RadioButton", "ScrollBar",
      "SplitButton", "Tab",    "TabItem",     "Text",     "ToolBar",
      "Window",   std::string(kRootType),
  };
  return types;
}

std::string ControlIdentifier::to_string() const {
  std::string out;
  append_escaped(out, primary_id);
  out.push_back('|');
  append_escaped(out, control_type);
  out.push_back('|');
  for (std::size_t i = 0; i < ancestor_path.size(); ++i) {
    if (i) out.push_back('/');
    append_escaped(out, ancestor_path[i]);
  }
  return out;
}

ControlIdentifier ControlIdentifier::parse(std::string_view canonical) {
  const auto fields = split_raw(canonical, '|');
  if (fields.size() != 3) {
    throw Error(std::string(kModule), "MalformedIdentifier",
                "expected 3 '|'-separated fields in '" +
                    std::string(canonical) + "'");
  }
  ControlIdentifier id;
  id.primary_id = unescape_one(fields[0]);
  id.control_type = unescape_one(fields[1]);
  if (!fields[2].empty()) id.ancestor_path = split_unescape(fields[2], '/');
  return id;
}

ControlIdentifier synthesize_identifier(const RawControlRecord& raw) {
  if (!raw.control_type || raw.control_type->empty()) {
    throw Error(std::string(kModule), "InvalidRecord",
                "control record has no control_type");
  }
  ControlIdentifier id;
  if (raw.stable_id && !raw.stable_id->empty()) {
    id.primary_id = *raw.stable_id;
  } else if (raw.name && !raw.name->empty()) {
    id.primary_id = *raw.name;
  } else {
    id.primary_id = std::string(kUnnamed);
  }
  id.control_type = *raw.control_type;
  id.ancestor_path.reserve(raw.ancestors.size());
  for (const auto& a : raw.ancestors) {
    id.ancestor_path.push_back(a.empty() ? std::string(kUnnamed) : a);
  }
  return id;
}

const ControlNode* NavGraph::find(const ControlIdentifier& id) const {
  for (const auto& n : nodes) {
    if (n.identifier == id) return &n;
  }
  return nullptr;
}

ControlIdentifier virtual_root_identifier() {
  return ControlIdentifier{"[Root]", std::string(kRootType), {}};
}

ControlNode make_virtual_root(std::string name) {
  ControlNode root;
  root.identifier = virtual_root_identifier();
  root.name = std::move(name);
  root.control_type = std::string(kRootType);
  return root;
}

GraphIndex::GraphIndex(const NavGraph& g) {
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!lookup.emplace(g.nodes[i].identifier, i).second) {
      duplicate_nodes.push_back(i);
    }
  }
  out.resize(g.nodes.size());
  in.resize(g.nodes.size());
  if (auto it = lookup.find(g.source); it != lookup.end()) source = it->second;

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto s = lookup.find(g.edges[e].src);
    auto d = lookup.find(g.edges[e].dst);
    if (s == lookup.end() || d == lookup.end()) {
      dangling_edges.push_back(e);
      continue;
    }
    if (!seen.emplace(s->second, d->second).second) {
      parallel_edges.push_back(e);
      continue;
    }
    out[s->second].push_back(d->second);
    in[d->second].push_back(s->second);
  }
}

bool ValidationReport::ok() const { return count(Severity::Error) == 0; }

std::size_t ValidationReport::count(Severity s) const {
  return std::count_if(issues.begin(), issues.end(),
                       [&](const ValidationIssue& i) { return i.severity == s; });
}

std::size_t ValidationReport::count(std::string_view kind) const {
  return std::count_if(issues.begin(), issues.end(),
                       [&](const ValidationIssue& i) { return i.kind == kind; });
}

ValidationReport validate_graph(const NavGraph& g) {
  ValidationReport report;
  const GraphIndex idx(g);
  auto add = [&](Severity s, std::string kind, std::string msg) {
    report.issues.push_back({s, std::move(kind), std::move(msg)});
  };

  for (std::size_t e : idx.dangling_edges) {
    add(Severity::Error, "DanglingEdge",
        "edge " + g.edges[e].src.to_string() + " -> " +
            g.edges[e].dst.to_string() + " references a missing node");
  }
  for (std::size_t e : idx.parallel_edges) {
    add(Severity::Warning, "ParallelEdge",
        "duplicate edge " + g.edges[e].src.to_string() + " -> " +
            g.edges[e].dst.to_string());
  }
  for (std::size_t n : idx.duplicate_nodes) {
    add(Severity::Warning, "DuplicateIdentifier",
        "identifier " + g.nodes[n].identifier.to_string() +
            " repeats; first occurrence wins");
  }
  for (const auto& n : g.nodes) {
    if (!known_control_types().count(n.control_type)) {
      add(Severity::Warning, "UnknownControlType",
          "control type '" + n.control_type + "' is not in the known set");
    }
  }
  if (!idx.source) {
    add(Severity::Error, "MissingSource",
        "source " + g.source.to_string() + " is not a node");
    return report;
  }
  if (!idx.in[*idx.source].empty()) {
    add(Severity::Error, "SourceHasIncoming",
        "virtual root has incoming edges");
  }

  std::vector<bool> reached(idx.size(), false);
  std::deque<std::size_t> queue{*idx.source};
  reached[*idx.source] = true;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : idx.out[v]) {
      if (!reached[w]) {
        reached[w] = true;
        queue.push_back(w);
      }
    }
  }
  std::set<std::size_t> dup(idx.duplicate_nodes.begin(),
                            idx.duplicate_nodes.end());
  for (std::size_t v = 0; v < idx.size(); ++v) {
    if (reached[v] || dup.count(v)) continue;
    report.unreachable.push_back(g.nodes[v].identifier);
    if (idx.in[v].empty()) {
      add(Severity::Error, "MultipleSources",
          g.nodes[v].identifier.to_string() +
              " has no incoming edge but is not the source");
    } else {
      add(Severity::Warning, "Unreachable",
          g.nodes[v].identifier.to_string() + " is unreachable from source");
    }
  }
  return report;
}

nlohmann::json to_json(const ControlNode& n) {
  nlohmann::json j;
  j["id"] = n.identifier.to_string();
  j["name"] = n.name;
  j["type"] = n.control_type;
  if (n.description) j["description"] = *n.description;
  auto pats = nlohmann::json::array();
  for (Pattern p : n.patterns) pats.push_back(std::string(to_string(p)));
  j["patterns"] = pats;
  j["enabled"] = n.enabled;
  j["context_tags"] = n.context_tags;
  return j;
}

ControlNode control_node_from_json(const nlohmann::json& j) {
  ControlNode n;
  n.identifier = ControlIdentifier::parse(j.at("id").get<std::string>());
  n.name = j.value("name", std::string());
  n.control_type = j.value("type", n.identifier.control_type);
  if (j.contains("description")) {
    n.description = j.at("description").get<std::string>();
  }
  for (const auto& p : j.value("patterns", nlohmann::json::array())) {
    auto pat = parse_pattern(p.get<std::string>());
    if (!pat) {
      throw Error(std::string(kModule), "UnknownPattern",
                  "unknown pattern '" + p.get<std::string>() + "'");
    }
    n.patterns.insert(*pat);
  }
  n.enabled = j.value("enabled", true);
  if (j.contains("context_tags")) {
    n.context_tags = j.at("context_tags").get<std::set<std::string>>();
  }
  return n;
}

nlohmann::json to_json(const NavGraph& g) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "nav_graph";
  j["source"] = g.source.to_string();
  auto nodes = nlohmann::json::array();
  for (const auto& n : g.nodes) nodes.push_back(to_json(n));
  j["nodes"] = std::move(nodes);
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"src", e.src.to_string()},
                     {"dst", e.dst.to_string()},
                     {"action", "Click"}});
  }
  j["edges"] = std::move(edges);
  return j;
}

NavGraph nav_graph_from_json(const nlohmann::json& j) {
  if (j.value("schema", 0) != kSchemaVersion) {
    throw Error(std::string(kModule), "SchemaMismatch",
                "nav graph schema must be " + std::to_string(kSchemaVersion));
  }
  NavGraph g;
  g.source = ControlIdentifier::parse(j.at("source").get<std::string>());
  for (const auto& n : j.at("nodes")) g.nodes.push_back(control_node_from_json(n));
  for (const auto& e : j.at("edges")) {
    if (e.value("action", std::string("Click")) != "Click") {
      throw Error(std::string(kModule), "UnknownAction",
                  "only Click edges are supported");
    }
    g.edges.push_back({ControlIdentifier::parse(e.at("src").get<std::string>()),
                       ControlIdentifier::parse(e.at("dst").get<std::string>()),
                       ClickKind::Click});
  }
  return g;
}

std::string canonical_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace goi
