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

#include "goi/topo_text.hpp"

#include <algorithm>
#include <charconv>
#include <regex>

#include "goi/error.hpp"
#include "goi/utf8.hpp"

namespace goi {
namespace {

const char* kModule = "topo";
constexpr std::string_view kSharedDivider = "## shared";
constexpr std::string_view kSpecial = "()[],_{}\\";

void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
    } else {
      if (kSpecial.find(c) != std::string_view::npos) out += '\\';
      out += c;
    }
  }
}

std::string truncate_code_points(const std::string& s, std::size_t limit) {
  if (code_point_count(s) <= limit) return s;
  return utf8_prefix(s, limit) + "...";
}

std::string join_path(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += '/';
    out += p;
  }
  return out;
}

class Renderer {
 public:
  Renderer(const NavForest& f, const SerializationConfig& cfg, bool core)
      : f_(f), cfg_(cfg), core_(core) {
    std::map<std::string, bool> group_has_key;
    std::map<std::string, int> group_size;
    for (const auto& [id, c] : f.controls) {
      group_size[c.name]++;
      if (cfg.key_types.count(c.control_type)) group_has_key[c.name] = true;
    }
    for (const auto& [name, n] : group_size) {
      if (n > 1 && group_has_key[name]) key_groups_.insert(name);
    }
  }

  bool excluded(DisplayId id) const {
    if (!core_) return false;
    if (cfg_.exclusion_ids.count(id)) return true;
    auto it = f_.entry_map.find(id);
    return it != f_.entry_map.end() && cfg_.exclusion_ids.count(it->second);
  }

  std::optional<std::string> description(DisplayId id) const {
    const ForestNode& n = f_.node(id);
    if (n.kind == NodeKind::Reference) return std::nullopt;
    const ControlNode& c = f_.control(id);
    const bool full = !n.children.empty() || cfg_.key_types.count(c.control_type) > 0;
    if (key_groups_.count(c.name)) {
      if (c.description && !c.description->empty()) return c.description;
      return join_path(c.identifier.ancestor_path);
    }
    if (!c.description || c.description->empty()) return std::nullopt;
    if (full) return c.description;
    return truncate_code_points(*c.description, cfg_.description_char_limit);
  }

  // Renders `id` and its visible descendants; appends rendered references.
  void render(DisplayId id, int depth, std::string& out, std::vector<DisplayId>& refs) const {
    const ForestNode& n = f_.node(id);
    const ControlNode& c = f_.control(id);
    append_escaped(out, c.name);
    out += '(';
    append_escaped(out, c.control_type);
    out += ')';
    if (auto d = description(id)) {
      out += '(';
      append_escaped(out, *d);
      out += ')';
    }
    out += '_';
    out += std::to_string(id);
    if (n.kind == NodeKind::Reference) refs.push_back(id);

    std::vector<DisplayId> kids;
    for (DisplayId k : n.children) {
      if (!excluded(k)) kids.push_back(k);
    }
    if (kids.empty()) return;
    if (core_ && (depth >= cfg_.core_depth || kids.size() > cfg_.enumeration_collapse_threshold)) {
      out += "[{more:" + std::to_string(kids.size()) + ",further_query:" + std::to_string(id) + "}]";
      return;
    }
    out += '[';
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i > 0) out += ',';
      render(kids[i], depth + 1, out, refs);
    }
    out += ']';
  }

 private:
  const NavForest& f_;
  const SerializationConfig& cfg_;
  bool core_;
  std::set<std::string> key_groups_;
};

// Renders `tops` as leading lines, then every shared subtree reachable through
// their references, then the entry lines.
std::string render_closure(const NavForest& f, const Renderer& r,
                           const std::vector<DisplayId>& tops, int top_depth,
                           bool force_divider) {
  std::vector<DisplayId> refs;
  std::vector<std::string> top_lines;
  for (DisplayId t : tops) {
    std::string line;
    r.render(t, top_depth, line, refs);
    top_lines.push_back(std::move(line));
  }
  std::map<DisplayId, std::string> subtree_lines;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const DisplayId root = f.entry_map.at(refs[i]);
    if (subtree_lines.count(root)) continue;
    std::string line;
    r.render(root, 1, line, refs);
    subtree_lines.emplace(root, std::move(line));
  }

  std::string out;
  for (const auto& l : top_lines) out += l + "\n";
  std::set<DisplayId> entries(refs.begin(), refs.end());
  if (!entries.empty() || force_divider) {
    out += std::string(kSharedDivider) + "\n";
    for (DisplayId root : f.shared_roots()) {
      auto it = subtree_lines.find(root);
      if (it != subtree_lines.end()) out += it->second + "\n";
    }
    for (DisplayId ref : entries) {
      out += "ref " + std::to_string(ref) + " -> subtree " +
             std::to_string(f.entry_map.at(ref)) + "\n";
    }
  }
  return out;
}

bool has_ancestor_in(const NavForest& f, DisplayId id, const std::set<DisplayId>& set) {
  for (DisplayId cur = f.nodes[id].parent; cur >= 0; cur = f.nodes[cur].parent) {
    if (set.count(cur)) return true;
  }
  return false;
}

class Parser {
 public:
  Parser(std::string_view line, int line_no, TopologyView& view)
      : s_(line), line_no_(line_no), view_(view) {}

  DisplayId parse_tree() {
    const DisplayId root = parse_node();
    if (pos_ != s_.size()) fail("trailing characters after tree");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(kModule, "MalformedText",
                "line " + std::to_string(line_no_) + ", column " + std::to_string(pos_ + 1) +
                    ": " + what);
  }

  bool at(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // Reads escaped text up to an unescaped terminator, which is not consumed.
  std::string text_until(char terminator) {
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != terminator) {
      char c = s_[pos_];
      if (c == '\\') {
        if (pos_ + 1 >= s_.size()) fail("dangling escape");
        char e = s_[pos_ + 1];
        if (e == 'n') {
          out += '\n';
        } else if (kSpecial.find(e) != std::string_view::npos) {
          out += e;
        } else {
          fail("invalid escape");
        }
        pos_ += 2;
        continue;
      }
      if (kSpecial.find(c) != std::string_view::npos) fail(std::string("unescaped '") + c + "'");
      out += c;
      ++pos_;
    }
    if (pos_ >= s_.size()) fail(std::string("expected '") + terminator + "'");
    return out;
  }

  std::size_t number() {
    const std::size_t start = pos_;
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
    if (ec != std::errc() || ptr == s_.data() + start) fail("expected a number");
    pos_ = ptr - s_.data();
    return value;
  }

  void literal(std::string_view lit) {
    if (s_.substr(pos_, lit.size()) != lit) fail("expected '" + std::string(lit) + "'");
    pos_ += lit.size();
  }

  DisplayId parse_node() {
    TopologyNode n;
    n.name = text_until('(');
    expect('(');
    n.type = text_until(')');
    expect(')');
    if (at('(')) {
      ++pos_;
      n.description = text_until(')');
      expect(')');
    }
    expect('_');
    n.id = static_cast<DisplayId>(number());
    if (at('[')) {
      ++pos_;
      if (at('{')) {
        literal("{more:");
        Placeholder p;
        p.hidden = number();
        literal(",further_query:");
        p.further_query = static_cast<DisplayId>(number());
        literal("}");
        n.more = p;
      } else {
        n.children.push_back(parse_node());
        while (at(',')) {
          ++pos_;
          n.children.push_back(parse_node());
        }
      }
      expect(']');
    }
    const DisplayId id = n.id;
    if (!view_.nodes.emplace(id, std::move(n)).second) {
      fail("duplicate display id " + std::to_string(id));
    }
    return id;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_no_;
  TopologyView& view_;
};

}  // namespace

std::string serialize(const NavForest& forest, const SerializationConfig& cfg) {
  Renderer r(forest, cfg, false);
  std::vector<DisplayId> refs;
  std::string out;
  for (DisplayId root : forest.tree_roots) {
    if (root == forest.main_root() && forest.tree_roots.size() > 1) {
      r.render(root, 0, out, refs);
      out += "\n" + std::string(kSharedDivider) + "\n";
      continue;
    }
    r.render(root, 0, out, refs);
    out += '\n';
  }
  for (const auto& [ref, root] : forest.entry_map) {
    out += "ref " + std::to_string(ref) + " -> subtree " + std::to_string(root) + "\n";
  }
  return out;
}

std::string extract_core(const NavForest& forest, const SerializationConfig& cfg) {
  if (cfg.core_depth < 1 || cfg.description_char_limit == 0 ||
      cfg.enumeration_collapse_threshold == 0) {
    throw Error(kModule, "InvalidConfig", "core_depth and limits must be positive");
  }
  Renderer r(forest, cfg, true);
  return render_closure(forest, r, {forest.main_root()}, 0, false);
}

std::string expand_query(const NavForest& forest, std::span<const DisplayId> ids,
                         const SerializationConfig& cfg) {
  if (ids.empty()) throw Error(kModule, "EmptyQuery", "expand_query needs at least one id");
  for (DisplayId id : ids) {
    if (id == -1) return serialize(forest, cfg);
    if (!forest.contains(id)) {
      throw Error(kModule, "UnknownId", "display id " + std::to_string(id) + " does not exist");
    }
  }
  const std::set<DisplayId> listed(ids.begin(), ids.end());

  // Trees entered through references beneath any listed node.
  std::set<int> entered;
  std::vector<DisplayId> stack(listed.begin(), listed.end());
  while (!stack.empty()) {
    const DisplayId id = stack.back();
    stack.pop_back();
    auto it = forest.entry_map.find(id);
    if (it != forest.entry_map.end() && entered.insert(forest.nodes[it->second].tree).second) {
      stack.push_back(it->second);
    }
    for (DisplayId k : forest.nodes[id].children) stack.push_back(k);
  }

  std::vector<DisplayId> tops;
  std::set<DisplayId> seen;
  for (DisplayId id : ids) {
    if (!seen.insert(id).second) continue;
    if (has_ancestor_in(forest, id, listed)) continue;
    if (entered.count(forest.nodes[id].tree)) continue;
    tops.push_back(id);
  }
  Renderer r(forest, cfg, false);
  return render_closure(forest, r, tops, 0, tops.empty());
}

bool TopologyView::same_structure(const TopologyView& other) const {
  if (roots != other.roots || entry_map != other.entry_map) return false;
  if (nodes.size() != other.nodes.size()) return false;
  for (auto a = nodes.begin(), b = other.nodes.begin(); a != nodes.end(); ++a, ++b) {
    const TopologyNode& x = a->second;
    const TopologyNode& y = b->second;
    if (x.id != y.id || x.name != y.name || x.type != y.type || x.children != y.children ||
        x.more != y.more) {
      return false;
    }
  }
  return true;
}

TopologyView parse_topology(std::string_view text) {
  static const std::regex entry_re(R"(ref (\d+) -> subtree (\d+))");
  TopologyView view;
  bool shared = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line == kSharedDivider) {
      if (shared) {
        throw Error(kModule, "MalformedText",
                    "line " + std::to_string(line_no) + ", column 1: repeated divider");
      }
      shared = true;
      continue;
    }
    std::match_results<std::string_view::const_iterator> m;
    if (shared && std::regex_match(line.begin(), line.end(), m, entry_re)) {
      view.entry_map[std::stoi(m[1].str())] = std::stoi(m[2].str());
      continue;
    }
    Parser p(line, line_no, view);
    view.roots.push_back(p.parse_tree());
  }
  return view;
}

TopologyView topology_of(const NavForest& forest) {
  TopologyView view;
  for (const ForestNode& n : forest.nodes) {
    const ControlNode& c = forest.control(n.id);
    view.nodes[n.id] = TopologyNode{n.id, c.name, c.control_type, std::nullopt, n.children,
                                    std::nullopt};
  }
  view.roots = forest.tree_roots;
  view.entry_map = forest.entry_map;
  return view;
}

std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

TokenStats token_stats(std::string_view text) {
  TokenStats s;
  s.tokens = estimate_tokens(text);
  s.controls = parse_topology(text).nodes.size();
  if (s.controls > 0) s.per_control = static_cast<double>(s.tokens) / s.controls;
  return s;
}

}  // namespace goi
