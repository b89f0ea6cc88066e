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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "goi/error.hpp"
#include "goi/sim.hpp"

namespace goi {
namespace {

const char* kModule = "sim";

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

nlohmann::json ActionLogEntry::to_json() const {
  return {{"tick", tick}, {"kind", kind}, {"target", target}, {"detail", detail}, {"ok", ok}};
}

SimSession::SimSession(SimAppSpec spec) : spec_(std::move(spec)) {
  for (std::size_t i = 0; i < spec_.controls.size(); ++i) {
    const auto& c = spec_.controls[i];
    index_[c.key] = i;
    children_[c.parent ? *c.parent : c.window].push_back(c.key);
  }
  for (const auto& w : spec_.windows) {
    if (w.main) initial_.open_windows.push_back(w.id);
  }
  for (const auto& c : spec_.controls) {
    SimControlState st;
    st.visible = c.visible;
    st.enabled = !spec_.disabled.count(c.key);
    st.selected = c.selected;
    st.toggled = c.toggled;
    st.expanded = c.expanded;
    if (c.scroll) {
      st.scroll_x = c.scroll->x;
      st.scroll_y = c.scroll->y;
    }
    st.text = c.value;
    initial_.controls[c.key] = st;
  }
  initial_.vars = spec_.vars;
  state_ = initial_;
}

const SimControlSpec* SimSession::control_spec(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &spec_.controls[it->second];
}

std::string SimSession::current_name(const std::string& key) const {
  const auto& st = state_.controls.at(key);
  if (st.name_override) return *st.name_override;
  std::string name = require(key).name;
  auto it = spec_.aliases.find(key);
  if (it != spec_.aliases.end()) {
    for (const auto& a : it->second) {
      if (state_.tick >= a.after_tick) name = a.name;
    }
  }
  return name;
}

bool SimSession::is_visible(const std::string& key) const {
  const SimControlSpec& c = require(key);
  if (std::find(state_.open_windows.begin(), state_.open_windows.end(), c.window) ==
      state_.open_windows.end()) {
    return false;
  }
  for (const SimControlSpec* cur = &c; cur; cur = cur->parent ? control_spec(*cur->parent) : nullptr) {
    const auto& st = state_.controls.at(cur->key);
    if (!st.visible || st.available_at > state_.tick) return false;
  }
  return true;
}

AccTreeSnapshot SimSession::snapshot() const {
  AccTreeSnapshot snap;
  snap.tick = state_.tick;
  for (const auto& wid : state_.open_windows) {
    const auto& w = *std::find_if(spec_.windows.begin(), spec_.windows.end(),
                                  [&](const SimWindowSpec& x) { return x.id == wid; });
    snap.windows.push_back({w.id, w.title, w.modal, w.closable});
    AccNode wn;
    wn.handle = w.id;
    wn.name = w.title;
    wn.control_type = std::string(kWindowType);
    wn.identifier = synthesize_identifier({std::nullopt, w.title, wn.control_type, {}});
    wn.window = w.id;
    snap.nodes.push_back(wn);

    // Iterative pre-order over visible controls.
    struct Frame {
      std::string key;
      int depth;
      std::vector<std::string> ancestors;
    };
    std::vector<Frame> stack;
    auto push_children = [&](const std::string& parent, int depth,
                             const std::vector<std::string>& anc) {
      auto it = children_.find(parent);
      if (it == children_.end()) return;
      for (auto k = it->second.rbegin(); k != it->second.rend(); ++k) {
        const auto& st = state_.controls.at(*k);
        if (st.visible && st.available_at <= state_.tick) stack.push_back({*k, depth, anc});
      }
    };
    push_children(w.id, 1, {w.title});
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      const SimControlSpec& c = require(f.key);
      const auto& st = state_.controls.at(f.key);
      AccNode n;
      n.handle = c.key;
      n.name = current_name(c.key);
      n.control_type = c.type;
      n.identifier = synthesize_identifier({c.automation_id, n.name, c.type, f.ancestors});
      n.description = c.description;
      n.patterns = c.patterns;
      n.enabled = st.enabled;
      n.selected = st.selected;
      n.window = w.id;
      n.parent = c.parent.value_or("");
      n.depth = f.depth;
      auto anc = f.ancestors;
      anc.push_back(n.name);
      push_children(c.key, f.depth + 1, anc);
      snap.nodes.push_back(std::move(n));
    }
  }
  return snap;
}

const SimControlSpec& SimSession::require(const std::string& key) const {
  const SimControlSpec* c = control_spec(key);
  if (!c) throw Error(kModule, "TargetNotVisible", "no control '" + key + "'");
  return *c;
}

const SimControlSpec& SimSession::require_visible(const std::string& key) const {
  const SimControlSpec& c = require(key);
  if (!is_visible(key)) {
    throw Error(kModule, "TargetNotVisible", "control '" + key + "' is not visible");
  }
  // A modal window on top blocks everything beneath it.
  const std::string& top = state_.open_windows.back();
  if (c.window != top) {
    for (const auto& w : spec_.windows) {
      if (w.id == top && w.modal) {
        throw Error(kModule, "TargetNotVisible",
                    "control '" + key + "' is blocked by modal window '" + top + "'");
      }
    }
  }
  return c;
}

const SimControlSpec& SimSession::require_pattern(const std::string& key, Pattern p) const {
  const SimControlSpec& c = require_visible(key);
  if (!c.patterns.count(p)) {
    throw Error(kModule, "UnsupportedPattern",
                "control '" + key + "' does not support " + std::string(to_string(p)));
  }
  return c;
}

void SimSession::log(std::string kind, std::string target, std::string detail, bool ok) {
  state_.log.push_back({state_.tick, std::move(kind), std::move(target), std::move(detail), ok});
}

void SimSession::apply(const SimEffect& e) {
  auto latency = [&](const std::string& k) {
    auto it = spec_.latencies.find(k);
    return it == spec_.latencies.end() ? 0 : it->second;
  };
  for (const auto& k : e.hide) state_.controls.at(k).visible = false;
  for (const auto& k : e.show) {
    auto& st = state_.controls.at(k);
    if (!st.visible) st.available_at = state_.tick + latency(k);
    st.visible = true;
  }
  for (const auto& w : e.close) {
    std::erase(state_.open_windows, w);
    if (state_.focus && require(*state_.focus).window == w) state_.focus.reset();
  }
  for (const auto& w : e.open) {
    if (std::find(state_.open_windows.begin(), state_.open_windows.end(), w) !=
        state_.open_windows.end()) {
      continue;
    }
    state_.open_windows.push_back(w);
    for (const auto& c : spec_.controls) {
      if (c.window != w) continue;
      auto& st = state_.controls.at(c.key);
      st.visible = c.visible;
      st.available_at = state_.tick + latency(c.key);
    }
  }
  for (const auto& k : e.enable) state_.controls.at(k).enabled = true;
  for (const auto& k : e.disable) state_.controls.at(k).enabled = false;
  for (const auto& [var, value] : e.set) {
    if (value.starts_with("$")) {
      auto it = state_.vars.find(value.substr(1));
      state_.vars[var] = it == state_.vars.end() ? "" : it->second;
    } else {
      state_.vars[var] = value;
    }
  }
  for (const auto& [k, name] : e.rename) state_.controls.at(k).name_override = name;
}

void SimSession::click(const std::string& handle) {
  const SimControlSpec& c = require_visible(handle);
  auto& st = state_.controls.at(handle);
  if (!st.enabled) {
    throw Error(kModule, "TargetDisabled", "control '" + handle + "' is disabled");
  }
  ++state_.tick;
  ++st.clicks;
  log("click", handle, current_name(handle));
  if (c.type == "TabItem") {
    for (const auto& sib : children_.at(c.parent ? *c.parent : c.window)) {
      if (require(sib).type == "TabItem") state_.controls.at(sib).selected = sib == handle;
    }
  }
  if (c.patterns.count(Pattern::Toggle)) st.toggled = !st.toggled;
  if (c.type == "Edit") state_.focus = handle;
  for (const auto& r : spec_.rules) {
    if (r.on == handle) apply(r.effect);
  }
}

void SimSession::input(const std::string& handle, const std::string& text) {
  const SimControlSpec& c = require_visible(handle);
  auto& st = state_.controls.at(handle);
  if (!st.enabled) throw Error(kModule, "TargetDisabled", "control '" + handle + "' is disabled");
  if (c.type != "Edit" && !c.patterns.count(Pattern::Value)) {
    throw Error(kModule, "TargetDisabled", "control '" + handle + "' does not accept text input");
  }
  ++state_.tick;
  st.text = text;
  st.committed = false;
  state_.focus = handle;
  log("input", handle, text);
  for (const auto& r : spec_.input_rules) {
    if (r.on == handle && (!r.equals || *r.equals == text)) apply(r.effect);
  }
}

void SimSession::shortcut(const std::string& combination) {
  const std::string key = upper(combination);
  ++state_.tick;
  if (spec_.failing_shortcuts.count(key)) {
    log("shortcut", key, "no effect", false);
    throw Error(kModule, "ShortcutFailed", "shortcut " + key + " had no effect");
  }
  log("shortcut", key, state_.focus ? *state_.focus : "");
  if (key == "ENTER" && state_.focus) {
    const SimControlSpec& f = require(*state_.focus);
    if (f.commit_var) {
      auto& st = state_.controls.at(f.key);
      state_.vars[*f.commit_var] = st.text;
      st.committed = true;
    }
  }
  for (const auto& r : spec_.shortcut_rules) {
    if (upper(r.key) == key && (!r.focus || r.focus == state_.focus)) apply(r.effect);
  }
}

void SimSession::close_window(const std::string& window) {
  auto w = std::find_if(spec_.windows.begin(), spec_.windows.end(),
                        [&](const SimWindowSpec& x) { return x.id == window; });
  if (w == spec_.windows.end() ||
      std::find(state_.open_windows.begin(), state_.open_windows.end(), window) ==
          state_.open_windows.end()) {
    throw Error(kModule, "TargetNotVisible", "window '" + window + "' is not open");
  }
  if (w->main || !w->closable) {
    throw Error(kModule, "NotClosable", "window '" + window + "' cannot be closed directly");
  }
  ++state_.tick;
  log("close", window, w->title);
  SimEffect e;
  e.close.push_back(window);
  apply(e);
}

void SimSession::wait(int ticks) {
  if (ticks > 0) state_.tick += ticks;
}

void SimSession::reset() { state_ = initial_; }

std::vector<std::string> SimSession::contexts() const {
  std::vector<std::string> names;
  for (const auto& [name, e] : spec_.contexts) names.push_back(name);
  return names;
}

void SimSession::enter_context(const std::string& name) {
  auto it = spec_.contexts.find(name);
  if (it == spec_.contexts.end()) throw Error(kModule, "UnknownContext", "no context '" + name + "'");
  apply(it->second);
  state_.context = name;
}

ScrollInfo SimSession::scroll_info(const std::string& handle) const {
  const SimControlSpec& c = require_pattern(handle, Pattern::Scroll);
  const auto& st = state_.controls.at(handle);
  ScrollInfo info;
  if (c.scroll) {
    info.horizontal = c.scroll->horizontal;
    info.vertical = c.scroll->vertical;
  }
  info.x = st.scroll_x;
  info.y = st.scroll_y;
  return info;
}

void SimSession::set_scroll(const std::string& handle, std::optional<double> x,
                            std::optional<double> y) {
  const SimControlSpec& c = require_pattern(handle, Pattern::Scroll);
  const SimScrollSpec sc = c.scroll.value_or(SimScrollSpec{});
  auto check = [&](std::optional<double> v, bool supported, const char* axis) {
    if (!v) return;
    if (!supported) {
      throw Error(kModule, "UnsupportedPattern",
                  "control '" + handle + "' has no " + axis + " scrollbar");
    }
    if (!(*v >= 0.0 && *v <= 100.0)) {
      throw Error(kModule, "OutOfRange", std::string(axis) + " position must be within 0..100");
    }
  };
  check(x, sc.horizontal, "horizontal");
  check(y, sc.vertical, "vertical");
  auto quantize = [&](double v) { return std::round(v / 100.0 * sc.steps) * 100.0 / sc.steps; };
  ++state_.tick;
  auto& st = state_.controls.at(handle);
  if (x) st.scroll_x = quantize(*x);
  if (y) st.scroll_y = quantize(*y);
  log("scroll", handle, "x=" + format_percent(st.scroll_x) + " y=" + format_percent(st.scroll_y));
}

std::vector<std::string> SimSession::paragraphs(const SimControlSpec& c) const {
  std::vector<std::string> out;
  std::vector<std::string> block;
  for (const auto& line : c.lines) {
    if (line.empty()) {
      if (!block.empty()) out.push_back(join(block, "\n"));
      block.clear();
    } else {
      block.push_back(line);
    }
  }
  if (!block.empty()) out.push_back(join(block, "\n"));
  return out;
}

std::size_t SimSession::text_unit_count(const std::string& handle, TextUnit unit) const {
  const SimControlSpec& c = require_pattern(handle, Pattern::Text);
  return unit == TextUnit::Line ? c.lines.size() : paragraphs(c).size();
}

void SimSession::select_text(const std::string& handle, TextUnit unit, std::size_t start,
                             std::size_t end) {
  const std::size_t count = text_unit_count(handle, unit);
  if (start < 1 || start > end || end > count) {
    throw Error(kModule, "OutOfRange",
                "range " + std::to_string(start) + ".." + std::to_string(end) + " outside 1.." +
                    std::to_string(count));
  }
  ++state_.tick;
  state_.controls.at(handle).selection = TextSelection{unit, start, end};
  log("select_text", handle,
      std::string(to_string(unit)) + " " + std::to_string(start) + ".." + std::to_string(end));
}

std::optional<TextSelection> SimSession::text_selection(const std::string& handle) const {
  require(handle);
  return state_.controls.at(handle).selection;
}

void SimSession::select_controls(const std::vector<std::string>& handles) {
  for (const auto& h : handles) require_pattern(h, Pattern::Select);
  ++state_.tick;
  std::set<std::string> targets(handles.begin(), handles.end());
  for (const auto& h : handles) {
    const SimControlSpec& c = require(h);
    for (const auto& sib : children_.at(c.parent ? *c.parent : c.window)) {
      if (require(sib).patterns.count(Pattern::Select)) {
        state_.controls.at(sib).selected = targets.count(sib) > 0;
      }
    }
  }
  log("select", join(handles, ","), "");
}

std::string SimSession::read_text(const std::string& handle, bool reveal) {
  const SimControlSpec& c = require_visible(handle);
  if (!c.patterns.count(Pattern::Text) && !c.patterns.count(Pattern::Value)) {
    throw Error(kModule, "UnsupportedPattern", "control '" + handle + "' exposes no text");
  }
  std::string content = c.lines.empty() ? state_.controls.at(handle).text : join(c.lines, "\n");
  if (reveal && !c.overflow.empty()) {
    ++state_.tick;
    log("reveal", handle, "");
    content += c.overflow;
  }
  return content;
}

void SimSession::set_toggle(const std::string& handle, bool on) {
  require_pattern(handle, Pattern::Toggle);
  ++state_.tick;
  state_.controls.at(handle).toggled = on;
  log("toggle", handle, on ? "on" : "off");
}

void SimSession::set_expanded(const std::string& handle, bool expanded) {
  require_pattern(handle, Pattern::ExpandCollapse);
  ++state_.tick;
  state_.controls.at(handle).expanded = expanded;
  log("expand", handle, expanded ? "expanded" : "collapsed");
}

std::size_t SimSession::action_count() const {
  return std::count_if(state_.log.begin(), state_.log.end(), [](const ActionLogEntry& e) {
    return e.kind == "click" || e.kind == "input" || e.kind == "shortcut" || e.kind == "close";
  });
}

}  // namespace goi
