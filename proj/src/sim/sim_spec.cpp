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

#include <fstream>

#include "goi/error.hpp"
#include "goi/sim.hpp"

namespace goi {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) {
  throw Error("sim", "SpecValidation", msg);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == k;
    if (!known) invalid(where + ": unknown key '" + k + "'");
  }
}

template <typename T>
T get(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(where + ": field '" + key + "' has the wrong type");
  }
}

std::vector<std::string> strings(const json& obj, const char* key, const std::string& where) {
  return get<std::vector<std::string>>(obj, key, {}, where);
}

SimEffect parse_effect(const json& j, const std::string& where) {
  SimEffect e;
  e.show = strings(j, "show", where);
  e.hide = strings(j, "hide", where);
  e.open = strings(j, "open", where);
  e.close = strings(j, "close", where);
  e.enable = strings(j, "enable", where);
  e.disable = strings(j, "disable", where);
  e.set = get<std::map<std::string, std::string>>(j, "set", {}, where);
  e.rename = get<std::map<std::string, std::string>>(j, "rename", {}, where);
  return e;
}

#define GOI_EFFECT_KEYS "show", "hide", "open", "close", "enable", "disable", "set", "rename"

SimControlSpec parse_control(const json& j, std::size_t i) {
  const std::string where = "controls[" + std::to_string(i) + "]";
  check_keys(j,
             {"key", "name", "type", "automation_id", "description", "parent", "window",
              "visible", "selected", "toggled", "expanded", "patterns", "scroll", "lines",
              "value", "overflow", "commit_var"},
             where);
  SimControlSpec c;
  c.key = get<std::string>(j, "key", "", where);
  if (c.key.empty()) invalid(where + ": missing key");
  c.name = get<std::string>(j, "name", "", where);
  c.type = get<std::string>(j, "type", "", where);
  if (c.type.empty()) invalid(where + ": missing type");
  c.automation_id = get<std::optional<std::string>>(j, "automation_id", std::nullopt, where);
  c.description = get<std::optional<std::string>>(j, "description", std::nullopt, where);
  c.parent = get<std::optional<std::string>>(j, "parent", std::nullopt, where);
  c.window = get<std::string>(j, "window", "", where);
  c.visible = get<bool>(j, "visible", true, where);
  c.selected = get<bool>(j, "selected", false, where);
  c.toggled = get<bool>(j, "toggled", false, where);
  c.expanded = get<bool>(j, "expanded", false, where);
  for (const auto& p : strings(j, "patterns", where)) {
    auto pat = parse_pattern(p);
    if (!pat) invalid(where + ": unknown pattern '" + p + "'");
    c.patterns.insert(*pat);
  }
  if (j.contains("scroll")) {
    const json& s = j.at("scroll");
    check_keys(s, {"horizontal", "vertical", "steps", "x", "y"}, where + ".scroll");
    SimScrollSpec sc;
    sc.horizontal = get<bool>(s, "horizontal", false, where);
    sc.vertical = get<bool>(s, "vertical", true, where);
    sc.steps = get<int>(s, "steps", 1000, where);
    sc.x = get<double>(s, "x", 0.0, where);
    sc.y = get<double>(s, "y", 0.0, where);
    if (sc.steps < 1) invalid(where + ".scroll: steps must be positive");
    c.scroll = sc;
  }
  c.lines = strings(j, "lines", where);
  c.value = get<std::string>(j, "value", "", where);
  c.overflow = get<std::string>(j, "overflow", "", where);
  c.commit_var = get<std::optional<std::string>>(j, "commit_var", std::nullopt, where);
  return c;
}

void validate(const SimAppSpec& s) {
  std::set<std::string> windows, keys;
  int mains = 0;
  for (const auto& w : s.windows) {
    if (!windows.insert(w.id).second) invalid("duplicate window id '" + w.id + "'");
    mains += w.main;
  }
  if (mains != 1) invalid("exactly one main window is required, found " + std::to_string(mains));
  std::map<std::string, const SimControlSpec*> by_key;
  for (const auto& c : s.controls) {
    if (windows.count(c.key)) invalid("control key '" + c.key + "' collides with a window id");
    if (!keys.insert(c.key).second) invalid("duplicate control key '" + c.key + "'");
    if (!windows.count(c.window)) {
      invalid("control '" + c.key + "' references missing window '" + c.window + "'");
    }
    by_key[c.key] = &c;
  }
  for (const auto& c : s.controls) {
    if (!c.parent) continue;
    auto it = by_key.find(*c.parent);
    if (it == by_key.end()) invalid("control '" + c.key + "' has missing parent '" + *c.parent + "'");
    if (it->second->window != c.window) invalid("control '" + c.key + "' and its parent differ in window");
    // Walk up to catch parent cycles.
    std::set<std::string> seen{c.key};
    for (auto p = c.parent; p; p = by_key.at(*p)->parent) {
      if (!seen.insert(*p).second) invalid("parent cycle through '" + c.key + "'");
    }
  }
  auto need_control = [&](const std::string& k, const std::string& where) {
    if (!keys.count(k)) invalid(where + " references missing control '" + k + "'");
  };
  auto need_window = [&](const std::string& w, const std::string& where) {
    if (!windows.count(w)) invalid(where + " references missing window '" + w + "'");
  };
  auto check_effect = [&](const SimEffect& e, const std::string& where) {
    for (const auto* list : {&e.show, &e.hide, &e.enable, &e.disable}) {
      for (const auto& k : *list) need_control(k, where);
    }
    for (const auto& [k, v] : e.rename) need_control(k, where);
    for (const auto& w : e.open) need_window(w, where);
    for (const auto& w : e.close) {
      need_window(w, where);
      for (const auto& win : s.windows) {
        if (win.id == w && win.main) invalid(where + " closes the main window");
      }
    }
  };
  for (std::size_t i = 0; i < s.rules.size(); ++i) {
    const std::string where = "rules[" + std::to_string(i) + "]";
    need_control(s.rules[i].on, where);
    check_effect(s.rules[i].effect, where);
  }
  for (std::size_t i = 0; i < s.input_rules.size(); ++i) {
    const std::string where = "input_rules[" + std::to_string(i) + "]";
    need_control(s.input_rules[i].on, where);
    check_effect(s.input_rules[i].effect, where);
  }
  for (std::size_t i = 0; i < s.shortcut_rules.size(); ++i) {
    const std::string where = "shortcut_rules[" + std::to_string(i) + "]";
    if (s.shortcut_rules[i].focus) need_control(*s.shortcut_rules[i].focus, where);
    check_effect(s.shortcut_rules[i].effect, where);
  }
  for (const auto& [name, e] : s.contexts) check_effect(e, "contexts." + name);
  for (const auto& [k, v] : s.latencies) {
    need_control(k, "latencies");
    if (v < 0) invalid("latencies: negative latency for '" + k + "'");
  }
  for (const auto& [k, v] : s.aliases) need_control(k, "aliases");
  for (const auto& k : s.disabled) need_control(k, "disabled");
}

}  // namespace

SimAppSpec sim_app_from_json(const json& j) {
  check_keys(j,
             {"schema", "kind", "name", "windows", "controls", "rules", "input_rules",
              "shortcut_rules", "contexts", "latencies", "aliases", "disabled", "vars",
              "failing_shortcuts"},
             "app");
  if (get<int>(j, "schema", 0, "app") != kSimSchemaVersion) {
    invalid("unsupported schema version, expected " + std::to_string(kSimSchemaVersion));
  }
  if (j.contains("kind") && j.at("kind") != "sim_app") invalid("kind must be 'sim_app'");
  SimAppSpec s;
  s.name = get<std::string>(j, "name", "app", "app");
  const json empty = json::array();
  const json& windows = j.contains("windows") ? j.at("windows") : empty;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const std::string where = "windows[" + std::to_string(i) + "]";
    const json& w = windows.at(i);
    check_keys(w, {"id", "title", "main", "modal", "closable"}, where);
    SimWindowSpec ws;
    ws.id = get<std::string>(w, "id", "", where);
    if (ws.id.empty()) invalid(where + ": missing id");
    ws.title = get<std::string>(w, "title", ws.id, where);
    ws.main = get<bool>(w, "main", false, where);
    ws.modal = get<bool>(w, "modal", false, where);
    ws.closable = get<bool>(w, "closable", !ws.main, where);
    s.windows.push_back(ws);
  }
  const json& controls = j.contains("controls") ? j.at("controls") : empty;
  for (std::size_t i = 0; i < controls.size(); ++i) s.controls.push_back(parse_control(controls[i], i));

  const json& rules = j.contains("rules") ? j.at("rules") : empty;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string where = "rules[" + std::to_string(i) + "]";
    check_keys(rules[i], {"on", GOI_EFFECT_KEYS}, where);
    s.rules.push_back({get<std::string>(rules[i], "on", "", where), parse_effect(rules[i], where)});
  }
  const json& inputs = j.contains("input_rules") ? j.at("input_rules") : empty;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string where = "input_rules[" + std::to_string(i) + "]";
    check_keys(inputs[i], {"on", "equals", GOI_EFFECT_KEYS}, where);
    s.input_rules.push_back({get<std::string>(inputs[i], "on", "", where),
                             get<std::optional<std::string>>(inputs[i], "equals", std::nullopt, where),
                             parse_effect(inputs[i], where)});
  }
  const json& shortcuts = j.contains("shortcut_rules") ? j.at("shortcut_rules") : empty;
  for (std::size_t i = 0; i < shortcuts.size(); ++i) {
    const std::string where = "shortcut_rules[" + std::to_string(i) + "]";
    check_keys(shortcuts[i], {"key", "focus", GOI_EFFECT_KEYS}, where);
    s.shortcut_rules.push_back(
        {get<std::string>(shortcuts[i], "key", "", where),
         get<std::optional<std::string>>(shortcuts[i], "focus", std::nullopt, where),
         parse_effect(shortcuts[i], where)});
  }
  if (j.contains("contexts")) {
    for (const auto& [name, e] : j.at("contexts").items()) {
      check_keys(e, {GOI_EFFECT_KEYS}, "contexts." + name);
      s.contexts[name] = parse_effect(e, "contexts." + name);
    }
  }
  s.latencies = get<std::map<std::string, int>>(j, "latencies", {}, "app");
  if (j.contains("aliases")) {
    for (const auto& [key, list] : j.at("aliases").items()) {
      for (const auto& a : list) {
        check_keys(a, {"after_tick", "name"}, "aliases." + key);
        s.aliases[key].push_back({get<long>(a, "after_tick", 0, "aliases." + key),
                                  get<std::string>(a, "name", "", "aliases." + key)});
      }
    }
  }
  for (const auto& k : strings(j, "disabled", "app")) s.disabled.insert(k);
  s.vars = get<std::map<std::string, std::string>>(j, "vars", {}, "app");
  for (const auto& k : strings(j, "failing_shortcuts", "app")) s.failing_shortcuts.insert(k);
  validate(s);
  return s;
}

SimSession load_app(const json& spec_json) { return SimSession(sim_app_from_json(spec_json)); }

SimSession load_app_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("sim", "SpecValidation", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("sim", "SpecValidation", path.string() + ": " + e.what());
  }
  return load_app(j);
}

}  // namespace goi
