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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "goi/backend.hpp"

namespace goi {

struct SimWindowSpec {
  std::string id;
  std::string title;
  bool main = false;
  bool modal = false;
  bool closable = true;
};

struct SimScrollSpec {
  bool horizontal = false;
  bool vertical = true;
  int steps = 1000;  // positions are quantized to 100/steps percent
  double x = 0.0;
  double y = 0.0;
};

struct SimControlSpec {
  std::string key;
  std::string name;
  std::string type;
  std::optional<std::string> automation_id;
  std::optional<std::string> description;
  std::optional<std::string> parent;
  std::string window;
  bool visible = true;
  bool selected = false;
  bool toggled = false;
  bool expanded = false;
  std::set<Pattern> patterns;
  std::optional<SimScrollSpec> scroll;
  std::vector<std::string> lines;  // Text pattern content
  std::string value;               // Value pattern content shown on screen
  std::string overflow;            // appended only when content is revealed
  std::optional<std::string> commit_var;  // ENTER stores the field text here
};

struct SimEffect {
  std::vector<std::string> show, hide, open, close, enable, disable;
  std::map<std::string, std::string> set;     // var -> literal or "$var"
  std::map<std::string, std::string> rename;  // control key -> new name
};

struct SimRule {
  std::string on;
  SimEffect effect;
};

struct SimInputRule {
  std::string on;
  std::optional<std::string> equals;
  SimEffect effect;
};

struct SimShortcutRule {
  std::string key;
  std::optional<std::string> focus;
  SimEffect effect;
};

struct SimAlias {
  long after_tick = 0;
  std::string name;
};

inline constexpr int kSimSchemaVersion = 1;

// Scripted application world model.
struct SimAppSpec {
  std::string name;
  std::vector<SimWindowSpec> windows;
  std::vector<SimControlSpec> controls;
  std::vector<SimRule> rules;
  std::vector<SimInputRule> input_rules;
  std::vector<SimShortcutRule> shortcut_rules;
  std::map<std::string, SimEffect> contexts;
  std::map<std::string, int> latencies;
  std::map<std::string, std::vector<SimAlias>> aliases;
  std::set<std::string> disabled;
  std::map<std::string, std::string> vars;
  std::set<std::string> failing_shortcuts;
};

// Throws sim.SpecValidation.
SimAppSpec sim_app_from_json(const nlohmann::json& j);

struct SimControlState {
  bool visible = true;
  long available_at = 0;
  bool enabled = true;
  bool selected = false;
  bool toggled = false;
  bool expanded = false;
  std::optional<std::string> name_override;
  double scroll_x = 0.0;
  double scroll_y = 0.0;
  std::optional<TextSelection> selection;
  std::string text;  // edit field content
  bool committed = false;
  int clicks = 0;

  bool operator==(const SimControlState&) const = default;
};

struct ActionLogEntry {
  long tick = 0;
  std::string kind;  // click, input, shortcut, close, scroll, select_text, select, reveal, ...
  std::string target;
  std::string detail;
  bool ok = true;

  nlohmann::json to_json() const;
  bool operator==(const ActionLogEntry&) const = default;
};

struct SimState {
  std::vector<std::string> open_windows;  // opening order, topmost last
  std::map<std::string, SimControlState> controls;
  std::map<std::string, std::string> vars;
  std::optional<std::string> focus;
  std::optional<std::string> context;
  long tick = 0;
  std::vector<ActionLogEntry> log;

  bool operator==(const SimState&) const = default;
};

class SimSession : public UiBackend {
 public:
  explicit SimSession(SimAppSpec spec);

  const SimAppSpec& spec() const { return spec_; }
  const SimState& state() const { return state_; }
  const SimControlSpec* control_spec(const std::string& key) const;
  std::string current_name(const std::string& key) const;
  bool is_visible(const std::string& key) const;

  std::string app_name() const override { return spec_.name; }
  AccTreeSnapshot snapshot() const override;
  void click(const std::string& handle) override;
  void input(const std::string& handle, const std::string& text) override;
  void shortcut(const std::string& combination) override;
  void close_window(const std::string& window) override;
  void wait(int ticks) override;
  void reset() override;
  std::vector<std::string> contexts() const override;
  void enter_context(const std::string& name) override;

  ScrollInfo scroll_info(const std::string& handle) const override;
  void set_scroll(const std::string& handle, std::optional<double> x,
                  std::optional<double> y) override;
  std::size_t text_unit_count(const std::string& handle, TextUnit unit) const override;
  void select_text(const std::string& handle, TextUnit unit, std::size_t start,
                   std::size_t end) override;
  std::optional<TextSelection> text_selection(const std::string& handle) const override;
  void select_controls(const std::vector<std::string>& handles) override;
  std::string read_text(const std::string& handle, bool reveal) override;
  void set_toggle(const std::string& handle, bool on) override;
  void set_expanded(const std::string& handle, bool expanded) override;
  std::size_t action_count() const override;

 private:
  const SimControlSpec& require(const std::string& key) const;
  const SimControlSpec& require_visible(const std::string& key) const;
  const SimControlSpec& require_pattern(const std::string& key, Pattern p) const;
  void apply(const SimEffect& e);
  void log(std::string kind, std::string target, std::string detail, bool ok = true);
  std::vector<std::string> paragraphs(const SimControlSpec& c) const;

  SimAppSpec spec_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<std::string>> children_;  // parent key or window id
  SimState initial_;
  SimState state_;
};

// Parses the spec JSON and starts a session in the initial state.
SimSession load_app(const nlohmann::json& spec_json);
SimSession load_app_file(const std::filesystem::path& path);

enum class Verdict { Pass, Fail, Unknown };

std::string_view to_string(Verdict v);

struct AssertionResult {
  std::size_t index = 0;
  std::string type;
  Verdict verdict = Verdict::Unknown;
  std::string detail;
};

struct AssertionReport {
  std::vector<AssertionResult> results;

  std::size_t count(Verdict v) const;
  // No Fail and no Unknown verdicts.
  bool passed() const;
  nlohmann::json to_json() const;
};

// Evaluates declarative predicates against the final state and action log.
// Accepts either an array or {"schema":1,"assertions":[...]}.
AssertionReport assert_state(const SimSession& session, const nlohmann::json& assertions);

}  // namespace goi
