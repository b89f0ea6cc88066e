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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "goi/nav_model.hpp"

namespace goi {

inline constexpr std::string_view kWindowType = "Window";

// One visible control (or window) in an accessibility snapshot.
struct AccNode {
  std::string handle;  // backend-private, valid for the session
  ControlIdentifier identifier;
  std::string name;
  std::string control_type;
  std::optional<std::string> description;
  std::set<Pattern> patterns;
  bool enabled = true;
  bool selected = false;
  std::string window;  // handle of the containing window
  std::string parent;  // containing control handle; empty at window level
  int depth = 0;       // 0 for window nodes

  ControlNode to_control_node() const;
};

struct WindowInfo {
  std::string handle;
  std::string title;
  bool modal = false;
  bool closable = true;
};

// Pre-order view of everything currently visible. Windows are listed in
// opening order; the last one is topmost.
struct AccTreeSnapshot {
  std::vector<WindowInfo> windows;
  std::vector<AccNode> nodes;
  long tick = 0;

  const AccNode* find(const ControlIdentifier& id) const;
  const AccNode* find_handle(const std::string& handle) const;
  std::vector<const AccNode*> in_window(const std::string& window) const;
};

enum class TextUnit { Line, Paragraph };

std::string_view to_string(TextUnit u);

struct ScrollInfo {
  bool horizontal = false;
  bool vertical = false;
  double x = 0.0;  // percent
  double y = 0.0;
};

struct TextSelection {
  TextUnit unit = TextUnit::Line;
  std::size_t start = 0;  // 1-based inclusive
  std::size_t end = 0;
  bool operator==(const TextSelection&) const = default;
};

// Abstract UI backend. Every mutating call advances the backend clock.
// Failures throw goi::Error with the backend's module code.
class UiBackend {
 public:
  virtual ~UiBackend() = default;

  virtual std::string app_name() const = 0;
  virtual AccTreeSnapshot snapshot() const = 0;

  virtual void click(const std::string& handle) = 0;
  virtual void input(const std::string& handle, const std::string& text) = 0;
  virtual void shortcut(const std::string& combination) = 0;
  virtual void close_window(const std::string& window) = 0;
  virtual void wait(int ticks) = 0;

  virtual void reset() = 0;
  virtual std::vector<std::string> contexts() const = 0;
  virtual void enter_context(const std::string& name) = 0;

  // Pattern access.
  virtual ScrollInfo scroll_info(const std::string& handle) const = 0;
  virtual void set_scroll(const std::string& handle, std::optional<double> x,
                          std::optional<double> y) = 0;
  virtual std::size_t text_unit_count(const std::string& handle, TextUnit unit) const = 0;
  virtual void select_text(const std::string& handle, TextUnit unit, std::size_t start,
                           std::size_t end) = 0;
  virtual std::optional<TextSelection> text_selection(const std::string& handle) const = 0;
  virtual void select_controls(const std::vector<std::string>& handles) = 0;
  // Without `reveal` only the on-screen part of the content is returned.
  virtual std::string read_text(const std::string& handle, bool reveal) = 0;
  virtual void set_toggle(const std::string& handle, bool on) = 0;
  virtual void set_expanded(const std::string& handle, bool expanded) = 0;

  // Count of logged user-level actions (clicks, inputs, shortcuts, closes).
  virtual std::size_t action_count() const = 0;
};

}  // namespace goi
