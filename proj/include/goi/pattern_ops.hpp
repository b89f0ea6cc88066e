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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "goi/backend.hpp"

namespace goi {

// Bijective base-26: 0 -> "A", 25 -> "Z", 26 -> "AA".
std::string label_for_index(std::size_t index);
// Inverse of label_for_index; nullopt unless the text is [A-Z]+.
std::optional<std::size_t> index_for_label(std::string_view label);

struct ScreenLabel {
  std::string label;
  std::string handle;
  ControlIdentifier identifier;
  std::string name;
  std::string control_type;
};

// Labels every visible control (windows excluded) in snapshot pre-order.
std::vector<ScreenLabel> assign_labels(const AccTreeSnapshot& snapshot);

enum class PatternStatus { Ok, UnsupportedPattern, OutOfRange, NotFound, StaticIdRejected, Disabled };

std::string_view to_string(PatternStatus s);

struct PatternResult {
  PatternStatus status = PatternStatus::Ok;
  std::optional<nlohmann::json> payload;  // present iff status is Ok
  std::string message;

  bool ok() const { return status == PatternStatus::Ok; }
  nlohmann::json to_json() const;
};

enum class TextMode { Passive, Active };

struct PatternOpsConfig {
  std::size_t passive_limit = 64;  // code points
  std::string truncation_marker = "...";
};

// Interaction ops addressed by on-screen labels. Labels refer to the
// snapshot taken by the last refresh(). Every op validates all of its
// targets before touching the backend.
class PatternOps {
 public:
  explicit PatternOps(UiBackend& backend, PatternOpsConfig cfg = {});

  void refresh();
  const std::vector<ScreenLabel>& labels() const { return labels_; }
  const AccTreeSnapshot& snapshot() const { return snapshot_; }

  PatternResult set_scrollbar_pos(const std::string& label, std::optional<double> x_percent,
                                  std::optional<double> y_percent);
  PatternResult select_lines(const std::string& label, long start, long end);
  PatternResult select_paragraphs(const std::string& label, long start, long end);
  PatternResult select_controls(const std::vector<std::string>& labels);
  PatternResult get_texts(TextMode mode, const std::vector<std::string>& targets = {});
  PatternResult set_toggle_state(const std::vector<std::string>& labels, bool on);
  PatternResult set_expanded(const std::vector<std::string>& labels, bool expanded);
  // Plain activation, used by per-click scripts.
  PatternResult click(const std::string& label);

 private:
  struct Resolved {
    const AccNode* node = nullptr;
    std::optional<PatternResult> error;
  };
  Resolved resolve(const std::string& label) const;
  Resolved resolve_with(const std::string& label, Pattern p) const;
  PatternResult select_units(const std::string& label, TextUnit unit, long start, long end);

  UiBackend& backend_;
  PatternOpsConfig cfg_;
  AccTreeSnapshot snapshot_;
  std::vector<ScreenLabel> labels_;
};

// Executes one interaction op given as JSON, e.g.
// {"op":"set_scrollbar_pos","target":"C","x":80}.
PatternResult run_op(PatternOps& ops, const nlohmann::json& op);

}  // namespace goi
