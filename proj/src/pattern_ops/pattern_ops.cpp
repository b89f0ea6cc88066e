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

#include "goi/pattern_ops.hpp"

#include <algorithm>
#include <cctype>

#include "goi/error.hpp"
#include "goi/utf8.hpp"

namespace goi {
namespace {

using nlohmann::json;

PatternResult failure(PatternStatus s, std::string message) {
  return {s, std::nullopt, std::move(message)};
}

PatternResult success(json payload, std::string message = "") {
  return {PatternStatus::Ok, std::move(payload), std::move(message)};
}

bool numeric(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

PatternResult from_backend(const Error& e) {
  const std::string& code = e.code();
  if (code == "OutOfRange") return failure(PatternStatus::OutOfRange, e.what());
  if (code == "UnsupportedPattern") return failure(PatternStatus::UnsupportedPattern, e.what());
  if (code == "TargetDisabled") return failure(PatternStatus::Disabled, e.what());
  return failure(PatternStatus::NotFound, e.what());
}

[[noreturn]] void malformed(const std::string& msg) { throw Error("ops", "MalformedOp", msg); }

}  // namespace

std::string label_for_index(std::size_t index) {
  std::string out;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    out.push_back(static_cast<char>('A' + n % 26));
    n /= 26;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<std::size_t> index_for_label(std::string_view label) {
  if (label.empty() || label.size() > 12) return std::nullopt;
  std::size_t n = 0;
  for (char c : label) {
    if (c < 'A' || c > 'Z') return std::nullopt;
    n = n * 26 + static_cast<std::size_t>(c - 'A' + 1);
  }
  return n - 1;
}

std::vector<ScreenLabel> assign_labels(const AccTreeSnapshot& snapshot) {
  std::vector<ScreenLabel> out;
  for (const auto& n : snapshot.nodes) {
    if (n.control_type == kWindowType) continue;
    out.push_back({label_for_index(out.size()), n.handle, n.identifier, n.name, n.control_type});
  }
  return out;
}

std::string_view to_string(PatternStatus s) {
  switch (s) {
    case PatternStatus::Ok: return "Ok";
    case PatternStatus::UnsupportedPattern: return "UnsupportedPattern";
    case PatternStatus::OutOfRange: return "OutOfRange";
    case PatternStatus::NotFound: return "NotFound";
    case PatternStatus::StaticIdRejected: return "StaticIdRejected";
    case PatternStatus::Disabled: return "Disabled";
  }
  return "NotFound";
}

json PatternResult::to_json() const {
  json j{{"status", std::string(goi::to_string(status))}};
  if (payload) j["payload"] = *payload;
  if (!message.empty()) j["message"] = message;
  return j;
}

PatternOps::PatternOps(UiBackend& backend, PatternOpsConfig cfg)
    : backend_(backend), cfg_(std::move(cfg)) {
  refresh();
}

void PatternOps::refresh() {
  snapshot_ = backend_.snapshot();
  labels_ = assign_labels(snapshot_);
}

PatternOps::Resolved PatternOps::resolve(const std::string& label) const {
  if (numeric(label)) {
    return {nullptr, failure(PatternStatus::StaticIdRejected,
                             "'" + label + "' looks like a topology id; interaction ops take on-screen labels")};
  }
  auto idx = index_for_label(label);
  if (!idx || *idx >= labels_.size()) {
    return {nullptr, failure(PatternStatus::NotFound, "no control labelled '" + label + "' on screen")};
  }
  const AccNode* n = snapshot_.find_handle(labels_[*idx].handle);
  if (!n) return {nullptr, failure(PatternStatus::NotFound, "control '" + label + "' vanished")};
  return {n, std::nullopt};
}

PatternOps::Resolved PatternOps::resolve_with(const std::string& label, Pattern p) const {
  Resolved r = resolve(label);
  if (r.node && !r.node->patterns.count(p)) {
    r.error = failure(PatternStatus::UnsupportedPattern,
                      "'" + label + "' (" + r.node->name + ", " + r.node->control_type +
                          ") does not support the " + std::string(to_string(p)) + " pattern");
    r.node = nullptr;
  }
  return r;
}

PatternResult PatternOps::set_scrollbar_pos(const std::string& label, std::optional<double> x,
                                            std::optional<double> y) {
  Resolved r = resolve_with(label, Pattern::Scroll);
  if (r.error) return *r.error;
  if (!x && !y) return failure(PatternStatus::OutOfRange, "give at least one of x and y");
  for (auto v : {x, y}) {
    if (v && !(*v >= 0.0 && *v <= 100.0)) {
      return failure(PatternStatus::OutOfRange, "scroll positions are percentages within 0..100");
    }
  }
  try {
    const ScrollInfo before = backend_.scroll_info(r.node->handle);
    if ((x && !before.horizontal) || (y && !before.vertical)) {
      return failure(PatternStatus::UnsupportedPattern,
                     "'" + label + "' cannot scroll " + (x && !before.horizontal ? "horizontally" : "vertically"));
    }
    backend_.set_scroll(r.node->handle, x, y);
    const ScrollInfo after = backend_.scroll_info(r.node->handle);
    return success({{"label", label},
                    {"x", after.horizontal ? json(after.x) : json(nullptr)},
                    {"y", after.vertical ? json(after.y) : json(nullptr)}});
  } catch (const Error& e) {
    return from_backend(e);
  }
}

PatternResult PatternOps::select_units(const std::string& label, TextUnit unit, long start, long end) {
  Resolved r = resolve_with(label, Pattern::Text);
  if (r.error) return *r.error;
  try {
    const std::size_t count = backend_.text_unit_count(r.node->handle, unit);
    if (start < 1 || start > end || static_cast<std::size_t>(end) > count) {
      return failure(PatternStatus::OutOfRange,
                     std::string(to_string(unit)) + " range " + std::to_string(start) + ".." +
                         std::to_string(end) + " outside 1.." + std::to_string(count));
    }
    backend_.select_text(r.node->handle, unit, static_cast<std::size_t>(start),
                         static_cast<std::size_t>(end));
    return success({{"label", label},
                    {"unit", std::string(to_string(unit))},
                    {"start", start},
                    {"end", end},
                    {"count", count}});
  } catch (const Error& e) {
    return from_backend(e);
  }
}

PatternResult PatternOps::select_lines(const std::string& label, long start, long end) {
  return select_units(label, TextUnit::Line, start, end);
}

PatternResult PatternOps::select_paragraphs(const std::string& label, long start, long end) {
  return select_units(label, TextUnit::Paragraph, start, end);
}

PatternResult PatternOps::select_controls(const std::vector<std::string>& labels) {
  if (labels.empty()) return failure(PatternStatus::NotFound, "no controls given");
  std::vector<std::string> handles, offending;
  for (const auto& l : labels) {
    Resolved r = resolve_with(l, Pattern::Select);
    if (r.error) {
      if (r.error->status != PatternStatus::UnsupportedPattern) return *r.error;
      offending.push_back(l);
      continue;
    }
    handles.push_back(r.node->handle);
  }
  if (!offending.empty()) {
    std::string list;
    for (const auto& l : offending) list += (list.empty() ? "" : ", ") + l;
    return failure(PatternStatus::UnsupportedPattern, "no Select pattern on: " + list);
  }
  try {
    backend_.select_controls(handles);
  } catch (const Error& e) {
    return from_backend(e);
  }
  return success({{"selected", labels}});
}

PatternResult PatternOps::get_texts(TextMode mode, const std::vector<std::string>& targets) {
  if (mode == TextMode::Active) {
    if (targets.empty()) return failure(PatternStatus::NotFound, "active mode needs target labels");
    std::vector<const AccNode*> nodes;
    for (const auto& l : targets) {
      Resolved r = resolve(l);
      if (r.error) return *r.error;
      if (!r.node->patterns.count(Pattern::Text) && !r.node->patterns.count(Pattern::Value)) {
        return failure(PatternStatus::UnsupportedPattern, "'" + l + "' exposes no text");
      }
      nodes.push_back(r.node);
    }
    json items = json::array();
    try {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        items.push_back({{"label", targets[i]},
                         {"name", nodes[i]->name},
                         {"value", backend_.read_text(nodes[i]->handle, true)}});
      }
    } catch (const Error& e) {
      return from_backend(e);
    }
    return success({{"mode", "active"}, {"items", items}});
  }

  struct Item {
    std::string label, name, value;
  };
  std::vector<Item> cells;
  try {
    for (const auto& l : labels_) {
      if (l.control_type != "DataItem") continue;
      const AccNode* n = snapshot_.find_handle(l.handle);
      if (!n->patterns.count(Pattern::Text) && !n->patterns.count(Pattern::Value)) continue;
      cells.push_back({l.label, l.name, backend_.read_text(l.handle, false)});
    }
  } catch (const Error& e) {
    return from_backend(e);
  }
  json items = json::array();
  std::string text;
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j < cells.size() && cells[j].value.empty()) ++j;
    if (j - i >= 2) {
      const std::string summary = "rows " + std::to_string(i + 1) + "–" + std::to_string(j) + ": empty";
      json labels = json::array();
      for (std::size_t k = i; k < j; ++k) labels.push_back(cells[k].label);
      items.push_back({{"rows", {i + 1, j}}, {"labels", labels}, {"summary", summary}});
      text += summary + "\n";
      i = j;
      continue;
    }
    const Item& c = cells[i];
    const bool truncated = code_point_count(c.value) > cfg_.passive_limit;
    const std::string shown = truncated ? utf8_prefix(c.value, cfg_.passive_limit) + cfg_.truncation_marker : c.value;
    items.push_back({{"row", i + 1}, {"label", c.label}, {"name", c.name}, {"value", shown}, {"truncated", truncated}});
    text += c.label + " " + c.name + ": " + shown + "\n";
    ++i;
  }
  return success({{"mode", "passive"}, {"items", items}, {"text", text}});
}

PatternResult PatternOps::set_toggle_state(const std::vector<std::string>& labels, bool on) {
  std::vector<std::string> handles;
  for (const auto& l : labels) {
    Resolved r = resolve_with(l, Pattern::Toggle);
    if (r.error) return *r.error;
    handles.push_back(r.node->handle);
  }
  try {
    for (const auto& h : handles) backend_.set_toggle(h, on);
  } catch (const Error& e) {
    return from_backend(e);
  }
  return success({{"labels", labels}, {"state", on}});
}

PatternResult PatternOps::set_expanded(const std::vector<std::string>& labels, bool expanded) {
  std::vector<std::string> handles;
  for (const auto& l : labels) {
    Resolved r = resolve_with(l, Pattern::ExpandCollapse);
    if (r.error) return *r.error;
    handles.push_back(r.node->handle);
  }
  try {
    for (const auto& h : handles) backend_.set_expanded(h, expanded);
  } catch (const Error& e) {
    return from_backend(e);
  }
  return success({{"labels", labels}, {"expanded", expanded}});
}

PatternResult PatternOps::click(const std::string& label) {
  Resolved r = resolve(label);
  if (r.error) return *r.error;
  if (!r.node->enabled) return failure(PatternStatus::Disabled, "'" + label + "' (" + r.node->name + ") is disabled");
  try {
    backend_.click(r.node->handle);
  } catch (const Error& e) {
    return from_backend(e);
  }
  return success({{"label", label}, {"clicked", r.node->name}});
}

PatternResult run_op(PatternOps& ops, const json& op) {
  if (!op.is_object() || !op.contains("op") || !op.at("op").is_string()) malformed("op must be an object with a string 'op'");
  const std::string name = op.at("op").get<std::string>();
  // Numbers are rejected as static ids rather than treated as labels.
  auto label_of = [&](const json& v) -> std::string {
    if (v.is_number()) return v.dump();
    if (!v.is_string()) malformed(name + ": targets must be labels");
    return v.get<std::string>();
  };
  auto target = [&] {
    if (!op.contains("target")) malformed(name + ": missing 'target'");
    return label_of(op.at("target"));
  };
  auto targets = [&] {
    std::vector<std::string> out;
    if (op.contains("targets")) {
      if (!op.at("targets").is_array()) malformed(name + ": 'targets' must be an array");
      for (const auto& t : op.at("targets")) out.push_back(label_of(t));
    } else if (op.contains("target")) {
      out.push_back(target());
    }
    return out;
  };
  auto number = [&](const char* key) -> std::optional<double> {
    if (!op.contains(key) || op.at(key).is_null()) return std::nullopt;
    if (!op.at(key).is_number()) malformed(name + ": '" + key + "' must be a number");
    return op.at(key).get<double>();
  };
  auto integer = [&](const char* key) -> long {
    if (!op.contains(key) || !op.at(key).is_number_integer()) malformed(name + ": '" + key + "' must be an integer");
    return op.at(key).get<long>();
  };
  auto flag = [&](const char* key) -> bool {
    if (!op.contains(key) || !op.at(key).is_boolean()) malformed(name + ": '" + key + "' must be a boolean");
    return op.at(key).get<bool>();
  };

  if (name == "set_scrollbar_pos") return ops.set_scrollbar_pos(target(), number("x"), number("y"));
  if (name == "select_lines") return ops.select_lines(target(), integer("start"), integer("end"));
  if (name == "select_paragraphs") return ops.select_paragraphs(target(), integer("start"), integer("end"));
  if (name == "select_controls") return ops.select_controls(targets());
  if (name == "get_texts") {
    const std::string mode = op.value("mode", "passive");
    if (mode != "passive" && mode != "active") malformed("get_texts: mode must be passive or active");
    return ops.get_texts(mode == "active" ? TextMode::Active : TextMode::Passive, targets());
  }
  if (name == "set_toggle_state") return ops.set_toggle_state(targets(), flag("state"));
  if (name == "set_expanded") return ops.set_expanded(targets(), flag("expanded"));
  if (name == "click") return ops.click(target());
  malformed("unknown op '" + name + "'");
}

}  // namespace goi
