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

#include "goi/visit.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <set>

#include "goi/utf8.hpp"

namespace goi {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(std::size_t index, const std::string& reason) {
  throw VisitError("MalformedCommand", "command " + std::to_string(index) + ": " + reason,
                   json{{"index", index}, {"reason", reason}});
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::optional<DisplayId> parse_id(const json& v) {
  if (v.is_number_integer()) return v.get<DisplayId>();
  if (!v.is_string()) return std::nullopt;
  const std::string s = v.get<std::string>();
  DisplayId id = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return id;
}

std::vector<DisplayId> parse_id_list(const json& v, std::size_t index, const char* field) {
  if (!v.is_array()) malformed(index, std::string("'") + field + "' must be an array");
  std::vector<DisplayId> out;
  for (const auto& e : v) {
    auto id = parse_id(e);
    if (!id) malformed(index, std::string("'") + field + "' holds a non-integer id");
    out.push_back(*id);
  }
  return out;
}

VisitCommand parse_one(const json& j, std::size_t index) {
  if (!j.is_object()) malformed(index, "command must be an object");
  auto only = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        malformed(index, "unknown key '" + k + "'");
      }
    }
  };
  VisitCommand c;
  if (j.contains("further_query")) {
    only({"further_query"});
    c.kind = CommandKind::FurtherQuery;
    c.node_ids = parse_id_list(j.at("further_query"), index, "further_query");
    if (c.node_ids.empty()) malformed(index, "'further_query' must not be empty");
    return c;
  }
  if (j.contains("shortcut_key")) {
    only({"shortcut_key"});
    if (!j.at("shortcut_key").is_string()) malformed(index, "'shortcut_key' must be a string");
    auto key = normalize_key_combination(j.at("shortcut_key").get<std::string>());
    if (!key) malformed(index, "unsupported key combination '" + j.at("shortcut_key").get<std::string>() + "'");
    c.kind = CommandKind::Shortcut;
    c.key_combination = *key;
    return c;
  }
  if (j.contains("id")) {
    only({"id", "entry_ref_id", "text"});
    auto id = parse_id(j.at("id"));
    if (!id || *id < 0) malformed(index, "'id' must be a non-negative integer");
    c.id = *id;
    if (j.contains("entry_ref_id")) c.entry_refs = parse_id_list(j.at("entry_ref_id"), index, "entry_ref_id");
    c.kind = CommandKind::Access;
    if (j.contains("text")) {
      if (!j.at("text").is_string()) malformed(index, "'text' must be a string");
      c.kind = CommandKind::AccessInput;
      c.text = j.at("text").get<std::string>();
    }
    return c;
  }
  malformed(index, "expected one of 'id', 'shortcut_key', 'further_query'");
}

std::size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

bool is_window(const AccNode& n) { return n.control_type == kWindowType; }

std::vector<const AccNode*> controls_in(const AccTreeSnapshot& snap, const std::string& window) {
  std::vector<const AccNode*> out;
  for (const auto& n : snap.nodes) {
    if (n.window == window && !is_window(n)) out.push_back(&n);
  }
  return out;
}

struct Match {
  std::size_t step;
  const AccNode* node;
  bool fuzzy;
};

// Deepest step at or after `from` that is visible among `cands`.
std::optional<Match> deepest(const NavPath& path, const std::vector<const AccNode*>& cands,
                             const MatchPolicy& policy, std::size_t from) {
  for (std::size_t k = path.steps.size(); k-- > from;) {
    const ControlIdentifier& want = path.steps[k];
    for (const AccNode* n : cands) {
      if (n->identifier == want) return Match{k, n, false};
    }
    const AccNode* best = nullptr;
    double best_score = -1.0;
    for (const AccNode* n : cands) {
      const double s = match_score(want, n->identifier, policy);
      if (s >= policy.name_similarity_threshold && s > best_score) {
        best = n;
        best_score = s;
      }
    }
    if (best) return Match{k, best, true};
  }
  return std::nullopt;
}

json nearest_candidates(const ControlIdentifier& want, const std::vector<const AccNode*>& cands,
                        const MatchPolicy& policy) {
  struct Scored {
    double score;
    std::size_t order;
    const AccNode* node;
  };
  std::vector<Scored> scored;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const double s = policy.name_weight * name_similarity(want.primary_id, cands[i]->identifier.primary_id) +
                     policy.ancestor_weight *
                         ancestor_similarity(want.ancestor_path, cands[i]->identifier.ancestor_path);
    scored.push_back({cands[i]->control_type == want.control_type ? s : s / 2, i, cands[i]});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.score > b.score; });
  json out = json::array();
  for (std::size_t i = 0; i < scored.size() && i < 3; ++i) {
    const AccNode& n = *scored[i].node;
    out.push_back({{"name", n.name},
                   {"control_type", n.control_type},
                   {"identifier", n.identifier.to_string()},
                   {"enabled", n.enabled},
                   {"score", std::round(scored[i].score * 1000.0) / 1000.0}});
  }
  return out;
}

std::string window_title(const AccTreeSnapshot& snap, const std::string& handle) {
  for (const auto& w : snap.windows) {
    if (w.handle == handle) return w.title;
  }
  return handle;
}

json control_state(const AccNode& n, const AccTreeSnapshot& snap) {
  return {{"name", n.name},
          {"control_type", n.control_type},
          {"identifier", n.identifier.to_string()},
          {"enabled", n.enabled},
          {"selected", n.selected},
          {"window", window_title(snap, n.window)}};
}

[[noreturn]] void disabled(const AccNode& n, const AccTreeSnapshot& snap) {
  throw VisitError("DisabledControl",
                   "control '" + n.name + "' (" + n.control_type + ") was located in window '" +
                       window_title(snap, n.window) + "' but is disabled",
                   control_state(n, snap));
}

bool window_open(const AccTreeSnapshot& snap, const std::string& handle) {
  return std::any_of(snap.windows.begin(), snap.windows.end(),
                     [&](const WindowInfo& w) { return w.handle == handle; });
}

// Dismisses the topmost window: OK, then Close, then the window's own close
// affordance, then Cancel.
void close_top(UiBackend& backend, const AccTreeSnapshot& snap, const WindowInfo& win,
               NavOutcome& out) {
  std::vector<std::string> tried;
  auto button = [&](const char* name) -> const AccNode* {
    for (const AccNode* n : controls_in(snap, win.handle)) {
      if (upper(n->name) == upper(name) && n->enabled) return n;
    }
    return nullptr;
  };
  auto closed = [&] { return !window_open(backend.snapshot(), win.handle); };
  auto attempt = [&](const std::string& label, auto&& action) {
    tried.push_back(label);
    try {
      action();
    } catch (const Error&) {
      return false;
    }
    return closed();
  };
  for (const char* name : {"OK", "Close"}) {
    if (const AccNode* b = button(name)) {
      if (attempt(name, [&] { backend.click(b->handle); })) {
        ++out.closes;
        out.notes.push_back("closed window '" + win.title + "' via " + name);
        return;
      }
    }
  }
  if (win.closable && attempt("window close", [&] { backend.close_window(win.handle); })) {
    ++out.closes;
    out.notes.push_back("closed window '" + win.title + "' via its close affordance");
    return;
  }
  if (const AccNode* b = button("Cancel")) {
    if (attempt("Cancel", [&] { backend.click(b->handle); })) {
      ++out.closes;
      out.notes.push_back("closed window '" + win.title + "' via Cancel");
      return;
    }
  }
  throw VisitError("WindowCloseFailed",
                   "window '" + win.title + "' holds no control on the path and could not be closed",
                   json{{"window", win.title}, {"modal", win.modal}, {"closable", win.closable},
                        {"tried", tried}});
}

const std::set<std::string>& named_keys() {
  static const std::set<std::string> keys{
      "ENTER", "ESC", "ESCAPE", "TAB", "SPACE", "BACKSPACE", "DELETE", "INSERT", "HOME", "END",
      "PAGEUP", "PAGEDOWN", "UP", "DOWN", "LEFT", "RIGHT"};
  return keys;
}

}  // namespace

std::string_view to_string(CommandKind k) {
  switch (k) {
    case CommandKind::Access: return "access";
    case CommandKind::AccessInput: return "access_input";
    case CommandKind::Shortcut: return "shortcut";
    case CommandKind::FurtherQuery: return "further_query";
  }
  return "access";
}

std::string_view to_string(CommandStatus s) {
  switch (s) {
    case CommandStatus::Executed: return "Executed";
    case CommandStatus::FilteredOut: return "FilteredOut";
    case CommandStatus::Failed: return "Failed";
    case CommandStatus::NotAttempted: return "NotAttempted";
  }
  return "NotAttempted";
}

json VisitCommand::to_json() const {
  auto ids = [](const std::vector<DisplayId>& v) {
    json a = json::array();
    for (DisplayId d : v) a.push_back(std::to_string(d));
    return a;
  };
  switch (kind) {
    case CommandKind::FurtherQuery: return {{"further_query", ids(node_ids)}};
    case CommandKind::Shortcut: return {{"shortcut_key", key_combination}};
    case CommandKind::Access:
    case CommandKind::AccessInput: {
      json j{{"id", std::to_string(id)}};
      if (!entry_refs.empty()) j["entry_ref_id"] = ids(entry_refs);
      if (kind == CommandKind::AccessInput) j["text"] = text;
      return j;
    }
  }
  return {};
}

std::optional<std::string> normalize_key_combination(std::string_view s) {
  static const std::set<std::string> modifiers{"CTRL", "ALT", "SHIFT", "WIN"};
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t plus = s.find('+', start);
    std::string part = upper(s.substr(start, plus == std::string_view::npos ? s.npos : plus - start));
    part.erase(std::remove_if(part.begin(), part.end(), [](unsigned char c) { return std::isspace(c); }),
               part.end());
    if (part.empty()) return std::nullopt;
    parts.push_back(part);
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  const std::string& key = parts.back();
  std::set<std::string> seen;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!modifiers.count(parts[i]) || !seen.insert(parts[i]).second) return std::nullopt;
  }
  bool ok = named_keys().count(key) > 0;
  ok = ok || (key.size() == 1 && std::isalnum(static_cast<unsigned char>(key[0])));
  if (!ok && key.size() >= 2 && key[0] == 'F') {
    int n = 0;
    auto [end, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), n);
    ok = ec == std::errc() && end == key.data() + key.size() && n >= 1 && n <= 24;
  }
  if (!ok) return std::nullopt;
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "+") + p;
  return out;
}

bool is_visit_command_json(const json& j) {
  return j.is_object() && !j.contains("op") &&
         (j.contains("id") || j.contains("shortcut_key") || j.contains("further_query"));
}

std::vector<VisitCommand> parse_commands(const json& commands) {
  if (!commands.is_array()) {
    throw VisitError("MalformedCommand", "visit commands must be a JSON array", json{{"index", nullptr}});
  }
  std::vector<VisitCommand> out;
  for (std::size_t i = 0; i < commands.size(); ++i) out.push_back(parse_one(commands[i], i));
  const bool has_query = std::any_of(out.begin(), out.end(), [](const VisitCommand& c) {
    return c.kind == CommandKind::FurtherQuery;
  });
  if (has_query) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].kind != CommandKind::FurtherQuery) {
        throw VisitError("MixedFurtherQuery",
                         "further_query cannot be mixed with other commands (command " +
                             std::to_string(i) + ")",
                         json{{"index", i}});
      }
    }
  }
  return out;
}

std::vector<VisitCommand> parse_commands_text(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw VisitError("MalformedCommand", std::string("invalid JSON: ") + e.what(), json{{"index", nullptr}});
  }
  return parse_commands(j);
}

FilterResult filter_commands(const std::vector<VisitCommand>& cmds, const NavForest& forest) {
  FilterResult r;
  bool previous_dropped = false;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const VisitCommand& c = cmds[i];
    std::optional<std::string> reason;
    if ((c.kind == CommandKind::Access || c.kind == CommandKind::AccessInput) &&
        forest.contains(c.id) && !forest.is_functional(c.id)) {
      reason = "node " + std::to_string(c.id) + " is navigational, not a topology leaf";
    } else if (c.kind == CommandKind::Shortcut && previous_dropped) {
      reason = "shortcut follows a filtered command";
    }
    previous_dropped = reason.has_value();
    if (reason) {
      r.dropped.push_back({i, *reason});
    } else {
      r.kept.push_back(c);
      r.kept_indices.push_back(i);
    }
  }
  return r;
}

void MatchPolicy::validate() const {
  auto bad = [](const std::string& m) { throw VisitError("InvalidPolicy", m); };
  if (!(name_similarity_threshold >= 0.0 && name_similarity_threshold <= 1.0)) {
    bad("name_similarity_threshold must lie in [0, 1]");
  }
  if (name_weight < 0.0 || ancestor_weight < 0.0) bad("weights must be non-negative");
  if (std::fabs(name_weight + ancestor_weight - 1.0) > 1e-9) bad("weights must sum to 1");
  if (max_retries < 0) bad("max_retries must be non-negative");
  if (retry_wait_ticks < 0) bad("retry_wait_ticks must be non-negative");
}

double name_similarity(std::string_view a, std::string_view b) {
  const std::u32string x = decode_utf8(a), y = decode_utf8(b);
  const std::size_t longest = std::max(x.size(), y.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(x, y)) / static_cast<double>(longest);
}

double ancestor_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  std::vector<std::vector<std::size_t>> lcs(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      lcs[i][j] = a[i - 1] == b[j - 1] ? lcs[i - 1][j - 1] + 1 : std::max(lcs[i - 1][j], lcs[i][j - 1]);
    }
  }
  return static_cast<double>(lcs[a.size()][b.size()]) / static_cast<double>(longest);
}

double match_score(const ControlIdentifier& expected, const ControlIdentifier& candidate,
                   const MatchPolicy& policy) {
  if (expected.control_type != candidate.control_type) return 0.0;
  return policy.name_weight * name_similarity(expected.primary_id, candidate.primary_id) +
         policy.ancestor_weight * ancestor_similarity(expected.ancestor_path, candidate.ancestor_path);
}

std::optional<ControlNode> fuzzy_match(const ControlIdentifier& expected,
                                       const std::vector<ControlNode>& candidates,
                                       const MatchPolicy& policy) {
  const ControlNode* best = nullptr;
  double best_score = -1.0;
  for (const auto& c : candidates) {
    const double s = match_score(expected, c.identifier, policy);
    if (s >= policy.name_similarity_threshold && s > best_score) {
      best = &c;
      best_score = s;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

NavOutcome navigate_path(const NavPath& path, UiBackend& backend, const MatchPolicy& policy) {
  policy.validate();
  if (path.steps.empty()) throw VisitError("ControlNotFound", "empty navigation path");
  NavOutcome out;
  const std::size_t n = path.steps.size();
  std::size_t next = 0;  // first step not yet reached
  bool clicked = false;  // whether we are waiting for the effect of a click
  int hop_retries = 0;
  std::size_t hop_fetches = 0;
  const std::size_t guard = 64 + n * (policy.max_retries + 2) * 4;

  for (std::size_t iter = 0; iter < guard; ++iter) {
    const AccTreeSnapshot snap = backend.snapshot();
    ++out.fetches;
    out.max_fetches_per_hop = std::max(out.max_fetches_per_hop, ++hop_fetches);
    if (snap.windows.empty()) throw VisitError("ControlNotFound", "backend reports no open window");
    const WindowInfo& top = snap.windows.back();
    const auto cands = controls_in(snap, top.handle);
    const auto m = deepest(path, cands, policy, next);

    if (m) {
      for (std::size_t w = 0; w + 1 < snap.windows.size(); ++w) {
        const auto other = deepest(path, controls_in(snap, snap.windows[w].handle), policy, m->step + 1);
        if (other) {
          out.notes.push_back("window '" + snap.windows[w].title + "' also shows path step " +
                              std::to_string(other->step + 1) + "; using topmost window '" +
                              top.title + "'");
        }
      }
      out.fuzzy = out.fuzzy || m->fuzzy;
      if (m->fuzzy) {
        out.notes.push_back("matched '" + path.steps[m->step].to_string() + "' approximately to '" +
                            m->node->identifier.to_string() + "'");
      }
      if (m->step + 1 == n) {
        out.target = *m->node;
        return out;
      }
      if (!m->node->enabled) disabled(*m->node, snap);
      backend.click(m->node->handle);
      ++out.clicks;
      next = m->step + 1;
      clicked = true;
      hop_retries = 0;
      hop_fetches = 0;
      continue;
    }

    const bool main_on_top = snap.windows.size() == 1;
    if (clicked || main_on_top) {
      if (hop_retries < policy.max_retries) {
        backend.wait(policy.retry_wait_ticks);
        ++hop_retries;
        ++out.retries;
        continue;
      }
      const ControlIdentifier& want = path.steps[next];
      throw VisitError(
          "ControlNotFound",
          "expected control '" + want.to_string() + "' not found in window '" + top.title +
              "' after " + std::to_string(policy.max_retries) + " retries",
          json{{"expected", want.to_string()},
               {"target", path.steps.back().to_string()},
               {"step", next},
               {"window", top.title},
               {"retries", out.retries},
               {"nearest_candidates", nearest_candidates(want, cands, policy)}});
    }
    close_top(backend, snap, top, out);
    hop_fetches = 0;
  }
  throw VisitError("ControlNotFound", "navigation did not converge toward '" +
                                          path.steps.back().to_string() + "'");
}

bool ExecutionReport::success() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const CommandOutcome& o) {
    return o.status == CommandStatus::Executed || o.status == CommandStatus::FilteredOut;
  });
}

json ExecutionReport::to_json() const {
  json items = json::array();
  for (const auto& o : outcomes) {
    json j{{"index", o.index},
           {"kind", std::string(to_string(o.kind))},
           {"status", std::string(to_string(o.status))},
           {"clicks", o.clicks},
           {"retries", o.retries}};
    if (!o.reason.empty()) j["reason"] = o.reason;
    if (o.error_code) {
      j["error"] = {{"code", *o.error_code},
                    {"message", o.error_message},
                    {"details", o.error_details.is_null() ? json::object() : o.error_details}};
    }
    if (!o.notes.empty()) j["notes"] = o.notes;
    items.push_back(j);
  }
  return {{"schema", kSchemaVersion},
          {"kind", "execution_report"},
          {"success", success()},
          {"backend_actions", backend_actions},
          {"retries", retries},
          {"outcomes", items},
          {"topology", topology ? json(*topology) : json(nullptr)},
          {"final_snapshot",
           {{"tick", final_snapshot.tick},
            {"windows", final_snapshot.windows},
            {"controls", final_snapshot.controls}}}};
}

ExecutionReport execute_visit(const std::vector<VisitCommand>& cmds, const NavForest& forest,
                              UiBackend& backend, const VisitOptions& options) {
  options.policy.validate();
  ExecutionReport report;
  const std::size_t actions_before = backend.action_count();
  report.outcomes.resize(cmds.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    report.outcomes[i].index = i;
    report.outcomes[i].kind = cmds[i].kind;
  }
  auto fail = [&](CommandOutcome& o, const Error& e) {
    o.status = CommandStatus::Failed;
    o.error_code = e.qualified_code();
    o.error_message = e.what();
    if (auto* ve = dynamic_cast<const VisitError*>(&e)) o.error_details = ve->details();
  };

  const bool query = !cmds.empty() && std::all_of(cmds.begin(), cmds.end(), [](const VisitCommand& c) {
    return c.kind == CommandKind::FurtherQuery;
  });
  if (query) {
    std::vector<DisplayId> ids;
    for (const auto& c : cmds) ids.insert(ids.end(), c.node_ids.begin(), c.node_ids.end());
    try {
      report.topology = expand_query(forest, ids, options.serialization);
      for (auto& o : report.outcomes) o.status = CommandStatus::Executed;
    } catch (const Error& e) {
      for (auto& o : report.outcomes) fail(o, e);
    }
  } else {
    const FilterResult filtered = filter_commands(cmds, forest);
    for (const auto& d : filtered.dropped) {
      report.outcomes[d.index].status = CommandStatus::FilteredOut;
      report.outcomes[d.index].reason = d.reason;
    }
    bool stopped = false;
    for (std::size_t k = 0; k < filtered.kept.size() && !stopped; ++k) {
      const VisitCommand& c = filtered.kept[k];
      CommandOutcome& o = report.outcomes[filtered.kept_indices[k]];
      try {
        switch (c.kind) {
          case CommandKind::Access:
          case CommandKind::AccessInput: {
            const NavPath path = resolve_access(forest, c.id, c.entry_refs);
            NavOutcome nav;
            try {
              nav = navigate_path(path, backend, options.policy);
            } catch (const VisitError& e) {
              if (e.details().contains("retries")) o.retries = e.details().at("retries").get<std::size_t>();
              throw;
            }
            o.retries = nav.retries;
            o.clicks = nav.clicks;
            o.notes = nav.notes;
            if (!nav.target.enabled) disabled(nav.target, backend.snapshot());
            backend.click(nav.target.handle);
            ++o.clicks;
            if (c.kind == CommandKind::AccessInput) backend.input(nav.target.handle, c.text);
            break;
          }
          case CommandKind::Shortcut:
            try {
              backend.shortcut(c.key_combination);
            } catch (const Error& e) {
              throw VisitError("ShortcutFailed",
                               "shortcut " + c.key_combination + " failed: " + e.what(),
                               json{{"key_combination", c.key_combination},
                                    {"backend_code", e.qualified_code()}});
            }
            break;
          case CommandKind::FurtherQuery:
            break;
        }
        o.status = CommandStatus::Executed;
      } catch (const Error& e) {
        fail(o, e);
        stopped = true;
      }
      report.retries += o.retries;
    }
  }

  const AccTreeSnapshot snap = backend.snapshot();
  report.final_snapshot.tick = snap.tick;
  for (const auto& w : snap.windows) report.final_snapshot.windows.push_back(w.title);
  report.final_snapshot.controls = std::count_if(snap.nodes.begin(), snap.nodes.end(),
                                                 [](const AccNode& n) { return !is_window(n); });
  report.backend_actions = backend.action_count() - actions_before;
  return report;
}

}  // namespace goi
