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
#include <cmath>

#include "goi/sim.hpp"

namespace goi {
namespace {

using nlohmann::json;

struct Check {
  Verdict verdict;
  std::string detail;
};

Check pass_if(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }
Check unknown(std::string detail) { return {Verdict::Unknown, std::move(detail)}; }

std::optional<std::string> str(const json& a, const char* key) {
  if (!a.contains(key) || !a.at(key).is_string()) return std::nullopt;
  return a.at(key).get<std::string>();
}

Check evaluate(const SimSession& s, const json& a) {
  if (!a.is_object() || !str(a, "type")) return unknown("assertion needs a string 'type'");
  const std::string type = *str(a, "type");
  const SimState& st = s.state();

  auto control = [&](const char* key = "control") -> const SimControlSpec* {
    auto k = str(a, key);
    return k ? s.control_spec(*k) : nullptr;
  };

  if (type == "clicked") {
    const SimControlSpec* c = control();
    if (!c) return unknown("unknown control");
    const int min = a.value("min", 1);
    const int clicks = st.controls.at(c->key).clicks;
    return pass_if(clicks >= min, c->key + " clicked " + std::to_string(clicks) + " time(s)");
  }
  if (type == "var_equals") {
    auto var = str(a, "var");
    auto want = str(a, "value");
    if (!var || !want) return unknown("var_equals needs 'var' and 'value'");
    auto it = st.vars.find(*var);
    if (it == st.vars.end()) return unknown("variable '" + *var + "' is not defined");
    return pass_if(it->second == *want, *var + " = '" + it->second + "'");
  }
  if (type == "value_equals") {
    const SimControlSpec* c = control();
    auto want = str(a, "value");
    if (!c || !want) return unknown("unknown control");
    const std::string& have = st.controls.at(c->key).text;
    return pass_if(have == *want, c->key + " = '" + have + "'");
  }
  if (type == "committed") {
    const SimControlSpec* c = control();
    if (!c) return unknown("unknown control");
    return pass_if(st.controls.at(c->key).committed, c->key + " committed flag");
  }
  if (type == "selection_equals") {
    const SimControlSpec* c = control();
    if (!c) return unknown("unknown control");
    const auto& sel = st.controls.at(c->key).selection;
    if (!sel) return pass_if(false, c->key + " has no text selection");
    const std::string unit = a.value("unit", "line");
    const bool ok = std::string(to_string(sel->unit)) == unit &&
                    sel->start == a.value("start", std::size_t{0}) &&
                    sel->end == a.value("end", std::size_t{0});
    return pass_if(ok, c->key + " selection " + std::string(to_string(sel->unit)) + " " +
                           std::to_string(sel->start) + ".." + std::to_string(sel->end));
  }
  if (type == "selected") {
    if (!a.contains("controls") || !a.at("controls").is_array()) return unknown("needs 'controls'");
    std::string detail;
    bool ok = true;
    for (const auto& k : a.at("controls")) {
      if (!k.is_string() || !s.control_spec(k.get<std::string>())) return unknown("unknown control");
      const bool sel = st.controls.at(k.get<std::string>()).selected;
      ok = ok && sel;
      detail += k.get<std::string>() + (sel ? "=selected " : "=unselected ");
    }
    return pass_if(ok, detail);
  }
  if (type == "scroll_within") {
    const SimControlSpec* c = control();
    if (!c) return unknown("unknown control");
    const double eps = a.value("epsilon", 0.5);
    const auto& cs = st.controls.at(c->key);
    bool ok = true;
    if (a.contains("x")) ok = ok && std::fabs(cs.scroll_x - a.at("x").get<double>()) <= eps;
    if (a.contains("y")) ok = ok && std::fabs(cs.scroll_y - a.at("y").get<double>()) <= eps;
    return pass_if(ok, c->key + " at x=" + std::to_string(cs.scroll_x) +
                           " y=" + std::to_string(cs.scroll_y));
  }
  if (type == "window_closed" || type == "window_open") {
    auto w = str(a, "window");
    const bool known = w && std::any_of(s.spec().windows.begin(), s.spec().windows.end(),
                                        [&](const SimWindowSpec& x) { return x.id == *w; });
    if (!known) return unknown("unknown window");
    const bool open = std::find(st.open_windows.begin(), st.open_windows.end(), *w) !=
                      st.open_windows.end();
    return pass_if(open == (type == "window_open"), *w + (open ? " is open" : " is closed"));
  }
  if (type == "toggled") {
    const SimControlSpec* c = control();
    if (!c) return unknown("unknown control");
    const bool want = a.value("value", true);
    return pass_if(st.controls.at(c->key).toggled == want, c->key + " toggle state");
  }
  return unknown("unsupported assertion type '" + type + "'");
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::size_t AssertionReport::count(Verdict v) const {
  return std::count_if(results.begin(), results.end(),
                       [v](const AssertionResult& r) { return r.verdict == v; });
}

bool AssertionReport::passed() const {
  return count(Verdict::Fail) == 0 && count(Verdict::Unknown) == 0;
}

nlohmann::json AssertionReport::to_json() const {
  json items = json::array();
  for (const auto& r : results) {
    items.push_back({{"index", r.index},
                     {"type", r.type},
                     {"verdict", std::string(goi::to_string(r.verdict))},
                     {"detail", r.detail}});
  }
  return {{"schema", 1},
          {"kind", "assertion_report"},
          {"passed", passed()},
          {"pass", count(Verdict::Pass)},
          {"fail", count(Verdict::Fail)},
          {"unknown", count(Verdict::Unknown)},
          {"results", items}};
}

AssertionReport assert_state(const SimSession& session, const json& assertions) {
  const json* list = &assertions;
  if (assertions.is_object() && assertions.contains("assertions")) list = &assertions.at("assertions");
  AssertionReport report;
  if (!list->is_array()) {
    report.results.push_back({0, "", Verdict::Unknown, "assertions must be an array"});
    return report;
  }
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& a = list->at(i);
    Check c = evaluate(session, a);
    report.results.push_back({i, a.is_object() ? a.value("type", "") : "", c.verdict, c.detail});
  }
  return report;
}

}  // namespace goi
