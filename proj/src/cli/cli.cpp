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

#include "goi/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "goi/compiler.hpp"
#include "goi/error.hpp"
#include "goi/ripper.hpp"
#include "goi/script.hpp"
#include "goi/sim.hpp"
#include "goi/topo_text.hpp"

namespace goi {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "NotFound", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("io", "MalformedJson", "'" + path + "': " + e.what());
  }
}

// Writes through a sibling temp file and a rename; "-" means stdout.
void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("io", "WriteFailed", "cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw Error("io", "WriteFailed", "cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("io", "WriteFailed", "cannot replace '" + path + "'");
  }
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t parse_threshold(const std::string& s) {
  if (s == "inf" || s == "never") return CompilerConfig::kNeverExternalize;
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw Error("cli", "BadArgument", "--threshold expects a non-negative integer or 'inf'");
  }
  return v;
}

std::vector<DisplayId> parse_ids(const std::string& s) {
  std::vector<DisplayId> ids;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    DisplayId id = 0;
    auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
    if (item.empty() || ec != std::errc() || end != item.data() + item.size()) {
      throw Error("cli", "BadArgument", "--expand expects comma-separated ids or -1");
    }
    ids.push_back(id);
  }
  if (ids.empty()) throw Error("cli", "BadArgument", "--expand expects at least one id");
  return ids;
}

NavForest load_forest(const std::string& path) {
  return nav_forest_from_json(read_json(path));
}

ScriptReport run_script_files(const std::string& forest_path, const std::string& app_path,
                              const std::string& script_path, SimSession** session_out,
                              std::unique_ptr<SimSession>& holder) {
  const NavForest forest = load_forest(forest_path);
  holder = std::make_unique<SimSession>(load_app(read_json(app_path)));
  if (session_out) *session_out = holder.get();
  const auto turns = parse_script(read_json(script_path));
  return run_script(turns, forest, *holder);
}

std::string failure_summary(const ScriptReport& r) {
  if (r.turns.empty()) return "script did not run";
  const TurnReport& t = r.turns.back();
  std::string msg = "turn " + std::to_string(t.index) + " failed";
  if (t.visit) {
    for (const auto& o : t.visit->outcomes) {
      if (o.error_code) return msg + ": " + *o.error_code + ": " + o.error_message;
    }
  }
  for (const auto& o : t.ops) {
    if (!o.ok()) return msg + ": " + std::string(to_string(o.status)) + ": " + o.message;
  }
  return msg;
}

void report_error(std::ostream& err, const std::string& code, const std::string& message,
                  const json& details = nullptr) {
  json e{{"code", code}, {"message", message}};
  if (!details.is_null()) e["details"] = details;
  err << json{{"error", e}}.dump() << "\n";
}

}  // namespace

json ReplayMetrics::to_json() const {
  return {{"schema", kSchemaVersion},
          {"kind", "replay_metrics"},
          {"turns", turns},
          {"backend_actions", backend_actions},
          {"success", success},
          {"assertions", assertion_report},
          {"script_report", script_report}};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rip, compile, serialize and drive GUI navigation topologies", "goi"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print tool and schema versions");

  std::string rip_app, rip_config, rip_out = "-";
  auto* rip_cmd = app.add_subcommand("rip", "Explore a simulated application into a navigation graph");
  rip_cmd->add_option("--app", rip_app, "Simulated application JSON")->required();
  rip_cmd->add_option("--config", rip_config, "Ripper configuration JSON");
  rip_cmd->add_option("--out", rip_out, "Graph JSON output, '-' for stdout");

  std::string compile_in, compile_out = "-", compile_threshold = "20";
  auto* compile_cmd = app.add_subcommand("compile", "Compile a graph into a navigation forest");
  compile_cmd->add_option("--in", compile_in, "Graph JSON")->required();
  compile_cmd->add_option("--out", compile_out, "Forest JSON output, '-' for stdout");
  compile_cmd->add_option("--threshold", compile_threshold, "Externalization threshold, or 'inf'");

  std::string ser_forest, ser_expand, ser_out = "-";
  bool ser_core = false;
  auto* ser_cmd = app.add_subcommand("serialize", "Render a forest as topology text");
  ser_cmd->add_option("--forest", ser_forest, "Forest JSON")->required();
  auto* core_flag = ser_cmd->add_flag("--core", ser_core, "Depth-limited core view");
  ser_cmd->add_option("--expand", ser_expand, "Comma-separated ids to expand, or -1")->excludes(core_flag);
  ser_cmd->add_option("--out", ser_out, "Text output, '-' for stdout");

  std::string exec_forest, exec_app, exec_script, exec_report = "-";
  auto* exec_cmd = app.add_subcommand("exec", "Run a script of turns against a simulated application");
  exec_cmd->add_option("--forest", exec_forest, "Forest JSON")->required();
  exec_cmd->add_option("--app", exec_app, "Simulated application JSON")->required();
  exec_cmd->add_option("--script", exec_script, "Script JSON")->required();
  exec_cmd->add_option("--report", exec_report, "Report JSON output, '-' for stdout");

  std::string rp_forest, rp_app, rp_script, rp_assert, rp_metrics = "-";
  auto* replay_cmd = app.add_subcommand("replay", "Run a script, check assertions and emit metrics");
  replay_cmd->add_option("--forest", rp_forest, "Forest JSON")->required();
  replay_cmd->add_option("--app", rp_app, "Simulated application JSON")->required();
  replay_cmd->add_option("--script", rp_script, "Script JSON")->required();
  replay_cmd->add_option("--assert", rp_assert, "Assertions JSON");
  replay_cmd->add_option("--metrics", rp_metrics, "Metrics JSON output, '-' for stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "cli.BadArgument", e.what());
    return 1;
  }

  try {
    if (show_version) {
      out << "goi " << kToolVersion << "\n"
          << "schemas: nav_graph=" << kSchemaVersion << " nav_forest=" << kSchemaVersion
          << " sim_app=" << kSimSchemaVersion << " ripper_config=" << kSchemaVersion
          << " script=" << kSchemaVersion << " execution_report=" << kSchemaVersion
          << " script_report=" << kSchemaVersion << " assertion_report=1"
          << " replay_metrics=" << kSchemaVersion << "\n";
      return 0;
    }
    if (*rip_cmd) {
      const RipperConfig cfg = rip_config.empty() ? RipperConfig{} : ripper_config_from_json(read_json(rip_config));
      SimSession session = load_app(read_json(rip_app));
      const RipResult r = cfg.contexts.empty() ? rip(session, cfg) : rip_with_contexts(session, cfg);
      for (const auto& w : r.warnings) {
        err << json{{"warning", {{"code", "ripper." + w.code}, {"message", w.message}}}}.dump() << "\n";
      }
      write_output(rip_out, json_text(to_json(r.graph)), out);
      return 0;
    }
    if (*compile_cmd) {
      CompilerConfig cfg;
      cfg.externalization_threshold = parse_threshold(compile_threshold);
      const NavGraph g = nav_graph_from_json(read_json(compile_in));
      const ValidationReport v = validate_graph(g);
      if (!v.ok()) {
        std::string msg;
        for (const auto& i : v.issues) {
          if (i.severity == Severity::Error) msg += (msg.empty() ? "" : "; ") + i.kind + ": " + i.message;
        }
        throw Error("nav", "InvalidGraph", msg);
      }
      const NavGraph dag = decycle(g);
      const NavForest forest = externalize(dag, cfg);
      const VerificationReport check = verify_forest(dag, forest);
      if (!check.ok) {
        report_error(err, "compiler.VerificationFailed", check.to_text(), check.to_json());
        return 1;
      }
      write_output(compile_out, json_text(to_json(forest)), out);
      return 0;
    }
    if (*ser_cmd) {
      const NavForest forest = load_forest(ser_forest);
      std::string text;
      if (ser_core) {
        text = extract_core(forest);
      } else if (!ser_expand.empty()) {
        text = expand_query(forest, parse_ids(ser_expand));
      } else {
        text = serialize(forest);
      }
      write_output(ser_out, text, out);
      return 0;
    }
    if (*exec_cmd) {
      std::unique_ptr<SimSession> holder;
      const ScriptReport r = run_script_files(exec_forest, exec_app, exec_script, nullptr, holder);
      write_output(exec_report, json_text(r.to_json()), out);
      if (!r.success()) {
        report_error(err, "script.TurnFailed", failure_summary(r));
        return 1;
      }
      return 0;
    }
    if (*replay_cmd) {
      std::unique_ptr<SimSession> holder;
      SimSession* session = nullptr;
      const ScriptReport r = run_script_files(rp_forest, rp_app, rp_script, &session, holder);
      ReplayMetrics m;
      m.turns = r.turns.size();
      m.backend_actions = r.backend_actions;
      m.script_report = r.to_json();
      bool asserted = true;
      if (!rp_assert.empty()) {
        const AssertionReport a = assert_state(*session, read_json(rp_assert));
        m.assertion_report = a.to_json();
        asserted = a.passed();
      }
      m.success = r.success() && asserted;
      write_output(rp_metrics, json_text(m.to_json()), out);
      if (!m.success) {
        if (!r.success()) {
          report_error(err, "script.TurnFailed", failure_summary(r));
        } else {
          report_error(err, "sim.AssertionFailed", "final state assertions failed", m.assertion_report);
        }
        return 1;
      }
      return 0;
    }
    out << app.help();
    return 0;
  } catch (const VisitError& e) {
    report_error(err, e.qualified_code(), e.what(), e.details());
  } catch (const Error& e) {
    report_error(err, e.qualified_code(), e.what());
  } catch (const json::exception& e) {
    report_error(err, "io.MalformedJson", e.what());
  } catch (const std::exception& e) {
    report_error(err, "internal.Unexpected", e.what());
  }
  return 1;
}

}  // namespace goi
