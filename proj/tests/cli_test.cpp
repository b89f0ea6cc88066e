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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "support/fixtures.hpp"

namespace goi {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using testing::fixture_path;

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fx(const std::string& name) { return fixture_path(name).string(); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("goi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string at(const std::string& name) const { return (dir_ / name).string(); }

  // rip + compile into `stem`.graph.json / `stem`.forest.json.
  void build_forest(const std::string& app, const std::string& stem, const std::string& config = "") {
    std::vector<std::string> rip{"rip", "--app", fx(app), "--out", at(stem + ".graph.json")};
    if (!config.empty()) {
      rip.push_back("--config");
      rip.push_back(fx(config));
    }
    ASSERT_EQ(cli(rip).code, 0);
    const CliRun c = cli({"compile", "--in", at(stem + ".graph.json"), "--out", at(stem + ".forest.json")});
    ASSERT_EQ(c.code, 0) << c.err;
  }

  fs::path dir_;
};

TEST_F(CliTest, VersionListsSchemas) {
  const CliRun r = cli({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("nav_forest=1"), std::string::npos);
  EXPECT_NE(r.out.find("sim_app=1"), std::string::npos);
}

TEST_F(CliTest, DiamondPipelineHasSharedSection) {
  build_forest("diamond-lab.json", "d");
  const CliRun s = cli({"serialize", "--forest", at("d.forest.json"), "--out", at("d.txt")});
  ASSERT_EQ(s.code, 0) << s.err;
  const std::string text = slurp(at("d.txt"));
  EXPECT_NE(text.find("## shared"), std::string::npos);
  const CliRun stdout_run = cli({"serialize", "--forest", at("d.forest.json"), "--out", "-"});
  EXPECT_EQ(stdout_run.out, text);
  EXPECT_EQ(cli({"serialize", "--forest", at("d.forest.json"), "--expand", "-1"}).out, text);
  const CliRun core = cli({"serialize", "--forest", at("d.forest.json"), "--core"});
  EXPECT_EQ(core.code, 0);
  EXPECT_FALSE(core.out.empty());
}

TEST_F(CliTest, ThresholdControlsExternalization) {
  ASSERT_EQ(cli({"rip", "--app", fx("diamond-lab.json"), "--out", at("g.json")}).code, 0);
  ASSERT_EQ(cli({"compile", "--in", at("g.json"), "--out", at("inf.json"), "--threshold", "inf"}).code, 0);
  ASSERT_EQ(cli({"compile", "--in", at("g.json"), "--out", at("zero.json"), "--threshold", "0"}).code, 0);
  const json inf = json::parse(slurp(at("inf.json")));
  const json zero = json::parse(slurp(at("zero.json")));
  EXPECT_EQ(inf["trees"].size(), 1u);
  EXPECT_GT(zero["trees"].size(), 1u);
  EXPECT_EQ(cli({"compile", "--in", at("g.json"), "--threshold", "-3"}).code, 1);
}

TEST_F(CliTest, DeclarativeReplayIsOneTurnSixActions) {
  build_forest("slides-app.json", "s", "slides-app.ripper.json");
  const CliRun r = cli({"replay", "--forest", at("s.forest.json"), "--app", fx("slides-app.json"), "--script",
                     fx("slides-app.declarative.script.json"), "--assert", fx("slides-app.assert.json"),
                     "--metrics", at("m.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json m = json::parse(slurp(at("m.json")));
  EXPECT_EQ(m["kind"], "replay_metrics");
  EXPECT_EQ(m["turns"], 1);
  EXPECT_EQ(m["backend_actions"], 6);
  EXPECT_EQ(m["success"], true);
}

TEST_F(CliTest, ImperativeReplayIsSixTurns) {
  build_forest("slides-app.json", "s", "slides-app.ripper.json");
  const CliRun r = cli({"replay", "--forest", at("s.forest.json"), "--app", fx("slides-app.json"), "--script",
                     fx("slides-app.imperative.script.json"), "--assert", fx("slides-app.assert.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json m = json::parse(r.out);
  EXPECT_EQ(m["turns"], 6);
  EXPECT_EQ(m["backend_actions"], 6);
  EXPECT_EQ(m["success"], true);
}

TEST_F(CliTest, ExecWritesScriptReport) {
  build_forest("slides-app.json", "s", "slides-app.ripper.json");
  const CliRun r = cli({"exec", "--forest", at("s.forest.json"), "--app", fx("slides-app.json"), "--script",
                     fx("slides-app.declarative.script.json"), "--report", at("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(slurp(at("r.json")));
  EXPECT_EQ(rep["kind"], "script_report");
  EXPECT_EQ(rep["reports"][0]["visit"]["kind"], "execution_report");
}

TEST_F(CliTest, CorruptedInputsExitOneWithJsonError) {
  build_forest("slides-app.json", "s", "slides-app.ripper.json");
  const std::string forest = at("s.forest.json");
  const std::string app = fx("slides-app.json");
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
      {{"compile", "--in", fx("corrupt/truncated.json")}, "io.MalformedJson"},
      {{"compile", "--in", fx("corrupt/graph-dangling-edge.json")}, "nav.InvalidGraph"},
      {{"compile", "--in", fx("corrupt/graph-wrong-schema.json")}, "nav.SchemaMismatch"},
      {{"serialize", "--forest", fx("corrupt/forest-wrong-schema.json")}, "nav.SchemaMismatch"},
      {{"serialize", "--forest", fx("corrupt/forest-broken-entry-map.json")}, "nav.MalformedForest"},
      {{"serialize", "--forest", forest, "--expand", "999"}, "topo.UnknownId"},
      {{"serialize", "--forest", forest, "--expand", "7,x"}, "cli.BadArgument"},
      {{"rip", "--app", fx("corrupt/app-missing-window.json")}, "sim.SpecValidation"},
      {{"rip", "--app", app, "--config", fx("corrupt/ripper-config-unknown-key.json")}, "ripper.InvalidConfig"},
      {{"exec", "--forest", forest, "--app", app, "--script", fx("corrupt/script-mixed-turn.json")},
       "script.MixedTurn"},
      {{"exec", "--forest", forest, "--app", app, "--script", fx("corrupt/script-unknown-id.json")},
       "script.TurnFailed"},
      {{"replay", "--forest", forest, "--app", app, "--script", fx("slides-app.declarative.script.json"),
        "--assert", fx("corrupt/assert-not-array.json")},
       "sim.AssertionFailed"},
      {{"compile", "--in", at("missing.json")}, "io.NotFound"},
      {{"compile"}, "cli.BadArgument"},
      {{"frobnicate"}, "cli.BadArgument"},
  };
  for (const auto& [args, code] : cases) {
    const CliRun r = cli(args);
    EXPECT_EQ(r.code, 1) << args[0] << " " << code;
    std::string last = r.err.substr(0, r.err.find_last_not_of('\n') + 1);
    last = last.substr(last.find_last_of('\n') == std::string::npos ? 0 : last.find_last_of('\n') + 1);
    const json e = json::parse(last);
    EXPECT_EQ(e["error"]["code"], code) << r.err;
    EXPECT_FALSE(e["error"]["message"].get<std::string>().empty());
  }
}

TEST_F(CliTest, FailedRunLeavesNoPartialOutput) {
  ASSERT_EQ(cli({"compile", "--in", fx("corrupt/graph-dangling-edge.json"), "--out", at("f.json")}).code, 1);
  build_forest("diamond-lab.json", "d");
  for (const auto& e : fs::directory_iterator(dir_)) {
    EXPECT_EQ(e.path().string().find(".tmp"), std::string::npos) << e.path();
  }
  EXPECT_FALSE(fs::exists(at("f.json")));
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  for (const std::string run : {"a", "b"}) {
    build_forest("slides-app.json", run, "slides-app.ripper.json");
    ASSERT_EQ(cli({"serialize", "--forest", at(run + ".forest.json"), "--out", at(run + ".txt")}).code, 0);
    ASSERT_EQ(cli({"serialize", "--forest", at(run + ".forest.json"), "--core", "--out", at(run + ".core.txt")}).code, 0);
    ASSERT_EQ(cli({"exec", "--forest", at(run + ".forest.json"), "--app", fx("slides-app.json"), "--script",
                   fx("slides-app.declarative.script.json"), "--report", at(run + ".report.json")})
                  .code,
              0);
    ASSERT_EQ(cli({"replay", "--forest", at(run + ".forest.json"), "--app", fx("slides-app.json"), "--script",
                   fx("slides-app.imperative.script.json"), "--assert", fx("slides-app.assert.json"),
                   "--metrics", at(run + ".metrics.json")})
                  .code,
              0);
  }
  for (const std::string ext : {".graph.json", ".forest.json", ".txt", ".core.txt", ".report.json", ".metrics.json"}) {
    EXPECT_EQ(slurp(at("a" + ext)), slurp(at("b" + ext))) << ext;
  }
}

}  // namespace
}  // namespace goi
