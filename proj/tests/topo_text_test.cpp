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

#include "goi/topo_text.hpp"

#include <random>
#include <string>

#include "goi/compiler.hpp"
#include "goi/error.hpp"
#include "gtest/gtest.h"
#include "support/generators.hpp"
#include "support/graph_builder.hpp"

namespace goi {
namespace {

using testing::GraphBuilder;

CompilerConfig theta(std::uint64_t t) {
  CompilerConfig cfg;
  cfg.externalization_threshold = t;
  return cfg;
}

NavForest home_tab() {
  GraphBuilder b("Root", "Root");
  b.node("Home", "TabItem").node("Font", "Group").node("Styles", "Group");
  b.edge("Root", "Home").edge("Home", "Font").edge("Home", "Styles");
  return compile(b.graph());
}

NavForest diamond_forest(std::uint64_t t) {
  GraphBuilder b("A");
  b.node("B").node("C").node("D");
  b.edge("A", "B").edge("A", "C").edge("B", "D").edge("C", "D");
  return compile(b.graph(), theta(t));
}

NavForest chain(int length) {
  GraphBuilder b("Root", "Root");
  std::string prev = "Root";
  for (int i = 1; i <= length; ++i) {
    const std::string name = "n" + std::to_string(i);
    b.node(name, "MenuItem").edge(prev, name);
    prev = name;
  }
  return compile(b.graph());
}

NavForest font_list(int fonts) {
  GraphBuilder b("Root", "Root");
  b.node("Home", "TabItem").node("Font", "ComboBox").edge("Root", "Home").edge("Home", "Font");
  for (int i = 0; i < fonts; ++i) {
    const std::string name = "Font " + std::to_string(i);
    b.node(name, "ListItem").edge("Font", name);
  }
  return compile(b.graph());
}

TEST(Serialize, SingleButton) {
  GraphBuilder b("Root", "Root");
  b.node("New").node("Open").node("Print").node("Save");
  b.edge("Root", "New").edge("Root", "Open").edge("Root", "Print").edge("Root", "Save");
  const auto text = serialize(compile(b.graph()));
  EXPECT_NE(text.find(",Save(Button)_4]"), std::string::npos) << text;
  EXPECT_EQ(text, "Root(Root)_0[New(Button)_1,Open(Button)_2,Print(Button)_3,Save(Button)_4]\n");
}

TEST(Serialize, NodeWithTwoChildren) {
  EXPECT_EQ(serialize(home_tab()),
            "Root(Root)_0[Home(TabItem)_1[Font(Group)_2,Styles(Group)_3]]\n");
}

TEST(Serialize, SharedSectionAndEntryMap) {
  EXPECT_EQ(serialize(diamond_forest(0)),
            "A(Button)_0[B(Button)_1[D(Button)_2],C(Button)_3[D(Button)_4]]\n"
            "## shared\n"
            "D(Button)_5\n"
            "ref 2 -> subtree 5\n"
            "ref 4 -> subtree 5\n");
}

TEST(Serialize, EscapesSpecialCharacters) {
  GraphBuilder b("Root", "Root");
  b.node("Size (pt)", "ComboBox", "Pick a size, e.g. [12]_pt\nor type one")
      .node("snake_case", "ListItem")
      .edge("Root", "Size (pt)")
      .edge("Root", "snake_case");
  const auto text = serialize(compile(b.graph()));
  EXPECT_EQ(text,
            "Root(Root)_0[Size \\(pt\\)(ComboBox)(Pick a size\\, e.g. \\[12\\]\\_pt\\nor type "
            "one)_1,snake\\_case(ListItem)_2]\n");
  const auto view = parse_topology(text);
  EXPECT_EQ(view.nodes.at(1).name, "Size (pt)");
  EXPECT_EQ(view.nodes.at(1).description, "Pick a size, e.g. [12]_pt\nor type one");
  EXPECT_EQ(view.nodes.at(2).name, "snake_case");
}

TEST(Serialize, DescriptionRules) {
  const std::string long_text(100, 'x');
  GraphBuilder b("Root", "Root");
  b.node("Font", "Group", "Font settings")
      .node("Bold", "Button", long_text)
      .node("Blue", "ListItem", long_text)
      .node("Color", "Button", "Text color")
      .node("Palette", "Pane")
      .node("Color ", "ListItem")
      .edge("Root", "Font")
      .edge("Font", "Bold")
      .edge("Font", "Blue")
      .edge("Font", "Color")
      .edge("Root", "Palette");
  // A second control named "Color" without description, in a different place.
  NavGraph g = b.graph();
  g.nodes.back().name = "Color";
  g.edges.push_back({b.id("Palette"), g.nodes.back().identifier, ClickKind::Click});
  const auto f = compile(g);
  const auto view = parse_topology(serialize(f));
  auto desc_of = [&](const std::string& name, const std::string& type) {
    for (const auto& [id, n] : view.nodes) {
      if (n.name == name && n.type == type) return n.description;
    }
    return std::optional<std::string>("<missing>");
  };
  EXPECT_EQ(desc_of("Font", "Group"), "Font settings");  // non-leaf
  EXPECT_EQ(desc_of("Bold", "Button"), long_text);       // key type, full
  EXPECT_EQ(desc_of("Blue", "ListItem"), std::string(80, 'x') + "...");
  EXPECT_EQ(desc_of("Color", "Button"), "Text color");
  EXPECT_EQ(desc_of("Color", "ListItem"), "T");  // location fallback in a key-type name group
  EXPECT_EQ(desc_of("Palette", "Pane"), std::nullopt);
}

TEST(Serialize, TruncatesOnCodePointBoundary) {
  std::string accented;
  for (int i = 0; i < 90; ++i) accented += "é";
  GraphBuilder b("Root", "Root");
  b.node("Item", "ListItem", accented).edge("Root", "Item");
  const auto view = parse_topology(serialize(compile(b.graph())));
  std::string expected;
  for (int i = 0; i < 80; ++i) expected += "é";
  EXPECT_EQ(view.nodes.at(1).description, expected + "...");
}

TEST(ParseTopology, SingleNode) {
  const auto view = parse_topology("Save(Button)_3");
  ASSERT_EQ(view.nodes.size(), 1u);
  EXPECT_EQ(view.nodes.at(3).name, "Save");
  EXPECT_EQ(view.nodes.at(3).type, "Button");
  EXPECT_EQ(view.roots, std::vector<DisplayId>{3});
}

TEST(ParseTopology, MalformedTextReportsPosition) {
  for (const char* bad : {"Home(TabItem)_1[Font(Group)_2", "Save(Button)3", "Save(Button)_x",
                          "A(B)_1[C(D)_2]]", "Sa(ve(Button)_1", "A(B)_1\nA(B)_1"}) {
    try {
      parse_topology(bad);
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.qualified_code(), "topo.MalformedText");
      EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
    }
  }
}

TEST(ParseTopology, RoundTripRandomForests) {
  std::mt19937_64 rng(99);
  const std::uint64_t thetas[] = {0, 8, 64, CompilerConfig::kNeverExternalize};
  for (int i = 0; i < 300; ++i) {
    const auto dag = testing::random_dag(rng, 150, 300, 4000);
    const auto f = externalize(dag, theta(thetas[i % 4]));
    const auto text = serialize(f);
    const auto view = parse_topology(text);
    ASSERT_TRUE(view.same_structure(topology_of(f))) << text;
    for (const auto& [id, n] : view.nodes) {
      if (!n.description) continue;
      const ControlNode& c = f.control(id);
      const std::string loc = c.identifier.ancestor_path.empty() ? "" : c.identifier.ancestor_path[0];
      const std::string& d = *n.description;
      const bool truncated = d.size() >= 3 && d.ends_with("...") && c.description &&
                             c.description->starts_with(d.substr(0, d.size() - 3));
      EXPECT_TRUE(d == c.description || truncated || d == loc) << d;
    }
  }
}

TEST(ExtractCore, ShallowForestEqualsFull) {
  const auto f = home_tab();
  EXPECT_EQ(extract_core(f), serialize(f));
  const auto d = diamond_forest(0);
  EXPECT_EQ(extract_core(d), serialize(d));
}

TEST(ExtractCore, DepthLimitAddsPlaceholder) {
  const auto f = chain(8);
  const auto core = extract_core(f);
  const auto view = parse_topology(core);
  for (const auto& [id, n] : view.nodes) EXPECT_LE(f.nodes[id].depth, 6);
  EXPECT_EQ(view.nodes.size(), 7u);
  ASSERT_TRUE(view.nodes.at(6).more.has_value());
  EXPECT_EQ(view.nodes.at(6).more->hidden, 1u);
  EXPECT_EQ(view.nodes.at(6).more->further_query, 6);
  EXPECT_NE(core.find("n6(MenuItem)_6[{more:1,further_query:6}]"), std::string::npos);
}

TEST(ExtractCore, CollapsesLargeEnumeration) {
  const auto f = font_list(200);
  const auto view = parse_topology(extract_core(f));
  EXPECT_EQ(view.nodes.size(), 3u);
  const auto& combo = view.nodes.at(2);
  EXPECT_EQ(combo.name, "Font");
  EXPECT_TRUE(combo.children.empty());
  ASSERT_TRUE(combo.more.has_value());
  EXPECT_EQ(combo.more->hidden, 200u);
  EXPECT_EQ(combo.more->further_query, 2);
}

TEST(ExtractCore, PrunesExclusions) {
  SerializationConfig cfg;
  cfg.exclusion_ids = {2};
  EXPECT_EQ(extract_core(home_tab(), cfg), "Root(Root)_0[Home(TabItem)_1[Styles(Group)_3]]\n");
  // Excluding the shared subtree root drops its references and entries.
  cfg.exclusion_ids = {5};
  EXPECT_EQ(extract_core(diamond_forest(0), cfg), "A(Button)_0[B(Button)_1,C(Button)_3]\n");
}

TEST(ExtractCore, SubtreeNeedsSurvivingReference) {
  // Chain deep enough that the only reference is cut by the depth limit.
  GraphBuilder b("Root", "Root");
  std::string prev = "Root";
  for (int i = 1; i <= 8; ++i) {
    const std::string name = "n" + std::to_string(i);
    b.node(name).edge(prev, name);
    prev = name;
  }
  b.node("alt").node("shared").node("s1").node("s2").node("s3");
  b.edge("Root", "alt").edge("alt", "shared").edge("n8", "shared");
  b.edge("shared", "s1").edge("shared", "s2").edge("shared", "s3");
  const auto f = compile(b.graph(), theta(0));
  ASSERT_EQ(f.tree_roots.size(), 2u);
  SerializationConfig cfg;
  auto core = parse_topology(extract_core(f, cfg));
  EXPECT_EQ(core.roots.size(), 2u);
  EXPECT_EQ(core.entry_map.size(), 1u);
  cfg.exclusion_ids = {f.node(f.main_root()).children.back()};
  core = parse_topology(extract_core(f, cfg));
  EXPECT_EQ(core.roots.size(), 1u);
  EXPECT_TRUE(core.entry_map.empty());
}

TEST(ExtractCore, CoreIsSubsetOfFull) {
  std::mt19937_64 rng(5);
  SerializationConfig cfg;
  cfg.core_depth = 3;
  cfg.enumeration_collapse_threshold = 4;
  for (int i = 0; i < 100; ++i) {
    const auto f = externalize(testing::random_dag(rng, 120, 240, 4000), theta(i % 2 ? 0 : 16));
    const auto full = parse_topology(serialize(f));
    const auto core = parse_topology(extract_core(f, cfg));
    for (const auto& [id, n] : core.nodes) {
      ASSERT_TRUE(full.nodes.count(id));
      EXPECT_EQ(full.nodes.at(id).name, n.name);
      EXPECT_EQ(full.nodes.at(id).type, n.type);
      EXPECT_EQ(full.nodes.at(id).description, n.description);
    }
    for (const auto& [ref, root] : core.entry_map) {
      EXPECT_EQ(full.entry_map.at(ref), root);
      EXPECT_TRUE(core.nodes.count(ref) && core.nodes.count(root));
    }
  }
}

TEST(ExpandQuery, MinusOneIsFullSerialization) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const auto f = externalize(testing::random_dag(rng, 120, 240, 4000), theta(8));
    const std::vector<DisplayId> all{-1};
    const std::vector<DisplayId> mixed{3, -1};
    EXPECT_EQ(expand_query(f, all), serialize(f));
    EXPECT_EQ(expand_query(f, mixed), serialize(f));
  }
}

TEST(ExpandQuery, ExpandsBranchFully) {
  const auto f = font_list(200);
  const std::vector<DisplayId> ids{2};
  const auto view = parse_topology(expand_query(f, ids));
  EXPECT_EQ(view.roots, ids);
  EXPECT_EQ(view.nodes.size(), 201u);
  EXPECT_EQ(view.nodes.at(2).children.size(), 200u);
}

TEST(ExpandQuery, IncludesEnteredSubtrees) {
  const auto f = diamond_forest(0);
  const std::vector<DisplayId> ids{1};
  EXPECT_EQ(expand_query(f, ids),
            "B(Button)_1[D(Button)_2]\n## shared\nD(Button)_5\nref 2 -> subtree 5\n");
}

TEST(ExpandQuery, UnionOfSingleQueries) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    const auto f = externalize(testing::random_dag(rng, 120, 240, 4000), theta(i % 3 * 8));
    std::uniform_int_distribution<DisplayId> pick(0, static_cast<DisplayId>(f.size()) - 1);
    const DisplayId a = pick(rng), b = pick(rng);
    const std::vector<DisplayId> qa{a}, qb{b}, qab{a, b};
    const auto va = parse_topology(expand_query(f, qa));
    const auto vb = parse_topology(expand_query(f, qb));
    const auto vab = parse_topology(expand_query(f, qab));
    std::set<DisplayId> expected, got;
    for (const auto& [id, n] : va.nodes) expected.insert(id);
    for (const auto& [id, n] : vb.nodes) expected.insert(id);
    for (const auto& [id, n] : vab.nodes) got.insert(id);
    EXPECT_EQ(got, expected);
    auto entries = va.entry_map;
    entries.insert(vb.entry_map.begin(), vb.entry_map.end());
    EXPECT_EQ(vab.entry_map, entries);
  }
}

TEST(ExpandQuery, UnknownId) {
  const std::vector<DisplayId> ids{99};
  try {
    expand_query(home_tab(), ids);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.qualified_code(), "topo.UnknownId");
  }
}

TEST(EstimateTokens, EmptyIsZero) {
  EXPECT_EQ(estimate_tokens(""), 0u);
  EXPECT_EQ(estimate_tokens("abcd"), 1u);
  EXPECT_EQ(estimate_tokens("abcde"), 2u);
}

TEST(EstimateTokens, LinearUnderDuplication) {
  std::mt19937_64 rng(1);
  const auto text = serialize(compile(testing::office_like_graph(rng, 800)));
  const double once = static_cast<double>(estimate_tokens(text));
  const double twice = static_cast<double>(estimate_tokens(text + text));
  EXPECT_NEAR(twice / once, 2.0, 0.02);
}

TEST(EstimateTokens, OfficeScaleAverage) {
  std::mt19937_64 rng(42);
  const auto f = compile(testing::office_like_graph(rng, 2000));
  const auto stats = token_stats(extract_core(f));
  EXPECT_GT(stats.controls, 1500u);
  EXPECT_GE(stats.per_control, 10.0);
  EXPECT_LE(stats.per_control, 25.0);
}

}  // namespace
}  // namespace goi
