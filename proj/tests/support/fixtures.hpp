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
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "goi/compiler.hpp"
#include "goi/ripper.hpp"
#include "goi/sim.hpp"

namespace goi::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(GOI_FIXTURE_DIR) / name;
}

inline nlohmann::json fixture_json(const std::string& name) {
  std::ifstream in(fixture_path(name));
  return nlohmann::json::parse(in);
}

inline NavForest rip_and_compile(const nlohmann::json& app, const RipperConfig& cfg = {}) {
  SimSession s = load_app(app);
  return compile(rip(s, cfg).graph);
}

inline NavForest fixture_forest(const std::string& app) {
  return rip_and_compile(fixture_json(app));
}

// First non-reference forest node whose control has this name.
inline DisplayId forest_id(const NavForest& f, const std::string& name) {
  for (const auto& n : f.nodes) {
    if (n.kind != NodeKind::Reference && f.control(n.id).name == name) return n.id;
  }
  throw std::runtime_error("no forest node named " + name);
}

}  // namespace goi::testing
