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

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace goi {

// Outcome of one replay: planning rounds, backend actions and verdict.
struct ReplayMetrics {
  std::size_t turns = 0;
  std::size_t backend_actions = 0;
  bool success = false;
  nlohmann::json script_report;
  nlohmann::json assertion_report;

  nlohmann::json to_json() const;
};

// Runs the goi command line. `args` excludes the program name. Returns the
// process exit code: 0 on success, 1 on any domain or input error, which is
// reported on `err` as one JSON object.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace goi
