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

#include "goi/backend.hpp"

namespace goi {

ControlNode AccNode::to_control_node() const {
  ControlNode n;
  n.identifier = identifier;
  n.name = name;
  n.control_type = control_type;
  n.description = description;
  n.patterns = patterns;
  n.enabled = enabled;
  return n;
}

const AccNode* AccTreeSnapshot::find(const ControlIdentifier& id) const {
  for (const auto& n : nodes) {
    if (n.identifier == id) return &n;
  }
  return nullptr;
}

const AccNode* AccTreeSnapshot::find_handle(const std::string& handle) const {
  for (const auto& n : nodes) {
    if (n.handle == handle) return &n;
  }
  return nullptr;
}

std::vector<const AccNode*> AccTreeSnapshot::in_window(const std::string& window) const {
  std::vector<const AccNode*> out;
  for (const auto& n : nodes) {
    if (n.window == window && n.control_type != kWindowType) out.push_back(&n);
  }
  return out;
}

std::string_view to_string(TextUnit u) { return u == TextUnit::Line ? "line" : "paragraph"; }

}  // namespace goi
