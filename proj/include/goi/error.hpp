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

#include <stdexcept>
#include <string>

namespace goi {

// Domain error carrying a module-qualified code, e.g. "visit.ControlNotFound".
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string code, const std::string& message)
      : std::runtime_error(message),
        module_(std::move(module)),
        code_(std::move(code)) {}

  const std::string& module() const { return module_; }
  const std::string& code() const { return code_; }
  std::string qualified_code() const { return module_ + "." + code_; }

 private:
  std::string module_;
  std::string code_;
};

}  // namespace goi
