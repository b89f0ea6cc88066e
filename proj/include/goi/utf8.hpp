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

#include <cstddef>
#include <string>
#include <string_view>

namespace goi {

// Malformed sequences decode to U+FFFD, one per offending byte.
std::u32string decode_utf8(std::string_view s);
std::size_t code_point_count(std::string_view s);
// First `n` code points of `s`.
std::string utf8_prefix(std::string_view s, std::size_t n);

}  // namespace goi
