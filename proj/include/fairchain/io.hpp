// Copyright 2026 The Fairchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRCHAIN_IO_HPP_
#define FAIRCHAIN_IO_HPP_

#include <string>

namespace fairchain {

// Whole-file read; throws ValidationError if the file cannot be opened.
std::string read_text_file(const std::string& path);

// Write-then-rename so consumers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

}  // namespace fairchain

#endif  // FAIRCHAIN_IO_HPP_
