// Copyright 2026 The abnirml Authors.
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

namespace abnirml {

/// Runs the command-line tool. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 validation or usage error, 2 I/O error,
/// 3 scorer or protocol error.
int dispatch(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char const* const* argv);

}  // namespace abnirml
