// Copyright 2026 the rramnet authors
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

#ifndef RRAMNET_CLI_HPP
#define RRAMNET_CLI_HPP

namespace rramnet::cli {

// Entry point behind the rramnet binary. Exit codes: 0 success, 1 usage
// error, 2 data error (missing or malformed files), 3 numerical abort or
// failed fit.
int run(int argc, const char* const* argv);

}  // namespace rramnet::cli

#endif  // RRAMNET_CLI_HPP
