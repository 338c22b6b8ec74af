/* Copyright 2026 The kgsub Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef KGSUB_CLI_APP_H_
#define KGSUB_CLI_APP_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace kgsub::cli {

// Parses `args` (without the program name), runs the verb and returns the
// process exit code: 0 on success, 1 on a failed run, 2 on a usage error.
// Failures print a single `error: <category>: <message>` line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace kgsub::cli

#endif  // KGSUB_CLI_APP_H_
