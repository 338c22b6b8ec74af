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

#ifndef KGSUB_CLI_MANIFEST_H_
#define KGSUB_CLI_MANIFEST_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "cli/run_config.h"

namespace kgsub::cli {

// Hex SHA-1 of "blob <size>\0<content>", the id git gives the same bytes.
std::string git_blob_sha1(std::string_view content);
std::string git_blob_sha1_file(const std::filesystem::path& path);

// Writes <out_dir>/manifest.json (config echo, input and output hashes) and
// <out_dir>/config.txt (the same config as key=value lines, usable with
// --config). Output paths are recorded relative to out_dir.
void write_manifest(const RunConfig& config, Verb verb,
                    std::span<const std::filesystem::path> outputs);

}  // namespace kgsub::cli

#endif  // KGSUB_CLI_MANIFEST_H_
