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

#include "cli/manifest.h"

#include <array>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json.hpp"
#include "kgsub/error.h"

namespace kgsub::cli {
namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string git_blob_sha1(std::string_view content) {
  const std::string header = fmt::format("blob {}", content.size());
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int size = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  const bool ok = ctx != nullptr &&
                  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  // The header's trailing NUL is part of the hashed bytes.
                  EVP_DigestUpdate(ctx, header.c_str(), header.size() + 1) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &size) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw IoError("SHA-1 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < size; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string git_blob_sha1_file(const std::filesystem::path& path) {
  return git_blob_sha1(read_all(path));
}

void write_manifest(const RunConfig& config, Verb verb,
                    std::span<const std::filesystem::path> outputs) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["tool"] = "kgsub";
  doc["command"] = std::string(to_string(verb));
  ordered_json cfg = ordered_json::object();
  std::ostringstream text;
  for (const auto& [key, value] : to_key_values(config)) {
    cfg[key] = value;
    text << key << '=' << value << '\n';
  }
  doc["config"] = cfg;

  ordered_json inputs = ordered_json::array();
  auto add_input = [&](std::string_view role,
                       const std::optional<std::filesystem::path>& path) {
    if (!path) return;
    inputs.push_back({{"role", role},
                      {"path", path->generic_string()},
                      {"sha1", git_blob_sha1_file(*path)}});
  };
  add_input("train", config.train);
  add_input("valid", config.valid);
  add_input("test", config.test);
  add_input("rules", config.rules);
  add_input("checkpoint", config.checkpoint);
  doc["inputs"] = inputs;

  ordered_json outs = ordered_json::array();
  for (const auto& p : outputs) {
    outs.push_back({{"path", p.lexically_relative(config.out_dir).generic_string()},
                    {"sha1", git_blob_sha1_file(p)}});
  }
  doc["outputs"] = outs;

  const auto config_path = config.out_dir / "config.txt";
  std::ofstream(config_path) << text.str();
  std::ofstream out(config.out_dir / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + config.out_dir.string());
  out << doc.dump(2) << '\n';
}

}  // namespace kgsub::cli
