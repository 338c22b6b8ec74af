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

// Writes the reconstructed Sport, Location and WN18 datasets.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "kgsub/error.h"
#include "kgsub/synthetic.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate the reconstructed benchmark datasets",
               "kgsub-fixtures"};
  std::filesystem::path out = "data";
  std::uint64_t seed = 0;
  bool full_wn18 = false;
  double desk_scale = 0.1;
  app.add_option("--out-dir", out, "Root directory for the datasets");
  app.add_option("--seed", seed, "Generator seed");
  app.add_flag("--wn18", full_wn18, "Also write the full-size WN18 (wn18/)");
  app.add_option("--desk-scale", desk_scale,
                 "Scale of the desk-size WN18 written to wn18-desk/");
  CLI11_PARSE(app, argc, argv);

  namespace syn = kgsub::synthetic;
  try {
    syn::write_dataset(syn::generate_sport(seed), out / "sport");
    syn::write_dataset(syn::generate_location(seed), out / "location");
    syn::write_dataset(syn::generate_wn18(seed, desk_scale), out / "wn18-desk");
    if (full_wn18) syn::write_dataset(syn::generate_wn18(seed), out / "wn18");
  } catch (const kgsub::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
