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

#ifndef KGSUB_RNG_H_
#define KGSUB_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace kgsub {

using Rng = std::mt19937_64;

// Every consumer of randomness draws from its own named stream derived from
// the run seed, so adding a consumer never perturbs the others.
namespace stream {
inline constexpr std::string_view kInit = "init";
inline constexpr std::string_view kSampling = "sampling";
inline constexpr std::string_view kSubsample = "subsample";
inline constexpr std::string_view kShuffle = "shuffle";
}  // namespace stream

Rng make_stream(std::uint64_t seed, std::string_view name);

// Seed for a child job (a sweep cell, a trial) identified by name and index.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name,
                          std::uint64_t index = 0);

}  // namespace kgsub

#endif  // KGSUB_RNG_H_
