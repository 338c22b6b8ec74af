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

#include "kgsub/error.h"

#include <utility>

namespace kgsub {

Error::Error(std::string category, const std::string& message)
    : std::runtime_error(message), category_(std::move(category)) {}

ParseError::ParseError(const std::string& message, std::size_t line)
    : Error("parse", line == 0 ? message
                               : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

}  // namespace kgsub
