// Copyright 2026 The photonchain Authors
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

#ifndef PHOTONCHAIN_CLI_ERRORS_H
#define PHOTONCHAIN_CLI_ERRORS_H

#include <stdexcept>
#include <string>

namespace photonchain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitIo = 3;

/// Bad configuration, arguments or inconsistent inputs (exit 2).
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// File system failure (exit 3).
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace photonchain::cli

#endif  // PHOTONCHAIN_CLI_ERRORS_H
