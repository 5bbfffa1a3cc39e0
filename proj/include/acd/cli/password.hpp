// Copyright 2026 The ACD Gateway Authors
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

// Password input for the command-line tools. Passwords never come from
// the command line: they are read from ACD_PASSWORD_FILE (one per line, in
// the order the command asks for them), from the wallet, or from the
// terminal with echo off. Without a terminal, lines are read from stdin.

#ifndef ACD_CLI_PASSWORD_HPP
#define ACD_CLI_PASSWORD_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace acd::cli {

class PasswordSource {
public:
    /// Reads ACD_PASSWORD_FILE if set.
    static PasswordSource from_environment();

    /// The next password: the next file line if a file is configured,
    /// otherwise a prompt. nullopt when input is exhausted.
    std::optional<std::string> next(std::string_view prompt);

    bool from_file() const noexcept { return fileLines_.has_value(); }

private:
    std::optional<std::vector<std::string>> fileLines_;
    std::size_t used_ = 0;
};

/// Reads one line from the terminal without echo (plain stdin when not a
/// terminal). The prompt goes to stderr.
std::optional<std::string> prompt_password(std::string_view prompt);

}  // namespace acd::cli

#endif  // ACD_CLI_PASSWORD_HPP
