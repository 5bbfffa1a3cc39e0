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

#include "acd/cli/password.hpp"

#include "acd/gateway/store.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <termios.h>
#include <unistd.h>

namespace acd::cli {

PasswordSource PasswordSource::from_environment()
{
    PasswordSource s;
    const char* path = std::getenv("ACD_PASSWORD_FILE");
    if (path == nullptr || *path == '\0')
        return s;
    std::istringstream in(gateway::read_file(path));
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(std::move(line));
    }
    s.fileLines_ = std::move(lines);
    return s;
}

std::optional<std::string> PasswordSource::next(std::string_view prompt)
{
    if (fileLines_) {
        if (used_ >= fileLines_->size())
            return std::nullopt;
        return (*fileLines_)[used_++];
    }
    return prompt_password(prompt);
}

std::optional<std::string> prompt_password(std::string_view prompt)
{
    bool tty = ::isatty(STDIN_FILENO) != 0;
    termios saved{};
    if (tty) {
        std::cerr << prompt << std::flush;
        ::tcgetattr(STDIN_FILENO, &saved);
        termios quiet = saved;
        quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
        ::tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
    }
    std::string line;
    bool ok = static_cast<bool>(std::getline(std::cin, line));
    if (tty) {
        ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
        std::cerr << '\n';
    }
    if (!ok)
        return std::nullopt;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

}  // namespace acd::cli
