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

// Client-side wallet: remembered passwords, at most one per username.
// Stored as a JSON array of {"username","password"} objects, mode 0600.

#ifndef ACD_CLI_WALLET_HPP
#define ACD_CLI_WALLET_HPP

#include "acd/core/types.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace acd::cli {

class WalletError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ClientWallet {
public:
    /// A missing file is an empty wallet. Duplicate usernames are an error.
    static ClientWallet load(const std::filesystem::path& path);
    static ClientWallet parse(std::string_view text);

    std::string serialize() const;
    void save(const std::filesystem::path& path) const;

    /// Replaces any password already held for `user`.
    void put(const UserId& user, std::string password);
    bool remove(const UserId& user);
    const std::string* find(const UserId& user) const;
    std::vector<UserId> users() const;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::map<UserId, std::string> entries_;
};

std::filesystem::path default_wallet_path();

}  // namespace acd::cli

#endif  // ACD_CLI_WALLET_HPP
