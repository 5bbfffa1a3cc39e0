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

#include "acd/cli/wallet.hpp"

#include "acd/gateway/store.hpp"

#include <json.hpp>

#include <cstdlib>

namespace acd::cli {

using json = nlohmann::ordered_json;

ClientWallet ClientWallet::parse(std::string_view text)
{
    json doc = json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw WalletError("wallet: expected a JSON array");
    ClientWallet w;
    for (const auto& e : doc) {
        if (!e.is_object() || e.size() != 2 || !e.contains("username") ||
            !e.contains("password") || !e["username"].is_string() || !e["password"].is_string())
            throw WalletError("wallet: entries must be {username, password}");
        auto u = UserId::parse(e["username"].get<std::string>());
        if (!u)
            throw WalletError("wallet: invalid username");
        if (!Secret::parse(e["password"].get<std::string>()))
            throw WalletError("wallet: empty password for " + u->str());
        if (!w.entries_.emplace(*u, e["password"].get<std::string>()).second)
            throw WalletError("wallet: duplicate entry for " + u->str());
    }
    return w;
}

ClientWallet ClientWallet::load(const std::filesystem::path& path)
{
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        return {};
    try {
        return parse(gateway::read_file(path));
    } catch (const gateway::StoreError& e) {
        throw WalletError(e.what());
    }
}

std::string ClientWallet::serialize() const
{
    json doc = json::array();
    for (const auto& [u, p] : entries_)
        doc.push_back(json{{"username", u.str()}, {"password", p}});
    return doc.dump(2) + "\n";
}

void ClientWallet::save(const std::filesystem::path& path) const
{
    try {
        gateway::write_file_atomically(path, serialize());
    } catch (const gateway::StoreError& e) {
        throw WalletError(e.what());
    }
}

void ClientWallet::put(const UserId& user, std::string password)
{
    entries_[user] = std::move(password);
}

bool ClientWallet::remove(const UserId& user)
{
    return entries_.erase(user) > 0;
}

const std::string* ClientWallet::find(const UserId& user) const
{
    auto it = entries_.find(user);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<UserId> ClientWallet::users() const
{
    std::vector<UserId> out;
    for (const auto& [u, _] : entries_)
        out.push_back(u);
    return out;
}

std::filesystem::path default_wallet_path()
{
    if (const char* p = std::getenv("ACD_WALLET_PATH"); p != nullptr && *p != '\0')
        return p;
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0')
        return std::filesystem::path(home) / ".acd-wallet.json";
    return ".acd-wallet.json";
}

}  // namespace acd::cli
