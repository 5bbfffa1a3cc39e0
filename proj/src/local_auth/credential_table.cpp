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

#include "acd/local_auth/credential_table.hpp"

namespace acd::local_auth {

using hashing::HashScheme;

struct TableAccess {
    static std::map<UserId, Entry>& entries(CredentialTable& t) { return t.entries_; }
};

CredentialTable CredentialTable::from_entries(HashScheme scheme, std::map<UserId, Entry> entries)
{
    CredentialTable t(scheme);
    t.entries_ = std::move(entries);
    return t;
}

std::set<UserId> CredentialTable::registered_users() const
{
    std::set<UserId> out;
    for (const auto& [u, _] : entries_)
        out.insert(u);
    return out;
}

const Entry* CredentialTable::find(const UserId& u) const
{
    auto it = entries_.find(u);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> CredentialTable::check_invariants() const
{
    // registered_users = dom pwdDB and dom pwdDB = dom salting hold by
    // construction: one map carries digest and salt together. What can still
    // go wrong in stored data is the digest width.
    const auto width = hashing::output_length(scheme_);
    for (const auto& [u, e] : entries_) {
        if (e.digest.size() != width)
            return "digest-length: digest of '" + u.str() + "' is " +
                   std::to_string(e.digest.size()) + " bytes, scheme " +
                   std::string(hashing::scheme_name(scheme_)) + " requires " +
                   std::to_string(width);
    }
    return std::nullopt;
}

namespace {

bool matches(const CredentialTable& t, const Entry& e, const Secret& pwd)
{
    return hashing::digests_equal(hashing::encrypt(t.scheme(), e.salt, pwd), e.digest);
}

Entry fresh_entry(HashScheme scheme, const Secret& pwd, Role role)
{
    Salt salt = hashing::generate_salt();
    Digest digest = hashing::encrypt(scheme, salt, pwd);
    return Entry{std::move(digest), std::move(salt), role};
}

Update unchanged(const CredentialTable& t, Detail d)
{
    return Update{t, AuthOutcome::fail(d)};
}

}  // namespace

bool pre_login(const CredentialTable& t, const UserId& u, const Secret& pwd)
{
    const Entry* e = t.find(u);
    return e != nullptr && matches(t, *e, pwd);
}

bool pre_change_password(const CredentialTable& t, const UserId& u, const Secret& oldpwd)
{
    return pre_login(t, u, oldpwd);
}

bool pre_add_credential(const CredentialTable& t, const UserId& u)
{
    return !t.contains(u);
}

bool pre_remove_credential(const CredentialTable& t, const UserId& u)
{
    return t.contains(u);
}

bool pre_reset_password(const CredentialTable& t, const UserId& u)
{
    return t.contains(u);
}

AuthOutcome login(const CredentialTable& t, const UserId& username, const Secret& pwd)
{
    const Entry* e = t.find(username);
    if (e == nullptr) {
        static const Salt kDummySalt(Bytes(Salt::kGeneratedLength, 0x5a));
        (void)hashing::encrypt(t.scheme(), kDummySalt, pwd);
        return AuthOutcome::fail(Detail::UserIDNotInUse);
    }
    if (!matches(t, *e, pwd))
        return AuthOutcome::fail(Detail::InvalidCredential);
    return AuthOutcome::ok();
}

Update change_password(const CredentialTable& t, const UserId& username, const Secret& oldpwd,
                       const Secret& newpwd)
{
    const Entry* e = t.find(username);
    if (e == nullptr)
        return unchanged(t, Detail::UserIDNotInUse);
    if (!matches(t, *e, oldpwd))
        return unchanged(t, Detail::InvalidCredential);
    CredentialTable next = t;
    TableAccess::entries(next)[username] = fresh_entry(t.scheme(), newpwd, e->role);
    return Update{std::move(next), AuthOutcome::ok()};
}

Update add_credential(const CredentialTable& t, const UserId& username, const Secret& pwd,
                      Role role)
{
    if (!pre_add_credential(t, username))
        return unchanged(t, Detail::UserIDInUse);
    CredentialTable next = t;
    TableAccess::entries(next).emplace(username, fresh_entry(t.scheme(), pwd, role));
    return Update{std::move(next), AuthOutcome::ok()};
}

Update remove_credential(const CredentialTable& t, const UserId& username)
{
    if (!pre_remove_credential(t, username))
        return unchanged(t, Detail::UserIDNotInUse);
    CredentialTable next = t;
    TableAccess::entries(next).erase(username);
    return Update{std::move(next), AuthOutcome::ok()};
}

Update reset_password(const CredentialTable& t, const UserId& username, const Secret& newpwd)
{
    const Entry* e = t.find(username);
    if (e == nullptr)
        return unchanged(t, Detail::UserIDNotInUse);
    CredentialTable next = t;
    TableAccess::entries(next)[username] = fresh_entry(t.scheme(), newpwd, e->role);
    return Update{std::move(next), AuthOutcome::ok()};
}

CredentialTable init_fixture()
{
    // ali and mark carry the historical digests verbatim. john's printed
    // digest is one hex digit short; the value below is MD5("wnd1980").
    struct Row {
        const char* user;
        const char* digest_hex;
        Role role;
    };
    static constexpr Row kRows[] = {
        {"ali", "6f8cac5b994687f7a05619c3324fbc5e", Role::EndUser},
        {"mark", "8d137ac4eec0df89f089540ac19ac99c", Role::EndUser},
        {"john", "a4375b7cc7511652d0029cbffff42695", Role::EndUser},
    };
    std::map<UserId, Entry> entries;
    for (const auto& row : kRows)
        entries.emplace(UserId::of(row.user),
                        Entry{*Digest::from_hex(row.digest_hex), Salt{}, row.role});
    entries.emplace(UserId::of("root"),
                    Entry{hashing::encrypt(HashScheme::Md5Compat, Salt{}, Secret::of("rootpw")),
                          Salt{}, Role::Administrator});
    return CredentialTable::from_entries(HashScheme::Md5Compat, std::move(entries));
}

}  // namespace acd::local_auth
