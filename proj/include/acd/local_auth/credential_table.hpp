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

// Local authentication service state: the table of registered users with
// their salted password digests, and the six operations on it.
//
// Every operation is total. A call that does not meet its precondition
// returns Report::Failure and leaves the table untouched; mutating calls
// return a new table instead of modifying their argument.

#ifndef ACD_LOCAL_AUTH_CREDENTIAL_TABLE_HPP
#define ACD_LOCAL_AUTH_CREDENTIAL_TABLE_HPP

#include "acd/core/types.hpp"
#include "acd/hashing/hashing.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace acd::local_auth {

struct Entry {
    Digest digest;
    Salt salt;
    Role role = Role::EndUser;

    friend bool operator==(const Entry&, const Entry&) = default;
};

/// Why an operation failed. Internal only: the wire carries the Report.
enum class Detail { Ok, InvalidCredential, UserIDNotInUse, UserIDInUse };

struct AuthOutcome {
    Report report = Report::Failure;
    Detail detail = Detail::InvalidCredential;

    static AuthOutcome ok() { return {Report::Success, Detail::Ok}; }
    static AuthOutcome fail(Detail d) { return {Report::Failure, d}; }

    bool success() const noexcept { return report == Report::Success; }
    friend bool operator==(const AuthOutcome&, const AuthOutcome&) = default;
};

class CredentialTable {
public:
    explicit CredentialTable(hashing::HashScheme scheme = hashing::HashScheme::StrongKdf)
        : scheme_(scheme)
    {
    }

    /// Builds a table from stored entries without validating them; callers
    /// loading untrusted data must run check_invariants().
    static CredentialTable from_entries(hashing::HashScheme scheme,
                                        std::map<UserId, Entry> entries);

    hashing::HashScheme scheme() const noexcept { return scheme_; }
    const std::map<UserId, Entry>& entries() const noexcept { return entries_; }
    std::set<UserId> registered_users() const;
    bool contains(const UserId& u) const { return entries_.contains(u); }
    const Entry* find(const UserId& u) const;
    std::size_t size() const noexcept { return entries_.size(); }

    /// Name of the first violated state invariant, if any.
    std::optional<std::string> check_invariants() const;

    friend bool operator==(const CredentialTable&, const CredentialTable&) = default;

private:
    friend struct TableAccess;

    hashing::HashScheme scheme_;
    std::map<UserId, Entry> entries_;
};

struct Update {
    CredentialTable table;
    AuthOutcome outcome;
};

// Preconditions of the underlying (partial) operations.
bool pre_login(const CredentialTable& t, const UserId& u, const Secret& pwd);
bool pre_change_password(const CredentialTable& t, const UserId& u, const Secret& oldpwd);
bool pre_add_credential(const CredentialTable& t, const UserId& u);
bool pre_remove_credential(const CredentialTable& t, const UserId& u);
bool pre_reset_password(const CredentialTable& t, const UserId& u);

/// Read-only. Unknown users cost one dummy hash so that the response time
/// does not reveal whether the username exists.
AuthOutcome login(const CredentialTable& t, const UserId& username, const Secret& pwd);

/// On success the entry gets a fresh salt and digest; the role is kept.
Update change_password(const CredentialTable& t, const UserId& username, const Secret& oldpwd,
                       const Secret& newpwd);

Update add_credential(const CredentialTable& t, const UserId& username, const Secret& pwd,
                      Role role);

Update remove_credential(const CredentialTable& t, const UserId& username);

/// Administrative reset: sets a new password without the old one.
Update reset_password(const CredentialTable& t, const UserId& username, const Secret& newpwd);

/// The historical initial state: ali, mark and john (EndUser) with unsalted
/// MD5 digests, plus the administrator `root`.
CredentialTable init_fixture();

/// Cleartext passwords of the fixture users, for tests and demos.
struct FixtureUser {
    const char* username;
    const char* password;
    Role role;
};
inline constexpr FixtureUser kFixtureUsers[] = {
    {"ali", "pwdx", Role::EndUser},
    {"mark", "mrk3000", Role::EndUser},
    {"john", "wnd1980", Role::EndUser},
    {"root", "rootpw", Role::Administrator},
};

}  // namespace acd::local_auth

#endif  // ACD_LOCAL_AUTH_CREDENTIAL_TABLE_HPP
