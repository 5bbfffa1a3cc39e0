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

// Shared test helpers: temporary directories, random inputs, independent
// invariant checkers, the cleartext reference model, and child processes.

#ifndef ACD_TESTS_SUPPORT_HPP
#define ACD_TESTS_SUPPORT_HPP

#include "acd/local_auth/credential_table.hpp"
#include "acd/protocol/session.hpp"
#include "acd/repository/repository.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace acd::testing {

using Rng = std::mt19937_64;

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::size_t uniform(Rng& rng, std::size_t n);  // [0, n)
bool coin(Rng& rng, double p = 0.5);
std::string random_bytes(Rng& rng, std::size_t maxLength);
template <class T>
const T& pick(Rng& rng, const std::vector<T>& v)
{
    return v[uniform(rng, v.size())];
}

// --- local authentication ---------------------------------------------------

/// Naive model of the credential table: cleartext passwords, no hashing.
class ReferenceTable {
public:
    static ReferenceTable fixture();

    Report login(const std::string& u, const std::string& p) const;
    Report change_password(const std::string& u, const std::string& oldp, const std::string& newp);
    Report add_credential(const std::string& u, const std::string& p, Role r);
    Report remove_credential(const std::string& u);
    Report reset_password(const std::string& u, const std::string& newp);

    std::map<std::string, std::pair<std::string, Role>> users;
};

enum class AuthOp { Login, ChangePassword, AddCredential, RemoveCredential, ResetPassword };

struct AuthCall {
    AuthOp op = AuthOp::Login;
    std::string user;
    std::string pwd;
    std::string newpwd;
    Role role = Role::EndUser;
};

/// Valid usernames and passwords drawn mostly from small pools so that
/// operations collide often.
AuthCall random_auth_call(Rng& rng);

/// Applies `c` to the real table; usernames/passwords are assumed valid.
std::pair<local_auth::CredentialTable, Report> apply(const local_auth::CredentialTable& t,
                                                     const AuthCall& c);
Report apply(ReferenceTable& t, const AuthCall& c);

/// Independent statement of the table invariants; names the violation.
std::optional<std::string> table_violation(const local_auth::CredentialTable& t);

// --- repository ----------------------------------------------------------------

/// A random operation on `r`, with inputs that are valid often enough to
/// reach interesting states. Returns the new repository and the report.
struct RepoStep {
    repository::CertificateRepository repository;
    Report report = Report::Failure;
    std::string description;
};
RepoStep random_repository_step(Rng& rng, const repository::CertificateRepository& r,
                                Timestamp now);

/// Independent statement of the repository invariants, plus attribution
/// totality and the absence of dangling project mappings.
std::optional<std::string> repository_violation(const repository::CertificateRepository& r);

/// A certificate registered under `project`, valid around `now`.
repository::CertificateRepository repository_with_certificate(SerialNb serial,
                                                              const std::string& project,
                                                              Timestamp now);

// --- processes -----------------------------------------------------------------

struct CommandResult {
    int exitCode = -1;
    std::string out;
    std::string err;
};

/// Runs `argv` with extra environment variables, feeding `input` on stdin.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::vector<std::pair<std::string, std::string>>& env = {},
                          const std::string& input = "");

/// acd-gateway child process listening on an ephemeral port.
class GatewayProcess {
public:
    GatewayProcess(const std::filesystem::path& store, const std::vector<std::string>& extraArgs,
                   const std::vector<std::pair<std::string, std::string>>& env = {});
    ~GatewayProcess();
    GatewayProcess(const GatewayProcess&) = delete;
    GatewayProcess& operator=(const GatewayProcess&) = delete;

    bool started() const noexcept { return port_ != 0; }
    std::uint16_t port() const noexcept { return port_; }
    std::string address() const { return "127.0.0.1:" + std::to_string(port_); }

    /// Waits for the child to exit on its own and returns its exit status.
    int wait();
    /// SIGTERM and wait.
    int stop();

private:
    int pid_ = -1;
    std::uint16_t port_ = 0;
};

std::filesystem::path gateway_binary();
std::filesystem::path cli_binary();
std::filesystem::path model_file();

}  // namespace acd::testing

#endif  // ACD_TESTS_SUPPORT_HPP
