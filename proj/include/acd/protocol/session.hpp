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

// Per-connection session state machine.
//
// An unauthenticated session offers only Login. After a successful login
// the session offers ChangePassword and Logout, and administrators also get
// the credential and certificate administration operations. Each operation
// runs as announce -> request -> response; between announce and request
// only the matching request is offered. Anything not offered is refused:
// the machine and the backend stay exactly as they were.

#ifndef ACD_PROTOCOL_SESSION_HPP
#define ACD_PROTOCOL_SESSION_HPP

#include "acd/local_auth/credential_table.hpp"
#include "acd/protocol/event.hpp"
#include "acd/repository/repository.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace acd::protocol {

/// Everything a session operates on.
struct Backend {
    local_auth::CredentialTable table;
    repository::CertificateRepository repository;

    std::optional<std::string> check_invariants() const;
    friend bool operator==(const Backend&, const Backend&) = default;
};

enum class Phase { Unauthenticated, Authenticated };

class SessionMachine {
public:
    SessionMachine() = default;

    Phase phase() const noexcept { return phase_; }
    const std::optional<UserId>& current_user() const noexcept { return user_; }
    const std::optional<Role>& current_role() const noexcept { return role_; }
    const std::optional<Operation>& pending() const noexcept { return pending_; }

    static SessionMachine authenticated(UserId user, Role role);

    /// currentUser/currentRole are defined iff authenticated, and only Login
    /// may be pending while unauthenticated.
    bool invariant_holds() const noexcept;

    friend bool operator==(const SessionMachine&, const SessionMachine&) = default;

private:
    friend struct MachineAccess;

    Phase phase_ = Phase::Unauthenticated;
    std::optional<UserId> user_;
    std::optional<Role> role_;
    std::optional<Operation> pending_;
};

/// What the gateway records about a completed request.
struct AuditNote {
    std::string user;  // acting user, or "-"
    Operation op = Operation::Login;
    Report outcome = Report::Failure;
    std::string detail;
};

struct StepResult {
    SessionMachine machine;
    std::optional<ProtocolEvent> output;
    bool refused = false;
    std::optional<Backend> backend;  // set iff the backend changed
    std::optional<AuditNote> audit;  // set for audited requests
};

std::set<EventName> offered_events(const SessionMachine& m);

StepResult step(const SessionMachine& m, const ProtocolEvent& e, const Backend& backend,
                Timestamp now);

/// One observable outcome of feeding an event: either the response it
/// produced, or a refusal of that event.
struct SessionOutput {
    bool refused = false;
    ProtocolEvent event;  // the response, or the refused input

    friend bool operator==(const SessionOutput&, const SessionOutput&) = default;
};

struct SessionRun {
    SessionMachine machine;
    Backend backend;
    std::vector<SessionOutput> outputs;
};

SessionRun run_session(const SessionMachine& m, const std::vector<ProtocolEvent>& trace,
                       const Backend& backend, Timestamp now);

// ---------------------------------------------------------------------------
// Request argument decoding, shared with the model bindings.
// ---------------------------------------------------------------------------

namespace decode {

std::optional<std::int64_t> positive_integer(std::string_view text);
std::optional<KeyMaterial> private_key(std::string_view hex);

/// Arguments must be exactly the operation's request fields.
bool has_exact_fields(Operation op, const Args& args);

}  // namespace decode

/// ProxyListResponse arguments: one entry per active proxy, keyed by its
/// serial, valued `issuerSerial:notAfter:user` (user last, as it may
/// itself contain ':').
Args render_proxy_list(const repository::CertificateRepository& r);

}  // namespace acd::protocol

#endif  // ACD_PROTOCOL_SESSION_HPP
