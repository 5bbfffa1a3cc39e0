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

// The gateway proper: shared backend state, the per-line request pipeline
// and crash-injection points for recovery tests.
//
// A line that changes the backend is handled as: persist the new store,
// append the audit record, publish the new state, reply. A crash before the
// store rename leaves the old state; a crash after it leaves the new state
// and, at most, a missing audit record for it.

#ifndef ACD_GATEWAY_GATEWAY_HPP
#define ACD_GATEWAY_GATEWAY_HPP

#include "acd/gateway/audit.hpp"
#include "acd/gateway/store.hpp"
#include "acd/protocol/session.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace acd::gateway {

inline constexpr int kKillExitCode = 86;

/// ACD_KILL_POINT=after-audit[:Operation] terminates the process right
/// after the audit append of a mutating request (of that operation, if
/// given), before the reply is sent.
struct KillPoint {
    bool afterAudit = false;
    std::optional<protocol::Operation> operation;

    static std::optional<KillPoint> parse(std::string_view text);
    static KillPoint from_environment();
    bool fires_for(protocol::Operation op) const noexcept;
};

struct GatewayOptions {
    std::filesystem::path storePath;
    std::filesystem::path auditPath;
    std::function<Timestamp()> clock;  // defaults to the system clock
    KillPoint kill;
};

Timestamp system_now();

/// Writes a fresh store; refuses to overwrite an existing file.
void initialize_store(const std::filesystem::path& path, const protocol::Backend& backend);

class Gateway {
public:
    /// Per-connection state.
    struct Session {
        protocol::SessionMachine machine;
    };

    /// Loads the store (refusing on invariant violations) and opens the
    /// audit log with the store's hash scheme.
    static std::unique_ptr<Gateway> open(GatewayOptions options);

    Gateway(protocol::Backend backend, AuditLog audit, GatewayOptions options);

    /// Exactly one reply line (without the newline) per request line.
    std::string handle_line(Session& session, std::string_view line);

    /// Reply to a line exceeding kMaxLineBytes.
    static std::string oversized_reply();

    protocol::Backend snapshot() const;
    std::size_t audit_size() const;

private:
    mutable std::mutex mu_;
    protocol::Backend backend_;
    AuditLog audit_;
    GatewayOptions options_;
};

}  // namespace acd::gateway

#endif  // ACD_GATEWAY_GATEWAY_HPP
