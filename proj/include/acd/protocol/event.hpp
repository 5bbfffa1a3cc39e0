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

// Protocol events. Every operation contributes three events: the bare
// announcement (`Login`), the request carrying the inputs
// (`LoginRequest`), and the response carrying one Report
// (`LoginResponse`). The first six operations are the authentication
// server's alphabet; the certificate and proxy operations extend it for
// administrators.

#ifndef ACD_PROTOCOL_EVENT_HPP
#define ACD_PROTOCOL_EVENT_HPP

#include "acd/core/types.hpp"

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace acd::protocol {

enum class Operation {
    Login,
    ChangePassword,
    ResetPassword,
    AddCredential,
    RemoveCredential,
    Logout,
    CertAdd,
    CertRemove,
    ProxyCreate,
    ProxyRevoke,
    ProxyList,
};

enum class EventKind { Announce, Request, Response };

std::span<const Operation> all_operations() noexcept;
std::string_view operation_name(Operation op) noexcept;
std::optional<Operation> parse_operation(std::string_view name) noexcept;

/// Operations offered only to administrators.
bool is_admin_operation(Operation op) noexcept;
/// Operations whose success changes the backend.
bool is_mutating(Operation op) noexcept;

/// Argument names a request of `op` must carry, in canonical order.
std::span<const std::string_view> request_fields(Operation op) noexcept;

struct EventName {
    Operation op = Operation::Login;
    EventKind kind = EventKind::Announce;

    std::string str() const;
    static std::optional<EventName> parse(std::string_view text);

    friend auto operator<=>(const EventName&, const EventName&) = default;
};

using Args = std::map<std::string, std::string>;

struct ProtocolEvent {
    EventName name;
    Args args;                     // request inputs, or extra response data
    std::optional<Report> report;  // set on responses only

    static ProtocolEvent announce(Operation op);
    static ProtocolEvent request(Operation op, Args args);
    static ProtocolEvent response(Operation op, Report r, Args extra = {});

    /// Announcements carry nothing, requests carry no report, responses
    /// carry exactly one report.
    bool well_formed() const noexcept;

    friend bool operator==(const ProtocolEvent&, const ProtocolEvent&) = default;
};

}  // namespace acd::protocol

#endif  // ACD_PROTOCOL_EVENT_HPP
