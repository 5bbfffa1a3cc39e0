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

#include "acd/protocol/event.hpp"

#include <array>

namespace acd::protocol {

namespace {

constexpr std::array kOperations = {
    Operation::Login,       Operation::ChangePassword, Operation::ResetPassword,
    Operation::AddCredential, Operation::RemoveCredential, Operation::Logout,
    Operation::CertAdd,     Operation::CertRemove,     Operation::ProxyCreate,
    Operation::ProxyRevoke, Operation::ProxyList,
};

constexpr std::string_view kNames[] = {
    "Login",   "ChangePassword", "ResetPassword", "AddCredential", "RemoveCredential", "Logout",
    "CertAdd", "CertRemove",     "ProxyCreate",   "ProxyRevoke",   "ProxyList",
};

constexpr std::string_view kLoginFields[] = {"username", "pwd"};
constexpr std::string_view kChangeFields[] = {"username", "oldpwd", "newpwd"};
constexpr std::string_view kResetFields[] = {"username", "newpwd"};
constexpr std::string_view kAddFields[] = {"username", "pwd", "role"};
constexpr std::string_view kUserField[] = {"username"};
constexpr std::string_view kCertAddFields[] = {"cert", "secretKey", "project"};
constexpr std::string_view kSerialField[] = {"serial"};
constexpr std::string_view kProxyCreateFields[] = {"project", "lifetime"};

constexpr std::string_view kRequestSuffix = "Request";
constexpr std::string_view kResponseSuffix = "Response";

}  // namespace

std::span<const Operation> all_operations() noexcept
{
    return kOperations;
}

std::string_view operation_name(Operation op) noexcept
{
    return kNames[static_cast<std::size_t>(op)];
}

std::optional<Operation> parse_operation(std::string_view name) noexcept
{
    for (Operation op : kOperations)
        if (operation_name(op) == name)
            return op;
    return std::nullopt;
}

bool is_admin_operation(Operation op) noexcept
{
    switch (op) {
    case Operation::Login:
    case Operation::ChangePassword:
    case Operation::Logout:
        return false;
    default:
        return true;
    }
}

bool is_mutating(Operation op) noexcept
{
    return op != Operation::Login && op != Operation::Logout && op != Operation::ProxyList;
}

std::span<const std::string_view> request_fields(Operation op) noexcept
{
    switch (op) {
    case Operation::Login:
        return kLoginFields;
    case Operation::ChangePassword:
        return kChangeFields;
    case Operation::ResetPassword:
        return kResetFields;
    case Operation::AddCredential:
        return kAddFields;
    case Operation::RemoveCredential:
    case Operation::Logout:
        return kUserField;
    case Operation::CertAdd:
        return kCertAddFields;
    case Operation::CertRemove:
    case Operation::ProxyRevoke:
        return kSerialField;
    case Operation::ProxyCreate:
        return kProxyCreateFields;
    case Operation::ProxyList:
        return {};
    }
    return {};
}

std::string EventName::str() const
{
    std::string out(operation_name(op));
    if (kind == EventKind::Request)
        out += kRequestSuffix;
    else if (kind == EventKind::Response)
        out += kResponseSuffix;
    return out;
}

std::optional<EventName> EventName::parse(std::string_view text)
{
    EventKind kind = EventKind::Announce;
    if (text.ends_with(kRequestSuffix)) {
        kind = EventKind::Request;
        text.remove_suffix(kRequestSuffix.size());
    } else if (text.ends_with(kResponseSuffix)) {
        kind = EventKind::Response;
        text.remove_suffix(kResponseSuffix.size());
    }
    auto op = parse_operation(text);
    if (!op)
        return std::nullopt;
    return EventName{*op, kind};
}

ProtocolEvent ProtocolEvent::announce(Operation op)
{
    return ProtocolEvent{{op, EventKind::Announce}, {}, std::nullopt};
}

ProtocolEvent ProtocolEvent::request(Operation op, Args args)
{
    return ProtocolEvent{{op, EventKind::Request}, std::move(args), std::nullopt};
}

ProtocolEvent ProtocolEvent::response(Operation op, Report r, Args extra)
{
    return ProtocolEvent{{op, EventKind::Response}, std::move(extra), r};
}

bool ProtocolEvent::well_formed() const noexcept
{
    switch (name.kind) {
    case EventKind::Announce:
        return args.empty() && !report;
    case EventKind::Request:
        return !report;
    case EventKind::Response:
        return report.has_value();
    }
    return false;
}

}  // namespace acd::protocol
