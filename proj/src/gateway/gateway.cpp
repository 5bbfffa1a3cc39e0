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

#include "acd/gateway/gateway.hpp"

#include "acd/gateway/wire.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>

namespace acd::gateway {

using protocol::Operation;

std::optional<KillPoint> KillPoint::parse(std::string_view text)
{
    constexpr std::string_view kAfterAudit = "after-audit";
    if (text.substr(0, kAfterAudit.size()) != kAfterAudit)
        return std::nullopt;
    KillPoint k;
    k.afterAudit = true;
    text.remove_prefix(kAfterAudit.size());
    if (text.empty())
        return k;
    if (text.front() != ':')
        return std::nullopt;
    k.operation = protocol::parse_operation(text.substr(1));
    if (!k.operation)
        return std::nullopt;
    return k;
}

KillPoint KillPoint::from_environment()
{
    const char* v = std::getenv("ACD_KILL_POINT");
    if (v == nullptr || *v == '\0')
        return {};
    auto k = parse(v);
    if (!k) {
        std::cerr << "acd-gateway: ignoring unrecognised ACD_KILL_POINT '" << v << "'\n";
        return {};
    }
    return *k;
}

bool KillPoint::fires_for(Operation op) const noexcept
{
    return afterAudit && (!operation || *operation == op);
}

Timestamp system_now()
{
    using namespace std::chrono;
    return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}

void initialize_store(const std::filesystem::path& path, const protocol::Backend& backend)
{
    std::error_code ec;
    if (std::filesystem::exists(path, ec))
        throw StoreError("refusing to overwrite existing store " + path.string());
    if (auto v = backend.check_invariants())
        throw StoreError("initial state violates " + *v);
    persist_store(backend, path);
}

std::unique_ptr<Gateway> Gateway::open(GatewayOptions options)
{
    protocol::Backend backend = load_store(options.storePath);
    AuditLog audit = AuditLog::open(options.auditPath, backend.table.scheme());
    return std::make_unique<Gateway>(std::move(backend), std::move(audit), std::move(options));
}

Gateway::Gateway(protocol::Backend backend, AuditLog audit, GatewayOptions options)
    : backend_(std::move(backend)), audit_(std::move(audit)), options_(std::move(options))
{
    if (!options_.clock)
        options_.clock = system_now;
}

std::string Gateway::oversized_reply()
{
    return encode_error("too-long", std::nullopt);
}

std::string Gateway::handle_line(Session& session, std::string_view line)
{
    DecodedLine decoded = decode_client_line(line);
    if (!decoded.message)
        return encode_error("malformed", decoded.seq);
    const ClientMessage& msg = *decoded.message;

    std::lock_guard lock(mu_);
    Timestamp now = options_.clock();
    protocol::StepResult r = protocol::step(session.machine, msg.event, backend_, now);
    if (r.refused)
        return encode_error("refused", msg.seq);

    try {
        if (r.backend && !options_.storePath.empty())
            persist_store(*r.backend, options_.storePath);
        if (r.audit) {
            audit_.append(r.audit->user, std::string(protocol::operation_name(r.audit->op)),
                          r.audit->outcome, r.audit->detail, now);
            if (r.backend && options_.kill.fires_for(r.audit->op))
                std::_Exit(kKillExitCode);
        }
    } catch (const StoreError& e) {
        // the session is left where it was; the client may retry
        std::cerr << "acd-gateway: " << e.what() << '\n';
        return encode_error("internal", msg.seq);
    }
    if (r.backend)
        backend_ = std::move(*r.backend);
    session.machine = std::move(r.machine);

    if (r.output)
        return encode_response(*r.output, msg.seq);
    return encode_ack(msg.event.name, msg.seq);
}

protocol::Backend Gateway::snapshot() const
{
    std::lock_guard lock(mu_);
    return backend_;
}

std::size_t Gateway::audit_size() const
{
    std::lock_guard lock(mu_);
    return audit_.size();
}

}  // namespace acd::gateway
