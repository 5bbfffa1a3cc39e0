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

#include "acd/protocol/session.hpp"

#include <charconv>

namespace acd::protocol {

namespace la = acd::local_auth;
namespace repo = acd::repository;

std::optional<std::string> Backend::check_invariants() const
{
    if (auto v = table.check_invariants())
        return v;
    return repository.check_invariants();
}

struct MachineAccess {
    static SessionMachine& login(SessionMachine& m, UserId u, Role r)
    {
        m.phase_ = Phase::Authenticated;
        m.user_ = std::move(u);
        m.role_ = r;
        return m;
    }
    static SessionMachine& logout(SessionMachine& m)
    {
        m.phase_ = Phase::Unauthenticated;
        m.user_.reset();
        m.role_.reset();
        return m;
    }
    static void set_pending(SessionMachine& m, std::optional<Operation> op) { m.pending_ = op; }
};

SessionMachine SessionMachine::authenticated(UserId user, Role role)
{
    SessionMachine m;
    MachineAccess::login(m, std::move(user), role);
    return m;
}

bool SessionMachine::invariant_holds() const noexcept
{
    const bool authed = phase_ == Phase::Authenticated;
    if (user_.has_value() != authed || role_.has_value() != authed)
        return false;
    if (!authed && pending_ && *pending_ != Operation::Login)
        return false;
    if (authed && pending_ && *pending_ == Operation::Login)
        return false;
    if (authed && pending_ && is_admin_operation(*pending_) && *role_ != Role::Administrator)
        return false;
    return true;
}

std::set<EventName> offered_events(const SessionMachine& m)
{
    if (m.pending())
        return {EventName{*m.pending(), EventKind::Request}};
    if (m.phase() == Phase::Unauthenticated)
        return {EventName{Operation::Login, EventKind::Announce}};
    std::set<EventName> out;
    for (Operation op : all_operations()) {
        if (op == Operation::Login)
            continue;
        if (is_admin_operation(op) && m.current_role() != Role::Administrator)
            continue;
        out.insert(EventName{op, EventKind::Announce});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace decode {

std::optional<std::int64_t> positive_integer(std::string_view text)
{
    if (text.empty() || text.size() > 18 || text.front() == '0')
        return std::nullopt;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v <= 0)
        return std::nullopt;
    return v;
}

std::optional<KeyMaterial> private_key(std::string_view hex)
{
    auto bytes = from_hex(hex);
    if (!bytes)
        return std::nullopt;
    return KeyMaterial::private_key(std::move(*bytes));
}

bool has_exact_fields(Operation op, const Args& args)
{
    auto fields = request_fields(op);
    if (args.size() != fields.size())
        return false;
    for (auto f : fields)
        if (!args.contains(std::string(f)))
            return false;
    return true;
}

}  // namespace decode

Args render_proxy_list(const repo::CertificateRepository& r)
{
    Args out;
    const auto& s = r.state();
    for (const auto& [serial, proxy] : s.proxyCertificates)
        out[serial.str()] = s.proxyIssuer.at(serial).str() + ":" + std::to_string(proxy.notAfter) +
                            ":" + s.userProxy.at(serial).str();
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Execution {
    Report report = Report::Failure;
    std::optional<Backend> backend;
    Args extra;
    std::string auditUser = "-";
    std::string detail;
};

const std::string& arg(const Args& a, const char* key)
{
    return a.at(key);
}

Execution run_login(SessionMachine& m, const Args& a, const Backend& b)
{
    Execution x;
    auto u = UserId::parse(arg(a, "username"));
    auto p = Secret::parse(arg(a, "pwd"));
    if (u)
        x.auditUser = u->str();
    if (!u || !p)
        return x;
    if (la::login(b.table, *u, *p).success()) {
        x.report = Report::Success;
        MachineAccess::login(m, *u, b.table.find(*u)->role);
    }
    return x;
}

Execution run_change_password(const SessionMachine& m, const Args& a, const Backend& b)
{
    Execution x;
    auto u = UserId::parse(arg(a, "username"));
    auto oldp = Secret::parse(arg(a, "oldpwd"));
    auto newp = Secret::parse(arg(a, "newpwd"));
    if (!u || !oldp || !newp || *u != *m.current_user())
        return x;
    auto up = la::change_password(b.table, *u, *oldp, *newp);
    if (up.outcome.success()) {
        x.report = Report::Success;
        x.backend = Backend{std::move(up.table), b.repository};
    }
    return x;
}

Execution run_logout(SessionMachine& m, const Args& a)
{
    Execution x;
    auto u = UserId::parse(arg(a, "username"));
    if (u && *u == *m.current_user()) {
        x.report = Report::Success;
        MachineAccess::logout(m);
    }
    return x;
}

Execution from_update(la::Update up, const Backend& b, std::string detail)
{
    Execution x;
    x.detail = std::move(detail);
    if (up.outcome.success()) {
        x.report = Report::Success;
        x.backend = Backend{std::move(up.table), b.repository};
    }
    return x;
}

Execution from_update(repo::RepoUpdate up, const Backend& b, std::string detail)
{
    Execution x;
    x.detail = std::move(detail);
    if (up.report == Report::Success) {
        x.report = Report::Success;
        x.backend = Backend{b.table, std::move(up.repository)};
    }
    return x;
}

Execution run_admin(Operation op, const SessionMachine& m, const Args& a, const Backend& b,
                    Timestamp now)
{
    switch (op) {
    case Operation::ResetPassword: {
        auto u = UserId::parse(arg(a, "username"));
        auto p = Secret::parse(arg(a, "newpwd"));
        if (!u || !p)
            return {};
        return from_update(la::reset_password(b.table, *u, *p), b, "target=" + u->str());
    }
    case Operation::AddCredential: {
        auto u = UserId::parse(arg(a, "username"));
        auto p = Secret::parse(arg(a, "pwd"));
        auto r = parse_role(arg(a, "role"));
        if (!u || !p || !r)
            return {};
        return from_update(la::add_credential(b.table, *u, *p, *r), b,
                           "target=" + u->str() + " role=" + std::string(render_role(*r)));
    }
    case Operation::RemoveCredential: {
        auto u = UserId::parse(arg(a, "username"));
        if (!u)
            return {};
        return from_update(la::remove_credential(b.table, *u), b, "target=" + u->str());
    }
    case Operation::CertAdd: {
        auto cert = repo::decode_certificate(arg(a, "cert"));
        auto key = decode::private_key(arg(a, "secretKey"));
        auto project = Name::parse(arg(a, "project"));
        if (!cert || !key || !project)
            return {};
        return from_update(repo::add_certificate(b.repository, *cert, *key, *project), b,
                           "serial=" + cert->serial.str() + " project=" + project->str());
    }
    case Operation::CertRemove: {
        auto serial = SerialNb::parse(arg(a, "serial"));
        if (!serial)
            return {};
        const auto* cert = b.repository.certificate(*serial);
        if (cert == nullptr)
            return Execution{Report::Failure, std::nullopt, {}, "-", "serial=" + serial->str()};
        return from_update(repo::remove_certificate(b.repository, *cert), b,
                           "serial=" + serial->str());
    }
    case Operation::ProxyCreate: {
        auto project = Name::parse(arg(a, "project"));
        auto lifetime = decode::positive_integer(arg(a, "lifetime"));
        if (!project || !lifetime)
            return {};
        auto up = repo::create_proxy(b.repository, *m.current_user(), *project, *lifetime, now);
        Execution x;
        x.detail = "project=" + project->str();
        if (up.report == Report::Success) {
            x.report = Report::Success;
            x.extra["serial"] = up.proxy->serial.str();
            x.extra["notAfter"] = std::to_string(up.proxy->certificate.notAfter);
            x.detail = "serial=" + up.proxy->serial.str() + " " + x.detail;
            x.backend = Backend{b.table, std::move(up.repository)};
        }
        return x;
    }
    case Operation::ProxyRevoke: {
        auto serial = SerialNb::parse(arg(a, "serial"));
        if (!serial)
            return {};
        return from_update(repo::revoke_proxy(b.repository, *serial), b,
                           "serial=" + serial->str());
    }
    case Operation::ProxyList: {
        Execution x;
        x.report = Report::Success;
        x.extra = render_proxy_list(b.repository);
        return x;
    }
    default:
        return {};
    }
}

}  // namespace

StepResult step(const SessionMachine& m, const ProtocolEvent& e, const Backend& backend,
                Timestamp now)
{
    StepResult refused{m, std::nullopt, true, std::nullopt, std::nullopt};
    if (!e.well_formed() || !offered_events(m).contains(e.name))
        return refused;

    SessionMachine next = m;
    const Operation op = e.name.op;

    if (e.name.kind == EventKind::Announce) {
        MachineAccess::set_pending(next, op);
        return StepResult{std::move(next), std::nullopt, false, std::nullopt, std::nullopt};
    }

    // e is the pending request
    MachineAccess::set_pending(next, std::nullopt);
    Execution x;
    if (decode::has_exact_fields(op, e.args)) {
        switch (op) {
        case Operation::Login:
            x = run_login(next, e.args, backend);
            break;
        case Operation::ChangePassword:
            x = run_change_password(next, e.args, backend);
            break;
        case Operation::Logout:
            x = run_logout(next, e.args);
            break;
        default:
            x = run_admin(op, next, e.args, backend, now);
            break;
        }
    }
    if (op != Operation::Login && m.current_user())
        x.auditUser = m.current_user()->str();

    StepResult out;
    out.machine = std::move(next);
    out.output = ProtocolEvent::response(op, x.report, std::move(x.extra));
    out.backend = std::move(x.backend);
    if (op != Operation::ProxyList)
        out.audit = AuditNote{x.auditUser, op, x.report, std::move(x.detail)};
    return out;
}

SessionRun run_session(const SessionMachine& m, const std::vector<ProtocolEvent>& trace,
                       const Backend& backend, Timestamp now)
{
    SessionRun run{m, backend, {}};
    for (const auto& e : trace) {
        StepResult r = step(run.machine, e, run.backend, now);
        if (r.refused) {
            run.outputs.push_back(SessionOutput{true, e});
            continue;
        }
        run.machine = std::move(r.machine);
        if (r.backend)
            run.backend = std::move(*r.backend);
        if (r.output)
            run.outputs.push_back(SessionOutput{false, std::move(*r.output)});
    }
    return run;
}

}  // namespace acd::protocol
