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

#include "acd/model/gateway_model.hpp"

#include "acd/model/parser.hpp"

namespace acd::model {

namespace la = acd::local_auth;
namespace repo = acd::repository;
using protocol::EventKind;
using protocol::Operation;
using protocol::ProtocolEvent;

namespace {

void arity(const Values& v, std::size_t n, const char* name)
{
    if (v.size() != n)
        throw SpecificationError(std::string(name) + " expects " + std::to_string(n) +
                                 " arguments");
}

Backend with_table(const Backend& b, la::CredentialTable t)
{
    return Backend{std::move(t), b.repository};
}

Backend with_repo(const Backend& b, repo::CertificateRepository r)
{
    return Backend{b.table, std::move(r)};
}

}  // namespace

void bind_gateway(ProcessEnvironment& env, Timestamp now)
{
    auto& P = env.predicates;
    auto& F = env.functions;
    auto& E = env.effects;

    P["pre-login"] = [](const Values& v, const Backend& b) {
        arity(v, 2, "pre-login");
        auto u = UserId::parse(v[0]);
        auto p = Secret::parse(v[1]);
        return u && p && la::pre_login(b.table, *u, *p);
    };
    P["pre-change-password"] = [](const Values& v, const Backend& b) {
        arity(v, 3, "pre-change-password");
        auto u = UserId::parse(v[0]);
        auto oldp = Secret::parse(v[1]);
        return u && oldp && Secret::parse(v[2]) && la::pre_change_password(b.table, *u, *oldp);
    };
    P["pre-reset-password"] = [](const Values& v, const Backend& b) {
        arity(v, 2, "pre-reset-password");
        auto u = UserId::parse(v[0]);
        return u && Secret::parse(v[1]) && la::pre_reset_password(b.table, *u);
    };
    P["pre-add-credential"] = [](const Values& v, const Backend& b) {
        arity(v, 3, "pre-add-credential");
        auto u = UserId::parse(v[0]);
        return u && Secret::parse(v[1]) && parse_role(v[2]) &&
               la::pre_add_credential(b.table, *u);
    };
    P["pre-remove-credential"] = [](const Values& v, const Backend& b) {
        arity(v, 1, "pre-remove-credential");
        auto u = UserId::parse(v[0]);
        return u && la::pre_remove_credential(b.table, *u);
    };
    P["pre-add-certificate"] = [](const Values& v, const Backend& b) {
        arity(v, 3, "pre-add-certificate");
        auto cert = repo::decode_certificate(v[0]);
        auto key = protocol::decode::private_key(v[1]);
        return cert && key && Name::parse(v[2]) &&
               repo::pre_add_certificate(b.repository, *cert, *key);
    };
    P["pre-remove-certificate"] = [](const Values& v, const Backend& b) {
        arity(v, 1, "pre-remove-certificate");
        auto sn = SerialNb::parse(v[0]);
        if (!sn)
            return false;
        const auto* cert = b.repository.certificate(*sn);
        return cert != nullptr && repo::pre_remove_certificate(b.repository, *cert);
    };
    P["pre-create-proxy"] = [now](const Values& v, const Backend& b) {
        arity(v, 2, "pre-create-proxy");
        auto project = Name::parse(v[0]);
        auto life = protocol::decode::positive_integer(v[1]);
        return project && life && repo::pre_create_proxy(b.repository, *project, *life, now);
    };
    P["pre-revoke-proxy"] = [](const Values& v, const Backend& b) {
        arity(v, 1, "pre-revoke-proxy");
        auto sn = SerialNb::parse(v[0]);
        return sn && repo::pre_revoke_proxy(b.repository, *sn);
    };

    F["role-of"] = [](const Values& v, const Backend& b) -> Value {
        arity(v, 1, "role-of");
        auto u = UserId::parse(v[0]);
        const la::Entry* e = u ? b.table.find(*u) : nullptr;
        if (e == nullptr)
            throw SpecificationError("role-of: '" + v[0] + "' is not registered");
        return std::string(render_role(e->role));
    };

    E["change-password"] = [](const Values& v, const Backend& b) {
        arity(v, 3, "change-password");
        return with_table(b, la::change_password(b.table, UserId::of(v[0]), Secret::of(v[1]),
                                                 Secret::of(v[2]))
                                 .table);
    };
    E["reset-password"] = [](const Values& v, const Backend& b) {
        arity(v, 2, "reset-password");
        return with_table(b, la::reset_password(b.table, UserId::of(v[0]), Secret::of(v[1])).table);
    };
    E["add-credential"] = [](const Values& v, const Backend& b) {
        arity(v, 3, "add-credential");
        return with_table(b, la::add_credential(b.table, UserId::of(v[0]), Secret::of(v[1]),
                                                *parse_role(v[2]))
                                 .table);
    };
    E["remove-credential"] = [](const Values& v, const Backend& b) {
        arity(v, 1, "remove-credential");
        return with_table(b, la::remove_credential(b.table, UserId::of(v[0])).table);
    };
    E["add-certificate"] = [](const Values& v, const Backend& b) {
        arity(v, 3, "add-certificate");
        return with_repo(b, repo::add_certificate(b.repository, *repo::decode_certificate(v[0]),
                                                  *protocol::decode::private_key(v[1]),
                                                  Name::of(v[2]))
                                .repository);
    };
    E["remove-certificate"] = [](const Values& v, const Backend& b) {
        arity(v, 1, "remove-certificate");
        const auto* cert = b.repository.certificate(*SerialNb::parse(v[0]));
        return with_repo(b, repo::remove_certificate(b.repository, *cert).repository);
    };
    E["create-proxy"] = [now](const Values& v, const Backend& b) {
        arity(v, 3, "create-proxy");
        return with_repo(b, repo::create_proxy(b.repository, UserId::of(v[0]), Name::of(v[1]),
                                               *protocol::decode::positive_integer(v[2]), now)
                                .repository);
    };
    E["revoke-proxy"] = [](const Values& v, const Backend& b) {
        arity(v, 1, "revoke-proxy");
        return with_repo(b, repo::revoke_proxy(b.repository, *SerialNb::parse(v[0])).repository);
    };
}

ProcessEnvironment load_gateway_model(const std::filesystem::path& path, Timestamp now)
{
    ProcessEnvironment env = parse_process_file(path);
    bind_gateway(env, now);
    env.validate();
    return env;
}

// ---------------------------------------------------------------------------

Event to_model_event(const ProtocolEvent& e)
{
    Event out{e.name.str(), {}};
    switch (e.name.kind) {
    case EventKind::Announce:
        break;
    case EventKind::Request:
        for (auto f : protocol::request_fields(e.name.op)) {
            auto it = e.args.find(std::string(f));
            out.fields.push_back(it == e.args.end() ? std::string() : it->second);
        }
        break;
    case EventKind::Response:
        out.fields.emplace_back(render_report(e.report.value_or(Report::Failure)));
        break;
    }
    return out;
}

std::optional<ProtocolEvent> from_model_event(const Event& e)
{
    auto name = protocol::EventName::parse(e.name);
    if (!name)
        return std::nullopt;
    switch (name->kind) {
    case EventKind::Announce:
        if (!e.fields.empty())
            return std::nullopt;
        return ProtocolEvent::announce(name->op);
    case EventKind::Request: {
        auto fields = protocol::request_fields(name->op);
        if (fields.size() != e.fields.size())
            return std::nullopt;
        protocol::Args args;
        for (std::size_t i = 0; i < fields.size(); ++i)
            args[std::string(fields[i])] = e.fields[i];
        return ProtocolEvent::request(name->op, std::move(args));
    }
    case EventKind::Response: {
        if (e.fields.size() != 1)
            return std::nullopt;
        auto r = parse_report(e.fields[0]);
        if (!r)
            return std::nullopt;
        return ProtocolEvent::response(name->op, *r);
    }
    }
    return std::nullopt;
}

namespace {

// Domain each request argument ranges over in gateway.csp.
const char* domain_of(Operation op, std::string_view field)
{
    if (field == "username")
        return "user";
    if (field == "pwd" || (field == "oldpwd"))
        return "password";
    if (field == "newpwd")
        return "newpassword";
    if (field == "role")
        return "role";
    if (field == "cert")
        return "certificate";
    if (field == "secretKey")
        return "secretkey";
    if (field == "project")
        return "project";
    if (field == "serial")
        return "serial";
    if (field == "lifetime")
        return "lifetime";
    throw SpecificationError("no domain for " + std::string(protocol::operation_name(op)) + "." +
                             std::string(field));
}

void expand_requests(const ProcessEnvironment& env, Operation op, std::size_t i,
                     protocol::Args& args, std::vector<ProtocolEvent>& out)
{
    auto fields = protocol::request_fields(op);
    if (i == fields.size()) {
        out.push_back(ProtocolEvent::request(op, args));
        return;
    }
    auto it = env.domains.find(domain_of(op, fields[i]));
    if (it == env.domains.end())
        return;
    for (const auto& v : it->second) {
        args[std::string(fields[i])] = v;
        expand_requests(env, op, i + 1, args, out);
    }
    args.erase(std::string(fields[i]));
}

void explore(const protocol::SessionMachine& m, const Backend& b, Timestamp now,
             const std::vector<ProtocolEvent>& candidates, int depth, Trace& trace,
             Enumeration& out, std::size_t budget)
{
    if (++out.nodes > budget)
        throw StateSpaceExceeded("session enumeration exceeded " + std::to_string(budget) +
                                 " nodes");
    out.traces.insert(trace);
    if (static_cast<int>(trace.size()) == depth)
        return;
    for (const auto& e : candidates) {
        auto r = protocol::step(m, e, b, now);
        if (r.refused)
            continue;
        const Backend& next = r.backend ? *r.backend : b;
        trace.push_back(to_model_event(e));
        if (!r.output) {
            explore(r.machine, next, now, candidates, depth, trace, out, budget);
        } else if (static_cast<int>(trace.size()) == depth) {
            ++out.nodes;
            out.traces.insert(trace);
        } else {
            ++out.nodes;
            out.traces.insert(trace);
            trace.push_back(to_model_event(*r.output));
            explore(r.machine, next, now, candidates, depth, trace, out, budget);
            trace.pop_back();
        }
        trace.pop_back();
    }
}

}  // namespace

std::vector<ProtocolEvent> candidate_events(const ProcessEnvironment& env)
{
    std::vector<ProtocolEvent> out;
    for (Operation op : protocol::all_operations()) {
        out.push_back(ProtocolEvent::announce(op));
        protocol::Args args;
        expand_requests(env, op, 0, args, out);
        out.push_back(ProtocolEvent::response(op, Report::Success));
        out.push_back(ProtocolEvent::response(op, Report::Failure));
    }
    return out;
}

Enumeration enumerate_session_traces(const protocol::SessionMachine& machine,
                                     const protocol::Backend& backend, Timestamp now,
                                     const std::vector<ProtocolEvent>& candidates, int depth,
                                     std::size_t nodeBudget)
{
    if (depth < 1 || depth > kMaxTraceDepth)
        throw std::invalid_argument("trace depth must be within 1.." +
                                    std::to_string(kMaxTraceDepth));
    Enumeration out;
    Trace trace;
    explore(machine, backend, now, candidates, depth, trace, out, nodeBudget);
    return out;
}

}  // namespace acd::model
