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

// The session state machine and the process description accept exactly the
// same traces, compared by exhaustive enumeration to a fixed depth.

#include "acd/model/gateway_model.hpp"

#include "acd/local_auth/credential_table.hpp"
#include "acd/repository/certificate.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace acd;
using namespace acd::model;

namespace {

constexpr Timestamp kNow = 1'700'000'000;
constexpr int kDepth = 6;
constexpr std::size_t kNodeLimit = 100'000;

std::string show(const Trace& t)
{
    std::ostringstream out;
    out << "<";
    for (std::size_t i = 0; i < t.size(); ++i)
        out << (i ? ", " : "") << t[i].str();
    out << ">";
    return out.str();
}

void compare(const ProcessEnvironment& env, const TermPtr& process,
             const protocol::SessionMachine& machine, const Backend& backend)
{
    auto model = enumerate_traces(env, process, backend, kDepth, kNodeLimit);
    auto session = enumerate_session_traces(machine, backend, kNow, candidate_events(env), kDepth,
                                            kNodeLimit);
    MESSAGE("model traces " << model.traces.size() << " (" << model.nodes
                            << " nodes), session traces " << session.traces.size() << " ("
                            << session.nodes << " nodes)");
    CHECK(model.nodes < kNodeLimit);
    CHECK(session.nodes < kNodeLimit);
    for (const auto& t : model.traces)
        if (!session.traces.contains(t))
            FAIL_CHECK("model only: " << show(t));
    for (const auto& t : session.traces)
        if (!model.traces.contains(t))
            FAIL_CHECK("session only: " << show(t));
    CHECK(model.traces.size() > 1);
}

}  // namespace

TEST_CASE("unauthenticated sessions")
{
    auto env = load_gateway_model(testing::model_file(), kNow);
    env.domains["user"] = {"ali", "mark", "root", "ghost"};
    env.domains["password"] = {"pwdx", "rootpw", "bad"};
    compare(env, env.call("DB"), {}, Backend{local_auth::init_fixture(), {}});
}

TEST_CASE("end user sessions")
{
    auto env = load_gateway_model(testing::model_file(), kNow);
    env.domains["user"] = {"ali", "mark"};
    env.domains["password"] = {"pwdx", "bad"};
    env.domains["newpassword"] = {"n3w", "pwdx"};
    compare(env, env.call("AUTH", {"ali", "EndUser"}),
            protocol::SessionMachine::authenticated(UserId::of("ali"), Role::EndUser),
            Backend{local_auth::init_fixture(), {}});
}

TEST_CASE("administrator sessions with a registered certificate")
{
    auto env = load_gateway_model(testing::model_file(), kNow);
    auto keys = repository::generate_key_pair();
    auto cert = repository::make_self_signed(SerialNb{5}, SubjectDN::of("/O=Grid/CN=other"), keys,
                                             kNow - 10, kNow + 86'400);
    env.domains["user"] = {"ali", "root", "bob"};
    env.domains["password"] = {"pwdx"};
    env.domains["newpassword"] = {"n3w"};
    env.domains["role"] = {"EndUser"};
    env.domains["certificate"] = {repository::encode_certificate(cert)};
    env.domains["secretkey"] = {keys.privateKey.hex()};
    env.domains["project"] = {"virolab", "other"};
    env.domains["serial"] = {"1", "2", "5"};
    env.domains["lifetime"] = {"3600"};

    Backend b{local_auth::init_fixture(),
              testing::repository_with_certificate(SerialNb{1}, "virolab", kNow)};
    compare(env, env.call("AUTH", {"root", "Administrator"}),
            protocol::SessionMachine::authenticated(UserId::of("root"), Role::Administrator), b);
}

TEST_CASE("the comparison detects a weakened model")
{
    auto env = load_gateway_model(testing::model_file(), kNow);
    env.predicates["pre-login"] = [](const Values&, const Backend&) { return true; };
    env.domains["user"] = {"ali", "root"};
    Backend b{local_auth::init_fixture(), {}};
    auto model = enumerate_traces(env, env.call("DB"), b, 3).traces;
    auto session = enumerate_session_traces({}, b, kNow, candidate_events(env), 3).traces;
    CHECK(model != session);
    CHECK(model.contains({Event{"Login", {}}, Event{"LoginRequest", {"ali", "bad"}},
                          Event{"LoginResponse", {"Success"}}}));
}
