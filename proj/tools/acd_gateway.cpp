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

// acd-gateway: serves the credential store over TCP.

#include "acd/cli/password.hpp"
#include "acd/gateway/server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <pthread.h>
#include <thread>

namespace {

using namespace acd;

std::string env_or(const char* name, std::string fallback)
{
    const char* v = std::getenv(name);
    return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

local_auth::CredentialTable fixture_table(hashing::HashScheme scheme)
{
    if (scheme == hashing::HashScheme::Md5Compat)
        return local_auth::init_fixture();
    local_auth::CredentialTable t(scheme);
    for (const auto& f : local_auth::kFixtureUsers)
        t = local_auth::add_credential(t, UserId::of(f.username), Secret::of(f.password), f.role)
                .table;
    return t;
}

int run(int argc, char** argv)
{
    CLI::App app{"Authentication and credential gateway"};
    std::string listen = env_or("ACD_LISTEN_ADDR", "127.0.0.1:7070");
    std::string store = env_or("ACD_STORE_PATH", "acd-store.json");
    std::string audit;
    std::string scheme = env_or("ACD_HASH_SCHEME", "strong-kdf");
    bool initFixture = false;
    std::string bootstrapAdmin;
    app.add_option("--listen", listen, "host:port to listen on (port 0 picks one)");
    app.add_option("--store", store, "credential store file");
    app.add_option("--audit", audit, "audit log file (default: <store>.audit)");
    app.add_option("--hash-scheme", scheme, "md5-compat or strong-kdf, for new stores");
    auto* fix = app.add_flag("--init-fixture", initFixture,
                             "create the store with the demo users first");
    app.add_option("--bootstrap-admin", bootstrapAdmin,
                   "create the store with one administrator (password from "
                   "ACD_PASSWORD_FILE or stdin)")
        ->excludes(fix);
    CLI11_PARSE(app, argc, argv);

    if (audit.empty())
        audit = store + ".audit";
    auto hs = hashing::parse_scheme(scheme);
    if (!hs) {
        std::cerr << "acd-gateway: unknown hash scheme '" << scheme << "'\n";
        return 2;
    }
    auto addr = gateway::parse_listen_address(listen);
    if (!addr) {
        std::cerr << "acd-gateway: invalid listen address '" << listen << "'\n";
        return 2;
    }

    try {
        if (initFixture) {
            gateway::initialize_store(store, protocol::Backend{fixture_table(*hs), {}});
        } else if (!bootstrapAdmin.empty()) {
            auto user = UserId::parse(bootstrapAdmin);
            if (!user) {
                std::cerr << "acd-gateway: invalid administrator name\n";
                return 2;
            }
            auto source = cli::PasswordSource::from_environment();
            auto pwd = source.next("administrator password: ");
            if (!pwd || !Secret::parse(*pwd)) {
                std::cerr << "acd-gateway: no administrator password given\n";
                return 2;
            }
            auto t = local_auth::add_credential(local_auth::CredentialTable(*hs), *user,
                                                Secret::of(*pwd), Role::Administrator);
            gateway::initialize_store(store, protocol::Backend{t.table, {}});
        }

        gateway::GatewayOptions options;
        options.storePath = store;
        options.auditPath = audit;
        options.kill = gateway::KillPoint::from_environment();
        auto gw = gateway::Gateway::open(std::move(options));

        // signals are taken by a dedicated thread
        sigset_t signals;
        sigemptyset(&signals);
        sigaddset(&signals, SIGINT);
        sigaddset(&signals, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &signals, nullptr);
        std::signal(SIGPIPE, SIG_IGN);

        gateway::Server server(*gw, addr->first, addr->second);
        std::cout << "listening on " << addr->first << ":" << server.port() << std::endl;
        std::thread waiter([&] {
            int sig = 0;
            sigwait(&signals, &sig);
            server.stop();
        });
        server.run();
        waiter.join();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "acd-gateway: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    return run(argc, argv);
}
