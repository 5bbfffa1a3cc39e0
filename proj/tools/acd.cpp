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

// acd: command-line client for the gateway.
//
// Exit status: 0 success, 1 the server answered Failure or did not permit
// the operation, 2 usage or transport errors.

#include "acd/cli/client.hpp"
#include "acd/cli/password.hpp"
#include "acd/cli/wallet.hpp"
#include "acd/gateway/audit.hpp"
#include "acd/gateway/gateway.hpp"
#include "acd/repository/certificate.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <deque>
#include <functional>
#include <iostream>
#include <sstream>
#include <unistd.h>

namespace {

using namespace acd;
using cli::Connection;
using cli::OperationResult;
using protocol::Operation;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Context {
    std::string server = cli::default_server_address();
    std::string user;
    std::string walletPath = cli::default_wallet_path().string();
    cli::PasswordSource passwords;

    UserId user_id() const
    {
        if (user.empty())
            throw UsageError("no user given (use --user or ACD_USER)");
        auto u = UserId::parse(user);
        if (!u)
            throw UsageError("invalid user name '" + user + "'");
        return *u;
    }

    std::string next_password(std::string_view prompt)
    {
        auto p = passwords.next(prompt);
        if (!p || p->empty())
            throw UsageError("no password given");
        return *p;
    }

    /// File first, then the wallet, then the terminal.
    std::string login_password(const UserId& u)
    {
        if (!passwords.from_file()) {
            auto w = cli::ClientWallet::load(walletPath);
            if (const std::string* p = w.find(u))
                return *p;
        }
        return next_password("password for " + u.str() + ": ");
    }
};

int report(const OperationResult& r)
{
    if (r.refused) {
        std::cerr << "operation not permitted in this session\n";
        std::cout << "Failure\n";
        return kFailure;
    }
    std::cout << render_report(r.report) << '\n';
    return r.success() ? kOk : kFailure;
}

UserId parse_user(const std::string& text)
{
    auto u = UserId::parse(text);
    if (!u)
        throw UsageError("invalid user name '" + text + "'");
    return *u;
}

// Argument checks run before connecting, so a usage error never leaves a
// half-finished session behind.
void check_serial(const std::string& serial)
{
    if (!SerialNb::parse(serial))
        throw UsageError("invalid serial number '" + serial + "'");
}

void check_role(const std::string& role)
{
    if (!parse_role(role))
        throw UsageError("role must be EndUser or Administrator");
}

void check_certificate_request(const std::string& subject, const std::string& project,
                               std::int64_t days)
{
    if (!SubjectDN::parse(subject))
        throw UsageError("invalid subject");
    if (!Name::parse(project))
        throw UsageError("invalid project name");
    if (days <= 0)
        throw UsageError("validity must be positive");
}

// --- operations on an authenticated connection ----------------------------

int op_change_password(Connection& c, Context& ctx, const UserId& u, const std::string& oldpwd)
{
    std::string newpwd = ctx.next_password("new password: ");
    auto r = cli::perform(c, Operation::ChangePassword,
                          {{"username", u.str()}, {"oldpwd", oldpwd}, {"newpwd", newpwd}});
    if (r.success()) {
        auto w = cli::ClientWallet::load(ctx.walletPath);
        if (w.find(u) != nullptr) {
            w.put(u, newpwd);
            w.save(ctx.walletPath);
        }
    }
    return report(r);
}

int op_add_user(Connection& c, Context& ctx, const std::string& name, const std::string& role)
{
    check_role(role);
    UserId u = parse_user(name);
    std::string pwd = ctx.next_password("password for " + u.str() + ": ");
    return report(cli::perform(c, Operation::AddCredential,
                               {{"username", u.str()}, {"pwd", pwd}, {"role", role}}));
}

int op_remove_user(Connection& c, const std::string& name)
{
    return report(
        cli::perform(c, Operation::RemoveCredential, {{"username", parse_user(name).str()}}));
}

int op_reset_password(Connection& c, Context& ctx, const std::string& name)
{
    UserId u = parse_user(name);
    std::string pwd = ctx.next_password("new password for " + u.str() + ": ");
    return report(
        cli::perform(c, Operation::ResetPassword, {{"username", u.str()}, {"newpwd", pwd}}));
}

int op_cert_add(Connection& c, std::uint64_t serial, const std::string& subject,
                const std::string& project, std::int64_t days)
{
    check_certificate_request(subject, project, days);
    auto dn = SubjectDN::parse(subject);
    auto keys = repository::generate_key_pair();
    Timestamp now = gateway::system_now();
    auto cert = repository::make_self_signed(SerialNb{serial}, *dn, keys, now, now + days * 86400);
    return report(cli::perform(c, Operation::CertAdd,
                               {{"cert", repository::encode_certificate(cert)},
                                {"secretKey", keys.privateKey.hex()},
                                {"project", project}}));
}

int op_serial(Connection& c, Operation op, const std::string& serial)
{
    check_serial(serial);
    return report(cli::perform(c, op, {{"serial", serial}}));
}

int op_proxy_create(Connection& c, const std::string& project, std::int64_t lifetime)
{
    auto r = cli::perform(c, Operation::ProxyCreate,
                          {{"project", project}, {"lifetime", std::to_string(lifetime)}});
    int rc = report(r);
    if (r.success())
        for (const auto& [k, v] : r.args)
            std::cout << k << ": " << v << '\n';
    return rc;
}

int op_proxy_list(Connection& c)
{
    auto r = cli::perform(c, Operation::ProxyList, {});
    if (!r.success())
        return report(r);
    for (const auto& [serial, value] : r.args) {
        // issuer:notAfter:user
        auto a = value.find(':');
        auto b = value.find(':', a + 1);
        if (a == std::string::npos || b == std::string::npos) {
            std::cout << serial << ' ' << value << '\n';
            continue;
        }
        std::cout << "serial=" << serial << " issuer=" << value.substr(0, a)
                  << " notAfter=" << value.substr(a + 1, b - a - 1)
                  << " user=" << value.substr(b + 1) << '\n';
    }
    return kOk;
}

// --- sessions ---------------------------------------------------------------

bool login(Connection& c, const UserId& u, const std::string& pwd)
{
    auto r = cli::perform(c, Operation::Login, {{"username", u.str()}, {"pwd", pwd}});
    return r.success();
}

/// Logs in, runs `body`, logs out.
int with_session(Context& ctx,
                 const std::function<int(Connection&, const UserId&, const std::string&)>& body)
{
    UserId u = ctx.user_id();
    std::string pwd = ctx.login_password(u);
    Connection c = Connection::connect(ctx.server);
    if (!login(c, u, pwd)) {
        std::cerr << "login failed\n";
        std::cout << "Failure\n";
        return kFailure;
    }
    int rc = body(c, u, pwd);
    cli::perform(c, Operation::Logout, {{"username", u.str()}});
    return rc;
}

// --- local commands -----------------------------------------------------------

int audit_verify(const std::string& path)
{
    auto r = gateway::verify_audit_chain(path);
    std::cout << "records: " << r.count << '\n';
    if (r.ok) {
        std::cout << "chain: ok\n";
        return kOk;
    }
    std::cout << "chain: broken at record " << *r.firstBadIndex << '\n';
    return kFailure;
}

int audit_tail(const std::string& path, std::size_t n)
{
    std::istringstream in(gateway::read_file(path));
    std::deque<std::string> last;
    for (std::string line; std::getline(in, line);) {
        last.push_back(line);
        if (last.size() > n)
            last.pop_front();
    }
    for (const auto& line : last) {
        auto r = gateway::decode_audit_record(line);
        if (!r) {
            std::cout << "(undecodable) " << line << '\n';
            continue;
        }
        std::cout << r->index << ' ' << r->timestamp << ' ' << r->user << ' ' << r->event << ' '
                  << render_report(r->outcome);
        if (!r->detail.empty())
            std::cout << ' ' << r->detail;
        std::cout << '\n';
    }
    return kOk;
}

// --- interactive shell --------------------------------------------------------

std::vector<std::string> split(const std::string& line)
{
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

constexpr const char* kShellHelp =
    "commands:\n"
    "  login USER | logout | passwd\n"
    "  add-user NAME ROLE | remove-user NAME | reset-password NAME\n"
    "  cert-add SERIAL SUBJECT PROJECT [DAYS] | cert-remove SERIAL\n"
    "  proxy-create PROJECT [LIFETIME] | proxy-revoke SERIAL | proxy-list\n"
    "  help | quit\n";

int shell(Context& ctx)
{
    Connection c = Connection::connect(ctx.server);
    std::optional<UserId> current;
    std::string currentPwd;
    bool tty = ::isatty(STDIN_FILENO) != 0;
    int last = kOk;
    for (;;) {
        if (tty)
            std::cerr << (current ? current->str() : std::string("acd")) << "> " << std::flush;
        std::string line;
        if (!std::getline(std::cin, line))
            break;
        auto w = split(line);
        if (w.empty())
            continue;
        const std::string& cmd = w[0];
        auto need = [&](std::size_t n) {
            if (w.size() < n + 1)
                throw UsageError(cmd + ": missing arguments");
        };
        try {
            if (cmd == "quit" || cmd == "exit") {
                break;
            } else if (cmd == "help") {
                std::cout << kShellHelp;
            } else if (cmd == "login") {
                need(1);
                UserId u = parse_user(w[1]);
                std::string pwd = ctx.login_password(u);
                bool ok = login(c, u, pwd);
                std::cout << (ok ? "Success" : "Failure") << '\n';
                last = ok ? kOk : kFailure;
                if (ok) {
                    current = u;
                    currentPwd = pwd;
                }
            } else if (cmd == "logout") {
                auto r = cli::perform(c, Operation::Logout,
                                      {{"username", current ? current->str() : ""}});
                last = report(r);
                if (r.success())
                    current.reset();
            } else if (cmd == "passwd") {
                if (!current)
                    throw UsageError("not logged in");
                last = op_change_password(c, ctx, *current, currentPwd);
            } else if (cmd == "add-user") {
                need(2);
                last = op_add_user(c, ctx, w[1], w[2]);
            } else if (cmd == "remove-user") {
                need(1);
                last = op_remove_user(c, w[1]);
            } else if (cmd == "reset-password") {
                need(1);
                last = op_reset_password(c, ctx, w[1]);
            } else if (cmd == "cert-add") {
                need(3);
                auto sn = SerialNb::parse(w[1]);
                if (!sn)
                    throw UsageError("invalid serial number");
                last = op_cert_add(c, sn->value, w[2], w[3], w.size() > 4 ? std::stoll(w[4]) : 365);
            } else if (cmd == "cert-remove") {
                need(1);
                last = op_serial(c, Operation::CertRemove, w[1]);
            } else if (cmd == "proxy-create") {
                need(1);
                last = op_proxy_create(c, w[1], w.size() > 2 ? std::stoll(w[2]) : 3600);
            } else if (cmd == "proxy-revoke") {
                need(1);
                last = op_serial(c, Operation::ProxyRevoke, w[1]);
            } else if (cmd == "proxy-list") {
                last = op_proxy_list(c);
            } else {
                throw UsageError("unknown command '" + cmd + "' (try help)");
            }
        } catch (const UsageError& e) {
            std::cerr << e.what() << '\n';
            last = kUsage;
        } catch (const std::logic_error& e) {
            std::cerr << cmd << ": invalid number\n";
            last = kUsage;
        }
    }
    return last;
}

int run(int argc, char** argv)
{
    Context ctx;
    if (const char* u = std::getenv("ACD_USER"))
        ctx.user = u;

    CLI::App app{"Client for the authentication and credential gateway"};
    app.require_subcommand(1);
    app.add_option("--server", ctx.server, "gateway address host:port (ACD_SERVER)");
    app.add_option("-u,--user", ctx.user, "user to log in as (ACD_USER)");
    app.add_option("--wallet", ctx.walletPath, "wallet file (ACD_WALLET_PATH)");

    std::function<int()> action;

    auto* loginCmd = app.add_subcommand("login", "check a password against the gateway");
    bool remember = false;
    loginCmd->add_flag("--remember", remember, "store the password in the wallet on success");
    loginCmd->callback([&] {
        action = [&] {
            return with_session(ctx, [&](Connection&, const UserId& u, const std::string& pwd) {
                std::cout << "Success\n";
                if (remember) {
                    auto w = cli::ClientWallet::load(ctx.walletPath);
                    w.put(u, pwd);
                    w.save(ctx.walletPath);
                }
                return kOk;
            });
        };
    });

    app.add_subcommand("passwd", "change your password")->callback([&] {
        action = [&] {
            return with_session(ctx, [&](Connection& c, const UserId& u, const std::string& p) {
                return op_change_password(c, ctx, u, p);
            });
        };
    });

    auto* admin = app.add_subcommand("admin", "manage users (administrators only)");
    admin->require_subcommand(1);
    std::string target, role = "EndUser";
    auto* addUser = admin->add_subcommand("add-user", "register a user");
    addUser->add_option("name", target)->required();
    addUser->add_option("--role", role, "EndUser or Administrator");
    addUser->callback([&] {
        action = [&] {
            check_role(role);
            parse_user(target);
            return with_session(ctx, [&](Connection& c, const UserId&, const std::string&) {
                return op_add_user(c, ctx, target, role);
            });
        };
    });
    auto* removeUser = admin->add_subcommand("remove-user", "unregister a user");
    removeUser->add_option("name", target)->required();
    removeUser->callback([&] {
        action = [&] {
            parse_user(target);
            return with_session(ctx, [&](Connection& c, const UserId&, const std::string&) {
                return op_remove_user(c, target);
            });
        };
    });
    auto* reset = admin->add_subcommand("reset-password", "set a user's password");
    reset->add_option("name", target)->required();
    reset->callback([&] {
        action = [&] {
            parse_user(target);
            return with_session(ctx, [&](Connection& c, const UserId&, const std::string&) {
                return op_reset_password(c, ctx, target);
            });
        };
    });

    auto* cert = app.add_subcommand("cert", "manage project certificates (administrators)");
    cert->require_subcommand(1);
    std::uint64_t serial = 0;
    std::string subject, project, serialText;
    std::int64_t days = 365, lifetime = 3600;
    auto* certAdd = cert->add_subcommand("add", "generate a key pair and register a certificate");
    certAdd->add_option("--serial", serial, "certificate serial number")->required();
    certAdd->add_option("--subject", subject, "subject DN")->required();
    certAdd->add_option("--project", project, "project the certificate serves")->required();
    certAdd->add_option("--days", days, "validity in days");
    certAdd->callback([&] {
        action = [&] {
            check_certificate_request(subject, project, days);
            return with_session(ctx, [&](Connection& c, const UserId&, const std::string&) {
                return op_cert_add(c, serial, subject, project, days);
            });
        };
    });
    auto* certRemove = cert->add_subcommand("remove", "remove a certificate and its proxies");
    certRemove->add_option("serial", serialText)->required();
    certRemove->callback([&] {
        action = [&] {
            check_serial(serialText);
            return with_session(ctx, [&](Connection& c, const UserId&, const std::string&) {
                return op_serial(c, Operation::CertRemove, serialText);
            });
        };
    });

    auto* proxy = app.add_subcommand("proxy", "issue and revoke proxies (administrators)");
    proxy->require_subcommand(1);
    auto* proxyCreate = proxy->add_subcommand("create", "issue a proxy for a project");
    proxyCreate->add_option("--project", project)->required();
    proxyCreate->add_option("--lifetime", lifetime, "seconds");
    proxyCreate->callback([&] {
        action = [&] {
            return with_session(ctx, [&](Connection& c, const UserId&, const std::string&) {
                return op_proxy_create(c, project, lifetime);
            });
        };
    });
    auto* proxyRevoke = proxy->add_subcommand("revoke", "revoke a proxy");
    proxyRevoke->add_option("serial", serialText)->required();
    proxyRevoke->callback([&] {
        action = [&] {
            check_serial(serialText);
            return with_session(ctx, [&](Connection& c, const UserId&, const std::string&) {
                return op_serial(c, Operation::ProxyRevoke, serialText);
            });
        };
    });
    proxy->add_subcommand("list", "list live proxies")->callback([&] {
        action = [&] {
            return with_session(ctx, [&](Connection& c, const UserId&, const std::string&) {
                return op_proxy_list(c);
            });
        };
    });

    auto* audit = app.add_subcommand("audit", "inspect an audit log file");
    audit->require_subcommand(1);
    std::string auditPath;
    std::size_t tailCount = 10;
    auto* verify = audit->add_subcommand("verify", "check the hash chain");
    verify->add_option("path", auditPath)->required();
    verify->callback([&] { action = [&] { return audit_verify(auditPath); }; });
    auto* tail = audit->add_subcommand("tail", "show the last records");
    tail->add_option("path", auditPath)->required();
    tail->add_option("-n", tailCount, "number of records");
    tail->callback([&] { action = [&] { return audit_tail(auditPath, tailCount); }; });

    auto* wallet = app.add_subcommand("wallet", "manage remembered passwords");
    wallet->require_subcommand(1);
    auto* walletAdd = wallet->add_subcommand("add", "remember a password");
    walletAdd->add_option("name", target)->required();
    walletAdd->callback([&] {
        action = [&] {
            UserId u = parse_user(target);
            auto w = cli::ClientWallet::load(ctx.walletPath);
            w.put(u, ctx.next_password("password for " + u.str() + ": "));
            w.save(ctx.walletPath);
            return kOk;
        };
    });
    auto* walletRemove = wallet->add_subcommand("remove", "forget a password");
    walletRemove->add_option("name", target)->required();
    walletRemove->callback([&] {
        action = [&] {
            auto w = cli::ClientWallet::load(ctx.walletPath);
            if (!w.remove(parse_user(target))) {
                std::cerr << "no wallet entry for " << target << '\n';
                return kFailure;
            }
            w.save(ctx.walletPath);
            return kOk;
        };
    });
    wallet->add_subcommand("list", "list users with a remembered password")->callback([&] {
        action = [&] {
            for (const auto& u : cli::ClientWallet::load(ctx.walletPath).users())
                std::cout << u.str() << '\n';
            return kOk;
        };
    });

    app.add_subcommand("shell", "interactive session over one connection")->callback([&] {
        action = [&] { return shell(ctx); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        ctx.passwords = cli::PasswordSource::from_environment();
        return action ? action() : kUsage;
    } catch (const UsageError& e) {
        std::cerr << "acd: " << e.what() << '\n';
        return kUsage;
    } catch (const cli::TransportError& e) {
        std::cerr << "acd: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "acd: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    return run(argc, argv);
}
