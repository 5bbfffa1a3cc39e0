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

#include "support.hpp"

#include "acd/repository/certificate.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <poll.h>
#include <set>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace acd::testing {

namespace la = acd::local_auth;
namespace repo = acd::repository;

TempDir::TempDir()
{
    std::string tmpl = (std::filesystem::temp_directory_path() / "acd-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr)
        throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
}

TempDir::~TempDir()
{
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::size_t uniform(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng, double p)
{
    return std::bernoulli_distribution(p)(rng);
}

std::string random_bytes(Rng& rng, std::size_t maxLength)
{
    std::string s(uniform(rng, maxLength + 1), '\0');
    for (auto& c : s)
        c = static_cast<char>(uniform(rng, 256));
    return s;
}

// --- reference table -------------------------------------------------------------

ReferenceTable ReferenceTable::fixture()
{
    ReferenceTable t;
    for (const auto& f : la::kFixtureUsers)
        t.users[f.username] = {f.password, f.role};
    return t;
}

Report ReferenceTable::login(const std::string& u, const std::string& p) const
{
    auto it = users.find(u);
    return it != users.end() && it->second.first == p ? Report::Success : Report::Failure;
}

Report ReferenceTable::change_password(const std::string& u, const std::string& oldp,
                                       const std::string& newp)
{
    auto it = users.find(u);
    if (it == users.end() || it->second.first != oldp)
        return Report::Failure;
    it->second.first = newp;
    return Report::Success;
}

Report ReferenceTable::add_credential(const std::string& u, const std::string& p, Role r)
{
    return users.emplace(u, std::make_pair(p, r)).second ? Report::Success : Report::Failure;
}

Report ReferenceTable::remove_credential(const std::string& u)
{
    return users.erase(u) > 0 ? Report::Success : Report::Failure;
}

Report ReferenceTable::reset_password(const std::string& u, const std::string& newp)
{
    auto it = users.find(u);
    if (it == users.end())
        return Report::Failure;
    it->second.first = newp;
    return Report::Success;
}

AuthCall random_auth_call(Rng& rng)
{
    static const std::vector<std::string> users = {"ali", "mark", "john", "root", "eve", "bob",
                                                   "Ali", "ali "};
    static const std::vector<std::string> pwds = {"pwdx", "mrk3000", "wnd1980", "rootpw",
                                                  "p1",   "p2",      "PWDX"};
    auto word = [&](const std::vector<std::string>& pool) {
        if (coin(rng, 0.85))
            return pick(rng, pool);
        std::string s(1 + uniform(rng, 8), 'a');
        for (auto& c : s)
            c = static_cast<char>('a' + uniform(rng, 26));
        return s;
    };
    AuthCall c;
    c.op = static_cast<AuthOp>(uniform(rng, 5));
    c.user = word(users);
    c.pwd = word(pwds);
    c.newpwd = word(pwds);
    c.role = coin(rng, 0.8) ? Role::EndUser : Role::Administrator;
    return c;
}

std::pair<la::CredentialTable, Report> apply(const la::CredentialTable& t, const AuthCall& c)
{
    UserId u = UserId::of(c.user);
    switch (c.op) {
    case AuthOp::Login:
        return {t, la::login(t, u, Secret::of(c.pwd)).report};
    case AuthOp::ChangePassword: {
        auto up = la::change_password(t, u, Secret::of(c.pwd), Secret::of(c.newpwd));
        return {std::move(up.table), up.outcome.report};
    }
    case AuthOp::AddCredential: {
        auto up = la::add_credential(t, u, Secret::of(c.pwd), c.role);
        return {std::move(up.table), up.outcome.report};
    }
    case AuthOp::RemoveCredential: {
        auto up = la::remove_credential(t, u);
        return {std::move(up.table), up.outcome.report};
    }
    case AuthOp::ResetPassword: {
        auto up = la::reset_password(t, u, Secret::of(c.newpwd));
        return {std::move(up.table), up.outcome.report};
    }
    }
    return {t, Report::Failure};
}

Report apply(ReferenceTable& t, const AuthCall& c)
{
    switch (c.op) {
    case AuthOp::Login:
        return t.login(c.user, c.pwd);
    case AuthOp::ChangePassword:
        return t.change_password(c.user, c.pwd, c.newpwd);
    case AuthOp::AddCredential:
        return t.add_credential(c.user, c.pwd, c.role);
    case AuthOp::RemoveCredential:
        return t.remove_credential(c.user);
    case AuthOp::ResetPassword:
        return t.reset_password(c.user, c.newpwd);
    }
    return Report::Failure;
}

std::optional<std::string> table_violation(const la::CredentialTable& t)
{
    std::set<UserId> keys;
    for (const auto& [u, e] : t.entries()) {
        keys.insert(u);
        if (e.digest.size() != hashing::output_length(t.scheme()))
            return "digest width of " + u.str();
        // the fixture's md5-compat users carry the empty salt, everyone
        // else a generated one
        if (e.salt.size() != 0 && e.salt.size() != Salt::kGeneratedLength)
            return "salt of " + u.str();
    }
    if (t.registered_users() != keys)
        return "registered users differ from the table's domain";
    if (t.size() != keys.size())
        return "size";
    if (auto v = t.check_invariants())
        return "check_invariants: " + *v;
    return std::nullopt;
}

// --- repository ------------------------------------------------------------------

namespace {

template <class K, class V>
std::set<K> dom(const std::map<K, V>& m)
{
    std::set<K> out;
    for (const auto& [k, _] : m)
        out.insert(k);
    return out;
}

template <class K, class V>
std::set<V> ran(const std::map<K, V>& m)
{
    std::set<V> out;
    for (const auto& [_, v] : m)
        out.insert(v);
    return out;
}

template <class T>
bool subset(const std::set<T>& a, const std::set<T>& b)
{
    for (const auto& x : a)
        if (!b.contains(x))
            return false;
    return true;
}

const std::vector<std::string> kProjects = {"virolab", "astro", "bio"};
const std::vector<std::string> kUsers = {"ali", "mark", "root"};

repo::Certificate make_cert(SerialNb serial, const repo::KeyPair& keys, Timestamp nb,
                            Timestamp na)
{
    return repo::make_self_signed(serial, SubjectDN::of("/O=Grid/CN=s" + serial.str()), keys, nb,
                                  na);
}

}  // namespace

std::optional<std::string> repository_violation(const repo::CertificateRepository& r)
{
    const auto& s = r.state();
    if (dom(s.keyAssociation) != dom(s.certificates))
        return "keys and certificates differ";
    if (!subset(ran(s.certAssociation), dom(s.certificates)))
        return "dangling project mapping";
    if (!subset(dom(s.certAssociation), dom(s.names)))
        return "unregistered project name";
    auto proxies = dom(s.proxyCertificates);
    if (dom(s.proxySecretKey) != proxies || dom(s.proxyIssuer) != proxies ||
        dom(s.userProxy) != proxies || dom(s.issuedProxies) != proxies)
        return "proxy maps disagree";
    if (s.issuedProxies != s.proxyIssuer)
        return "issuedProxies differs from proxyIssuer";
    if (!subset(ran(s.proxyIssuer), dom(s.certificates)))
        return "proxy issuer not held";
    for (const auto& [sn, c] : s.certificates) {
        if (c.serial != sn || c.isProxy || c.notBefore >= c.notAfter)
            return "malformed certificate " + sn.str();
        if (s.proxyCertificates.contains(sn))
            return "serial used twice: " + sn.str();
        if (sn.value >= s.nextSerial)
            return "allocator behind certificate " + sn.str();
        if (!repo::valid_pki_key_pair(c.publicKey, s.keyAssociation.at(sn)))
            return "key mismatch for " + sn.str();
    }
    for (const auto& [sn, c] : s.proxyCertificates) {
        if (c.serial != sn || !c.isProxy)
            return "malformed proxy " + sn.str();
        if (sn.value >= s.nextSerial)
            return "allocator behind proxy " + sn.str();
        if (c.notAfter - c.notBefore > repo::kMaxProxyLifetime || c.notBefore >= c.notAfter)
            return "proxy lifetime of " + sn.str();
        const auto& issuer = s.certificates.at(s.proxyIssuer.at(sn));
        if (!repo::verify_certificate(c, issuer.publicKey))
            return "proxy " + sn.str() + " not signed by its issuer";
        if (!repo::valid_pki_key_pair(c.publicKey, s.proxySecretKey.at(sn)))
            return "proxy key mismatch for " + sn.str();
    }
    if (auto v = r.check_invariants())
        return "check_invariants: " + *v;
    return std::nullopt;
}

repo::CertificateRepository repository_with_certificate(SerialNb serial, const std::string& project,
                                                       Timestamp now)
{
    auto keys = repo::generate_key_pair();
    auto up = repo::add_certificate({}, make_cert(serial, keys, now - 10, now + 365 * 86400),
                                    keys.privateKey, Name::of(project));
    if (up.report != Report::Success)
        throw std::logic_error("could not seed repository");
    return up.repository;
}

RepoStep random_repository_step(Rng& rng, const repo::CertificateRepository& r, Timestamp now)
{
    const auto& s = r.state();
    std::size_t roll = uniform(rng, 100);
    if (roll < 30) {
        SerialNb sn{1 + uniform(rng, 30)};
        auto keys = repo::generate_key_pair();
        Timestamp nb = now - 100, na = now + 1000 + static_cast<Timestamp>(uniform(rng, 100000));
        if (coin(rng, 0.1))
            na = now - 1;  // expired
        if (coin(rng, 0.05))
            na = nb;  // empty window
        auto cert = make_cert(sn, keys, nb, na);
        KeyMaterial key = coin(rng, 0.1) ? repo::generate_key_pair().privateKey : keys.privateKey;
        const auto& project = pick(rng, kProjects);
        auto up = repo::add_certificate(r, cert, key, Name::of(project));
        return {up.repository, up.report, "add " + sn.str() + " " + project};
    }
    if (roll < 45) {
        auto cert = make_cert(SerialNb{1 + uniform(rng, 30)}, repo::generate_key_pair(), now,
                              now + 10);
        if (!s.certificates.empty() && coin(rng, 0.8)) {
            auto it = s.certificates.begin();
            std::advance(it, static_cast<long>(uniform(rng, s.certificates.size())));
            cert = it->second;
        }
        auto up = repo::remove_certificate(r, cert);
        return {up.repository, up.report, "remove " + cert.serial.str()};
    }
    if (roll < 80) {
        static const std::vector<std::int64_t> lifetimes = {-5, 0, 1, 3600, 86400, 100000};
        std::string project = coin(rng, 0.9) ? pick(rng, kProjects) : std::string("nope");
        auto life = pick(rng, lifetimes);
        auto up = repo::create_proxy(r, UserId::of(pick(rng, kUsers)), Name::of(project), life,
                                     now);
        return {up.repository, up.report, "proxy " + project + " " + std::to_string(life)};
    }
    SerialNb sn{1 + uniform(rng, 40)};
    if (!s.proxyCertificates.empty() && coin(rng, 0.7)) {
        auto it = s.proxyCertificates.begin();
        std::advance(it, static_cast<long>(uniform(rng, s.proxyCertificates.size())));
        sn = it->first;
    }
    auto up = repo::revoke_proxy(r, sn);
    return {up.repository, up.report, "revoke " + sn.str()};
}

// --- processes --------------------------------------------------------------------

namespace {

std::vector<char*> c_strings(std::vector<std::string>& v)
{
    std::vector<char*> out;
    for (auto& s : v)
        out.push_back(s.data());
    out.push_back(nullptr);
    return out;
}

std::vector<std::string> merged_environment(
    const std::vector<std::pair<std::string, std::string>>& extra)
{
    std::vector<std::string> env;
    for (char** e = environ; *e != nullptr; ++e) {
        std::string entry(*e);
        bool overridden = false;
        for (const auto& [k, _] : extra)
            overridden = overridden || entry.rfind(k + "=", 0) == 0;
        if (!overridden)
            env.push_back(entry);
    }
    for (const auto& [k, v] : extra)
        env.push_back(k + "=" + v);
    return env;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int exit_status(int status)
{
    if (WIFEXITED(status))
        return WEXITSTATUS(status);
    if (WIFSIGNALED(status))
        return 128 + WTERMSIG(status);
    return -1;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv,
                          const std::vector<std::pair<std::string, std::string>>& env,
                          const std::string& input)
{
    TempDir dir;
    auto outPath = dir / "stdout";
    auto errPath = dir / "stderr";
    auto inPath = dir / "stdin";
    std::ofstream(inPath, std::ios::binary) << input;

    std::vector<std::string> args = argv;
    std::vector<std::string> envs = merged_environment(env);
    auto cargs = c_strings(args);
    auto cenv = c_strings(envs);

    pid_t pid = ::fork();
    if (pid == 0) {
        int in = ::open(inPath.c_str(), O_RDONLY);
        int out = ::open(outPath.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
        int err = ::open(errPath.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
        ::dup2(in, 0);
        ::dup2(out, 1);
        ::dup2(err, 2);
        ::execve(cargs[0], cargs.data(), cenv.data());
        ::_exit(127);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    return {exit_status(status), slurp(outPath), slurp(errPath)};
}

GatewayProcess::GatewayProcess(const std::filesystem::path& store,
                               const std::vector<std::string>& extraArgs,
                               const std::vector<std::pair<std::string, std::string>>& env)
{
    std::vector<std::string> args = {gateway_binary().string(), "--listen", "127.0.0.1:0",
                                     "--store", store.string()};
    args.insert(args.end(), extraArgs.begin(), extraArgs.end());
    std::vector<std::string> envs = merged_environment(env);
    auto cargs = c_strings(args);
    auto cenv = c_strings(envs);

    int fds[2];
    if (::pipe(fds) != 0)
        throw std::runtime_error("pipe failed");
    pid_t pid = ::fork();
    if (pid == 0) {
        ::dup2(fds[1], 1);
        ::close(fds[0]);
        ::close(fds[1]);
        ::execve(cargs[0], cargs.data(), cenv.data());
        ::_exit(127);
    }
    pid_ = pid;
    ::close(fds[1]);

    std::string line;
    pollfd p{fds[0], POLLIN, 0};
    while (line.find('\n') == std::string::npos && ::poll(&p, 1, 10000) > 0) {
        char buf[256];
        ssize_t n = ::read(fds[0], buf, sizeof buf);
        if (n <= 0)
            break;
        line.append(buf, static_cast<std::size_t>(n));
    }
    ::close(fds[0]);
    auto colon = line.rfind(':');
    if (line.rfind("listening on ", 0) == 0 && colon != std::string::npos)
        port_ = static_cast<std::uint16_t>(std::stoi(line.substr(colon + 1)));
}

GatewayProcess::~GatewayProcess()
{
    if (pid_ > 0)
        stop();
}

int GatewayProcess::wait()
{
    if (pid_ <= 0)
        return -1;
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
    return exit_status(status);
}

int GatewayProcess::stop()
{
    if (pid_ <= 0)
        return -1;
    ::kill(pid_, SIGTERM);
    return wait();
}

std::filesystem::path gateway_binary()
{
    return ACD_GATEWAY_BIN;
}

std::filesystem::path cli_binary()
{
    return ACD_CLI_BIN;
}

std::filesystem::path model_file()
{
    return ACD_MODEL_FILE;
}

}  // namespace acd::testing
