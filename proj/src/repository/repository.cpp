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

#include "acd/repository/repository.hpp"

#include <algorithm>
#include <set>

namespace acd::repository {

std::string_view render_name_kind(NameKind k) noexcept
{
    return k == NameKind::Project ? "project" : "resource";
}

std::optional<NameKind> parse_name_kind(std::string_view s) noexcept
{
    if (s == "project")
        return NameKind::Project;
    if (s == "resource")
        return NameKind::Resource;
    return std::nullopt;
}

struct RepositoryAccess {
    static CertificateRepository::State& state(CertificateRepository& r) { return r.state_; }
};

CertificateRepository CertificateRepository::from_state(State s)
{
    CertificateRepository r;
    r.state_ = std::move(s);
    return r;
}

const Certificate* CertificateRepository::certificate(SerialNb serial) const
{
    auto it = state_.certificates.find(serial);
    return it == state_.certificates.end() ? nullptr : &it->second;
}

const Certificate* CertificateRepository::proxy(SerialNb serial) const
{
    auto it = state_.proxyCertificates.find(serial);
    return it == state_.proxyCertificates.end() ? nullptr : &it->second;
}

std::optional<SerialNb> CertificateRepository::resolve(const Name& project) const
{
    auto it = state_.certAssociation.find(project);
    if (it == state_.certAssociation.end())
        return std::nullopt;
    return it->second;
}

std::optional<UserId> CertificateRepository::proxy_owner(SerialNb proxySerial) const
{
    auto it = state_.userProxy.find(proxySerial);
    if (it == state_.userProxy.end())
        return std::nullopt;
    return it->second;
}

bool CertificateRepository::same_contents(const CertificateRepository& other) const
{
    State a = state_;
    State b = other.state_;
    a.nextSerial = b.nextSerial = 0;
    return a == b;
}

namespace {

template <class K, class V>
std::set<K> domain(const std::map<K, V>& m)
{
    std::set<K> out;
    for (const auto& [k, _] : m)
        out.insert(k);
    return out;
}

}  // namespace

std::optional<std::string> CertificateRepository::check_invariants() const
{
    const State& s = state_;

    // structural
    for (const auto& [serial, c] : s.certificates) {
        if (c.serial != serial)
            return "certificate-serial: entry " + serial.str() + " holds serial " + c.serial.str();
        if (c.isProxy)
            return "certificate-kind: certificate " + serial.str() + " is flagged as a proxy";
        if (c.notBefore >= c.notAfter)
            return "certificate-validity: certificate " + serial.str() + " has notBefore >= notAfter";
    }
    for (const auto& [serial, p] : s.proxyCertificates) {
        if (p.serial != serial)
            return "proxy-serial: entry " + serial.str() + " holds serial " + p.serial.str();
        if (!p.isProxy)
            return "proxy-kind: proxy " + serial.str() + " is not flagged as a proxy";
        if (p.notBefore >= p.notAfter)
            return "proxy-validity: proxy " + serial.str() + " has notBefore >= notAfter";
        if (s.certificates.contains(serial))
            return "serial-unique: serial " + serial.str() + " is both a certificate and a proxy";
    }

    // schema predicates
    for (const auto& [serial, _] : s.certificates)
        if (!s.keyAssociation.contains(serial))
            return "cert-key: certificate " + serial.str() + " has no private key";
    for (const auto& [name, serial] : s.certAssociation)
        if (!s.keyAssociation.contains(serial))
            return "cert-assoc-range: '" + name.str() + "' maps to keyless serial " + serial.str();
    for (const auto& [name, serial] : s.certAssociation)
        if (!s.certificates.contains(serial))
            return "cert-assoc-held: '" + name.str() + "' maps to unheld serial " + serial.str();
    for (const auto& [name, _] : s.certAssociation)
        if (!s.names.contains(name))
            return "cert-assoc-names: '" + name.str() + "' is not a registered name";
    for (const auto& [serial, _] : s.proxyCertificates)
        if (!s.proxySecretKey.contains(serial))
            return "proxy-key: proxy " + serial.str() + " has no secret key";
    {
        auto d = domain(s.proxySecretKey);
        if (d != domain(s.proxyIssuer) || d != domain(s.userProxy) ||
            d != domain(s.issuedProxies))
            return std::string("proxy-domains: proxy maps have different domains");
        if (d != domain(s.proxyCertificates))
            return std::string("proxy-domains: proxy maps disagree with the active proxy set");
    }
    for (const auto& [proxy, issuer] : s.proxyIssuer) {
        if (!s.certificates.contains(issuer))
            return "proxy-issuer: proxy " + proxy.str() + " issued by unknown certificate " +
                   issuer.str();
        if (s.issuedProxies.at(proxy) != issuer)
            return "proxy-issuer: issuedProxies and proxyIssuer disagree for " + proxy.str();
    }

    // the allocator never hands out a serial already in use
    for (const auto* m : {&s.certificates, &s.proxyCertificates})
        if (!m->empty() && m->rbegin()->first.value >= s.nextSerial)
            return std::string("serial-allocator: next serial is not above every held serial");
    return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

bool serial_in_use(const CertificateRepository::State& s, SerialNb serial)
{
    return s.certificates.contains(serial) || s.proxyCertificates.contains(serial);
}

RepoUpdate fail(const CertificateRepository& r)
{
    return RepoUpdate{r, Report::Failure};
}

void drop_proxy(CertificateRepository::State& s, SerialNb serial)
{
    s.proxyCertificates.erase(serial);
    s.issuedProxies.erase(serial);
    s.proxyIssuer.erase(serial);
    s.proxySecretKey.erase(serial);
    s.userProxy.erase(serial);
}

}  // namespace

bool pre_add_certificate(const CertificateRepository& r, const Certificate& cert,
                         const KeyMaterial& secretKey)
{
    const auto& s = r.state();
    return !cert.isProxy && cert.notBefore < cert.notAfter && !serial_in_use(s, cert.serial) &&
           cert.serial.value != UINT64_MAX && valid_pki_key_pair(cert.publicKey, secretKey);
}

bool pre_remove_certificate(const CertificateRepository& r, const Certificate& cert)
{
    const Certificate* held = r.certificate(cert.serial);
    return held != nullptr && *held == cert;
}

bool pre_create_proxy(const CertificateRepository& r, const Name& project,
                      std::int64_t lifetimeSeconds, Timestamp now)
{
    if (lifetimeSeconds <= 0)
        return false;
    auto issuer = r.resolve(project);
    if (!issuer)
        return false;
    const Certificate* c = r.certificate(*issuer);
    return c != nullptr && c->notBefore <= now && now < c->notAfter &&
           r.state().nextSerial != UINT64_MAX;
}

bool pre_revoke_proxy(const CertificateRepository& r, SerialNb serial)
{
    return r.proxy(serial) != nullptr;
}

RepoUpdate add_certificate(const CertificateRepository& r, const Certificate& cert,
                           const KeyMaterial& secretKey, const Name& project)
{
    if (!pre_add_certificate(r, cert, secretKey))
        return fail(r);
    CertificateRepository next = r;
    auto& s = RepositoryAccess::state(next);
    s.certificates.emplace(cert.serial, cert);
    s.keyAssociation.emplace(cert.serial, secretKey);
    s.names.try_emplace(project, NameKind::Project);
    s.certAssociation[project] = cert.serial;
    s.nextSerial = std::max(s.nextSerial, cert.serial.value + 1);
    return RepoUpdate{std::move(next), Report::Success};
}

RepoUpdate remove_certificate(const CertificateRepository& r, const Certificate& cert)
{
    if (!pre_remove_certificate(r, cert))
        return fail(r);
    CertificateRepository next = r;
    auto& s = RepositoryAccess::state(next);
    s.certificates.erase(cert.serial);
    s.keyAssociation.erase(cert.serial);
    for (auto it = s.certAssociation.begin(); it != s.certAssociation.end();) {
        if (it->second == cert.serial) {
            s.names.erase(it->first);
            it = s.certAssociation.erase(it);
        } else {
            ++it;
        }
    }
    std::vector<SerialNb> orphaned;
    for (const auto& [proxy, issuer] : s.proxyIssuer)
        if (issuer == cert.serial)
            orphaned.push_back(proxy);
    for (SerialNb p : orphaned)
        drop_proxy(s, p);
    return RepoUpdate{std::move(next), Report::Success};
}

ProxyUpdate create_proxy(const CertificateRepository& r, const UserId& user, const Name& project,
                         std::int64_t lifetimeSeconds, Timestamp now)
{
    if (!pre_create_proxy(r, project, lifetimeSeconds, now))
        return ProxyUpdate{r, Report::Failure, std::nullopt};

    const SerialNb issuerSerial = *r.resolve(project);
    const Certificate& issuer = *r.certificate(issuerSerial);
    const KeyMaterial& issuerKey = r.state().keyAssociation.at(issuerSerial);

    CertificateRepository next = r;
    auto& s = RepositoryAccess::state(next);
    const SerialNb serial{s.nextSerial++};
    KeyPair keys = generate_key_pair();

    Certificate proxy{serial,
                      SubjectDN::of(issuer.subject.str() + "/CN=proxy"),
                      CAName::of(issuer.subject.str()),
                      keys.publicKey,
                      AlgName::of(kSignatureAlgorithm),
                      now,
                      now + std::min<std::int64_t>(lifetimeSeconds, kMaxProxyLifetime),
                      true,
                      {}};
    if (!sign_certificate(proxy, issuerKey))
        return ProxyUpdate{r, Report::Failure, std::nullopt};

    s.proxyCertificates.emplace(serial, proxy);
    s.issuedProxies.emplace(serial, issuerSerial);
    s.proxyIssuer.emplace(serial, issuerSerial);
    s.proxySecretKey.emplace(serial, keys.privateKey);
    s.userProxy.emplace(serial, user);
    return ProxyUpdate{std::move(next), Report::Success, ProxyHandle{serial, std::move(proxy)}};
}

RepoUpdate revoke_proxy(const CertificateRepository& r, SerialNb serial)
{
    if (!pre_revoke_proxy(r, serial))
        return fail(r);
    CertificateRepository next = r;
    drop_proxy(RepositoryAccess::state(next), serial);
    return RepoUpdate{std::move(next), Report::Success};
}

}  // namespace acd::repository
