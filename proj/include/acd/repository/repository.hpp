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

// Credential repository: long-lived project certificates with their private
// keys, and the short-lived proxies issued from them on behalf of users.
//
// State invariants (check_invariants reports the first one violated):
//
//   cert-key          every held certificate's serial has a private key
//   cert-assoc-range  every project maps to a serial that has a private key
//   cert-assoc-held   every project maps to a held certificate
//   cert-assoc-names  every mapped name is a registered project/resource name
//   proxy-key         every proxy's serial has a proxy secret key
//   proxy-domains     proxySecretKey, proxyIssuer, userProxy (and
//                     issuedProxies) share one domain
//   proxy-issuer      every proxy's issuer is a held certificate
//
// plus structural checks on stored data (serial keys, proxy flags,
// validity windows, serial uniqueness and the allocator position).

#ifndef ACD_REPOSITORY_REPOSITORY_HPP
#define ACD_REPOSITORY_REPOSITORY_HPP

#include "acd/core/types.hpp"
#include "acd/repository/certificate.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace acd::repository {

enum class NameKind { Project, Resource };

std::string_view render_name_kind(NameKind k) noexcept;
std::optional<NameKind> parse_name_kind(std::string_view s) noexcept;

/// Upper bound on proxy lifetime, seconds.
inline constexpr std::int64_t kMaxProxyLifetime = 86400;

class CertificateRepository {
public:
    // Raw state, exposed for persistence and for invariant tests. Mutation
    // goes through the free operations below.
    struct State {
        std::map<SerialNb, Certificate> certificates;
        std::map<SerialNb, Certificate> proxyCertificates;
        std::map<Name, NameKind> names;
        std::map<SerialNb, KeyMaterial> keyAssociation;
        std::map<Name, SerialNb> certAssociation;
        // proxy serial -> issuer serial; duplicates proxyIssuer
        std::map<SerialNb, SerialNb> issuedProxies;
        std::map<SerialNb, SerialNb> proxyIssuer;
        std::map<SerialNb, KeyMaterial> proxySecretKey;
        std::map<SerialNb, UserId> userProxy;
        std::uint64_t nextSerial = 1;

        friend bool operator==(const State&, const State&) = default;
    };

    CertificateRepository() = default;
    static CertificateRepository from_state(State s);

    const State& state() const noexcept { return state_; }

    const Certificate* certificate(SerialNb serial) const;
    const Certificate* proxy(SerialNb serial) const;
    std::optional<SerialNb> resolve(const Name& project) const;
    std::optional<UserId> proxy_owner(SerialNb proxySerial) const;

    std::optional<std::string> check_invariants() const;

    /// Equality ignoring the serial allocator position, which never moves
    /// backwards.
    bool same_contents(const CertificateRepository& other) const;

    friend bool operator==(const CertificateRepository&, const CertificateRepository&) = default;

private:
    friend struct RepositoryAccess;
    State state_;
};

struct RepoUpdate {
    CertificateRepository repository;
    Report report = Report::Failure;
};

struct ProxyHandle {
    SerialNb serial;
    Certificate certificate;
};

struct ProxyUpdate {
    CertificateRepository repository;
    Report report = Report::Failure;
    std::optional<ProxyHandle> proxy;
};

bool pre_add_certificate(const CertificateRepository& r, const Certificate& cert,
                         const KeyMaterial& secretKey);
bool pre_remove_certificate(const CertificateRepository& r, const Certificate& cert);
bool pre_create_proxy(const CertificateRepository& r, const Name& project,
                      std::int64_t lifetimeSeconds, Timestamp now);
bool pre_revoke_proxy(const CertificateRepository& r, SerialNb serial);

/// Registers `cert` with its private key and points `project` at it. The
/// project name is registered if new.
RepoUpdate add_certificate(const CertificateRepository& r, const Certificate& cert,
                           const KeyMaterial& secretKey, const Name& project);

/// Removes `cert`, its key, every project mapping to it, and every live
/// proxy it issued.
RepoUpdate remove_certificate(const CertificateRepository& r, const Certificate& cert);

/// Issues a proxy signed by the certificate `project` resolves to, valid
/// from `now` for min(lifetime, kMaxProxyLifetime) seconds, attributed to
/// `user`.
ProxyUpdate create_proxy(const CertificateRepository& r, const UserId& user, const Name& project,
                         std::int64_t lifetimeSeconds, Timestamp now);

RepoUpdate revoke_proxy(const CertificateRepository& r, SerialNb serial);

}  // namespace acd::repository

#endif  // ACD_REPOSITORY_REPOSITORY_HPP
