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

#include "acd/gateway/store.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <sys/stat.h>
#include <unistd.h>

namespace acd::gateway {

using json = nlohmann::ordered_json;
namespace la = acd::local_auth;
namespace repo = acd::repository;

namespace {

[[noreturn]] void fail(const std::string& what)
{
    throw StoreError("store: " + what);
}

json serial_map(const std::map<SerialNb, SerialNb>& m, const char* k, const char* v)
{
    json out = json::array();
    for (const auto& [a, b] : m)
        out.push_back(json{{k, a.value}, {v, b.value}});
    return out;
}

json key_map(const std::map<SerialNb, KeyMaterial>& m)
{
    json out = json::array();
    for (const auto& [s, key] : m)
        out.push_back(json{{"serial", s.value}, {"key", key.hex()}});
    return out;
}

json cert_list(const std::map<SerialNb, repo::Certificate>& m)
{
    json out = json::array();
    for (const auto& [_, c] : m)
        out.push_back(repo::encode_certificate(c));
    return out;
}

// --- strict decoding ------------------------------------------------------

const json& field(const json& obj, const char* name, const std::string& where)
{
    auto it = obj.find(name);
    if (it == obj.end())
        fail(where + ": missing field '" + name + "'");
    return *it;
}

void exact_keys(const json& obj, std::initializer_list<const char*> keys,
                const std::string& where)
{
    if (!obj.is_object())
        fail(where + ": expected an object");
    for (const auto& [k, _] : obj.items()) {
        bool known = false;
        for (const char* key : keys)
            known = known || k == key;
        if (!known)
            fail(where + ": unknown field '" + k + "'");
    }
    for (const char* key : keys)
        field(obj, key, where);
}

const json& array_field(const json& obj, const char* name, const std::string& where)
{
    const json& a = field(obj, name, where);
    if (!a.is_array())
        fail(where + "." + name + ": expected an array");
    return a;
}

std::string string_of(const json& j, const std::string& where)
{
    if (!j.is_string())
        fail(where + ": expected a string");
    return j.get<std::string>();
}

SerialNb serial_of(const json& j, const std::string& where)
{
    if (!j.is_number_unsigned())
        fail(where + ": expected a serial number");
    return SerialNb{j.get<std::uint64_t>()};
}

Bytes hex_of(const json& j, const std::string& where)
{
    auto b = from_hex(string_of(j, where));
    if (!b)
        fail(where + ": expected lowercase hex");
    return *b;
}

template <class K, class V>
void insert_unique(std::map<K, V>& m, K k, V v, const std::string& where)
{
    if (!m.emplace(std::move(k), std::move(v)).second)
        fail(where + ": duplicate entry");
}

std::map<SerialNb, SerialNb> parse_serial_map(const json& repoObj, const char* name,
                                              const char* k, const char* v)
{
    std::map<SerialNb, SerialNb> out;
    std::string where = std::string("repository.") + name;
    for (const auto& e : array_field(repoObj, name, "repository")) {
        exact_keys(e, {k, v}, where);
        insert_unique(out, serial_of(e[k], where + "." + k), serial_of(e[v], where + "." + v),
                      where);
    }
    return out;
}

std::map<SerialNb, KeyMaterial> parse_key_map(const json& repoObj, const char* name)
{
    std::map<SerialNb, KeyMaterial> out;
    std::string where = std::string("repository.") + name;
    for (const auto& e : array_field(repoObj, name, "repository")) {
        exact_keys(e, {"serial", "key"}, where);
        insert_unique(out, serial_of(e["serial"], where + ".serial"),
                      KeyMaterial::private_key(hex_of(e["key"], where + ".key")), where);
    }
    return out;
}

std::map<SerialNb, repo::Certificate> parse_certs(const json& repoObj, const char* name)
{
    std::map<SerialNb, repo::Certificate> out;
    std::string where = std::string("repository.") + name;
    for (const auto& e : array_field(repoObj, name, "repository")) {
        auto c = repo::decode_certificate(string_of(e, where));
        if (!c)
            fail(where + ": undecodable certificate");
        insert_unique(out, c->serial, *c, where);
    }
    return out;
}

la::CredentialTable parse_users(const json& doc, hashing::HashScheme scheme)
{
    std::map<UserId, la::Entry> entries;
    for (const auto& e : array_field(doc, "users", "store")) {
        exact_keys(e, {"username", "role", "salt", "digest"}, "users");
        auto u = UserId::parse(string_of(e["username"], "users.username"));
        if (!u)
            fail("users.username: invalid user id");
        auto role = parse_role(string_of(e["role"], "users.role"));
        if (!role)
            fail("users.role: unknown role");
        la::Entry entry{Digest(hex_of(e["digest"], "users.digest")),
                        Salt(hex_of(e["salt"], "users.salt")), *role};
        insert_unique(entries, *u, std::move(entry), "users");
    }
    return la::CredentialTable::from_entries(scheme, std::move(entries));
}

repo::CertificateRepository parse_repository(const json& doc)
{
    const json& r = field(doc, "repository", "store");
    exact_keys(r,
               {"nextSerial", "names", "certificates", "keyAssociation", "certAssociation",
                "proxyCertificates", "issuedProxies", "proxyIssuer", "proxySecretKey",
                "userProxy"},
               "repository");
    repo::CertificateRepository::State s;
    s.nextSerial = serial_of(r["nextSerial"], "repository.nextSerial").value;
    for (const auto& e : array_field(r, "names", "repository")) {
        exact_keys(e, {"name", "kind"}, "repository.names");
        auto n = Name::parse(string_of(e["name"], "repository.names.name"));
        auto k = repo::parse_name_kind(string_of(e["kind"], "repository.names.kind"));
        if (!n || !k)
            fail("repository.names: invalid entry");
        insert_unique(s.names, *n, *k, "repository.names");
    }
    s.certificates = parse_certs(r, "certificates");
    s.keyAssociation = parse_key_map(r, "keyAssociation");
    for (const auto& e : array_field(r, "certAssociation", "repository")) {
        exact_keys(e, {"name", "serial"}, "repository.certAssociation");
        auto n = Name::parse(string_of(e["name"], "repository.certAssociation.name"));
        if (!n)
            fail("repository.certAssociation.name: invalid name");
        insert_unique(s.certAssociation, *n,
                      serial_of(e["serial"], "repository.certAssociation.serial"),
                      "repository.certAssociation");
    }
    s.proxyCertificates = parse_certs(r, "proxyCertificates");
    s.issuedProxies = parse_serial_map(r, "issuedProxies", "proxy", "issuer");
    s.proxyIssuer = parse_serial_map(r, "proxyIssuer", "proxy", "issuer");
    s.proxySecretKey = parse_key_map(r, "proxySecretKey");
    for (const auto& e : array_field(r, "userProxy", "repository")) {
        exact_keys(e, {"serial", "user"}, "repository.userProxy");
        auto u = UserId::parse(string_of(e["user"], "repository.userProxy.user"));
        if (!u)
            fail("repository.userProxy.user: invalid user id");
        insert_unique(s.userProxy, serial_of(e["serial"], "repository.userProxy.serial"), *u,
                      "repository.userProxy");
    }
    return repo::CertificateRepository::from_state(std::move(s));
}

void fsync_directory(const std::filesystem::path& dir)
{
    int fd = ::open(dir.empty() ? "." : dir.c_str(), O_RDONLY | O_DIRECTORY);
    if (fd < 0)
        return;
    ::fsync(fd);
    ::close(fd);
}

}  // namespace

std::string serialize_store(const protocol::Backend& b)
{
    json doc;
    doc["format"] = "acd-store";
    doc["version"] = kStoreVersion;
    doc["hashScheme"] = std::string(hashing::scheme_name(b.table.scheme()));

    json users = json::array();
    for (const auto& [u, e] : b.table.entries())
        users.push_back(json{{"username", u.str()},
                             {"role", std::string(render_role(e.role))},
                             {"salt", e.salt.hex()},
                             {"digest", e.digest.hex()}});
    doc["users"] = std::move(users);

    const auto& s = b.repository.state();
    json r;
    r["nextSerial"] = s.nextSerial;
    json names = json::array();
    for (const auto& [n, k] : s.names)
        names.push_back(json{{"name", n.str()}, {"kind", std::string(repo::render_name_kind(k))}});
    r["names"] = std::move(names);
    r["certificates"] = cert_list(s.certificates);
    r["keyAssociation"] = key_map(s.keyAssociation);
    json assoc = json::array();
    for (const auto& [n, sn] : s.certAssociation)
        assoc.push_back(json{{"name", n.str()}, {"serial", sn.value}});
    r["certAssociation"] = std::move(assoc);
    r["proxyCertificates"] = cert_list(s.proxyCertificates);
    r["issuedProxies"] = serial_map(s.issuedProxies, "proxy", "issuer");
    r["proxyIssuer"] = serial_map(s.proxyIssuer, "proxy", "issuer");
    r["proxySecretKey"] = key_map(s.proxySecretKey);
    json up = json::array();
    for (const auto& [sn, u] : s.userProxy)
        up.push_back(json{{"serial", sn.value}, {"user", u.str()}});
    r["userProxy"] = std::move(up);
    doc["repository"] = std::move(r);
    return doc.dump(2) + "\n";
}

protocol::Backend parse_store(std::string_view text)
{
    json doc = json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded())
        fail("not valid JSON");
    exact_keys(doc, {"format", "version", "hashScheme", "users", "repository"}, "store");
    if (string_of(doc["format"], "format") != "acd-store")
        fail("format: not an acd store");
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kStoreVersion)
        fail("version: unsupported store version");
    auto scheme = hashing::parse_scheme(string_of(doc["hashScheme"], "hashScheme"));
    if (!scheme)
        fail("hashScheme: unknown scheme");

    protocol::Backend b{parse_users(doc, *scheme), parse_repository(doc)};
    if (auto v = b.table.check_invariants())
        fail("credential table invariant violated: " + *v);
    if (auto v = b.repository.check_invariants())
        fail("repository invariant violated: " + *v);
    return b;
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents)
{
    auto dir = path.parent_path();
    std::string tmpl = (dir / (path.filename().string() + ".tmp.XXXXXX")).string();
    int fd = ::mkstemp(tmpl.data());
    if (fd < 0)
        throw StoreError("cannot create temporary file for " + path.string() + ": " +
                         std::strerror(errno));
    ::fchmod(fd, S_IRUSR | S_IWUSR);
    const char* p = contents.data();
    std::size_t left = contents.size();
    while (left > 0) {
        ssize_t n = ::write(fd, p, left);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            int err = errno;
            ::close(fd);
            ::unlink(tmpl.c_str());
            throw StoreError("write failed for " + path.string() + ": " + std::strerror(err));
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) {
        ::unlink(tmpl.c_str());
        throw StoreError("fsync failed for " + path.string());
    }
    if (::rename(tmpl.c_str(), path.c_str()) != 0) {
        int err = errno;
        ::unlink(tmpl.c_str());
        throw StoreError("rename failed for " + path.string() + ": " + std::strerror(err));
    }
    fsync_directory(dir);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw StoreError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void persist_store(const protocol::Backend& backend, const std::filesystem::path& path)
{
    write_file_atomically(path, serialize_store(backend));
}

protocol::Backend load_store(const std::filesystem::path& path)
{
    return parse_store(read_file(path));
}

}  // namespace acd::gateway
