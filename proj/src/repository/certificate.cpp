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

#include "acd/repository/certificate.hpp"

#include "acd/hashing/hashing.hpp"

#include <sodium.h>

#include <charconv>
#include <vector>

namespace acd::repository {

KeyPair generate_key_pair()
{
    hashing::ensure_initialized();
    Bytes pub(crypto_sign_PUBLICKEYBYTES);
    Bytes priv(crypto_sign_SECRETKEYBYTES);
    crypto_sign_keypair(pub.data(), priv.data());
    return KeyPair{KeyMaterial::public_key(std::move(pub)),
                   KeyMaterial::private_key(std::move(priv))};
}

std::optional<Bytes> sign(const KeyMaterial& priv, ByteView message)
{
    if (priv.kind() != KeyMaterial::Kind::Private ||
        priv.bytes().size() != crypto_sign_SECRETKEYBYTES)
        return std::nullopt;
    hashing::ensure_initialized();
    Bytes sig(crypto_sign_BYTES);
    if (crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                             priv.bytes().data()) != 0)
        return std::nullopt;
    return sig;
}

bool verify(const KeyMaterial& pub, ByteView message, ByteView signature)
{
    if (pub.kind() != KeyMaterial::Kind::Public ||
        pub.bytes().size() != crypto_sign_PUBLICKEYBYTES || signature.size() != crypto_sign_BYTES)
        return false;
    hashing::ensure_initialized();
    return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                       pub.bytes().data()) == 0;
}

bool valid_pki_key_pair(const KeyMaterial& pub, const KeyMaterial& priv)
{
    static const Bytes kChallenge = to_bytes("acd key-pair challenge v1");
    auto sig = sign(priv, kChallenge);
    return sig && verify(pub, kChallenge, *sig);
}

std::string to_be_signed(const Certificate& c)
{
    std::string out = "acd-certificate-v1\n";
    out += "serial: " + c.serial.str() + "\n";
    out += "subject: " + c.subject.str() + "\n";
    out += "issuer: " + c.issuer.str() + "\n";
    out += "public-key: " + c.publicKey.hex() + "\n";
    out += "signature-algorithm: " + c.sigAlg.str() + "\n";
    out += "not-before: " + std::to_string(c.notBefore) + "\n";
    out += "not-after: " + std::to_string(c.notAfter) + "\n";
    out += std::string("proxy: ") + (c.isProxy ? "yes" : "no") + "\n";
    return out;
}

std::string encode_certificate(const Certificate& c)
{
    return to_be_signed(c) + "signature: " + to_hex(c.signature) + "\n";
}

namespace {

std::optional<Timestamp> parse_timestamp(std::string_view s)
{
    if (s.empty() || s.size() > 20)
        return std::nullopt;
    Timestamp v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    if (std::to_string(v) != s)  // canonical form only
        return std::nullopt;
    return v;
}

}  // namespace

std::optional<Certificate> decode_certificate(std::string_view text)
{
    static constexpr std::string_view kKeys[] = {
        "serial", "subject", "issuer", "public-key", "signature-algorithm",
        "not-before", "not-after", "proxy", "signature"};

    std::vector<std::string_view> lines;
    while (!text.empty()) {
        auto nl = text.find('\n');
        if (nl == std::string_view::npos)
            return std::nullopt;  // every line is newline-terminated
        lines.push_back(text.substr(0, nl));
        text.remove_prefix(nl + 1);
    }
    if (lines.size() != 1 + std::size(kKeys) || lines[0] != "acd-certificate-v1")
        return std::nullopt;

    std::string_view v[std::size(kKeys)];
    for (std::size_t i = 0; i < std::size(kKeys); ++i) {
        std::string_view line = lines[i + 1];
        std::string prefix = std::string(kKeys[i]) + ": ";
        if (!line.starts_with(prefix))
            return std::nullopt;
        v[i] = line.substr(prefix.size());
    }

    auto serial = SerialNb::parse(v[0]);
    auto subject = SubjectDN::parse(v[1]);
    auto issuer = CAName::parse(v[2]);
    auto pub = from_hex(v[3]);
    auto alg = AlgName::parse(v[4]);
    auto nb = parse_timestamp(v[5]);
    auto na = parse_timestamp(v[6]);
    auto sig = from_hex(v[8]);
    if (!serial || !subject || !issuer || !pub || !alg || !nb || !na || !sig)
        return std::nullopt;
    if (v[7] != "yes" && v[7] != "no")
        return std::nullopt;

    return Certificate{*serial, *subject, *issuer, KeyMaterial::public_key(std::move(*pub)),
                       *alg, *nb, *na, v[7] == "yes", std::move(*sig)};
}

bool sign_certificate(Certificate& cert, const KeyMaterial& issuerPrivate)
{
    auto sig = sign(issuerPrivate, to_bytes(to_be_signed(cert)));
    if (!sig)
        return false;
    cert.signature = std::move(*sig);
    return true;
}

bool verify_certificate(const Certificate& cert, const KeyMaterial& issuerPublic)
{
    return verify(issuerPublic, to_bytes(to_be_signed(cert)), cert.signature);
}

Certificate make_self_signed(SerialNb serial, const SubjectDN& subject, const KeyPair& keys,
                             Timestamp notBefore, Timestamp notAfter)
{
    Certificate c{serial,
                  subject,
                  CAName::of(subject.str()),
                  keys.publicKey,
                  AlgName::of(kSignatureAlgorithm),
                  notBefore,
                  notAfter,
                  false,
                  {}};
    sign_certificate(c, keys.privateKey);
    return c;
}

}  // namespace acd::repository
