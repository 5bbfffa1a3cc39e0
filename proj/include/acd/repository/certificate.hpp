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

// Minimal self-describing certificate record with an Ed25519 signature over
// a canonical text encoding. Not X.509: there is no ASN.1 here, only the
// fields the repository reasons about.
//
// Canonical encoding (one field per line, fixed order, '\n' terminated):
//
//   acd-certificate-v1
//   serial: <decimal>
//   subject: <text>
//   issuer: <text>
//   public-key: <lowercase hex>
//   signature-algorithm: <text>
//   not-before: <decimal UTC seconds>
//   not-after: <decimal UTC seconds>
//   proxy: yes|no
//   signature: <lowercase hex>
//
// The signed bytes are everything before the `signature:` line.

#ifndef ACD_REPOSITORY_CERTIFICATE_HPP
#define ACD_REPOSITORY_CERTIFICATE_HPP

#include "acd/core/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace acd::repository {

inline constexpr std::string_view kSignatureAlgorithm = "ed25519";

struct Certificate {
    SerialNb serial;
    SubjectDN subject;
    CAName issuer;
    KeyMaterial publicKey;
    AlgName sigAlg;
    Timestamp notBefore = 0;
    Timestamp notAfter = 0;
    bool isProxy = false;
    Bytes signature;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct KeyPair {
    KeyMaterial publicKey;
    KeyMaterial privateKey;
};

KeyPair generate_key_pair();

/// True iff `priv` signs a fixed challenge that `pub` verifies. Keys of the
/// wrong kind or length are simply not a valid pair.
bool valid_pki_key_pair(const KeyMaterial& pub, const KeyMaterial& priv);

/// nullopt when the key is not a well-formed private key.
std::optional<Bytes> sign(const KeyMaterial& priv, ByteView message);
bool verify(const KeyMaterial& pub, ByteView message, ByteView signature);

std::string to_be_signed(const Certificate& cert);
std::string encode_certificate(const Certificate& cert);
std::optional<Certificate> decode_certificate(std::string_view text);

/// Sets cert.signature from the issuer's private key. False if the key is
/// malformed.
bool sign_certificate(Certificate& cert, const KeyMaterial& issuerPrivate);
bool verify_certificate(const Certificate& cert, const KeyMaterial& issuerPublic);

/// Self-signed long-lived certificate, as an administrator would register
/// for a project.
Certificate make_self_signed(SerialNb serial, const SubjectDN& subject, const KeyPair& keys,
                             Timestamp notBefore, Timestamp notAfter);

}  // namespace acd::repository

#endif  // ACD_REPOSITORY_CERTIFICATE_HPP
