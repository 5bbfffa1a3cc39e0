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

#include "acd/hashing/hashing.hpp"

#include <openssl/evp.h>
#include <sodium.h>

#include <array>
#include <memory>
#include <mutex>

namespace acd::hashing {

std::string_view scheme_name(HashScheme s) noexcept
{
    return s == HashScheme::Md5Compat ? "md5-compat" : "strong-kdf";
}

std::optional<HashScheme> parse_scheme(std::string_view name) noexcept
{
    if (name == "md5-compat")
        return HashScheme::Md5Compat;
    if (name == "strong-kdf")
        return HashScheme::StrongKdf;
    return std::nullopt;
}

std::size_t output_length(HashScheme s) noexcept
{
    return s == HashScheme::Md5Compat ? 16 : 32;
}

void ensure_initialized()
{
    static std::once_flag once;
    static bool ok = false;
    std::call_once(once, [] { ok = sodium_init() >= 0; });
    if (!ok)
        throw EntropyUnavailable("libsodium initialisation failed");
}

namespace {

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};

Bytes md5(ByteView a, ByteView b)
{
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    std::array<unsigned char, EVP_MAX_MD_SIZE> out{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_md5(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), a.data(), a.size()) != 1 ||
        EVP_DigestUpdate(ctx.get(), b.data(), b.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1)
        throw std::runtime_error("MD5 unavailable in the OpenSSL provider");
    return Bytes(out.begin(), out.begin() + len);
}

// Argon2id takes exactly 16 salt bytes. Generated salts already have that
// length; anything else (including the empty fixture salt) is compressed
// with keyed BLAKE2b first.
std::array<unsigned char, crypto_pwhash_SALTBYTES> kdf_salt(const Salt& salt)
{
    std::array<unsigned char, crypto_pwhash_SALTBYTES> out{};
    if (salt.size() == out.size()) {
        std::copy(salt.bytes().begin(), salt.bytes().end(), out.begin());
        return out;
    }
    static constexpr unsigned char kLabel[] = "acd-salt-v1";
    crypto_generichash(out.data(), out.size(), salt.bytes().data(), salt.size(), kLabel,
                       sizeof(kLabel) - 1);
    return out;
}

Bytes argon2id(const Salt& salt, ByteView data)
{
    Bytes out(output_length(HashScheme::StrongKdf));
    auto s = kdf_salt(salt);
    static const unsigned char kEmpty = 0;
    const auto* in = data.empty() ? &kEmpty : data.data();
    if (crypto_pwhash(out.data(), out.size(), reinterpret_cast<const char*>(in), data.size(),
                      s.data(), KdfProfile::kOpsLimit, KdfProfile::kMemLimitBytes,
                      crypto_pwhash_ALG_ARGON2ID13) != 0)
        throw std::runtime_error("argon2id: out of memory");
    return out;
}

}  // namespace

Digest digest_bytes(HashScheme scheme, const Salt& salt, ByteView data)
{
    ensure_initialized();
    if (scheme == HashScheme::Md5Compat)
        return Digest(md5(salt.bytes(), data));
    return Digest(argon2id(salt, data));
}

Digest encrypt(HashScheme scheme, const Salt& salt, const Secret& secret)
{
    return digest_bytes(scheme, salt, secret.bytes());
}

Salt generate_salt()
{
    ensure_initialized();
    Bytes b(Salt::kGeneratedLength);
    randombytes_buf(b.data(), b.size());
    return Salt(std::move(b));
}

bool digests_equal(const Digest& a, const Digest& b) noexcept
{
    if (a.size() != b.size())
        return false;
    if (a.size() == 0)
        return true;
    return sodium_memcmp(a.bytes().data(), b.bytes().data(), a.size()) == 0;
}

}  // namespace acd::hashing
