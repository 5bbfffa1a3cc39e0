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

#ifndef ACD_HASHING_HASHING_HPP
#define ACD_HASHING_HASHING_HPP

#include "acd/core/types.hpp"

#include <optional>
#include <stdexcept>
#include <string_view>

namespace acd::hashing {

/// Password hashing schemes. The scheme is fixed per credential table and
/// recorded alongside it.
///
///  - Md5Compat: MD5(salt || secret). Only for reproducing the historical
///    fixture; MD5 is not a password hash.
///  - StrongKdf: Argon2id, 32-byte output. The default.
enum class HashScheme { Md5Compat, StrongKdf };

std::string_view scheme_name(HashScheme s) noexcept;
std::optional<HashScheme> parse_scheme(std::string_view name) noexcept;
std::size_t output_length(HashScheme s) noexcept;

/// Argon2id profile used by StrongKdf. Persisted digests depend on these.
struct KdfProfile {
    static constexpr unsigned long long kOpsLimit = 2;
    static constexpr std::size_t kMemLimitBytes = 256 * 1024;
};

/// Raised when the process cannot obtain cryptographic randomness or the
/// crypto backend fails to initialise. Not recoverable.
class EntropyUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Total and deterministic: digest of salt || secret under `scheme`.
Digest encrypt(HashScheme scheme, const Salt& salt, const Secret& secret);

/// Same construction over an arbitrary (possibly empty) byte string. Used
/// for audit-chain digests.
Digest digest_bytes(HashScheme scheme, const Salt& salt, ByteView data);

/// 16 fresh random bytes.
Salt generate_salt();

/// Constant-time equality; differing lengths compare unequal.
bool digests_equal(const Digest& a, const Digest& b) noexcept;

/// Initialise the crypto backend. Idempotent; called implicitly by every
/// function above.
void ensure_initialized();

}  // namespace acd::hashing

#endif  // ACD_HASHING_HASHING_HPP
