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

// Shared vocabulary types for the gateway: identities, secrets, digests,
// reports and the certificate-side names. All values are immutable once
// constructed; validating constructors are spelled `parse` and return an
// empty optional instead of throwing.

#ifndef ACD_CORE_TYPES_HPP
#define ACD_CORE_TYPES_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acd {

using Byte = std::uint8_t;
using Bytes = std::vector<Byte>;
using ByteView = std::span<const Byte>;

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

Bytes to_bytes(std::string_view text);
std::string to_string(ByteView bytes);

/// Lowercase hex, no separators.
std::string to_hex(ByteView bytes);
/// Accepts lowercase hex only; anything else (odd length, uppercase,
/// non-hex) yields nullopt.
std::optional<Bytes> from_hex(std::string_view hex);

/// True iff `text` is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

// ---------------------------------------------------------------------------
// Identities
// ---------------------------------------------------------------------------

/// A registered (or candidate) username. Case-sensitive, compared bytewise.
class UserId {
public:
    static constexpr std::size_t kMaxCharacters = 64;

    /// Non-empty valid UTF-8, at most 64 code points, no control characters.
    static std::optional<UserId> parse(std::string_view text);
    /// Throws std::invalid_argument; meant for literals in code and tests.
    static UserId of(std::string_view text);

    const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const UserId&, const UserId&) = default;
    friend bool operator==(const UserId&, const UserId&) = default;

private:
    explicit UserId(std::string v) : value_(std::move(v)) {}
    std::string value_;
};

/// A cleartext secret such as a password. Never logged or printed.
class Secret {
public:
    static std::optional<Secret> parse(std::string_view text);
    static Secret of(std::string_view text);

    ByteView bytes() const noexcept { return value_; }
    std::size_t size() const noexcept { return value_.size(); }

    friend bool operator==(const Secret&, const Secret&) = default;

private:
    explicit Secret(Bytes v) : value_(std::move(v)) {}
    Bytes value_;
};

class Salt {
public:
    static constexpr std::size_t kGeneratedLength = 16;

    Salt() = default;  // the empty salt used by the md5-compat fixture
    explicit Salt(Bytes v) : value_(std::move(v)) {}

    ByteView bytes() const noexcept { return value_; }
    std::size_t size() const noexcept { return value_.size(); }
    std::string hex() const { return to_hex(value_); }

    friend bool operator==(const Salt&, const Salt&) = default;

private:
    Bytes value_;
};

class Digest {
public:
    Digest() = default;
    explicit Digest(Bytes v) : value_(std::move(v)) {}

    static std::optional<Digest> from_hex(std::string_view hex);

    ByteView bytes() const noexcept { return value_; }
    std::size_t size() const noexcept { return value_.size(); }
    std::string hex() const { return to_hex(value_); }

    friend bool operator==(const Digest&, const Digest&) = default;

private:
    Bytes value_;
};

// ---------------------------------------------------------------------------
// Reports and roles
// ---------------------------------------------------------------------------

enum class Report { Success, Failure };

std::string_view render_report(Report r) noexcept;
std::optional<Report> parse_report(std::string_view text) noexcept;

enum class Role { EndUser, Administrator };

std::string_view render_role(Role r) noexcept;
std::optional<Role> parse_role(std::string_view text) noexcept;

// ---------------------------------------------------------------------------
// Certificate-side names
// ---------------------------------------------------------------------------

/// Certificate serial number, unique within one repository.
struct SerialNb {
    std::uint64_t value = 0;

    static std::optional<SerialNb> parse(std::string_view text);
    std::string str() const { return std::to_string(value); }

    friend auto operator<=>(const SerialNb&, const SerialNb&) = default;
};

/// Key bytes tagged with the role they play.
class KeyMaterial {
public:
    enum class Kind { Public, Private };

    KeyMaterial() = default;
    KeyMaterial(Kind kind, Bytes bytes) : kind_(kind), bytes_(std::move(bytes)) {}

    static KeyMaterial public_key(Bytes b) { return {Kind::Public, std::move(b)}; }
    static KeyMaterial private_key(Bytes b) { return {Kind::Private, std::move(b)}; }

    Kind kind() const noexcept { return kind_; }
    ByteView bytes() const noexcept { return bytes_; }
    std::string hex() const { return to_hex(bytes_); }

    friend bool operator==(const KeyMaterial&, const KeyMaterial&) = default;

private:
    Kind kind_ = Kind::Public;
    Bytes bytes_;
};

namespace detail {

// Non-empty text without line breaks; shared by Name, SubjectDN, AlgName and
// CAName, which differ only in the role they play.
template <class Tag>
class Text {
public:
    static std::optional<Text> parse(std::string_view text)
    {
        if (text.empty() || !is_valid_utf8(text))
            return std::nullopt;
        for (char c : text)
            if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f)
                return std::nullopt;
        return Text(std::string(text));
    }
    static Text of(std::string_view text)
    {
        auto t = parse(text);
        if (!t)
            throw std::invalid_argument("invalid text value");
        return *t;
    }

    const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const Text&, const Text&) = default;
    friend bool operator==(const Text&, const Text&) = default;

private:
    explicit Text(std::string v) : value_(std::move(v)) {}
    std::string value_;
};

struct NameTag;
struct SubjectTag;
struct AlgTag;
struct CATag;

}  // namespace detail

using Name = detail::Text<detail::NameTag>;
using SubjectDN = detail::Text<detail::SubjectTag>;
using AlgName = detail::Text<detail::AlgTag>;
using CAName = detail::Text<detail::CATag>;

}  // namespace acd

#endif  // ACD_CORE_TYPES_HPP
