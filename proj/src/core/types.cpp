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

#include "acd/core/types.hpp"

#include <charconv>

namespace acd {

Bytes to_bytes(std::string_view text)
{
    return Bytes(text.begin(), text.end());
}

std::string to_string(ByteView bytes)
{
    return std::string(bytes.begin(), bytes.end());
}

std::string to_hex(ByteView bytes)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (Byte b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

namespace {

int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    return -1;
}

}  // namespace

std::optional<Bytes> from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0)
        return std::nullopt;
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0)
            return std::nullopt;
        out.push_back(static_cast<Byte>((hi << 4) | lo));
    }
    return out;
}

bool is_valid_utf8(std::string_view text)
{
    std::size_t i = 0;
    while (i < text.size()) {
        auto c = static_cast<unsigned char>(text[i]);
        std::size_t len;
        std::uint32_t cp;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xe0) == 0xc0) {
            len = 2;
            cp = c & 0x1f;
        } else if ((c & 0xf0) == 0xe0) {
            len = 3;
            cp = c & 0x0f;
        } else if ((c & 0xf8) == 0xf0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > text.size())
            return false;
        for (std::size_t k = 1; k < len; ++k) {
            auto cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xc0) != 0x80)
                return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        // overlong forms, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xd800 && cp <= 0xdfff) || cp > 0x10ffff)
            return false;
        i += len;
    }
    return true;
}

// ---------------------------------------------------------------------------

std::optional<UserId> UserId::parse(std::string_view text)
{
    if (text.empty() || !is_valid_utf8(text))
        return std::nullopt;
    std::size_t characters = 0;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (c < 0x20 || c == 0x7f)
            return std::nullopt;
        if ((c & 0xc0) != 0x80)
            ++characters;
    }
    if (characters > kMaxCharacters)
        return std::nullopt;
    return UserId(std::string(text));
}

UserId UserId::of(std::string_view text)
{
    auto u = parse(text);
    if (!u)
        throw std::invalid_argument("invalid user id");
    return *u;
}

std::optional<Secret> Secret::parse(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    return Secret(to_bytes(text));
}

Secret Secret::of(std::string_view text)
{
    auto s = parse(text);
    if (!s)
        throw std::invalid_argument("empty secret");
    return *s;
}

std::optional<Digest> Digest::from_hex(std::string_view hex)
{
    auto bytes = acd::from_hex(hex);
    if (!bytes)
        return std::nullopt;
    return Digest(std::move(*bytes));
}

std::string_view render_report(Report r) noexcept
{
    return r == Report::Success ? "Success" : "Failure";
}

std::optional<Report> parse_report(std::string_view text) noexcept
{
    if (text == "Success")
        return Report::Success;
    if (text == "Failure")
        return Report::Failure;
    return std::nullopt;
}

std::string_view render_role(Role r) noexcept
{
    return r == Role::Administrator ? "Administrator" : "EndUser";
}

std::optional<Role> parse_role(std::string_view text) noexcept
{
    if (text == "EndUser")
        return Role::EndUser;
    if (text == "Administrator")
        return Role::Administrator;
    return std::nullopt;
}

std::optional<SerialNb> SerialNb::parse(std::string_view text)
{
    if (text.empty() || text.size() > 20)
        return std::nullopt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        return std::nullopt;
    // canonical decimal only: no leading zeros
    if (text.size() > 1 && text.front() == '0')
        return std::nullopt;
    return SerialNb{v};
}

}  // namespace acd
