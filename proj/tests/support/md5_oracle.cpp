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

#include "md5_oracle.hpp"

#include <cmath>
#include <vector>

namespace acd::testing {

namespace {

constexpr std::uint32_t kShift[64] = {
    7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22,
    5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20,
    4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23,
    6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21,
};

std::uint32_t rotl(std::uint32_t x, std::uint32_t c)
{
    return (x << c) | (x >> (32 - c));
}

}  // namespace

std::array<std::uint8_t, 16> md5_oracle(std::string_view message)
{
    // T[i] = floor(2^32 * |sin(i + 1)|), as the RFC defines it
    std::uint32_t T[64];
    for (int i = 0; i < 64; ++i)
        T[i] = static_cast<std::uint32_t>(std::floor(std::fabs(std::sin(i + 1.0)) * 4294967296.0));

    std::vector<std::uint8_t> m(message.begin(), message.end());
    std::uint64_t bitLength = static_cast<std::uint64_t>(m.size()) * 8;
    m.push_back(0x80);
    while (m.size() % 64 != 56)
        m.push_back(0);
    for (int i = 0; i < 8; ++i)
        m.push_back(static_cast<std::uint8_t>(bitLength >> (8 * i)));

    std::uint32_t a0 = 0x67452301, b0 = 0xefcdab89, c0 = 0x98badcfe, d0 = 0x10325476;
    for (std::size_t off = 0; off < m.size(); off += 64) {
        std::uint32_t X[16];
        for (int i = 0; i < 16; ++i)
            X[i] = static_cast<std::uint32_t>(m[off + 4 * i]) |
                   static_cast<std::uint32_t>(m[off + 4 * i + 1]) << 8 |
                   static_cast<std::uint32_t>(m[off + 4 * i + 2]) << 16 |
                   static_cast<std::uint32_t>(m[off + 4 * i + 3]) << 24;
        std::uint32_t A = a0, B = b0, C = c0, D = d0;
        for (int i = 0; i < 64; ++i) {
            std::uint32_t F;
            int g;
            if (i < 16) {
                F = (B & C) | (~B & D);
                g = i;
            } else if (i < 32) {
                F = (B & D) | (C & ~D);
                g = (5 * i + 1) % 16;
            } else if (i < 48) {
                F = B ^ C ^ D;
                g = (3 * i + 5) % 16;
            } else {
                F = C ^ (B | ~D);
                g = (7 * i) % 16;
            }
            std::uint32_t tmp = D;
            D = C;
            C = B;
            B = B + rotl(A + F + T[i] + X[g], kShift[i]);
            A = tmp;
        }
        a0 += A;
        b0 += B;
        c0 += C;
        d0 += D;
    }
    std::array<std::uint8_t, 16> out{};
    std::uint32_t words[4] = {a0, b0, c0, d0};
    for (int w = 0; w < 4; ++w)
        for (int i = 0; i < 4; ++i)
            out[4 * w + i] = static_cast<std::uint8_t>(words[w] >> (8 * i));
    return out;
}

std::string md5_oracle_hex(std::string_view message)
{
    static const char* digits = "0123456789abcdef";
    std::string hex;
    for (auto b : md5_oracle(message)) {
        hex.push_back(digits[b >> 4]);
        hex.push_back(digits[b & 15]);
    }
    return hex;
}

}  // namespace acd::testing
