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

#include <doctest.h>

using namespace acd;

TEST_CASE("report has two values and round-trips")
{
    CHECK(render_report(Report::Success) == "Success");
    CHECK(render_report(Report::Failure) == "Failure");
    for (Report r : {Report::Success, Report::Failure})
        CHECK(parse_report(render_report(r)) == r);
    CHECK_FALSE(parse_report("success"));
    CHECK_FALSE(parse_report(""));
}

TEST_CASE("role round-trips")
{
    for (Role r : {Role::EndUser, Role::Administrator})
        CHECK(parse_role(render_role(r)) == r);
    CHECK_FALSE(parse_role("admin"));
}

TEST_CASE("user ids")
{
    CHECK(UserId::parse("ali"));
    CHECK_FALSE(UserId::parse(""));
    CHECK_FALSE(UserId::parse("a\nb"));
    CHECK_FALSE(UserId::parse("tab\there"));
    CHECK_FALSE(UserId::parse(std::string("\xff\xfe", 2)));
    CHECK(UserId::parse(std::string(64, 'x')));
    CHECK_FALSE(UserId::parse(std::string(65, 'x')));
    // 64 two-byte characters are still 64 characters
    std::string wide;
    for (int i = 0; i < 64; ++i)
        wide += "\xc3\xa9";
    CHECK(UserId::parse(wide));
    CHECK_FALSE(UserId::parse(wide + "\xc3\xa9"));
    CHECK_THROWS(UserId::of(""));
}

TEST_CASE("user id equality is byte equality")
{
    CHECK(UserId::of("ali") != UserId::of("Ali"));
    CHECK(UserId::of("ali") != UserId::of("ali "));
    CHECK(UserId::of("ali") == UserId::of("ali"));
    // precomposed and decomposed e-acute are different users
    CHECK(UserId::of("\xc3\xa9") != UserId::of("e\xcc\x81"));
}

TEST_CASE("secrets are non-empty byte strings")
{
    CHECK_FALSE(Secret::parse(""));
    auto s = Secret::parse(std::string("\x00\xff", 2));
    REQUIRE(s);
    CHECK(s->size() == 2);
}

TEST_CASE("hex is lowercase and strict")
{
    Bytes b = {0x00, 0xab, 0xff};
    CHECK(to_hex(b) == "00abff");
    CHECK(from_hex("00abff") == b);
    CHECK_FALSE(from_hex("00ABFF"));
    CHECK_FALSE(from_hex("abc"));
    CHECK_FALSE(from_hex("zz"));
    CHECK(from_hex("") == Bytes{});
    CHECK(Digest::from_hex("6f8cac5b994687f7a05619c3324fbc5e")->size() == 16);
}

TEST_CASE("serial numbers are canonical decimals")
{
    CHECK(SerialNb::parse("0") == SerialNb{0});
    CHECK(SerialNb::parse("42") == SerialNb{42});
    CHECK(SerialNb::parse("18446744073709551615") == SerialNb{UINT64_MAX});
    CHECK_FALSE(SerialNb::parse("18446744073709551616"));
    CHECK_FALSE(SerialNb::parse("042"));
    CHECK_FALSE(SerialNb::parse("-1"));
    CHECK_FALSE(SerialNb::parse("+1"));
    CHECK_FALSE(SerialNb::parse(""));
    CHECK(SerialNb{7}.str() == "7");
}

TEST_CASE("names and subjects")
{
    CHECK(Name::parse("virolab"));
    CHECK_FALSE(Name::parse(""));
    CHECK_FALSE(Name::parse("a\x01"));
    CHECK(SubjectDN::parse("/O=Grid/CN=virolab"));
}
