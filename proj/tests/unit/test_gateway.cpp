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

#include "acd/cli/client.hpp"
#include "acd/gateway/audit.hpp"
#include "acd/gateway/gateway.hpp"
#include "acd/gateway/server.hpp"
#include "acd/gateway/store.hpp"
#include "acd/gateway/wire.hpp"

#include "acd/local_auth/credential_table.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sys/stat.h>

#include <atomic>
#include <fstream>
#include <thread>

using namespace acd;
using namespace acd::gateway;
using protocol::Backend;
using protocol::EventName;
using protocol::Operation;
using protocol::ProtocolEvent;

namespace {

constexpr Timestamp kNow = 1'700'000'000;

Backend fixture()
{
    return Backend{local_auth::init_fixture(), {}};
}

struct Harness {
    testing::TempDir dir;
    std::unique_ptr<Gateway> gateway;

    explicit Harness(const Backend& initial = fixture(), KillPoint kill = {})
    {
        initialize_store(dir / "store.json", initial);
        gateway = Gateway::open(
            GatewayOptions{dir / "store.json", dir / "audit.log", [] { return kNow; }, kill});
    }

    std::filesystem::path store() const { return dir / "store.json"; }
    std::filesystem::path audit() const { return dir / "audit.log"; }
};

std::string line(const ProtocolEvent& e, std::int64_t seq)
{
    return encode_client_line(e, seq);
}

// Drives a whole operation through handle_line; returns the response line.
std::string operate(Gateway& g, Gateway::Session& s, Operation op, protocol::Args args,
                    std::int64_t& seq)
{
    auto ack = g.handle_line(s, line(ProtocolEvent::announce(op), ++seq));
    auto decoded = decode_server_line(ack);
    if (!decoded || decoded->error)
        return ack;
    return g.handle_line(s, line(ProtocolEvent::request(op, std::move(args)), ++seq));
}

std::string text_of(const std::filesystem::path& p)
{
    return read_file(p);
}

void overwrite(const std::filesystem::path& p, const std::string& s)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << s;
}

}  // namespace

// ---------------------------------------------------------------------------
// wire format

TEST_CASE("client lines decode")
{
    auto d = decode_client_line(R"({"event":"Login","seq":1})");
    REQUIRE(d.message);
    CHECK(d.message->event == ProtocolEvent::announce(Operation::Login));
    CHECK(d.message->seq == 1);

    d = decode_client_line(R"({"event":"LoginRequest","args":{"username":"ali","pwd":"pwdx"}})");
    REQUIRE(d.message);
    CHECK(d.message->event.args.at("pwd") == "pwdx");
    CHECK_FALSE(d.message->seq);

    for (const char* bad : {"", "nonsense", "[]", "{}", R"({"event":"Login","extra":1})",
                            R"({"event":"Login","seq":"1"})", R"({"event":"Login","seq":1.5})",
                            R"({"event":"Nope"})", R"({"event":"Login","args":{"a":"b"}})",
                            R"({"event":"LoginRequest","args":{"username":1}})",
                            R"({"event":"LoginRequest","args":[]})", R"({"event":3})"})
        CHECK_MESSAGE(!decode_client_line(bad).message, bad);

    // the sequence number survives for the error reply where it can
    CHECK(decode_client_line(R"({"event":"Nope","seq":9})").seq == 9);
    CHECK_FALSE(decode_client_line(std::string(kMaxLineBytes + 1, ' ')).message);
}

TEST_CASE("server lines have a fixed field order")
{
    CHECK(encode_ack(EventName{Operation::Login, protocol::EventKind::Announce}, 1) ==
          R"({"event":"Login","seq":1})");
    CHECK(encode_response(ProtocolEvent::response(Operation::ProxyCreate, Report::Success,
                                                  {{"serial", "2"}}),
                          7) == R"({"event":"ProxyCreateResponse","report":"Success","args":{"serial":"2"},"seq":7})");
    CHECK(encode_error("refused", 3) == R"({"error":"refused","seq":3})");
    CHECK(encode_error("too-long", std::nullopt) == R"({"error":"too-long"})");
    CHECK(encode_client_line(ProtocolEvent::request(Operation::Logout, {{"username", "ali"}}), 4) ==
          R"({"event":"LogoutRequest","args":{"username":"ali"},"seq":4})");

    auto s = decode_server_line(R"({"event":"LoginResponse","report":"Failure","seq":2})");
    REQUIRE(s);
    CHECK(s->report == Report::Failure);
    CHECK(s->seq == 2);
    CHECK_FALSE(decode_server_line(R"({"event":"Login","error":"refused"})"));
    CHECK_FALSE(decode_server_line(R"({"seq":1})"));
    CHECK_FALSE(decode_server_line(R"({"event":"Login","bogus":1})"));
}

// ---------------------------------------------------------------------------
// store

TEST_CASE("store round trip")
{
    testing::Rng rng(5);
    Backend b{local_auth::init_fixture(),
              testing::repository_with_certificate(SerialNb{1}, "virolab", kNow)};
    for (int i = 0; i < 30; ++i)
        b.repository = testing::random_repository_step(rng, b.repository, kNow).repository;
    b.table = local_auth::add_credential(b.table, UserId::of("bob"), Secret::of("pw"),
                                         Role::Administrator)
                  .table;

    const std::string text = serialize_store(b);
    Backend back = parse_store(text);
    CHECK(back == b);
    CHECK(serialize_store(back) == text);

    testing::TempDir dir;
    persist_store(b, dir / "s.json");
    CHECK(text_of(dir / "s.json") == text);
    struct stat st {};
    REQUIRE(::stat((dir / "s.json").c_str(), &st) == 0);
    CHECK((st.st_mode & 0777) == 0600);
    persist_store(load_store(dir / "s.json"), dir / "s.json");
    CHECK(text_of(dir / "s.json") == text);
}

TEST_CASE("store corruption is refused")
{
    const std::string good = serialize_store(fixture());
    auto refused = [](const std::string& text, const char* fragment) {
        try {
            parse_store(text);
            FAIL_CHECK("accepted: " << text);
        } catch (const StoreError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
        }
    };
    auto replaced = [&](const std::string& from, const std::string& to) {
        auto pos = good.find(from);
        REQUIRE(pos != std::string::npos);
        std::string s = good;
        s.replace(pos, from.size(), to);
        return s;
    };

    refused(good.substr(0, good.size() / 2), "");
    refused(replaced("6f8cac5b994687f7a05619c3324fbc5e", "6f8cac5b994687f7a05619c3324fbc"),
            "digest-length");
    refused(replaced("\"version\": 1", "\"version\": 2"), "version");
    refused(replaced("\"format\": \"acd-store\"", "\"format\": \"other\""), "format");
    refused(replaced("\"hashScheme\": \"md5-compat\"", "\"hashScheme\": \"sha1\""), "");
    refused(replaced("\"role\": \"EndUser\"", "\"role\": \"Guest\""), "");
    refused(replaced("\"username\": \"john\"", "\"username\": \"ali\""), "");
    refused(replaced("\"nextSerial\": 1", "\"nextSerial\": 1, \"extra\": 0"), "");
    std::string withCert = serialize_store(Backend{
        local_auth::init_fixture(), testing::repository_with_certificate(SerialNb{1}, "virolab", kNow)});
    CHECK_NOTHROW(parse_store(withCert));
    auto pos = withCert.find("\"nextSerial\": 2");
    REQUIRE(pos != std::string::npos);
    refused(withCert.replace(pos, 15, "\"nextSerial\": 1"), "");
    refused(replaced("\"names\": []", "\"names\": [{\"project\": \"p\", \"serial\": \"4\"}]"), "");
    CHECK_NOTHROW(parse_store(good));

    testing::TempDir dir;
    CHECK_THROWS_AS(load_store(dir / "missing.json"), StoreError);
    overwrite(dir / "s.json", good.substr(0, 100));
    CHECK_THROWS_AS(load_store(dir / "s.json"), StoreError);
}

TEST_CASE("initialize_store never overwrites")
{
    testing::TempDir dir;
    initialize_store(dir / "s.json", fixture());
    auto before = text_of(dir / "s.json");
    CHECK_THROWS_AS(initialize_store(dir / "s.json", Backend{local_auth::CredentialTable(hashing::HashScheme::Md5Compat), {}}), StoreError);
    CHECK(text_of(dir / "s.json") == before);
}

// ---------------------------------------------------------------------------
// audit log

TEST_CASE("audit chain examples")
{
    for (auto scheme : {hashing::HashScheme::Md5Compat, hashing::HashScheme::StrongKdf}) {
        testing::TempDir dir;
        auto path = dir / "audit.log";
        CHECK_THROWS_AS(verify_audit_chain(path), StoreError);
        overwrite(path, "");
        CHECK(verify_audit_chain(path) == ChainReport{0, true, std::nullopt});
        {
            auto log = AuditLog::open(path, scheme);
            for (int i = 0; i < 5; ++i)
                log.append("root", "AddCredential", Report::Success,
                           "target=u" + std::to_string(i), kNow + i);
            CHECK(log.size() == 5);
        }
        CHECK(verify_audit_chain(path) == ChainReport{5, true, std::nullopt});

        const std::string text = text_of(path);
        std::vector<std::string> lines;
        std::size_t start = 0;
        while (start < text.size()) {
            auto nl = text.find('\n', start);
            lines.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
        REQUIRE(lines.size() == 5);
        auto r0 = decode_audit_record(lines[0]);
        REQUIRE(r0);
        CHECK(r0->index == 0);
        CHECK(std::all_of(r0->prev.bytes().begin(), r0->prev.bytes().end(),
                          [](auto b) { return b == 0; }));
        CHECK(r0->self == audit_digest(scheme, *r0));
        CHECK(encode_audit_record(*r0) == lines[0]);
        auto r1 = decode_audit_record(lines[1]);
        REQUIRE(r1);
        CHECK(r1->prev == r0->self);

        // flip one character of record 3's detail
        std::string tampered = text;
        auto pos = tampered.find("target=u3");
        REQUIRE(pos != std::string::npos);
        tampered[pos + 8] = '9';
        CHECK(verify_audit_text(tampered) == ChainReport{5, false, 3});
        overwrite(path, tampered);
        CHECK(verify_audit_chain(path) == ChainReport{5, false, 3});
        CHECK_THROWS_AS(AuditLog::open(path, scheme), StoreError);

        // dropping a record breaks the link of its successor
        std::string dropped;
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (i != 2)
                dropped += lines[i] + "\n";
        CHECK(verify_audit_text(dropped) == ChainReport{4, false, 2});
    }
}

TEST_CASE("audit decoding is strict")
{
    testing::TempDir dir;
    auto log = AuditLog::open(dir / "a.log", hashing::HashScheme::Md5Compat);
    auto rec = log.append("ali", "Login", Report::Success, "", kNow);
    auto good = encode_audit_record(rec);
    CHECK(decode_audit_record(good) == rec);
    CHECK_FALSE(decode_audit_record(good + " "));
    CHECK_FALSE(decode_audit_record("{}"));
    CHECK_FALSE(decode_audit_record("not json"));
    std::string reordered = good;
    auto ts = reordered.find("\"timestamp\"");
    REQUIRE(ts != std::string::npos);
    CHECK_FALSE(decode_audit_record(R"({"timestamp":1,)" + good.substr(1)));
}

TEST_CASE("an interrupted append is cut off on open")
{
    testing::TempDir dir;
    auto path = dir / "a.log";
    {
        auto log = AuditLog::open(path, hashing::HashScheme::Md5Compat);
        log.append("root", "RemoveCredential", Report::Success, "target=ali", kNow);
        log.append("root", "RemoveCredential", Report::Failure, "target=ali", kNow);
    }
    const std::string whole = text_of(path);
    overwrite(path, whole + R"({"index":2,"timest)");
    CHECK(verify_audit_chain(path).ok == false);
    {
        auto log = AuditLog::open(path, hashing::HashScheme::Md5Compat);
        CHECK(log.size() == 2);
        CHECK(text_of(path) == whole);
        log.append("root", "Logout", Report::Success, "", kNow);
    }
    CHECK(verify_audit_chain(path) == ChainReport{3, true, std::nullopt});
}

// ---------------------------------------------------------------------------
// request handling

TEST_CASE("handle_line: one reply per line")
{
    Harness h;
    Gateway::Session s;
    std::int64_t seq = 0;

    CHECK(h.gateway->handle_line(s, "garbage") == R"({"error":"malformed"})");
    CHECK(s.machine == protocol::SessionMachine{});
    CHECK(h.gateway->handle_line(s, R"({"event":"AddCredential","seq":4})") ==
          R"({"error":"refused","seq":4})");
    CHECK(s.machine == protocol::SessionMachine{});

    CHECK(operate(*h.gateway, s, Operation::Login, {{"username", "ali"}, {"pwd", "bad"}}, seq) ==
          R"({"event":"LoginResponse","report":"Failure","seq":2})");
    CHECK(operate(*h.gateway, s, Operation::Login, {{"username", "ali"}, {"pwd", "pwdx"}}, seq) ==
          R"({"event":"LoginResponse","report":"Success","seq":4})");
    CHECK(s.machine.current_user() == UserId::of("ali"));
    CHECK(operate(*h.gateway, s, Operation::AddCredential,
                  {{"username", "x"}, {"pwd", "y"}, {"role", "EndUser"}},
                  seq) == R"({"error":"refused","seq":5})");
    CHECK(h.gateway->audit_size() == 2);
    CHECK(verify_audit_chain(h.audit()) == ChainReport{2, true, std::nullopt});
    CHECK(Gateway::oversized_reply() == R"({"error":"too-long"})");
}

TEST_CASE("mutations are persisted and audited")
{
    Harness h(Backend{local_auth::init_fixture(),
                      testing::repository_with_certificate(SerialNb{1}, "virolab", kNow)});
    Gateway::Session s;
    std::int64_t seq = 0;
    operate(*h.gateway, s, Operation::Login, {{"username", "root"}, {"pwd", "rootpw"}}, seq);
    CHECK(operate(*h.gateway, s, Operation::AddCredential,
                  {{"username", "bob"}, {"pwd", "b0b"}, {"role", "EndUser"}}, seq)
              .find("Success") != std::string::npos);
    CHECK(load_store(h.store()) == h.gateway->snapshot());
    CHECK(load_store(h.store()).table.size() == 5);

    auto reply = decode_server_line(operate(*h.gateway, s, Operation::ProxyCreate,
                                            {{"project", "virolab"}, {"lifetime", "600"}}, seq));
    REQUIRE(reply);
    REQUIRE(reply->report == Report::Success);
    auto serial = SerialNb::parse(reply->args.at("serial"));
    REQUIRE(serial);
    CHECK(reply->args.at("notAfter") == std::to_string(kNow + 600));
    auto stored = load_store(h.store());
    CHECK(stored.repository.proxy_owner(*serial) == UserId::of("root"));
    CHECK_FALSE(stored.check_invariants());

    reply = decode_server_line(operate(*h.gateway, s, Operation::ProxyList, {}, seq));
    REQUIRE(reply);
    CHECK(reply->args.at(serial->str()) == "1:" + std::to_string(kNow + 600) + ":root");

    // Login, AddCredential, ProxyCreate; listing is not audited
    CHECK(verify_audit_chain(h.audit()) == ChainReport{3, true, std::nullopt});

    // a reopened gateway sees the same state and continues the chain
    auto snapshot = h.gateway->snapshot();
    h.gateway.reset();
    auto again = Gateway::open(GatewayOptions{h.store(), h.audit(), [] { return kNow; }, {}});
    CHECK(again->snapshot() == snapshot);
    CHECK(again->audit_size() == 3);
}

TEST_CASE("a store that cannot be written yields an internal error")
{
    Harness h;
    Gateway::Session s;
    std::int64_t seq = 0;
    operate(*h.gateway, s, Operation::Login, {{"username", "ali"}, {"pwd", "pwdx"}}, seq);
    auto before = h.gateway->snapshot();
    // a directory where the store should be makes the rename fail
    std::filesystem::remove(h.store());
    std::filesystem::create_directory(h.store());
    std::filesystem::create_directory(h.store() / "keep");
    auto reply = operate(*h.gateway, s, Operation::ChangePassword,
                         {{"username", "ali"}, {"oldpwd", "pwdx"}, {"newpwd", "n3w"}}, seq);
    CHECK(reply == R"({"error":"internal","seq":4})");
    CHECK(h.gateway->snapshot() == before);
    CHECK(s.machine.current_user() == UserId::of("ali"));
}

TEST_CASE("kill point parsing")
{
    CHECK_FALSE(KillPoint{}.fires_for(Operation::AddCredential));
    auto any = KillPoint::parse("after-audit");
    REQUIRE(any);
    CHECK(any->fires_for(Operation::Logout));
    auto one = KillPoint::parse("after-audit:AddCredential");
    REQUIRE(one);
    CHECK(one->fires_for(Operation::AddCredential));
    CHECK_FALSE(one->fires_for(Operation::RemoveCredential));
    CHECK_FALSE(KillPoint::parse("before-audit"));
    CHECK_FALSE(KillPoint::parse("after-audit:Nope"));
    CHECK_FALSE(KillPoint::parse("after-auditX"));
}

TEST_CASE("wire fuzz: every reply is a valid server line")
{
    Harness h;
    testing::Rng rng(11);
    const std::vector<std::string> seeds = {
        R"({"event":"Login","seq":1})",
        R"({"event":"LoginRequest","args":{"username":"ali","pwd":"pwdx"},"seq":2})",
        R"({"event":"Logout"})",
        R"({"event":"LogoutRequest","args":{"username":"ali"}})",
        R"({"event":"AddCredential","seq":-3})",
    };
    Gateway::Session s;
    for (int i = 0; i < 5000; ++i) {
        std::string in;
        switch (testing::uniform(rng, 3)) {
        case 0:
            in = testing::random_bytes(rng, 80);
            break;
        case 1:
            in = testing::pick(rng, seeds);
            break;
        default: {
            in = testing::pick(rng, seeds);
            auto pos = testing::uniform(rng, in.size());
            in[pos] = static_cast<char>(testing::uniform(rng, 256));
        }
        }
        auto before = s.machine;
        auto out = h.gateway->handle_line(s, in);
        auto decoded = decode_server_line(out);
        REQUIRE_MESSAGE(decoded, out);
        REQUIRE(s.machine.invariant_holds());
        if (decoded->error)
            REQUIRE(s.machine == before);
    }
    CHECK(h.gateway->snapshot() == fixture());
    CHECK(verify_audit_chain(h.audit()).ok);
}

// ---------------------------------------------------------------------------
// TCP

TEST_CASE("listen addresses")
{
    CHECK(parse_listen_address("127.0.0.1:7070") == std::pair<std::string, std::uint16_t>{"127.0.0.1", 7070});
    CHECK(parse_listen_address("localhost:0"));
    CHECK_FALSE(parse_listen_address("127.0.0.1"));
    CHECK_FALSE(parse_listen_address("127.0.0.1:70000"));
    CHECK_FALSE(parse_listen_address(":80"));
    CHECK_FALSE(parse_listen_address("h:x"));
}

TEST_CASE("server on an ephemeral port")
{
    Harness h;
    Server server(*h.gateway, "127.0.0.1", 0);
    REQUIRE(server.port() != 0);
    std::thread runner([&] { server.run(); });
    const std::string address = "127.0.0.1:" + std::to_string(server.port());

    {
        auto c = cli::Connection::connect(address);
        CHECK(c.exchange_raw(R"({"event":"Login","seq":1})") == R"({"event":"Login","seq":1})");
        CHECK(c.exchange_raw(R"({"event":"LoginRequest","args":{"username":"ali","pwd":"pwdx"},"seq":2})") ==
              R"({"event":"LoginResponse","report":"Success","seq":2})");
        CHECK(c.exchange_raw(std::string(kMaxLineBytes + 10, 'x')) == R"({"error":"too-long"})");
        // the connection is still usable afterwards
        CHECK(c.exchange_raw(R"({"event":"Logout","seq":3})") == R"({"event":"Logout","seq":3})");
    }

    // concurrent administrators; every mutation lands exactly once
    constexpr int kClients = 4;
    constexpr int kEach = 5;
    std::atomic<int> successes{0};
    std::vector<std::thread> clients;
    for (int t = 0; t < kClients; ++t) {
        clients.emplace_back([&, t] {
            auto c = cli::Connection::connect(address);
            if (!cli::perform(c, Operation::Login, {{"username", "root"}, {"pwd", "rootpw"}})
                     .success())
                return;
            for (int i = 0; i < kEach; ++i) {
                auto r = cli::perform(c, Operation::AddCredential,
                                      {{"username", "u" + std::to_string(t) + "_" + std::to_string(i)},
                                       {"pwd", "p"},
                                       {"role", "EndUser"}});
                if (r.success())
                    ++successes;
            }
        });
    }
    for (auto& c : clients)
        c.join();
    CHECK(successes == kClients * kEach);
    CHECK(h.gateway->snapshot().table.size() == 4 + kClients * kEach);
    CHECK(load_store(h.store()) == h.gateway->snapshot());
    // one Login from the first connection, then per client: Login + adds
    CHECK(verify_audit_chain(h.audit()) ==
          ChainReport{1 + kClients * (1 + kEach), true, std::nullopt});

    // a client that is still connected does not keep stop() waiting
    auto idle = cli::Connection::connect(address);
    server.stop();
    runner.join();
    CHECK_THROWS_AS(idle.exchange_raw(R"({"event":"Login"})"), cli::TransportError);
}
