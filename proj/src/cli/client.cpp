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

#include "acd/gateway/server.hpp"

#include <boost/asio.hpp>

#include <cstdlib>

namespace acd::cli {

namespace asio = boost::asio;
using asio::ip::tcp;

struct Connection::Impl {
    asio::io_context io;
    tcp::socket socket{io};
    asio::streambuf in;
};

Connection::Connection() : impl_(std::make_unique<Impl>()) {}
Connection::Connection(Connection&&) noexcept = default;
Connection& Connection::operator=(Connection&&) noexcept = default;
Connection::~Connection() = default;

Connection Connection::connect(std::string_view address)
{
    auto hp = gateway::parse_listen_address(address);
    if (!hp)
        throw TransportError("invalid server address '" + std::string(address) + "'");
    Connection c;
    boost::system::error_code ec;
    tcp::resolver resolver(c.impl_->io);
    auto endpoints = resolver.resolve(hp->first, std::to_string(hp->second), ec);
    if (!ec)
        asio::connect(c.impl_->socket, endpoints, ec);
    if (ec)
        throw TransportError("cannot connect to " + std::string(address) + ": " + ec.message());
    c.impl_->socket.set_option(tcp::no_delay(true));
    return c;
}

std::string Connection::exchange_raw(std::string_view line)
{
    std::string out(line);
    out.push_back('\n');
    boost::system::error_code ec;
    asio::write(impl_->socket, asio::buffer(out), ec);
    if (ec)
        throw TransportError("send failed: " + ec.message());
    std::size_t n = asio::read_until(impl_->socket, impl_->in, '\n', ec);
    if (ec)
        throw TransportError("connection closed by server");
    std::string reply(asio::buffers_begin(impl_->in.data()),
                      asio::buffers_begin(impl_->in.data()) + static_cast<std::ptrdiff_t>(n - 1));
    impl_->in.consume(n);
    return reply;
}

gateway::ServerLine Connection::exchange(const protocol::ProtocolEvent& e)
{
    std::int64_t seq = ++seq_;
    std::string reply = exchange_raw(gateway::encode_client_line(e, seq));
    auto decoded = gateway::decode_server_line(reply);
    if (!decoded)
        throw TransportError("undecodable reply from server");
    if (decoded->seq != seq)
        throw TransportError("reply out of sequence");
    return *decoded;
}

OperationResult perform(Connection& c, protocol::Operation op, protocol::Args args)
{
    OperationResult out;
    auto ack = c.exchange(protocol::ProtocolEvent::announce(op));
    if (ack.error) {
        if (*ack.error != "refused")
            throw TransportError("server error: " + *ack.error);
        out.refused = true;
        return out;
    }
    auto reply = c.exchange(protocol::ProtocolEvent::request(op, std::move(args)));
    if (reply.error) {
        if (*reply.error != "refused")
            throw TransportError("server error: " + *reply.error);
        out.refused = true;
        return out;
    }
    if (!reply.event || reply.event->op != op ||
        reply.event->kind != protocol::EventKind::Response || !reply.report)
        throw TransportError("unexpected reply from server");
    out.report = *reply.report;
    out.args = std::move(reply.args);
    return out;
}

std::string default_server_address()
{
    if (const char* s = std::getenv("ACD_SERVER"); s != nullptr && *s != '\0')
        return s;
    return "127.0.0.1:7070";
}

}  // namespace acd::cli
