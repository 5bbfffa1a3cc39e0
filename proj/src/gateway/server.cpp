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

#include "acd/gateway/server.hpp"

#include "acd/gateway/wire.hpp"

#include <boost/asio.hpp>

#include <atomic>
#include <charconv>
#include <iostream>
#include <list>
#include <mutex>
#include <sys/socket.h>
#include <thread>

namespace acd::gateway {

namespace asio = boost::asio;
using asio::ip::tcp;

std::optional<std::pair<std::string, std::uint16_t>> parse_listen_address(std::string_view text)
{
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
        return std::nullopt;
    std::string_view host = text.substr(0, colon);
    std::string_view port = text.substr(colon + 1);
    unsigned value = 0;
    auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || p != port.data() + port.size() || port.empty() || value > 65535)
        return std::nullopt;
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']')
        host = host.substr(1, host.size() - 2);
    return std::make_pair(std::string(host), static_cast<std::uint16_t>(value));
}

namespace {

struct Connection {
    std::shared_ptr<tcp::socket> socket;
    std::thread thread;
    std::atomic<bool> done{false};
};

bool write_line(tcp::socket& s, std::string line)
{
    line.push_back('\n');
    boost::system::error_code ec;
    asio::write(s, asio::buffer(line), ec);
    return !ec;
}

void serve(Gateway& gateway, tcp::socket& socket)
{
    Gateway::Session session;
    std::string buffer;
    bool discarding = false;
    char chunk[4096];
    for (;;) {
        boost::system::error_code ec;
        std::size_t n = socket.read_some(asio::buffer(chunk), ec);
        if (ec)
            return;
        for (std::size_t i = 0; i < n; ++i) {
            char c = chunk[i];
            if (c == '\n') {
                if (discarding) {
                    discarding = false;
                } else {
                    if (!buffer.empty() && buffer.back() == '\r')
                        buffer.pop_back();
                    if (!write_line(socket, gateway.handle_line(session, buffer)))
                        return;
                }
                buffer.clear();
            } else if (!discarding) {
                buffer.push_back(c);
                if (buffer.size() > kMaxLineBytes) {
                    buffer.clear();
                    discarding = true;
                    if (!write_line(socket, Gateway::oversized_reply()))
                        return;
                }
            }
        }
    }
}

}  // namespace

struct Server::Impl {
    Gateway& gateway;
    asio::io_context io;
    tcp::acceptor acceptor;
    std::mutex mu;
    std::list<Connection> connections;
    bool stopping = false;

    Impl(Gateway& g, const std::string& host, std::uint16_t port)
        : gateway(g), acceptor(io)
    {
        tcp::endpoint ep(asio::ip::make_address(host), port);
        acceptor.open(ep.protocol());
        acceptor.set_option(tcp::acceptor::reuse_address(true));
        acceptor.bind(ep);
        acceptor.listen();
    }

    void reap()
    {
        for (auto it = connections.begin(); it != connections.end();) {
            if (it->done.load()) {
                it->thread.join();
                it = connections.erase(it);
            } else {
                ++it;
            }
        }
    }

    void accept()
    {
        auto socket = std::make_shared<tcp::socket>(io);
        acceptor.async_accept(*socket, [this, socket](boost::system::error_code ec) {
            if (ec)
                return;  // listener closed
            std::lock_guard lock(mu);
            if (stopping)
                return;
            reap();
            socket->set_option(tcp::no_delay(true));
            auto& c = connections.emplace_back();
            c.socket = socket;
            c.thread = std::thread([this, &c] {
                try {
                    serve(gateway, *c.socket);
                } catch (const std::exception& e) {
                    std::cerr << "acd-gateway: connection error: " << e.what() << '\n';
                }
                boost::system::error_code ignored;
                c.socket->shutdown(tcp::socket::shutdown_both, ignored);
                c.done.store(true);
            });
            accept();
        });
    }
};

Server::Server(Gateway& gateway, const std::string& host, std::uint16_t port)
    : impl_(std::make_unique<Impl>(gateway, host, port))
{
}

Server::~Server()
{
    stop();
}

std::uint16_t Server::port() const noexcept
{
    boost::system::error_code ec;
    auto ep = impl_->acceptor.local_endpoint(ec);
    return ec ? 0 : ep.port();
}

void Server::run()
{
    impl_->accept();
    impl_->io.run();
}

void Server::stop()
{
    std::list<Connection> closing;
    {
        std::lock_guard lock(impl_->mu);
        if (impl_->stopping)
            return;
        impl_->stopping = true;
        for (auto& c : impl_->connections)
            ::shutdown(c.socket->native_handle(), SHUT_RDWR);
        closing.splice(closing.end(), impl_->connections);
    }
    // closing the acceptor cancels the pending accept, so run() returns once
    // the io_context is out of work; clients still in the backlog are reset
    asio::post(impl_->io, [this] {
        boost::system::error_code ignored;
        impl_->acceptor.close(ignored);
    });
    for (auto& c : closing)
        if (c.thread.joinable())
            c.thread.join();
}

}  // namespace acd::gateway
