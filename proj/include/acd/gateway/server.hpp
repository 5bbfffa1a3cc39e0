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

// TCP front end: one thread per connection, newline-framed.

#ifndef ACD_GATEWAY_SERVER_HPP
#define ACD_GATEWAY_SERVER_HPP

#include "acd/gateway/gateway.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace acd::gateway {

/// "host:port"; the port may be 0 to pick a free one.
std::optional<std::pair<std::string, std::uint16_t>> parse_listen_address(std::string_view text);

class Server {
public:
    /// Binds immediately; port() is valid after construction.
    Server(Gateway& gateway, const std::string& host, std::uint16_t port);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const noexcept;

    /// Accepts connections until stop() is called.
    void run();

    /// Closes the listener and every open connection, then joins the
    /// connection threads. Safe to call from any thread.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace acd::gateway

#endif  // ACD_GATEWAY_SERVER_HPP
