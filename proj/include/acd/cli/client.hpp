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

// Blocking client for the gateway wire protocol.

#ifndef ACD_CLI_CLIENT_HPP
#define ACD_CLI_CLIENT_HPP

#include "acd/gateway/wire.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace acd::cli {

/// Connection failures and unexpected replies.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Connection {
public:
    /// `address` is host:port.
    static Connection connect(std::string_view address);

    Connection(Connection&&) noexcept;
    Connection& operator=(Connection&&) noexcept;
    ~Connection();

    /// Sends one raw line and returns the reply line (without newline).
    std::string exchange_raw(std::string_view line);

    /// Sends `e` with the next sequence number and decodes the reply.
    gateway::ServerLine exchange(const protocol::ProtocolEvent& e);

private:
    Connection();
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::int64_t seq_ = 0;
};

struct OperationResult {
    bool refused = false;  // the server did not offer the operation
    Report report = Report::Failure;
    protocol::Args args;

    bool success() const noexcept { return !refused && report == Report::Success; }
};

/// Announce, request, await the response.
OperationResult perform(Connection& c, protocol::Operation op, protocol::Args args);

std::string default_server_address();

}  // namespace acd::cli

#endif  // ACD_CLI_CLIENT_HPP
