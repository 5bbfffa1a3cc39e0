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

// Line-delimited JSON wire format.
//
// Client -> server, one object per line, fields from {event, args, seq}:
//
//   {"event":"Login","seq":1}
//   {"event":"LoginRequest","args":{"username":"ali","pwd":"pwdx"},"seq":2}
//
// Server -> client, exactly one line per client line:
//
//   {"event":"Login","seq":1}                             accepted announcement
//   {"event":"LoginResponse","report":"Success","seq":2}  response
//   {"error":"refused","seq":3}                           event not offered
//   {"error":"malformed","seq":4}                         undecodable line
//   {"error":"too-long"}                                  line over 64 KiB
//
// `seq` is echoed when the client supplied one. Responses may carry an
// `args` object with operation results (e.g. a proxy serial). Field order in
// server lines is fixed: event, report, args, error, seq.

#ifndef ACD_GATEWAY_WIRE_HPP
#define ACD_GATEWAY_WIRE_HPP

#include "acd/model/term.hpp"
#include "acd/protocol/event.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace acd::gateway {

inline constexpr std::size_t kMaxLineBytes = 64 * 1024;

using Seq = std::optional<std::int64_t>;

struct ClientMessage {
    protocol::ProtocolEvent event;
    Seq seq;
};

struct DecodedLine {
    std::optional<ClientMessage> message;  // empty when malformed
    Seq seq;                               // best-effort, for the error reply
};

DecodedLine decode_client_line(std::string_view line);
std::string encode_client_line(const protocol::ProtocolEvent& e, Seq seq);

std::string encode_ack(const protocol::EventName& name, Seq seq);
std::string encode_response(const protocol::ProtocolEvent& response, Seq seq);
std::string encode_error(std::string_view error, Seq seq);

/// A server line as seen by a client.
struct ServerLine {
    std::optional<protocol::EventName> event;
    std::optional<Report> report;
    protocol::Args args;
    std::optional<std::string> error;
    Seq seq;
};

/// nullopt if the line is not a well-formed server line.
std::optional<ServerLine> decode_server_line(std::string_view line);

/// Server lines a client following `trace` would receive, numbering client
/// messages 1, 2, ... : announcements are acknowledged, requests answered by
/// the response that follows them in the trace.
std::vector<std::string> render_server_lines(const model::Trace& trace);

}  // namespace acd::gateway

#endif  // ACD_GATEWAY_WIRE_HPP
