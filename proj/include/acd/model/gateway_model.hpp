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

// Binds model/gateway.csp to the credential table and repository, and
// enumerates the session machine's traces the same way the interpreter
// enumerates the model's, so the two can be compared set for set.

#ifndef ACD_MODEL_GATEWAY_MODEL_HPP
#define ACD_MODEL_GATEWAY_MODEL_HPP

#include "acd/model/interpreter.hpp"
#include "acd/protocol/session.hpp"

#include <filesystem>
#include <vector>

namespace acd::model {

/// Registers the guards (pre-login, pre-change-password, ...), functions
/// (role-of) and effects (change-password, create-proxy, ...) the gateway
/// description uses. `now` is the clock seen by proxy operations.
void bind_gateway(ProcessEnvironment& env, Timestamp now);

/// parse_process_file + bind_gateway + validate.
ProcessEnvironment load_gateway_model(const std::filesystem::path& path, Timestamp now);

/// Announcements carry no fields, requests carry their arguments in
/// protocol::request_fields order, responses carry the report only.
Event to_model_event(const protocol::ProtocolEvent& e);
std::optional<protocol::ProtocolEvent> from_model_event(const Event& e);

/// Every announcement, every response, and every request whose arguments
/// range over the environment's domains.
std::vector<protocol::ProtocolEvent> candidate_events(const ProcessEnvironment& env);

/// Traces of the session machine (prefix closed, length <= depth) obtained
/// by offering every candidate at every state and keeping what is not
/// refused. A request and the response it produces are consecutive events.
Enumeration enumerate_session_traces(const protocol::SessionMachine& machine,
                                     const protocol::Backend& backend, Timestamp now,
                                     const std::vector<protocol::ProtocolEvent>& candidates,
                                     int depth, std::size_t nodeBudget = kMaxExploredNodes);

}  // namespace acd::model

#endif  // ACD_MODEL_GATEWAY_MODEL_HPP
