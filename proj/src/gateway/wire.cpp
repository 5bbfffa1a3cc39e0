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

#include "acd/gateway/wire.hpp"

#include "acd/model/gateway_model.hpp"

#include <json.hpp>

namespace acd::gateway {

using json = nlohmann::ordered_json;
using protocol::EventKind;
using protocol::EventName;
using protocol::ProtocolEvent;

namespace {

Seq extract_seq(const json& obj)
{
    if (!obj.is_object())
        return std::nullopt;
    auto it = obj.find("seq");
    if (it == obj.end() || !it->is_number_integer())
        return std::nullopt;
    if (it->is_number_unsigned() && it->get<std::uint64_t>() > INT64_MAX)
        return std::nullopt;
    return it->get<std::int64_t>();
}

std::string dump(const json& j)
{
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::optional<protocol::Args> decode_args(const json& j)
{
    if (!j.is_object())
        return std::nullopt;
    protocol::Args args;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_string())
            return std::nullopt;
        args.emplace(k, v.get<std::string>());
    }
    return args;
}

}  // namespace

DecodedLine decode_client_line(std::string_view line)
{
    DecodedLine out;
    if (line.size() > kMaxLineBytes)
        return out;
    json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        return out;
    out.seq = extract_seq(j);

    for (const auto& [k, _] : j.items())
        if (k != "event" && k != "args" && k != "seq")
            return out;
    if (j.contains("seq") && !out.seq)
        return out;
    auto ev = j.find("event");
    if (ev == j.end() || !ev->is_string())
        return out;
    auto name = EventName::parse(ev->get<std::string>());
    if (!name)
        return out;

    ProtocolEvent e{*name, {}, std::nullopt};
    if (auto a = j.find("args"); a != j.end()) {
        auto args = decode_args(*a);
        if (!args)
            return out;
        e.args = std::move(*args);
    }
    // clients cannot supply a report, so only announce/request shapes apply
    if (name->kind == EventKind::Announce && !e.args.empty())
        return out;
    out.message = ClientMessage{std::move(e), out.seq};
    return out;
}

std::string encode_client_line(const ProtocolEvent& e, Seq seq)
{
    json j;
    j["event"] = e.name.str();
    if (!e.args.empty())
        j["args"] = e.args;
    if (seq)
        j["seq"] = *seq;
    return dump(j);
}

std::string encode_ack(const EventName& name, Seq seq)
{
    json j;
    j["event"] = name.str();
    if (seq)
        j["seq"] = *seq;
    return dump(j);
}

std::string encode_response(const ProtocolEvent& response, Seq seq)
{
    json j;
    j["event"] = response.name.str();
    j["report"] = std::string(render_report(response.report.value_or(Report::Failure)));
    if (!response.args.empty())
        j["args"] = response.args;
    if (seq)
        j["seq"] = *seq;
    return dump(j);
}

std::string encode_error(std::string_view error, Seq seq)
{
    json j;
    j["error"] = std::string(error);
    if (seq)
        j["seq"] = *seq;
    return dump(j);
}

std::optional<ServerLine> decode_server_line(std::string_view line)
{
    json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        return std::nullopt;
    ServerLine out;
    for (const auto& [k, v] : j.items()) {
        if (k == "event") {
            if (!v.is_string())
                return std::nullopt;
            out.event = EventName::parse(v.get<std::string>());
            if (!out.event)
                return std::nullopt;
        } else if (k == "report") {
            if (!v.is_string())
                return std::nullopt;
            out.report = parse_report(v.get<std::string>());
            if (!out.report)
                return std::nullopt;
        } else if (k == "args") {
            auto args = decode_args(v);
            if (!args)
                return std::nullopt;
            out.args = std::move(*args);
        } else if (k == "error") {
            if (!v.is_string())
                return std::nullopt;
            out.error = v.get<std::string>();
        } else if (k == "seq") {
            out.seq = extract_seq(j);
            if (!out.seq)
                return std::nullopt;
        } else {
            return std::nullopt;
        }
    }
    if (out.event.has_value() == out.error.has_value())
        return std::nullopt;
    return out;
}

std::vector<std::string> render_server_lines(const model::Trace& trace)
{
    std::vector<std::string> out;
    std::int64_t seq = 0;
    for (const auto& me : trace) {
        auto e = model::from_model_event(me);
        if (!e)
            continue;
        switch (e->name.kind) {
        case EventKind::Announce:
            out.push_back(encode_ack(e->name, ++seq));
            break;
        case EventKind::Request:
            ++seq;
            break;
        case EventKind::Response:
            out.push_back(encode_response(*e, seq));
            break;
        }
    }
    return out;
}

}  // namespace acd::gateway
