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

// Durable gateway state: the credential table and the certificate
// repository in one versioned JSON document, written atomically.

#ifndef ACD_GATEWAY_STORE_HPP
#define ACD_GATEWAY_STORE_HPP

#include "acd/protocol/session.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace acd::gateway {

inline constexpr int kStoreVersion = 1;

/// Unreadable, malformed or invariant-violating store. The message names
/// the offending field or invariant.
class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Canonical encoding: keys in fixed order, collections sorted by key.
std::string serialize_store(const protocol::Backend& backend);

/// Strict: unknown fields, duplicates and invariant violations throw.
protocol::Backend parse_store(std::string_view text);

/// Writes to a temporary file in the same directory, fsyncs it, renames it
/// over `path` and fsyncs the directory. The file is created mode 0600.
void persist_store(const protocol::Backend& backend, const std::filesystem::path& path);

protocol::Backend load_store(const std::filesystem::path& path);

/// Helpers shared with the audit log.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace acd::gateway

#endif  // ACD_GATEWAY_STORE_HPP
