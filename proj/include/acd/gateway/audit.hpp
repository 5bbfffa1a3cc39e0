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

// Append-only, hash-chained audit log. One JSON record per line:
//
//   {"index":0,"timestamp":...,"user":"root","event":"AddCredential",
//    "outcome":"Success","detail":"...","prev":"00..00","self":"..."}
//
// `self` is the digest (store hash scheme, empty salt) of the record's
// canonical JSON without `self`; `prev` is the previous record's `self`,
// all zero bytes for the first record.

#ifndef ACD_GATEWAY_AUDIT_HPP
#define ACD_GATEWAY_AUDIT_HPP

#include "acd/core/types.hpp"
#include "acd/hashing/hashing.hpp"

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace acd::gateway {

struct AuditRecord {
    std::uint64_t index = 0;
    Timestamp timestamp = 0;
    std::string user;
    std::string event;
    Report outcome = Report::Failure;
    std::string detail;
    Digest prev;
    Digest self;

    friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

std::string audit_body(const AuditRecord& r);
Digest audit_digest(hashing::HashScheme scheme, const AuditRecord& r);
std::string encode_audit_record(const AuditRecord& r);
std::optional<AuditRecord> decode_audit_record(std::string_view line);

struct ChainReport {
    std::size_t count = 0;
    bool ok = true;
    std::optional<std::size_t> firstBadIndex;

    friend bool operator==(const ChainReport&, const ChainReport&) = default;
};

/// The hash scheme is inferred from the digest length of the first record.
ChainReport verify_audit_text(std::string_view contents);
ChainReport verify_audit_chain(const std::filesystem::path& path);

class AuditLog {
public:
    /// Opens or creates the log. A trailing partial line (an interrupted
    /// append) is cut off; a broken chain is refused with StoreError.
    static AuditLog open(const std::filesystem::path& path, hashing::HashScheme scheme);

    AuditLog(AuditLog&&) noexcept;
    AuditLog& operator=(AuditLog&&) noexcept;
    AuditLog(const AuditLog&) = delete;
    AuditLog& operator=(const AuditLog&) = delete;
    ~AuditLog();

    /// Appends and fsyncs one record.
    AuditRecord append(std::string user, std::string event, Report outcome, std::string detail,
                       Timestamp timestamp);

    std::size_t size() const noexcept { return count_; }
    hashing::HashScheme scheme() const noexcept { return scheme_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    AuditLog() = default;

    std::filesystem::path path_;
    hashing::HashScheme scheme_ = hashing::HashScheme::StrongKdf;
    int fd_ = -1;
    std::size_t count_ = 0;
    Digest last_;
};

}  // namespace acd::gateway

#endif  // ACD_GATEWAY_AUDIT_HPP
