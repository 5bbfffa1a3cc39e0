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

#include "acd/gateway/audit.hpp"

#include "acd/gateway/store.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <utility>

namespace acd::gateway {

using json = nlohmann::ordered_json;

namespace {

Digest zero_digest(hashing::HashScheme s)
{
    return Digest(Bytes(hashing::output_length(s), 0));
}

std::optional<hashing::HashScheme> scheme_for_length(std::size_t n)
{
    for (auto s : {hashing::HashScheme::Md5Compat, hashing::HashScheme::StrongKdf})
        if (hashing::output_length(s) == n)
            return s;
    return std::nullopt;
}

json body_json(const AuditRecord& r)
{
    json j;
    j["index"] = r.index;
    j["timestamp"] = r.timestamp;
    j["user"] = r.user;
    j["event"] = r.event;
    j["outcome"] = std::string(render_report(r.outcome));
    j["detail"] = r.detail;
    j["prev"] = r.prev.hex();
    return j;
}

std::string dump(const json& j)
{
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

std::string audit_body(const AuditRecord& r)
{
    return dump(body_json(r));
}

Digest audit_digest(hashing::HashScheme scheme, const AuditRecord& r)
{
    std::string body = audit_body(r);
    return hashing::digest_bytes(scheme, Salt{}, to_bytes(body));
}

std::string encode_audit_record(const AuditRecord& r)
{
    json j = body_json(r);
    j["self"] = r.self.hex();
    return dump(j);
}

std::optional<AuditRecord> decode_audit_record(std::string_view line)
{
    json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.size() != 8)
        return std::nullopt;
    auto str = [&](const char* k) -> std::optional<std::string> {
        auto it = j.find(k);
        if (it == j.end() || !it->is_string())
            return std::nullopt;
        return it->get<std::string>();
    };
    auto idx = j.find("index");
    auto ts = j.find("timestamp");
    if (idx == j.end() || !idx->is_number_unsigned() || ts == j.end() ||
        !ts->is_number_integer())
        return std::nullopt;
    auto user = str("user");
    auto event = str("event");
    auto outcome = str("outcome");
    auto detail = str("detail");
    auto prev = str("prev");
    auto self = str("self");
    if (!user || !event || !outcome || !detail || !prev || !self)
        return std::nullopt;
    auto report = parse_report(*outcome);
    auto p = Digest::from_hex(*prev);
    auto s = Digest::from_hex(*self);
    if (!report || !p || !s)
        return std::nullopt;
    AuditRecord r{idx->get<std::uint64_t>(), ts->get<Timestamp>(), *user, *event, *report,
                  *detail, *p, *s};
    // reject non-canonical encodings so that the digest covers the bytes read
    if (encode_audit_record(r) != line)
        return std::nullopt;
    return r;
}

namespace {

ChainReport verify_chain(std::string_view contents, Digest* last)
{
    ChainReport out;
    std::optional<hashing::HashScheme> scheme;
    Digest prev;
    std::size_t pos = 0;
    while (pos < contents.size()) {
        std::size_t nl = contents.find('\n', pos);
        std::string_view line =
            contents.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? contents.size() : nl + 1;
        std::size_t i = out.count++;
        if (!out.ok)
            continue;

        auto r = decode_audit_record(line);
        bool good = r.has_value();
        if (good && !scheme) {
            scheme = scheme_for_length(r->self.size());
            good = scheme.has_value();
            if (good)
                prev = zero_digest(*scheme);
        }
        good = good && r->index == i && r->prev == prev &&
               hashing::digests_equal(r->self, audit_digest(*scheme, *r));
        if (!good) {
            out.ok = false;
            out.firstBadIndex = i;
            continue;
        }
        prev = r->self;
    }
    if (last != nullptr)
        *last = prev;
    return out;
}

}  // namespace

ChainReport verify_audit_text(std::string_view contents)
{
    return verify_chain(contents, nullptr);
}

ChainReport verify_audit_chain(const std::filesystem::path& path)
{
    return verify_audit_text(read_file(path));
}

// ---------------------------------------------------------------------------

AuditLog AuditLog::open(const std::filesystem::path& path, hashing::HashScheme scheme)
{
    AuditLog log;
    log.path_ = path;
    log.scheme_ = scheme;

    std::error_code ec;
    if (std::filesystem::exists(path, ec)) {
        std::string text = read_file(path);
        std::size_t keep = text.rfind('\n');
        keep = keep == std::string::npos ? 0 : keep + 1;
        if (keep != text.size()) {
            text.resize(keep);
            std::filesystem::resize_file(path, keep);
        }
        Digest last;
        ChainReport report = verify_chain(text, &last);
        if (!report.ok)
            throw StoreError("audit log " + path.string() + ": chain broken at record " +
                             std::to_string(*report.firstBadIndex));
        log.count_ = report.count;
        if (report.count > 0) {
            log.last_ = last;
            log.scheme_ = *scheme_for_length(last.size());
        }
    }
    if (log.count_ == 0)
        log.last_ = zero_digest(log.scheme_);

    log.fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, S_IRUSR | S_IWUSR);
    if (log.fd_ < 0)
        throw StoreError("cannot open audit log " + path.string() + ": " + std::strerror(errno));
    return log;
}

AuditLog::AuditLog(AuditLog&& o) noexcept
    : path_(std::move(o.path_)),
      scheme_(o.scheme_),
      fd_(std::exchange(o.fd_, -1)),
      count_(o.count_),
      last_(std::move(o.last_))
{
}

AuditLog& AuditLog::operator=(AuditLog&& o) noexcept
{
    if (this != &o) {
        if (fd_ >= 0)
            ::close(fd_);
        path_ = std::move(o.path_);
        scheme_ = o.scheme_;
        fd_ = std::exchange(o.fd_, -1);
        count_ = o.count_;
        last_ = std::move(o.last_);
    }
    return *this;
}

AuditLog::~AuditLog()
{
    if (fd_ >= 0)
        ::close(fd_);
}

AuditRecord AuditLog::append(std::string user, std::string event, Report outcome,
                             std::string detail, Timestamp timestamp)
{
    AuditRecord r{count_, timestamp, std::move(user), std::move(event), outcome,
                  std::move(detail), last_, {}};
    r.self = audit_digest(scheme_, r);
    std::string line = encode_audit_record(r) + "\n";

    const char* p = line.data();
    std::size_t left = line.size();
    while (left > 0) {
        ssize_t n = ::write(fd_, p, left);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw StoreError("audit append failed: " + std::string(std::strerror(errno)));
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0)
        throw StoreError("audit fsync failed: " + std::string(std::strerror(errno)));
    ++count_;
    last_ = r.self;
    return r;
}

}  // namespace acd::gateway
