/*
 * Copyright 2026 The Tracescope Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tracescope/event.hpp"

#include <array>
#include <cstring>

namespace tracescope {

namespace {

constexpr size_t kCommBytes = 16;

void put_u8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }

void put_u32(std::vector<uint8_t>& out, uint32_t v)
{
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v)
{
    put_u32(out, static_cast<uint32_t>(v));
    put_u32(out, static_cast<uint32_t>(v >> 32));
}

void put_i32(std::vector<uint8_t>& out, int32_t v) { put_u32(out, static_cast<uint32_t>(v)); }
void put_i64(std::vector<uint8_t>& out, int64_t v) { put_u64(out, static_cast<uint64_t>(v)); }

// Cursor with explicit bounds checks so any strict prefix of a valid message
// decodes to Errc::truncated, never to a different record.
class Reader {
public:
    explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    size_t offset() const { return pos_; }

    void need(size_t n) const
    {
        if (bytes_.size() - pos_ < n) {
            fail(Errc::truncated, "need " + std::to_string(pos_ + n) + " bytes, have " +
                                      std::to_string(bytes_.size()));
        }
    }

    uint8_t u8()
    {
        need(1);
        return bytes_[pos_++];
    }

    uint32_t u32()
    {
        need(4);
        uint32_t v = static_cast<uint32_t>(bytes_[pos_]) |
                     static_cast<uint32_t>(bytes_[pos_ + 1]) << 8 |
                     static_cast<uint32_t>(bytes_[pos_ + 2]) << 16 |
                     static_cast<uint32_t>(bytes_[pos_ + 3]) << 24;
        pos_ += 4;
        return v;
    }

    uint64_t u64()
    {
        uint64_t lo = u32();
        uint64_t hi = u32();
        return lo | hi << 32;
    }

    std::span<const uint8_t> raw(size_t n)
    {
        need(n);
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

void put_comm(std::vector<uint8_t>& out, const std::string& comm)
{
    std::array<uint8_t, kCommBytes> buf{};
    size_t n = comm.size();
    if (n > kCommBytes - 1)
        n = kCommBytes - 1; // truncate to 15 + NUL
    std::memcpy(buf.data(), comm.data(), n);
    out.insert(out.end(), buf.begin(), buf.end());
}

std::string read_comm(Reader& r)
{
    auto raw = r.raw(kCommBytes);
    size_t len = 0;
    while (len < kCommBytes && raw[len] != 0)
        ++len;
    if (len == kCommBytes)
        len = kCommBytes - 1; // wire guarantees a terminating NUL; clamp anyway
    return std::string(reinterpret_cast<const char*>(raw.data()), len);
}

void put_arg(std::vector<uint8_t>& out, const ArgValue& arg)
{
    put_u8(out, static_cast<uint8_t>(arg.type()));
    switch (arg.type()) {
    case ArgType::None:
        break;
    case ArgType::Int:
        put_i32(out, std::get<int32_t>(arg.value));
        break;
    case ArgType::Uint:
        put_u32(out, std::get<uint32_t>(arg.value));
        break;
    case ArgType::Long:
        put_i64(out, std::get<int64_t>(arg.value));
        break;
    case ArgType::Ulong:
        put_u64(out, std::get<uint64_t>(arg.value));
        break;
    case ArgType::Addr:
        put_u64(out, std::get<Addr>(arg.value).value);
        break;
    case ArgType::Str: {
        const auto& s = std::get<std::string>(arg.value);
        size_t n = s.size() > kMaxArgPayload ? kMaxArgPayload : s.size();
        put_u32(out, static_cast<uint32_t>(n));
        out.insert(out.end(), s.begin(), s.begin() + static_cast<ptrdiff_t>(n));
        break;
    }
    case ArgType::Bytes: {
        const auto& b = std::get<std::vector<uint8_t>>(arg.value);
        size_t n = b.size() > kMaxArgPayload ? kMaxArgPayload : b.size();
        put_u32(out, static_cast<uint32_t>(n));
        out.insert(out.end(), b.begin(), b.begin() + static_cast<ptrdiff_t>(n));
        break;
    }
    }
}

ArgValue read_arg(Reader& r)
{
    uint8_t code = r.u8();
    if (code > static_cast<uint8_t>(ArgType::Bytes))
        fail(Errc::unknown_arg_type, "code " + std::to_string(code));
    switch (static_cast<ArgType>(code)) {
    case ArgType::None:
        return {};
    case ArgType::Int:
        return ArgValue::of_int(static_cast<int32_t>(r.u32()));
    case ArgType::Uint:
        return ArgValue::of_uint(r.u32());
    case ArgType::Long:
        return ArgValue::of_long(static_cast<int64_t>(r.u64()));
    case ArgType::Ulong:
        return ArgValue::of_ulong(r.u64());
    case ArgType::Addr:
        return ArgValue::of_addr(r.u64());
    case ArgType::Str: {
        uint32_t n = r.u32();
        auto raw = r.raw(n);
        return ArgValue::of_str(std::string(reinterpret_cast<const char*>(raw.data()), n));
    }
    case ArgType::Bytes: {
        uint32_t n = r.u32();
        auto raw = r.raw(n);
        return ArgValue::of_bytes(std::vector<uint8_t>(raw.begin(), raw.end()));
    }
    }
    fail(Errc::unknown_arg_type, "code " + std::to_string(code));
}

} // namespace

const char* arg_type_name(ArgType type)
{
    switch (type) {
    case ArgType::None: return "none";
    case ArgType::Int: return "int";
    case ArgType::Uint: return "uint";
    case ArgType::Long: return "long";
    case ArgType::Ulong: return "ulong";
    case ArgType::Addr: return "addr";
    case ArgType::Str: return "str";
    case ArgType::Bytes: return "bytes";
    }
    return "?";
}

ArgType arg_type_from_name(std::string_view name)
{
    if (name == "int") return ArgType::Int;
    if (name == "uint") return ArgType::Uint;
    if (name == "long") return ArgType::Long;
    if (name == "ulong") return ArgType::Ulong;
    if (name == "addr") return ArgType::Addr;
    if (name == "str") return ArgType::Str;
    if (name == "bytes") return ArgType::Bytes;
    fail(Errc::invalid_arg_types, "unknown type name \"" + std::string(name) + "\"");
}

std::vector<uint8_t> encode_event(const EventRecord& record)
{
    std::vector<uint8_t> out;
    out.reserve(64);
    put_u32(out, kEventMagic);
    put_u64(out, record.context.timestamp_ns);
    put_u32(out, record.context.pid);
    put_u32(out, record.context.tid);
    put_u32(out, record.context.ppid);
    put_u32(out, record.context.uid);
    put_comm(out, record.context.comm);

    if (const auto* e = std::get_if<SyscallEnter>(&record.kind)) {
        put_u8(out, 1);
        put_u32(out, e->nr);
    } else if (const auto* x = std::get_if<SyscallExit>(&record.kind)) {
        put_u8(out, 2);
        put_u32(out, x->nr);
        put_i64(out, x->ret);
    } else if (const auto* k = std::get_if<KprobeHit>(&record.kind)) {
        put_u8(out, 3);
        put_u32(out, k->kprobe_id);
    } else {
        put_u8(out, 4);
        put_u64(out, std::get<UserProbeHit>(record.kind).address);
    }

    size_t argnum = record.args.size() > kMaxArgs ? kMaxArgs : record.args.size();
    put_u8(out, static_cast<uint8_t>(argnum));
    for (size_t i = 0; i < argnum; ++i)
        put_arg(out, record.args[i]);
    return out;
}

EventRecord decode_event(std::span<const uint8_t> bytes)
{
    Reader r(bytes);
    r.need(4);
    uint32_t magic = r.u32();
    if (magic != kEventMagic) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "0x%08x", magic);
        fail(Errc::bad_magic, buf);
    }

    EventRecord rec;
    rec.context.timestamp_ns = r.u64();
    rec.context.pid = r.u32();
    rec.context.tid = r.u32();
    rec.context.ppid = r.u32();
    rec.context.uid = r.u32();
    rec.context.comm = read_comm(r);

    uint8_t tag = r.u8();
    switch (tag) {
    case 1:
        rec.kind = SyscallEnter{r.u32()};
        break;
    case 2: {
        uint32_t nr = r.u32();
        int64_t ret = static_cast<int64_t>(r.u64());
        rec.kind = SyscallExit{nr, ret};
        break;
    }
    case 3:
        rec.kind = KprobeHit{r.u32()};
        break;
    case 4:
        rec.kind = UserProbeHit{r.u64()};
        break;
    default:
        fail(Errc::unknown_kind_tag, std::to_string(tag));
    }

    uint8_t argnum = r.u8();
    if (argnum > kMaxArgs)
        fail(Errc::too_many_args, std::to_string(argnum) + " arguments");
    rec.args.reserve(argnum);
    for (uint8_t i = 0; i < argnum; ++i)
        rec.args.push_back(read_arg(r));
    return rec;
}

uint64_t encode_arg_types(const std::vector<ArgType>& types)
{
    if (types.size() > kMaxArgs)
        fail(Errc::too_many_args, std::to_string(types.size()) + " arg types");
    uint64_t enc = 0;
    for (size_t i = 0; i < types.size(); ++i)
        enc |= static_cast<uint64_t>(static_cast<uint8_t>(types[i])) << (8 * i);
    return enc;
}

std::vector<ArgType> decode_arg_types(uint64_t encoding)
{
    // Validate every byte before truncating at the first zero.
    for (size_t i = 0; i < kMaxArgs; ++i) {
        uint8_t code = static_cast<uint8_t>(encoding >> (8 * i));
        if (code > static_cast<uint8_t>(ArgType::Bytes))
            fail(Errc::unknown_arg_type, "code " + std::to_string(code));
    }
    std::vector<ArgType> out;
    for (size_t i = 0; i < kMaxArgs; ++i) {
        uint8_t code = static_cast<uint8_t>(encoding >> (8 * i));
        if (code == 0)
            break;
        out.push_back(static_cast<ArgType>(code));
    }
    return out;
}

const char* errc_name(Errc code)
{
    switch (code) {
    case Errc::syntax_error: return "SyntaxError";
    case Errc::unknown_kind: return "UnknownKind";
    case Errc::duplicate_hook: return "DuplicateHook";
    case Errc::invalid_arg_types: return "InvalidArgTypes";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::malformed_method_entry: return "MalformedMethodEntry";
    case Errc::unsupported_descriptor: return "UnsupportedDescriptor";
    case Errc::not_an_elf: return "NotAnElf";
    case Errc::symbol_not_found: return "SymbolNotFound";
    case Errc::too_many_args: return "TooManyArgs";
    case Errc::hook_unresolved: return "HookUnresolved";
    case Errc::address_collision: return "AddressCollision";
    case Errc::bad_magic: return "BadMagic";
    case Errc::truncated: return "Truncated";
    case Errc::unknown_kind_tag: return "UnknownKindTag";
    case Errc::unknown_arg_type: return "UnknownArgType";
    case Errc::io_error: return "IoError";
    case Errc::format_error: return "FormatError";
    case Errc::unknown_package: return "UnknownPackage";
    case Errc::mixed_identity: return "MixedIdentity";
    case Errc::malformed_write_event: return "MalformedWriteEvent";
    case Errc::invalid_argument: return "InvalidArgument";
    }
    return "Error";
}

} // namespace tracescope
