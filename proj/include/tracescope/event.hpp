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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tracescope/errors.hpp"

namespace tracescope {

// Argument type codes as carried on the wire and packed into the per-probe
// metadata word (one code per byte, little-endian position = argument index).
enum class ArgType : uint8_t {
    None = 0,
    Int = 1,
    Uint = 2,
    Long = 3,
    Ulong = 4,
    Addr = 5,
    Str = 6,
    Bytes = 7,
};

inline constexpr size_t kMaxArgs = 8;
// Per-argument capture cap for str/bytes payloads. Probe handlers copy into a
// fixed buffer; the encoder truncates to the same bound.
inline constexpr size_t kMaxArgPayload = 4096;
inline constexpr uint32_t kEventMagic = 0x42504644u;

const char* arg_type_name(ArgType type);
// Throws Errc::invalid_arg_types for names outside the config vocabulary
// ("int","uint","long","ulong","addr","str","bytes").
ArgType arg_type_from_name(std::string_view name);

// Distinct wrapper so Addr and Ulong occupy different variant alternatives.
struct Addr {
    uint64_t value = 0;
    bool operator==(const Addr&) const = default;
};

// Alternative index deliberately equals the ArgType code.
using ArgVariant = std::variant<std::monostate, int32_t, uint32_t, int64_t,
                                uint64_t, Addr, std::string,
                                std::vector<uint8_t>>;

struct ArgValue {
    ArgVariant value;

    ArgType type() const { return static_cast<ArgType>(value.index()); }

    static ArgValue of_int(int32_t v) { return {ArgVariant(v)}; }
    static ArgValue of_uint(uint32_t v) { return {ArgVariant(v)}; }
    static ArgValue of_long(int64_t v) { return {ArgVariant(v)}; }
    static ArgValue of_ulong(uint64_t v) { return {ArgVariant(v)}; }
    static ArgValue of_addr(uint64_t v) { return {ArgVariant(Addr{v})}; }
    static ArgValue of_str(std::string v) { return {ArgVariant(std::move(v))}; }
    static ArgValue of_bytes(std::vector<uint8_t> v) { return {ArgVariant(std::move(v))}; }

    bool operator==(const ArgValue&) const = default;
};

// Per-event context collected by every probe handler.
struct EventContext {
    uint64_t timestamp_ns = 0;
    uint32_t pid = 0;
    uint32_t tid = 0;
    uint32_t ppid = 0;
    uint32_t uid = 0;
    std::string comm; // at most 15 bytes, no interior NUL

    bool operator==(const EventContext&) const = default;
};

struct SyscallEnter {
    uint32_t nr = 0;
    bool operator==(const SyscallEnter&) const = default;
};

struct SyscallExit {
    uint32_t nr = 0;
    int64_t ret = 0;
    bool operator==(const SyscallExit&) const = default;
};

struct KprobeHit {
    uint32_t kprobe_id = 0;
    bool operator==(const KprobeHit&) const = default;
};

// Covers both native library functions and framework API methods; the two are
// told apart downstream by looking the address up in the AddressMap.
struct UserProbeHit {
    uint64_t address = 0;
    bool operator==(const UserProbeHit&) const = default;
};

// Variant order matches the wire kind tags 1..4.
using EventKind = std::variant<SyscallEnter, SyscallExit, KprobeHit, UserProbeHit>;

struct EventRecord {
    EventContext context;
    EventKind kind;
    std::vector<ArgValue> args; // length <= kMaxArgs

    bool operator==(const EventRecord&) const = default;
};

// Wire codec. Layout (all little-endian):
//   u32 magic 0x42504644
//   u64 timestamp_ns, u32 pid, u32 tid, u32 ppid, u32 uid, 16-byte comm (NUL padded)
//   u8 kind_tag (1=SyscallEnter, 2=SyscallExit, 3=Kprobe, 4=UserProbe)
//   kind payload: u32 nr | u32 nr + i64 ret | u32 kprobe_id | u64 address
//   u8 argnum, then per argument: u8 type code + value
//   (int/uint 4 bytes, long/ulong/addr 8 bytes, str/bytes u32 length + payload)
std::vector<uint8_t> encode_event(const EventRecord& record);

// Inverse of encode_event on its image. Throws Errc::bad_magic,
// Errc::truncated, Errc::unknown_kind_tag, Errc::unknown_arg_type.
EventRecord decode_event(std::span<const uint8_t> bytes);

// Packs up to kMaxArgs type codes into one u64, code of argument i in byte i.
// Throws Errc::too_many_args.
uint64_t encode_arg_types(const std::vector<ArgType>& types);

// Unpacks an encoding, stopping at the first zero byte. Throws
// Errc::unknown_arg_type if any byte is outside 0..7.
std::vector<ArgType> decode_arg_types(uint64_t encoding);

} // namespace tracescope
