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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "tracescope/event.hpp"

namespace tracescope {

// Leading file bytes watched by the dropper signature.
enum class MagicKind { Elf, Dex, Archive };

constexpr std::array<uint8_t, 4> magic_bytes(MagicKind kind)
{
    switch (kind) {
    case MagicKind::Elf: return {0x7f, 0x45, 0x4c, 0x46};
    case MagicKind::Dex: return {0x64, 0x65, 0x78, 0x0a}; // "dex\n"
    case MagicKind::Archive: return {0x50, 0x4b, 0x03, 0x04};
    }
    return {};
}

const char* to_string(MagicKind kind);

std::optional<MagicKind> match_magic(std::span<const uint8_t, 4> header);

// Kernel-level file identity: stable across renames. The path is the last one
// observed and is advisory only.
struct FileIdentity {
    uint64_t device = 0;
    uint64_t inode = 0;
    std::string last_known_path;

    std::pair<uint64_t, uint64_t> key() const { return {device, inode}; }

    // Identity compares by (device, inode); the path is not part of the key.
    bool operator==(const FileIdentity& other) const
    {
        return device == other.device && inode == other.inode;
    }
};

struct DroppedFileDetail {
    MagicKind magic = MagicKind::Elf;
    FileIdentity file;
};

struct PrivEscDetail {
    uint32_t pid = 0;
    uint32_t old_uid = 0;
    uint32_t new_uid = 0;
};

struct Alert {
    enum class Kind { DroppedFile, PrivilegeEscalation };

    Kind kind = Kind::DroppedFile;
    EventContext context; // context of the triggering event
    uint64_t alert_seq = 0; // assigned by the dispatch loop, monotonic per run
    std::variant<DroppedFileDetail, PrivEscDetail> detail;

    const char* kind_name() const
    {
        return kind == Kind::DroppedFile ? "dropped_file" : "privilege_escalation";
    }

    const DroppedFileDetail& dropped() const { return std::get<DroppedFileDetail>(detail); }
    const PrivEscDetail& privesc() const { return std::get<PrivEscDetail>(detail); }
};

// One observed file write, the unit of forensic capture.
struct CaptureChunk {
    FileIdentity file;
    uint64_t offset = 0;
    std::vector<uint8_t> data;
};

} // namespace tracescope
