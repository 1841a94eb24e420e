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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracescope/alert.hpp"
#include "tracescope/dispatch.hpp"

namespace tracescope {

// Typed view over a vfs_write(v) kernel event. Argument convention:
// [str path, bytes data, ulong offset, ulong device, ulong inode].
struct WriteView {
    std::string_view path;
    const std::vector<uint8_t>* data = nullptr;
    uint64_t offset = 0;
    uint64_t device = 0;
    uint64_t inode = 0;
};

// Returns nullopt when the event is not a vfs_write(v) kernel event; throws
// Errc::malformed_write_event when it is one but the arguments do not match
// the convention.
std::optional<WriteView> parse_write_event(const ResolvedEvent& event);

// Watches writes into the first four bytes of any file and alerts once per
// (device, inode) when the assembled header equals a known magic. Header
// bytes may arrive across several writes; later writes overwrite earlier
// bytes until the alert fires.
class DropperSignature final : public Signature {
public:
    std::string_view name() const override { return "dropper"; }
    void on_event(const ResolvedEvent& event, std::vector<Alert>& alerts) override;

    uint64_t malformed_write_events() const { return malformed_; }

private:
    struct HeaderState {
        std::array<uint8_t, 4> bytes{};
        uint8_t known_mask = 0;
        bool alerted = false;
        std::string last_known_path;
    };

    std::map<std::pair<uint64_t, uint64_t>, HeaderState> files_;
    uint64_t malformed_ = 0;
};

// Tracks the uid per pid and alerts when a process shows up with a different
// uid than last recorded. Entries come from the shared process table, so a
// process that exits and reappears starts fresh. A given (pid, old, new)
// transition alerts at most once per run.
class PrivEscSignature final : public Signature {
public:
    explicit PrivEscSignature(ProcessTable& table) : table_(table) {}

    std::string_view name() const override { return "privilege_escalation"; }
    void on_event(const ResolvedEvent& event, std::vector<Alert>& alerts) override;

private:
    ProcessTable& table_;
    std::set<std::tuple<uint32_t, uint32_t, uint32_t>> fired_;
};

// Rebuilds file contents from captured chunks: length = max(offset+len), gaps
// zero-filled, overlaps resolved last-write-wins in chunk order. Throws
// Errc::mixed_identity when chunks span more than one (device, inode).
std::vector<uint8_t> reconstruct_file(std::span<const CaptureChunk> chunks);

// Persists every observed write of traced processes so dropped files can be
// reconstructed even when the magic arrives last. Layout per identity under
// the capture directory: <device>_<inode>/chunks.log (frames of u64 offset +
// u32 length + data), plus reconstructed.bin and manifest.json at finalize.
class CaptureStore final : public EventSink, public AlertSink {
public:
    explicit CaptureStore(std::filesystem::path capture_dir);

    void on_event(const ResolvedEvent& event) override;
    void on_alert(const Alert& alert) override;
    // Covers both sink roles; runs finalize() once.
    void flush() override { finalize(); }

    // Persists one write, returning the stored chunk. Zero-length writes
    // store nothing.
    std::optional<CaptureChunk> capture_write(const ResolvedEvent& event);

    // Writes reconstructed.bin and manifest.json for every captured identity.
    void finalize();

    const std::vector<CaptureChunk>* chunks_for(uint64_t device, uint64_t inode) const;

private:
    struct FileCapture {
        FileIdentity identity;
        std::vector<CaptureChunk> chunks;
        uint64_t alert_seq = 0;
        std::optional<MagicKind> magic;
    };

    std::filesystem::path dir_for(const FileIdentity& identity) const;
    void append_chunk_frame(const FileIdentity& identity, const CaptureChunk& chunk);

    std::filesystem::path root_;
    std::map<std::pair<uint64_t, uint64_t>, FileCapture> files_;
    bool finalized_ = false;
};

} // namespace tracescope
