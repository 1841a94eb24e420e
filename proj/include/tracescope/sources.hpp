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

#include <memory>
#include <string>
#include <vector>

#include "tracescope/address.hpp"
#include "tracescope/config.hpp"
#include "tracescope/event.hpp"

namespace tracescope {

// An ordered producer of decoded events. Timestamps within one source are
// non-decreasing. A source is single-consumer.
class EventSource {
public:
    virtual ~EventSource() = default;

    // Appends the next batch to out. Returns false at end of stream (out
    // untouched). Throws on unreadable input (Errc::io_error,
    // Errc::format_error).
    virtual bool next_batch(std::vector<EventRecord>& out) = 0;
};

// Replay file format: 8-byte magic "BPFRPLY1", then frames of u32 length
// (little-endian) followed by one encoded event message.
inline constexpr char kReplayMagic[8] = {'B', 'P', 'F', 'R', 'P', 'L', 'Y', '1'};

// Opens a replay file; yields the recorded events in file order. Throws
// Errc::io_error (missing/unreadable file) and Errc::format_error (bad magic);
// a corrupt frame mid-file surfaces as Errc::format_error from next_batch
// after the preceding intact events were delivered.
std::unique_ptr<EventSource> open_replay(const std::string& path);

// Writes events to the replay format. Throws Errc::io_error.
void write_replay(const std::string& path, const std::vector<EventRecord>& events);

// Streaming writer for large traces.
class ReplayWriter {
public:
    explicit ReplayWriter(const std::string& path);
    ~ReplayWriter();
    ReplayWriter(const ReplayWriter&) = delete;
    ReplayWriter& operator=(const ReplayWriter&) = delete;

    void append(const EventRecord& record);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

enum class ScenarioName { DropperDex, DropperElf, DropperArchive, PrivEsc, Benign };

const char* to_string(ScenarioName name);
// Throws Errc::invalid_argument for unknown names.
ScenarioName scenario_from_string(std::string_view name);

// A deterministic synthetic workload. Dropper scenarios model a user app
// writing a second-stage payload to disk; the payload always begins with the
// scenario's magic bytes.
struct Scenario {
    ScenarioName name = ScenarioName::Benign;
    uint64_t seed = 1;
    uint32_t app_uid = 10050;
    uint32_t app_pid = 4242;
    std::vector<uint8_t> payload;

    static Scenario make(ScenarioName name, uint64_t seed);
    static Scenario make(ScenarioName name, uint64_t seed, uint32_t app_uid, uint32_t app_pid);

    // Identity of the file the scenario writes (droppers and benign).
    std::string target_path() const;
    uint64_t device() const;
    uint64_t inode() const;
};

// Deterministic for a fixed (name, seed): two sources yield byte-identical
// encoded streams.
std::unique_ptr<EventSource> simulate_scenario(const Scenario& scenario);

// Probe metadata for the synthetic user-probe addresses the simulator emits.
AddressMap simulation_address_map();

// Well-known simulated attach addresses.
inline constexpr uint64_t kSimLibcOpenAddr = 0x7fb0001f40;
inline constexpr uint64_t kSimOpenDexFileAddr = 0x70621000;

// Well-known kprobe ids used on the wire.
inline constexpr uint32_t kKprobeIdVfsWrite = 1;
inline constexpr uint32_t kKprobeIdVfsWritev = 2;
inline constexpr uint32_t kKprobeIdSchedProcessExit = 3;
inline constexpr uint32_t kKprobeIdSecurityBprmCheck = 4;

struct ProbePlanUprobe {
    std::string target_path;
    uint64_t absolute_address = 0;
    std::string display_name;
    uint64_t arg_encoding = 0;

    bool operator==(const ProbePlanUprobe&) const = default;
};

// The exact contract a kernel backend must honor: which tracepoints to enable
// and which kprobes/uprobes to attach. This document replaces live program
// loading in this artifact.
struct ProbePlan {
    bool raw_syscalls_entry = false;
    bool raw_syscalls_exit = false;
    std::vector<std::string> kprobes;
    std::vector<ProbePlanUprobe> uprobes;
    FilterSpec filter;

    bool operator==(const ProbePlan&) const = default;
};

// raw_syscalls entry+exit are enabled iff the config names at least one
// syscall; kprobes and resolved uprobes are copied through in order.
ProbePlan emit_probe_plan(const HooksConfig& config, const std::vector<ResolvedProbe>& probes);

// Deterministic JSON serialization (addresses hex-encoded).
std::string probe_plan_to_json(const ProbePlan& plan);

// Feeds a wrapped source through a bounded queue on a separate thread,
// preserving per-source order.
std::unique_ptr<EventSource> threaded_source(std::unique_ptr<EventSource> inner,
                                             size_t queue_capacity = 64);

} // namespace tracescope
