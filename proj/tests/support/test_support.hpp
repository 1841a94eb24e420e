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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tracescope/dispatch.hpp"
#include "tracescope/event.hpp"
#include "tracescope/signatures.hpp"
#include "tracescope/sources.hpp"

namespace tracescope::testing {

// Test-side RNG, kept independent of the library's randomness plumbing.
struct TestRng {
    uint64_t state;

    explicit TestRng(uint64_t seed) : state(seed) {}

    uint64_t next()
    {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t range(uint64_t n) { return next() % n; }
};

inline std::string fixture_path(const std::string& name)
{
    return std::string(TRACESCOPE_FIXTURE_DIR) + "/" + name;
}

inline std::string data_path(const std::string& name)
{
    return std::string(TRACESCOPE_DATA_DIR) + "/" + name;
}

// Randomized but wire-valid record: comm is ASCII and <= 15 bytes, str args
// are ASCII, payload sizes stay under the capture cap.
EventRecord random_event_record(TestRng& rng);

class VectorSource final : public EventSource {
public:
    explicit VectorSource(std::vector<EventRecord> events, size_t batch = 64)
        : events_(std::move(events)), batch_(batch) {}

    bool next_batch(std::vector<EventRecord>& out) override
    {
        if (cursor_ >= events_.size())
            return false;
        size_t n = std::min(batch_, events_.size() - cursor_);
        out.insert(out.end(), events_.begin() + static_cast<ptrdiff_t>(cursor_),
                   events_.begin() + static_cast<ptrdiff_t>(cursor_ + n));
        cursor_ += n;
        return true;
    }

private:
    std::vector<EventRecord> events_;
    size_t batch_;
    size_t cursor_ = 0;
};

class CollectingEventSink final : public EventSink {
public:
    void on_event(const ResolvedEvent& event) override { events.push_back(event); }
    std::vector<ResolvedEvent> events;
};

class CollectingAlertSink final : public AlertSink {
public:
    void on_alert(const Alert& alert) override { alerts.push_back(alert); }
    std::vector<Alert> alerts;
};

// A vfs_write kernel event following the write-argument convention.
EventRecord make_write_record(uint64_t ts_ns, uint32_t pid, uint32_t uid,
                              const std::string& path, std::vector<uint8_t> data,
                              uint64_t offset, uint64_t device, uint64_t inode);

// Brute-force dropper oracle: after every event, rebuilds the first four
// bytes of each written file from scratch over the stream prefix and collects
// every identity whose header equals a watched magic at some prefix. All
// magic bytes are nonzero, so zero-filled (never written) positions cannot
// produce a false match.
std::set<std::pair<uint64_t, uint64_t>> dropper_oracle(const std::vector<EventRecord>& events);

// Offline privilege-escalation oracle: index of the first syscall event whose
// uid differs from the last recorded uid of its pid, or npos.
size_t privesc_oracle_first_transition(const std::vector<EventRecord>& events);

// Collects every event a scenario produces.
std::vector<EventRecord> drain(EventSource& source);

} // namespace tracescope::testing
