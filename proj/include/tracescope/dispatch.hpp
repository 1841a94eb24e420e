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

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracescope/address.hpp"
#include "tracescope/alert.hpp"
#include "tracescope/config.hpp"
#include "tracescope/sources.hpp"

namespace tracescope {

struct ProcessEntry {
    uint32_t uid = 0;
    std::string comm;
    uint64_t first_seen_ns = 0;
};

// Known live processes: entries appear on first event (or fork) and disappear
// on the process-exit kernel event.
class ProcessTable {
public:
    ProcessEntry& ensure(uint32_t pid, const EventContext& ctx);
    ProcessEntry* find(uint32_t pid);
    const ProcessEntry* find(uint32_t pid) const;
    void erase(uint32_t pid) { table_.erase(pid); }
    bool contains(uint32_t pid) const { return table_.count(pid) != 0; }
    size_t size() const { return table_.size(); }

private:
    std::unordered_map<uint32_t, ProcessEntry> table_;
};

using PackageMap = std::map<std::string, uint32_t>;

// Newline-delimited "package_name uid" pairs. Throws Errc::malformed_line and
// Errc::duplicate_hook-free equivalents via Errc::malformed_line on
// conflicting duplicates.
PackageMap parse_package_map(std::string_view text);

// A filter compiled against a package map. Package names resolve to uids at
// construction; an unknown package is Errc::unknown_package then, never per
// event.
class EffectiveFilter {
public:
    static EffectiveFilter make(const FilterSpec& spec, const PackageMap& packages = {});

    bool should_trace(const EventContext& ctx) const;

private:
    FilterMode mode_ = FilterMode::None;
    std::set<uint32_t> uids_;
    uint32_t threshold_ = kUserAppUidThreshold;
};

// One-shot predicate; builds the filter each call. Prefer EffectiveFilter in
// loops.
bool should_trace(const EventContext& ctx, const FilterSpec& filter,
                  const PackageMap& packages = {});

enum class Layer { Syscall, Kernel, Native, Api };

const char* layer_name(Layer layer);

struct ResolvedEvent {
    EventRecord record;
    std::string display_name;
    Layer layer = Layer::Syscall;
};

// Kernel-function probe identifiers as carried on the wire. The well-known
// functions keep fixed ids; other configured kprobes are assigned 100+index.
class KprobeRegistry {
public:
    KprobeRegistry(); // well-known entries only
    static KprobeRegistry from_config(const HooksConfig& config);

    const std::string* name_for(uint32_t id) const;
    const uint32_t* id_for(std::string_view name) const;
    std::vector<ArgType> args_for(uint32_t id) const;

private:
    void add(uint32_t id, std::string name, std::vector<ArgType> args);

    std::map<uint32_t, std::pair<std::string, std::vector<ArgType>>> by_id_;
    std::map<std::string, uint32_t, std::less<>> by_name_;
};

// Names an event: syscall numbers through the arm64 table, user probes
// through the address map, kernel probes through the registry. Unknown user
// probe addresses become "unknown@0x..." at layer Native.
class NameResolver {
public:
    NameResolver(AddressMap addresses, KprobeRegistry kprobes);

    ResolvedEvent resolve(EventRecord record) const;
    const AddressMap& addresses() const { return addresses_; }

private:
    AddressMap addresses_;
    KprobeRegistry kprobes_;
};

// One-shot convenience over NameResolver.
ResolvedEvent resolve_event(const EventRecord& record, const AddressMap& addresses,
                            const KprobeRegistry& kprobes = KprobeRegistry());

class Signature {
public:
    virtual ~Signature() = default;
    virtual std::string_view name() const = 0;
    virtual void on_event(const ResolvedEvent& event, std::vector<Alert>& alerts) = 0;
};

class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void on_event(const ResolvedEvent& event) = 0;
    virtual void flush() {}
};

class AlertSink {
public:
    virtual ~AlertSink() = default;
    virtual void on_alert(const Alert& alert) = 0;
    virtual void flush() {}
};

struct RunSummary {
    uint64_t events_seen = 0;
    uint64_t events_traced = 0;
    uint64_t signature_errors = 0;
    std::map<std::string, uint64_t> alerts_by_kind;

    uint64_t total_alerts() const;
    std::string to_string() const;

    bool operator==(const RunSummary&) const = default;
};

// Drives the pipeline: for every event passing the filter, in source order,
// update the process table, resolve the name, run every signature, emit the
// event and any alerts to the sinks. One signature failing on an event is
// counted and does not stop the loop or suppress other signatures. A source
// error propagates after sinks were flushed.
RunSummary dispatch_loop(EventSource& source, const EffectiveFilter& filter,
                         const NameResolver& resolver,
                         std::span<Signature* const> signatures,
                         std::span<EventSink* const> event_sinks,
                         std::span<AlertSink* const> alert_sinks,
                         ProcessTable& table);

// Rendering helpers shared by the sinks and the CLI surface.
std::string render_event_text(const ResolvedEvent& event, uint64_t epoch_ns);
std::string render_event_jsonl(const ResolvedEvent& event);
std::string render_alert_text(const Alert& alert, uint64_t epoch_ns);
std::string render_alert_jsonl(const Alert& alert);

// Replaces invalid UTF-8 sequences with U+FFFD.
std::string lossy_utf8(std::string_view bytes);

using LineFn = std::function<void(std::string_view line)>;

// Latches the timestamp of the first rendered event so event and alert lines
// of one run share the same time origin.
struct RelativeClock {
    uint64_t epoch_ns = 0;
    bool set = false;

    uint64_t origin(uint64_t ts_ns)
    {
        if (!set) {
            epoch_ns = ts_ns;
            set = true;
        }
        return epoch_ns;
    }
};

class TextEventSink final : public EventSink {
public:
    TextEventSink(LineFn out, std::shared_ptr<RelativeClock> clock)
        : out_(std::move(out)), clock_(std::move(clock)) {}
    void on_event(const ResolvedEvent& event) override;

private:
    LineFn out_;
    std::shared_ptr<RelativeClock> clock_;
};

class JsonlEventSink final : public EventSink {
public:
    explicit JsonlEventSink(LineFn out) : out_(std::move(out)) {}
    void on_event(const ResolvedEvent& event) override { out_(render_event_jsonl(event)); }

private:
    LineFn out_;
};

class TextAlertSink final : public AlertSink {
public:
    TextAlertSink(LineFn out, std::shared_ptr<RelativeClock> clock)
        : out_(std::move(out)), clock_(std::move(clock)) {}
    void on_alert(const Alert& alert) override;

private:
    LineFn out_;
    std::shared_ptr<RelativeClock> clock_;
};

class JsonlAlertSink final : public AlertSink {
public:
    explicit JsonlAlertSink(LineFn out) : out_(std::move(out)) {}
    void on_alert(const Alert& alert) override { out_(render_alert_jsonl(alert)); }

private:
    LineFn out_;
};

} // namespace tracescope
