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

#include "tracescope/dispatch.hpp"

#include <cinttypes>
#include <cstdio>

#include "tracescope/syscalls.hpp"

namespace tracescope {

ProcessEntry& ProcessTable::ensure(uint32_t pid, const EventContext& ctx)
{
    auto it = table_.find(pid);
    if (it == table_.end()) {
        it = table_.emplace(pid, ProcessEntry{ctx.uid, ctx.comm, ctx.timestamp_ns}).first;
    }
    return it->second;
}

ProcessEntry* ProcessTable::find(uint32_t pid)
{
    auto it = table_.find(pid);
    return it == table_.end() ? nullptr : &it->second;
}

const ProcessEntry* ProcessTable::find(uint32_t pid) const
{
    auto it = table_.find(pid);
    return it == table_.end() ? nullptr : &it->second;
}

PackageMap parse_package_map(std::string_view text)
{
    PackageMap out;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty() || line[0] == '#')
            continue;

        size_t space = line.find(' ');
        if (space == std::string_view::npos || space == 0)
            fail(Errc::malformed_line, "packages line " + std::to_string(line_no));
        std::string name(line.substr(0, space));
        std::string_view uid_text = line.substr(space + 1);
        uint32_t uid = 0;
        for (char c : uid_text) {
            if (c < '0' || c > '9')
                fail(Errc::malformed_line, "packages line " + std::to_string(line_no) +
                                               ": bad uid");
            uid = uid * 10 + static_cast<uint32_t>(c - '0');
        }
        if (uid_text.empty())
            fail(Errc::malformed_line, "packages line " + std::to_string(line_no) + ": bad uid");
        auto [it, inserted] = out.emplace(std::move(name), uid);
        if (!inserted && it->second != uid)
            fail(Errc::malformed_line, "packages line " + std::to_string(line_no) +
                                           ": conflicting uid for " + it->first);
    }
    return out;
}

EffectiveFilter EffectiveFilter::make(const FilterSpec& spec, const PackageMap& packages)
{
    EffectiveFilter f;
    f.mode_ = spec.mode;
    f.threshold_ = spec.user_app_uid_threshold;
    if (spec.mode == FilterMode::UidList) {
        f.uids_ = spec.uids;
    } else if (spec.mode == FilterMode::PackageList) {
        for (const std::string& pkg : spec.packages) {
            auto it = packages.find(pkg);
            if (it == packages.end())
                fail(Errc::unknown_package, pkg);
            f.uids_.insert(it->second);
        }
        f.mode_ = FilterMode::UidList;
    }
    return f;
}

bool EffectiveFilter::should_trace(const EventContext& ctx) const
{
    switch (mode_) {
    case FilterMode::None:
        return false; // a monitor with no targets traces nothing
    case FilterMode::AllUserApps:
        return ctx.uid > threshold_;
    case FilterMode::UidList:
    case FilterMode::PackageList:
        return uids_.count(ctx.uid) != 0;
    }
    return false;
}

bool should_trace(const EventContext& ctx, const FilterSpec& filter, const PackageMap& packages)
{
    return EffectiveFilter::make(filter, packages).should_trace(ctx);
}

const char* layer_name(Layer layer)
{
    switch (layer) {
    case Layer::Syscall: return "syscall";
    case Layer::Kernel: return "kernel";
    case Layer::Native: return "native";
    case Layer::Api: return "api";
    }
    return "?";
}

KprobeRegistry::KprobeRegistry()
{
    using A = ArgType;
    add(kKprobeIdVfsWrite, "vfs_write", {A::Str, A::Bytes, A::Ulong, A::Ulong, A::Ulong});
    add(kKprobeIdVfsWritev, "vfs_writev", {A::Str, A::Bytes, A::Ulong, A::Ulong, A::Ulong});
    add(kKprobeIdSchedProcessExit, "sched_process_exit", {});
    add(kKprobeIdSecurityBprmCheck, "security_bprm_check", {A::Str});
}

KprobeRegistry KprobeRegistry::from_config(const HooksConfig& config)
{
    KprobeRegistry reg;
    uint32_t next_id = 100;
    for (const HookSpec& hook : config.hooks) {
        if (hook.kind != HookKind::Kprobe)
            continue;
        if (reg.id_for(hook.kernel_function_name) == nullptr)
            reg.add(next_id++, hook.kernel_function_name, {});
    }
    return reg;
}

void KprobeRegistry::add(uint32_t id, std::string name, std::vector<ArgType> args)
{
    by_name_.emplace(name, id);
    by_id_.emplace(id, std::make_pair(std::move(name), std::move(args)));
}

const std::string* KprobeRegistry::name_for(uint32_t id) const
{
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &it->second.first;
}

const uint32_t* KprobeRegistry::id_for(std::string_view name) const
{
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &it->second;
}

std::vector<ArgType> KprobeRegistry::args_for(uint32_t id) const
{
    auto it = by_id_.find(id);
    return it == by_id_.end() ? std::vector<ArgType>{} : it->second.second;
}

NameResolver::NameResolver(AddressMap addresses, KprobeRegistry kprobes)
    : addresses_(std::move(addresses)), kprobes_(std::move(kprobes))
{
}

ResolvedEvent NameResolver::resolve(EventRecord record) const
{
    ResolvedEvent out;
    if (const auto* enter = std::get_if<SyscallEnter>(&record.kind)) {
        out.display_name = syscall_name(enter->nr);
        out.layer = Layer::Syscall;
    } else if (const auto* exit = std::get_if<SyscallExit>(&record.kind)) {
        out.display_name = syscall_name(exit->nr);
        out.layer = Layer::Syscall;
    } else if (const auto* kp = std::get_if<KprobeHit>(&record.kind)) {
        const std::string* name = kprobes_.name_for(kp->kprobe_id);
        out.display_name = name != nullptr ? *name : "kprobe_" + std::to_string(kp->kprobe_id);
        out.layer = Layer::Kernel;
    } else {
        uint64_t addr = std::get<UserProbeHit>(record.kind).address;
        if (const AddressMapEntry* entry = addresses_.find(addr)) {
            out.display_name = entry->display_name;
            out.layer = entry->kind == ProbeKind::ApiCall ? Layer::Api : Layer::Native;
        } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "unknown@0x%" PRIx64, addr);
            out.display_name = buf;
            out.layer = Layer::Native;
        }
    }
    out.record = std::move(record);
    return out;
}

ResolvedEvent resolve_event(const EventRecord& record, const AddressMap& addresses,
                            const KprobeRegistry& kprobes)
{
    return NameResolver(addresses, kprobes).resolve(record);
}

uint64_t RunSummary::total_alerts() const
{
    uint64_t n = 0;
    for (const auto& [kind, count] : alerts_by_kind)
        n += count;
    return n;
}

std::string RunSummary::to_string() const
{
    std::string out = "events_seen=" + std::to_string(events_seen) +
                      " events_traced=" + std::to_string(events_traced);
    out += " alerts=";
    if (alerts_by_kind.empty()) {
        out += "none";
    } else {
        bool first = true;
        for (const auto& [kind, count] : alerts_by_kind) {
            if (!first)
                out += ",";
            out += kind + ":" + std::to_string(count);
            first = false;
        }
    }
    out += " signature_errors=" + std::to_string(signature_errors);
    return out;
}

RunSummary dispatch_loop(EventSource& source, const EffectiveFilter& filter,
                         const NameResolver& resolver,
                         std::span<Signature* const> signatures,
                         std::span<EventSink* const> event_sinks,
                         std::span<AlertSink* const> alert_sinks,
                         ProcessTable& table)
{
    RunSummary summary;
    uint64_t next_seq = 1;
    std::vector<EventRecord> batch;
    std::vector<Alert> alerts;

    auto flush_all = [&] {
        for (EventSink* sink : event_sinks)
            sink->flush();
        for (AlertSink* sink : alert_sinks)
            sink->flush();
    };

    try {
        for (;;) {
            batch.clear();
            if (!source.next_batch(batch))
                break;
            summary.events_seen += batch.size();
            for (EventRecord& record : batch) {
                if (!filter.should_trace(record.context))
                    continue;
                ++summary.events_traced;

                table.ensure(record.context.pid, record.context);

                ResolvedEvent resolved = resolver.resolve(std::move(record));

                alerts.clear();
                for (Signature* sig : signatures) {
                    try {
                        sig->on_event(resolved, alerts);
                    } catch (const std::exception&) {
                        ++summary.signature_errors;
                    }
                }

                for (EventSink* sink : event_sinks)
                    sink->on_event(resolved);
                for (Alert& alert : alerts) {
                    alert.alert_seq = next_seq++;
                    ++summary.alerts_by_kind[alert.kind_name()];
                    for (AlertSink* sink : alert_sinks)
                        sink->on_alert(alert);
                }

                // The exiting process disappears from the table after its
                // exit event was fully dispatched.
                if (resolved.layer == Layer::Kernel &&
                    resolved.display_name == "sched_process_exit")
                    table.erase(resolved.record.context.pid);
            }
        }
    } catch (...) {
        flush_all();
        throw;
    }
    flush_all();
    return summary;
}

} // namespace tracescope
