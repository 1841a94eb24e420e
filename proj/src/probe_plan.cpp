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

#include "tracescope/sources.hpp"

#include <cinttypes>
#include <cstdio>

#include <json.hpp>

namespace tracescope {

namespace {

std::string hex_addr(uint64_t addr)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%" PRIx64, addr);
    return buf;
}

} // namespace

ProbePlan emit_probe_plan(const HooksConfig& config, const std::vector<ResolvedProbe>& probes)
{
    ProbePlan plan;
    plan.filter = config.filter;
    for (const HookSpec& hook : config.hooks) {
        if (hook.kind == HookKind::Syscall) {
            plan.raw_syscalls_entry = true;
            plan.raw_syscalls_exit = true;
        } else if (hook.kind == HookKind::Kprobe) {
            plan.kprobes.push_back(hook.kernel_function_name);
        }
    }
    for (const ResolvedProbe& p : probes)
        plan.uprobes.push_back({p.target_path, p.address, p.display_name, p.arg_encoding});
    return plan;
}

std::string probe_plan_to_json(const ProbePlan& plan)
{
    nlohmann::ordered_json doc;
    doc["raw_syscall_tracepoints"] = {{"entry", plan.raw_syscalls_entry},
                                      {"exit", plan.raw_syscalls_exit}};
    doc["kprobes"] = plan.kprobes;
    nlohmann::ordered_json uprobes = nlohmann::ordered_json::array();
    for (const ProbePlanUprobe& u : plan.uprobes) {
        uprobes.push_back({{"target_path", u.target_path},
                           {"absolute_address", hex_addr(u.absolute_address)},
                           {"display_name", u.display_name},
                           {"arg_encoding", u.arg_encoding}});
    }
    doc["uprobes"] = std::move(uprobes);

    nlohmann::ordered_json filter;
    switch (plan.filter.mode) {
    case FilterMode::None:
        filter["mode"] = "none";
        break;
    case FilterMode::AllUserApps:
        filter["mode"] = "all_user_apps";
        break;
    case FilterMode::UidList:
        filter["mode"] = "uids";
        filter["uids"] = plan.filter.uids;
        break;
    case FilterMode::PackageList:
        filter["mode"] = "packages";
        filter["packages"] = plan.filter.packages;
        break;
    }
    doc["filter"] = std::move(filter);
    return doc.dump(2) + "\n";
}

} // namespace tracescope
