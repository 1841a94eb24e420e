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
#include <string_view>
#include <vector>

#include "tracescope/event.hpp"

namespace tracescope {

enum class HookKind { ApiCall, Syscall, Kprobe, Uprobe };

const char* hook_kind_name(HookKind kind);

// One requested trace point. Only the fields of its kind are meaningful.
struct HookSpec {
    HookKind kind = HookKind::Syscall;
    std::string class_name;  // ApiCall: fully qualified Java class
    std::string method_name; // ApiCall
    std::string syscall_name;
    std::string kernel_function_name;
    std::string library_path; // Uprobe: library name or path
    std::string symbol_name;  // Uprobe
    std::vector<ArgType> declared_arg_types; // Uprobe, length <= kMaxArgs

    static HookSpec api(std::string cls, std::string method);
    static HookSpec syscall(std::string name);
    static HookSpec kprobe(std::string name);
    static HookSpec uprobe(std::string lib, std::string symbol,
                           std::vector<ArgType> args = {});

    // "class.method", "name", or "lib!symbol" depending on kind.
    std::string display_name() const;
    // kind + identifying fields, used for duplicate detection.
    std::string identity() const;

    bool operator==(const HookSpec&) const = default;
};

enum class FilterMode { None, AllUserApps, UidList, PackageList };

inline constexpr uint32_t kUserAppUidThreshold = 10000;

struct FilterSpec {
    FilterMode mode = FilterMode::None;
    std::set<uint32_t> uids;
    std::set<std::string> packages;
    uint32_t user_app_uid_threshold = kUserAppUidThreshold;

    static FilterSpec none() { return {}; }
    static FilterSpec all_user_apps();
    static FilterSpec uid_list(std::set<uint32_t> uids);
    static FilterSpec package_list(std::set<std::string> packages);

    bool operator==(const FilterSpec&) const = default;
};

struct HooksConfig {
    std::vector<HookSpec> hooks; // document order
    FilterSpec filter;

    size_t count(HookKind kind) const;

    bool operator==(const HooksConfig&) const = default;
};

struct Diagnostic {
    static constexpr size_t kConfigLevel = static_cast<size_t>(-1);
    size_t hook_index = kConfigLevel;
    Errc rule = Errc::invalid_argument;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

// Parses the hooks configuration document. Schema: top-level JSON object with
// arrays "api" [{class, method}], "syscalls" [string], "kprobes" [string],
// "uprobes" [{lib, symbol, args:[type names]}], and an optional "filter"
// {mode: none|all_user_apps|uids|packages, uids:[u32], packages:[string]}.
// Hook order is preserved across the arrays in the order api, syscalls,
// kprobes, uprobes and within each array. An absent filter means mode none.
// Throws Errc::syntax_error, Errc::unknown_kind, Errc::duplicate_hook,
// Errc::invalid_arg_types.
HooksConfig parse_hooks_config(std::string_view text);

// Emits a document parse_hooks_config accepts, preserving hook order.
std::string serialize_hooks_config(const HooksConfig& config);

// The shipped multi-layer event set: 50 framework API methods, 4 native
// library functions, 49 system calls, 3 kernel functions; filter all_user_apps.
HooksConfig default_multilayer_config();

// Returns one diagnostic per violated invariant; empty list iff the config is
// well formed. Never throws.
std::vector<Diagnostic> validate(const HooksConfig& config);

// Replaces config.hooks with the comma-separated override list. Each entry is
// kind:name with kind in {api, syscall, kprobe, uprobe}; api names are
// class.method (split at the last dot), uprobe names are lib!symbol.
void override_hooks(HooksConfig& config, std::string_view events_list);

} // namespace tracescope
