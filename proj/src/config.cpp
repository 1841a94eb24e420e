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

#include "tracescope/config.hpp"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

namespace tracescope {

using json = nlohmann::ordered_json;

const char* hook_kind_name(HookKind kind)
{
    switch (kind) {
    case HookKind::ApiCall: return "api";
    case HookKind::Syscall: return "syscall";
    case HookKind::Kprobe: return "kprobe";
    case HookKind::Uprobe: return "uprobe";
    }
    return "?";
}

HookSpec HookSpec::api(std::string cls, std::string method)
{
    HookSpec h;
    h.kind = HookKind::ApiCall;
    h.class_name = std::move(cls);
    h.method_name = std::move(method);
    return h;
}

HookSpec HookSpec::syscall(std::string name)
{
    HookSpec h;
    h.kind = HookKind::Syscall;
    h.syscall_name = std::move(name);
    return h;
}

HookSpec HookSpec::kprobe(std::string name)
{
    HookSpec h;
    h.kind = HookKind::Kprobe;
    h.kernel_function_name = std::move(name);
    return h;
}

HookSpec HookSpec::uprobe(std::string lib, std::string symbol, std::vector<ArgType> args)
{
    HookSpec h;
    h.kind = HookKind::Uprobe;
    h.library_path = std::move(lib);
    h.symbol_name = std::move(symbol);
    h.declared_arg_types = std::move(args);
    return h;
}

std::string HookSpec::display_name() const
{
    switch (kind) {
    case HookKind::ApiCall: return class_name + "." + method_name;
    case HookKind::Syscall: return syscall_name;
    case HookKind::Kprobe: return kernel_function_name;
    case HookKind::Uprobe: return library_path + "!" + symbol_name;
    }
    return {};
}

std::string HookSpec::identity() const
{
    return std::string(hook_kind_name(kind)) + ":" + display_name();
}

FilterSpec FilterSpec::all_user_apps()
{
    FilterSpec f;
    f.mode = FilterMode::AllUserApps;
    return f;
}

FilterSpec FilterSpec::uid_list(std::set<uint32_t> uids)
{
    FilterSpec f;
    f.mode = FilterMode::UidList;
    f.uids = std::move(uids);
    return f;
}

FilterSpec FilterSpec::package_list(std::set<std::string> packages)
{
    FilterSpec f;
    f.mode = FilterMode::PackageList;
    f.packages = std::move(packages);
    return f;
}

size_t HooksConfig::count(HookKind kind) const
{
    return static_cast<size_t>(std::count_if(hooks.begin(), hooks.end(),
                                             [&](const HookSpec& h) { return h.kind == kind; }));
}

namespace {

std::vector<ArgType> parse_arg_names(const json& arr)
{
    if (arr.size() > kMaxArgs)
        fail(Errc::invalid_arg_types, std::to_string(arr.size()) + " arg types (max 8)");
    std::vector<ArgType> out;
    for (const auto& name : arr) {
        if (!name.is_string())
            fail(Errc::invalid_arg_types, "arg type entries must be strings");
        out.push_back(arg_type_from_name(name.get<std::string>()));
    }
    return out;
}

const json* object_field(const json& obj, const char* key)
{
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::string string_field(const json& obj, const char* key, const char* where)
{
    const json* v = object_field(obj, key);
    if (v == nullptr || !v->is_string())
        fail(Errc::syntax_error, std::string(where) + " entries require string \"" + key + "\"");
    return v->get<std::string>();
}

void check_array(const json* v, const char* key)
{
    if (v != nullptr && !v->is_array())
        fail(Errc::syntax_error, std::string("\"") + key + "\" must be an array");
}

FilterSpec parse_filter(const json& f)
{
    if (!f.is_object())
        fail(Errc::syntax_error, "\"filter\" must be an object");
    FilterSpec out;
    std::string mode = string_field(f, "mode", "filter");
    if (mode == "none")
        out.mode = FilterMode::None;
    else if (mode == "all_user_apps")
        out.mode = FilterMode::AllUserApps;
    else if (mode == "uids")
        out.mode = FilterMode::UidList;
    else if (mode == "packages")
        out.mode = FilterMode::PackageList;
    else
        fail(Errc::syntax_error, "unknown filter mode \"" + mode + "\"");

    if (const json* uids = object_field(f, "uids")) {
        check_array(uids, "uids");
        for (const auto& u : *uids) {
            if (!u.is_number_unsigned())
                fail(Errc::syntax_error, "filter uids must be unsigned integers");
            out.uids.insert(u.get<uint32_t>());
        }
    }
    if (const json* pkgs = object_field(f, "packages")) {
        check_array(pkgs, "packages");
        for (const auto& p : *pkgs) {
            if (!p.is_string())
                fail(Errc::syntax_error, "filter packages must be strings");
            out.packages.insert(p.get<std::string>());
        }
    }
    return out;
}

void reject_duplicates(const std::vector<HookSpec>& hooks)
{
    std::unordered_set<std::string> seen;
    for (const auto& h : hooks) {
        if (!seen.insert(h.identity()).second)
            fail(Errc::duplicate_hook, h.identity());
    }
}

bool name_ok(const std::string& name)
{
    if (name.empty())
        return false;
    return name.find_first_of(" \t\r\n") == std::string::npos;
}

} // namespace

HooksConfig parse_hooks_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Errc::syntax_error, e.what());
    }
    if (!doc.is_object())
        fail(Errc::syntax_error, "top level must be an object");

    // Reject unknown event-kind arrays up front: the four kinds are closed.
    static const char* kKnownKeys[] = {"api", "syscalls", "kprobes", "uprobes", "filter"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool known = false;
        for (const char* k : kKnownKeys)
            known = known || it.key() == k;
        if (!known)
            fail(Errc::unknown_kind, "\"" + it.key() + "\" is not a known event kind");
    }

    HooksConfig cfg;

    // Top-level keys are visited in document order so the hook list preserves
    // the order hooks were declared in, across the four arrays.
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const json& value = *it;
        if (it.key() == "api") {
            check_array(&value, "api");
            for (const auto& e : value) {
                if (!e.is_object())
                    fail(Errc::syntax_error, "api entries must be objects");
                cfg.hooks.push_back(HookSpec::api(string_field(e, "class", "api"),
                                                  string_field(e, "method", "api")));
            }
        } else if (it.key() == "syscalls") {
            check_array(&value, "syscalls");
            for (const auto& e : value) {
                if (!e.is_string())
                    fail(Errc::syntax_error, "syscalls entries must be strings");
                cfg.hooks.push_back(HookSpec::syscall(e.get<std::string>()));
            }
        } else if (it.key() == "kprobes") {
            check_array(&value, "kprobes");
            for (const auto& e : value) {
                if (!e.is_string())
                    fail(Errc::syntax_error, "kprobes entries must be strings");
                cfg.hooks.push_back(HookSpec::kprobe(e.get<std::string>()));
            }
        } else if (it.key() == "uprobes") {
            check_array(&value, "uprobes");
            for (const auto& e : value) {
                if (!e.is_object())
                    fail(Errc::syntax_error, "uprobes entries must be objects");
                std::vector<ArgType> args;
                if (const json* a = object_field(e, "args")) {
                    check_array(a, "args");
                    args = parse_arg_names(*a);
                }
                cfg.hooks.push_back(HookSpec::uprobe(string_field(e, "lib", "uprobes"),
                                                     string_field(e, "symbol", "uprobes"),
                                                     std::move(args)));
            }
        } else if (it.key() == "filter") {
            cfg.filter = parse_filter(value);
        }
    }

    reject_duplicates(cfg.hooks);
    return cfg;
}

std::string serialize_hooks_config(const HooksConfig& config)
{
    json doc = json::object();
    json api = json::array();
    json syscalls = json::array();
    json kprobes = json::array();
    json uprobes = json::array();
    for (const auto& h : config.hooks) {
        switch (h.kind) {
        case HookKind::ApiCall:
            api.push_back({{"class", h.class_name}, {"method", h.method_name}});
            break;
        case HookKind::Syscall:
            syscalls.push_back(h.syscall_name);
            break;
        case HookKind::Kprobe:
            kprobes.push_back(h.kernel_function_name);
            break;
        case HookKind::Uprobe: {
            json args = json::array();
            for (ArgType t : h.declared_arg_types)
                args.push_back(arg_type_name(t));
            uprobes.push_back({{"lib", h.library_path},
                               {"symbol", h.symbol_name},
                               {"args", std::move(args)}});
            break;
        }
        }
    }
    doc["api"] = std::move(api);
    doc["syscalls"] = std::move(syscalls);
    doc["kprobes"] = std::move(kprobes);
    doc["uprobes"] = std::move(uprobes);

    json filter = json::object();
    switch (config.filter.mode) {
    case FilterMode::None:
        filter["mode"] = "none";
        break;
    case FilterMode::AllUserApps:
        filter["mode"] = "all_user_apps";
        break;
    case FilterMode::UidList:
        filter["mode"] = "uids";
        filter["uids"] = config.filter.uids;
        break;
    case FilterMode::PackageList:
        filter["mode"] = "packages";
        filter["packages"] = config.filter.packages;
        break;
    }
    doc["filter"] = std::move(filter);
    return doc.dump(2) + "\n";
}

std::vector<Diagnostic> validate(const HooksConfig& config)
{
    std::vector<Diagnostic> out;
    std::unordered_set<std::string> seen;
    for (size_t i = 0; i < config.hooks.size(); ++i) {
        const HookSpec& h = config.hooks[i];

        std::vector<const std::string*> names;
        std::vector<const std::string*> foreign;
        switch (h.kind) {
        case HookKind::ApiCall:
            names = {&h.class_name, &h.method_name};
            foreign = {&h.syscall_name, &h.kernel_function_name, &h.library_path, &h.symbol_name};
            break;
        case HookKind::Syscall:
            names = {&h.syscall_name};
            foreign = {&h.class_name, &h.method_name, &h.kernel_function_name, &h.library_path,
                       &h.symbol_name};
            break;
        case HookKind::Kprobe:
            names = {&h.kernel_function_name};
            foreign = {&h.class_name, &h.method_name, &h.syscall_name, &h.library_path,
                       &h.symbol_name};
            break;
        case HookKind::Uprobe:
            names = {&h.library_path, &h.symbol_name};
            foreign = {&h.class_name, &h.method_name, &h.syscall_name, &h.kernel_function_name};
            break;
        }
        for (const std::string* n : names) {
            if (!name_ok(*n)) {
                out.push_back({i, Errc::invalid_argument,
                               "empty or whitespace name in " + h.identity()});
                break;
            }
        }
        for (const std::string* n : foreign) {
            if (!n->empty()) {
                out.push_back({i, Errc::invalid_argument,
                               "fields outside the hook's kind are populated in " + h.identity()});
                break;
            }
        }

        if (h.kind == HookKind::Uprobe && h.declared_arg_types.size() > kMaxArgs)
            out.push_back({i, Errc::invalid_arg_types,
                           std::to_string(h.declared_arg_types.size()) + " arg types (max 8)"});
        if (h.kind != HookKind::Uprobe && !h.declared_arg_types.empty())
            out.push_back({i, Errc::invalid_arg_types,
                           "declared arg types only apply to uprobes"});

        if (!seen.insert(h.identity()).second)
            out.push_back({i, Errc::duplicate_hook, h.identity()});
    }

    if (config.filter.mode == FilterMode::UidList && config.filter.uids.empty())
        out.push_back({Diagnostic::kConfigLevel, Errc::invalid_argument,
                       "uid filter requires at least one uid"});
    if (config.filter.mode == FilterMode::PackageList && config.filter.packages.empty())
        out.push_back({Diagnostic::kConfigLevel, Errc::invalid_argument,
                       "package filter requires at least one package"});
    return out;
}

void override_hooks(HooksConfig& config, std::string_view events_list)
{
    std::vector<HookSpec> hooks;
    size_t pos = 0;
    while (pos <= events_list.size()) {
        size_t comma = events_list.find(',', pos);
        std::string_view item = events_list.substr(
            pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        pos = comma == std::string_view::npos ? events_list.size() + 1 : comma + 1;
        if (item.empty())
            continue;

        size_t colon = item.find(':');
        if (colon == std::string_view::npos)
            fail(Errc::unknown_kind, "event override \"" + std::string(item) +
                                         "\" must be kind:name");
        std::string_view kind = item.substr(0, colon);
        std::string name(item.substr(colon + 1));
        if (kind == "syscall") {
            hooks.push_back(HookSpec::syscall(name));
        } else if (kind == "kprobe") {
            hooks.push_back(HookSpec::kprobe(name));
        } else if (kind == "api") {
            size_t dot = name.rfind('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 == name.size())
                fail(Errc::syntax_error, "api override needs class.method: " + name);
            hooks.push_back(HookSpec::api(name.substr(0, dot), name.substr(dot + 1)));
        } else if (kind == "uprobe") {
            size_t bang = name.find('!');
            if (bang == std::string::npos || bang == 0 || bang + 1 == name.size())
                fail(Errc::syntax_error, "uprobe override needs lib!symbol: " + name);
            hooks.push_back(HookSpec::uprobe(name.substr(0, bang), name.substr(bang + 1)));
        } else {
            fail(Errc::unknown_kind, "\"" + std::string(kind) + "\"");
        }
    }
    reject_duplicates(hooks);
    config.hooks = std::move(hooks);
}

} // namespace tracescope
