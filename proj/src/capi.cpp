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

#include "tracescope.h"

#include <cstring>
#include <new>

#include <json.hpp>

#include "tracescope/pipeline.hpp"

using namespace tracescope;

struct tracescope_config {
    HooksConfig config;
};

struct tracescope_fixtures {
    FixtureSet fixtures;
};

struct tracescope_source {
    std::unique_ptr<EventSource> source;
};

namespace {

thread_local std::string g_last_error;

tracescope_status status_for(Errc code)
{
    switch (code) {
    case Errc::syntax_error:
    case Errc::unknown_kind:
    case Errc::duplicate_hook:
    case Errc::invalid_arg_types:
        return TRACESCOPE_ERR_SYNTAX;
    case Errc::io_error:
        return TRACESCOPE_ERR_IO;
    case Errc::malformed_line:
    case Errc::malformed_method_entry:
    case Errc::unsupported_descriptor:
    case Errc::not_an_elf:
    case Errc::bad_magic:
    case Errc::truncated:
    case Errc::unknown_kind_tag:
    case Errc::unknown_arg_type:
    case Errc::format_error:
    case Errc::mixed_identity:
    case Errc::malformed_write_event:
        return TRACESCOPE_ERR_FORMAT;
    case Errc::symbol_not_found:
    case Errc::hook_unresolved:
    case Errc::address_collision:
    case Errc::unknown_package:
        return TRACESCOPE_ERR_UNRESOLVED;
    case Errc::too_many_args:
    case Errc::invalid_argument:
        return TRACESCOPE_ERR_INVALID_ARGUMENT;
    }
    return TRACESCOPE_ERR_INTERNAL;
}

template <typename Fn>
tracescope_status guarded(Fn&& fn)
{
    try {
        fn();
        return TRACESCOPE_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_for(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return TRACESCOPE_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TRACESCOPE_ERR_INTERNAL;
    }
}

tracescope_status invalid(const char* what)
{
    g_last_error = std::string("invalid argument: ") + what;
    return TRACESCOPE_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(::operator new(s.size() + 1));
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

} // namespace

extern "C" {

const char* tracescope_version(void)
{
    return "1.0.0";
}

const char* tracescope_last_error(void)
{
    return g_last_error.c_str();
}

void tracescope_string_free(char* s)
{
    ::operator delete(s);
}

tracescope_status tracescope_config_parse(const char* text, size_t len, tracescope_config** out)
{
    if (text == nullptr || out == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        auto cfg = std::make_unique<tracescope_config>();
        cfg->config = parse_hooks_config(std::string_view(text, len));
        *out = cfg.release();
    });
}

tracescope_status tracescope_config_from_file(const char* path, tracescope_config** out)
{
    if (path == nullptr || out == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        auto cfg = std::make_unique<tracescope_config>();
        cfg->config = parse_hooks_config(read_text_file(path));
        *out = cfg.release();
    });
}

tracescope_status tracescope_config_default(tracescope_config** out)
{
    if (out == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        auto cfg = std::make_unique<tracescope_config>();
        cfg->config = default_multilayer_config();
        *out = cfg.release();
    });
}

void tracescope_config_free(tracescope_config* config)
{
    delete config;
}

tracescope_status tracescope_config_serialize(const tracescope_config* config, char** out)
{
    if (config == nullptr || out == nullptr)
        return invalid("null pointer");
    return guarded([&] { *out = dup_string(serialize_hooks_config(config->config)); });
}

tracescope_status tracescope_config_validate(const tracescope_config* config, char** out)
{
    if (config == nullptr || out == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const Diagnostic& d : validate(config->config)) {
            nlohmann::ordered_json entry;
            if (d.hook_index == Diagnostic::kConfigLevel)
                entry["hook_index"] = nullptr;
            else
                entry["hook_index"] = d.hook_index;
            entry["rule"] = errc_name(d.rule);
            entry["message"] = d.message;
            doc.push_back(std::move(entry));
        }
        *out = dup_string(doc.dump(2) + "\n");
    });
}

size_t tracescope_config_hook_count(const tracescope_config* config, int kind)
{
    if (config == nullptr)
        return 0;
    if (kind < 0)
        return config->config.hooks.size();
    switch (kind) {
    case TRACESCOPE_HOOK_API: return config->config.count(HookKind::ApiCall);
    case TRACESCOPE_HOOK_SYSCALL: return config->config.count(HookKind::Syscall);
    case TRACESCOPE_HOOK_KPROBE: return config->config.count(HookKind::Kprobe);
    case TRACESCOPE_HOOK_UPROBE: return config->config.count(HookKind::Uprobe);
    default: return 0;
    }
}

tracescope_status tracescope_config_set_filter_all_user_apps(tracescope_config* config)
{
    if (config == nullptr)
        return invalid("null pointer");
    config->config.filter = FilterSpec::all_user_apps();
    return TRACESCOPE_OK;
}

tracescope_status tracescope_config_set_filter_uids(tracescope_config* config,
                                                    const uint32_t* uids, size_t count)
{
    if (config == nullptr || (uids == nullptr && count > 0))
        return invalid("null pointer");
    if (count == 0)
        return invalid("uid filter requires at least one uid");
    config->config.filter = FilterSpec::uid_list({uids, uids + count});
    return TRACESCOPE_OK;
}

tracescope_status tracescope_config_set_filter_packages(tracescope_config* config,
                                                        const char* const* packages,
                                                        size_t count)
{
    if (config == nullptr || (packages == nullptr && count > 0))
        return invalid("null pointer");
    if (count == 0)
        return invalid("package filter requires at least one package");
    std::set<std::string> names;
    for (size_t i = 0; i < count; ++i) {
        if (packages[i] == nullptr)
            return invalid("null package name");
        names.insert(packages[i]);
    }
    config->config.filter = FilterSpec::package_list(std::move(names));
    return TRACESCOPE_OK;
}

tracescope_status tracescope_config_override_events(tracescope_config* config,
                                                    const char* events)
{
    if (config == nullptr || events == nullptr)
        return invalid("null pointer");
    return guarded([&] { override_hooks(config->config, events); });
}

tracescope_status tracescope_fixtures_new(tracescope_fixtures** out)
{
    if (out == nullptr)
        return invalid("null pointer");
    return guarded([&] { *out = new tracescope_fixtures(); });
}

void tracescope_fixtures_free(tracescope_fixtures* fixtures)
{
    delete fixtures;
}

tracescope_status tracescope_fixtures_load_maps(tracescope_fixtures* fixtures, const char* path)
{
    if (fixtures == nullptr || path == nullptr)
        return invalid("null pointer");
    return guarded([&] { fixtures->fixtures.load_maps_file(path); });
}

tracescope_status tracescope_fixtures_add_oatdump(tracescope_fixtures* fixtures,
                                                  const char* image_path, const char* dump_path)
{
    if (fixtures == nullptr || image_path == nullptr || dump_path == nullptr)
        return invalid("null pointer");
    return guarded([&] { fixtures->fixtures.add_oatdump_file(image_path, dump_path); });
}

tracescope_status tracescope_fixtures_add_library(tracescope_fixtures* fixtures,
                                                  const char* path)
{
    if (fixtures == nullptr || path == nullptr)
        return invalid("null pointer");
    return guarded([&] { fixtures->fixtures.add_library_file(path); });
}

tracescope_status tracescope_emit_probe_plan(const tracescope_config* config,
                                             const tracescope_fixtures* fixtures,
                                             char** plan_json)
{
    if (config == nullptr || plan_json == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        std::vector<ResolvedProbe> probes;
        if (fixtures != nullptr)
            probes = fixtures->fixtures.resolve(config->config).probes;
        ProbePlan plan = emit_probe_plan(config->config, probes);
        *plan_json = dup_string(probe_plan_to_json(plan));
    });
}

tracescope_status tracescope_list_events(const tracescope_config* config,
                                         const tracescope_fixtures* fixtures, char** text)
{
    if (config == nullptr || text == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        if (fixtures != nullptr) {
            Resolution resolution = fixtures->fixtures.resolve(config->config);
            *text = dup_string(render_event_list(config->config, &resolution));
        } else {
            *text = dup_string(render_event_list(config->config, nullptr));
        }
    });
}

tracescope_status tracescope_source_open_replay(const char* path, tracescope_source** out)
{
    if (path == nullptr || out == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        auto src = std::make_unique<tracescope_source>();
        src->source = open_replay(path);
        *out = src.release();
    });
}

tracescope_status tracescope_source_simulate(const char* scenario, uint64_t seed,
                                             uint32_t app_uid, uint32_t app_pid,
                                             tracescope_source** out)
{
    if (scenario == nullptr || out == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        Scenario s = Scenario::make(scenario_from_string(scenario), seed,
                                    app_uid != 0 ? app_uid : 10050,
                                    app_pid != 0 ? app_pid : 4242);
        auto src = std::make_unique<tracescope_source>();
        src->source = simulate_scenario(s);
        *out = src.release();
    });
}

void tracescope_source_free(tracescope_source* source)
{
    delete source;
}

tracescope_status tracescope_run(const tracescope_config* config, tracescope_source* source,
                                 const tracescope_fixtures* fixtures,
                                 const tracescope_run_options* options,
                                 tracescope_line_cb event_cb, tracescope_line_cb alert_cb,
                                 void* user, tracescope_run_summary* summary)
{
    if (config == nullptr || source == nullptr || source->source == nullptr)
        return invalid("null pointer");
    return guarded([&] {
        PipelineOptions opts;
        if (options != nullptr) {
            if (options->capture_dir != nullptr)
                opts.capture_dir = options->capture_dir;
            if (options->package_map_path != nullptr)
                opts.packages = parse_package_map(read_text_file(options->package_map_path));
            if (options->alert_jsonl_path != nullptr)
                opts.alert_jsonl_path = options->alert_jsonl_path;
            opts.jsonl_events = options->jsonl_events != 0;
            opts.jsonl_alerts = options->jsonl_alerts != 0;
        }
        if (event_cb != nullptr)
            opts.event_line = [event_cb, user](std::string_view line) {
                std::string owned(line); // NUL-terminated for the C side
                event_cb(user, owned.c_str(), owned.size());
            };
        if (alert_cb != nullptr)
            opts.alert_line = [alert_cb, user](std::string_view line) {
                std::string owned(line);
                alert_cb(user, owned.c_str(), owned.size());
            };

        AddressMap addresses = fixtures != nullptr
                                   ? fixtures->fixtures.resolve(config->config).address_map
                                   : simulation_address_map();

        RunSummary result =
            run_pipeline(*source->source, config->config, addresses, opts);
        if (summary != nullptr) {
            summary->events_seen = result.events_seen;
            summary->events_traced = result.events_traced;
            summary->signature_errors = result.signature_errors;
            auto count_of = [&](const char* kind) -> uint64_t {
                auto it = result.alerts_by_kind.find(kind);
                return it == result.alerts_by_kind.end() ? 0 : it->second;
            };
            summary->dropped_file_alerts = count_of("dropped_file");
            summary->privilege_escalation_alerts = count_of("privilege_escalation");
        }
    });
}

} // extern "C"
