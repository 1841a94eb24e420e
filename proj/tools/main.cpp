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

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tracescope.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitAlerts = 3;

struct ConfigHandle {
    tracescope_config* ptr = nullptr;
    ~ConfigHandle() { tracescope_config_free(ptr); }
};

struct FixturesHandle {
    tracescope_fixtures* ptr = nullptr;
    ~FixturesHandle() { tracescope_fixtures_free(ptr); }
};

struct SourceHandle {
    tracescope_source* ptr = nullptr;
    ~SourceHandle() { tracescope_source_free(ptr); }
};

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { tracescope_string_free(ptr); }
};

int status_exit(tracescope_status status)
{
    switch (status) {
    case TRACESCOPE_OK:
        return kExitOk;
    case TRACESCOPE_ERR_INVALID_ARGUMENT:
        return kExitUsage;
    default:
        return kExitInput;
    }
}

int complain(tracescope_status status)
{
    std::fprintf(stderr, "tracescope: %s\n", tracescope_last_error());
    return status_exit(status);
}

struct CommonOptions {
    std::string config_path;
    std::vector<uint32_t> uids;
    std::vector<std::string> packages;
    bool all_user_apps = false;
    std::string events;
    std::string maps_path;
    std::vector<std::string> oatdumps; // IMAGE=FILE
    std::vector<std::string> libs;
};

void add_config_options(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("--config", opts.config_path,
                    "Hooks configuration file (default: built-in multi-layer set)");
    cmd->add_option("--events", opts.events,
                    "Comma-separated kind:name list replacing the configured hooks "
                    "(kinds: api, syscall, kprobe, uprobe)");
}

void add_filter_options(CLI::App* cmd, CommonOptions& opts)
{
    auto* uid = cmd->add_option("--uid", opts.uids, "Trace this uid (repeatable)");
    auto* pkg = cmd->add_option("--package", opts.packages,
                                "Trace this package (repeatable, needs --package-map)");
    auto* all = cmd->add_flag("--all-user-apps", opts.all_user_apps,
                              "Trace all user applications (uid > 10000)");
    uid->excludes(pkg)->excludes(all);
    pkg->excludes(uid)->excludes(all);
    all->excludes(uid)->excludes(pkg);
}

void add_fixture_options(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("--maps", opts.maps_path, "Recorded zygote64 /proc/PID/maps file");
    cmd->add_option("--oatdump", opts.oatdumps,
                    "IMAGE_PATH=DUMP_FILE pair of a mapped oat image and its oatdump output "
                    "(repeatable)");
    cmd->add_option("--lib", opts.libs, "Shared library image for symbol lookup (repeatable)");
}

int load_config(const CommonOptions& opts, ConfigHandle& config)
{
    tracescope_status status =
        opts.config_path.empty()
            ? tracescope_config_default(&config.ptr)
            : tracescope_config_from_file(opts.config_path.c_str(), &config.ptr);
    if (status != TRACESCOPE_OK)
        return complain(status);
    if (!opts.events.empty()) {
        status = tracescope_config_override_events(config.ptr, opts.events.c_str());
        if (status != TRACESCOPE_OK)
            return complain(status);
    }
    return kExitOk;
}

int apply_filter(const CommonOptions& opts, ConfigHandle& config)
{
    tracescope_status status = TRACESCOPE_OK;
    if (opts.all_user_apps) {
        status = tracescope_config_set_filter_all_user_apps(config.ptr);
    } else if (!opts.uids.empty()) {
        status = tracescope_config_set_filter_uids(config.ptr, opts.uids.data(),
                                                   opts.uids.size());
    } else if (!opts.packages.empty()) {
        std::vector<const char*> names;
        names.reserve(opts.packages.size());
        for (const std::string& p : opts.packages)
            names.push_back(p.c_str());
        status = tracescope_config_set_filter_packages(config.ptr, names.data(), names.size());
    }
    return status == TRACESCOPE_OK ? kExitOk : complain(status);
}

int load_fixtures(const CommonOptions& opts, FixturesHandle& fixtures, bool required)
{
    if (opts.maps_path.empty() && opts.oatdumps.empty() && opts.libs.empty()) {
        if (!required)
            return kExitOk;
        std::fprintf(stderr, "tracescope: --maps is required for this command\n");
        return kExitUsage;
    }
    tracescope_status status = tracescope_fixtures_new(&fixtures.ptr);
    if (status != TRACESCOPE_OK)
        return complain(status);
    if (!opts.maps_path.empty()) {
        status = tracescope_fixtures_load_maps(fixtures.ptr, opts.maps_path.c_str());
        if (status != TRACESCOPE_OK)
            return complain(status);
    }
    for (const std::string& pair : opts.oatdumps) {
        size_t eq = pair.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
            std::fprintf(stderr, "tracescope: --oatdump expects IMAGE_PATH=DUMP_FILE, got %s\n",
                         pair.c_str());
            return kExitUsage;
        }
        status = tracescope_fixtures_add_oatdump(fixtures.ptr, pair.substr(0, eq).c_str(),
                                                 pair.substr(eq + 1).c_str());
        if (status != TRACESCOPE_OK)
            return complain(status);
    }
    for (const std::string& lib : opts.libs) {
        status = tracescope_fixtures_add_library(fixtures.ptr, lib.c_str());
        if (status != TRACESCOPE_OK)
            return complain(status);
    }
    return kExitOk;
}

void print_line(void*, const char* line, size_t)
{
    std::fputs(line, stdout);
    std::fputc('\n', stdout);
}

struct RunFlags {
    std::string capture_dir;
    std::string package_map;
    std::string alerts_path;
    std::string output = "text";
    bool quiet = false;
};

void add_run_options(CLI::App* cmd, RunFlags& flags)
{
    cmd->add_option("--capture-dir", flags.capture_dir,
                    "Directory for forensic write capture (default: $TRACESCOPE_CAPTURE_DIR)");
    cmd->add_option("--package-map", flags.package_map,
                    "File of \"package_name uid\" lines for package filters");
    cmd->add_option("--alerts", flags.alerts_path, "Write the alert JSONL stream to this file");
    cmd->add_option("--output", flags.output, "Line format: text or jsonl")
        ->check(CLI::IsMember({"text", "jsonl"}));
    cmd->add_flag("--quiet", flags.quiet, "Suppress event lines (alerts still print)");
}

int run_source(ConfigHandle& config, SourceHandle& source, FixturesHandle& fixtures,
               const RunFlags& flags)
{
    tracescope_run_options options{};
    if (!flags.capture_dir.empty()) {
        options.capture_dir = flags.capture_dir.c_str();
    } else if (const char* env = std::getenv("TRACESCOPE_CAPTURE_DIR");
               env != nullptr && env[0] != '\0') {
        options.capture_dir = env;
    }
    if (!flags.package_map.empty())
        options.package_map_path = flags.package_map.c_str();
    if (!flags.alerts_path.empty())
        options.alert_jsonl_path = flags.alerts_path.c_str();
    options.jsonl_events = flags.output == "jsonl" ? 1 : 0;
    options.jsonl_alerts = options.jsonl_events;

    tracescope_run_summary summary{};
    tracescope_status status =
        tracescope_run(config.ptr, source.ptr, fixtures.ptr, &options,
                       flags.quiet ? nullptr : print_line, print_line, nullptr, &summary);
    std::fflush(stdout);
    std::fprintf(stderr,
                 "events_seen=%llu events_traced=%llu dropped_file=%llu "
                 "privilege_escalation=%llu signature_errors=%llu\n",
                 static_cast<unsigned long long>(summary.events_seen),
                 static_cast<unsigned long long>(summary.events_traced),
                 static_cast<unsigned long long>(summary.dropped_file_alerts),
                 static_cast<unsigned long long>(summary.privilege_escalation_alerts),
                 static_cast<unsigned long long>(summary.signature_errors));
    if (status != TRACESCOPE_OK)
        return complain(status);
    uint64_t alerts = summary.dropped_file_alerts + summary.privilege_escalation_alerts;
    return alerts > 0 ? kExitAlerts : kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-layer event tracing pipeline with behavioral signatures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tracescope_version()));

    // validate-config
    CommonOptions validate_opts;
    auto* validate = app.add_subcommand("validate-config", "Parse and validate a hooks file");
    validate->add_option("--config", validate_opts.config_path, "Hooks configuration file")
        ->required();

    // list-events
    CommonOptions list_opts;
    auto* list = app.add_subcommand("list-events", "List configured hooks");
    add_config_options(list, list_opts);
    add_fixture_options(list, list_opts);

    // plan
    CommonOptions plan_opts;
    std::string plan_out;
    auto* plan = app.add_subcommand(
        "plan", "Emit the probe plan a kernel backend would attach");
    add_config_options(plan, plan_opts);
    add_fixture_options(plan, plan_opts);
    add_filter_options(plan, plan_opts);
    plan->add_option("-o,--out", plan_out, "Write the plan here instead of stdout");

    // simulate
    CommonOptions sim_opts;
    RunFlags sim_flags;
    std::string scenario;
    uint64_t seed = 1;
    uint32_t app_uid = 10050;
    uint32_t app_pid = 4242;
    auto* simulate = app.add_subcommand("simulate", "Run the pipeline over a synthetic scenario");
    simulate
        ->add_option("scenario", scenario,
                     "One of dropper_dex, dropper_elf, dropper_archive, privesc, benign")
        ->required();
    simulate->add_option("--seed", seed, "Scenario seed (default 1)");
    simulate->add_option("--app-uid", app_uid, "Simulated application uid (default 10050)");
    simulate->add_option("--app-pid", app_pid, "Simulated application pid (default 4242)");
    add_config_options(simulate, sim_opts);
    add_filter_options(simulate, sim_opts);
    add_run_options(simulate, sim_flags);

    // replay
    CommonOptions replay_opts;
    RunFlags replay_flags;
    std::string replay_path;
    auto* replay = app.add_subcommand("replay", "Run the pipeline over a recorded trace");
    replay->add_option("file", replay_path, "Replay file")->required();
    add_config_options(replay, replay_opts);
    add_filter_options(replay, replay_opts);
    add_fixture_options(replay, replay_opts);
    add_run_options(replay, replay_flags);

    // run (reserved)
    auto* live = app.add_subcommand(
        "run", "Reserved: attach to a live kernel (not implemented; see plan)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "tracescope: %s\n", e.what());
        return kExitUsage;
    }

    if (validate->parsed()) {
        ConfigHandle config;
        tracescope_status status =
            tracescope_config_from_file(validate_opts.config_path.c_str(), &config.ptr);
        if (status != TRACESCOPE_OK)
            return complain(status);
        OwnedString diag;
        status = tracescope_config_validate(config.ptr, &diag.ptr);
        if (status != TRACESCOPE_OK)
            return complain(status);
        std::fputs(diag.ptr, stdout);
        std::string text(diag.ptr);
        while (!text.empty() && (text.back() == '\n' || text.back() == ' '))
            text.pop_back();
        return text == "[]" ? kExitOk : kExitInput;
    }

    if (list->parsed()) {
        ConfigHandle config;
        if (int rc = load_config(list_opts, config); rc != kExitOk)
            return rc;
        FixturesHandle fixtures;
        if (int rc = load_fixtures(list_opts, fixtures, false); rc != kExitOk)
            return rc;
        OwnedString text;
        tracescope_status status = tracescope_list_events(config.ptr, fixtures.ptr, &text.ptr);
        if (status != TRACESCOPE_OK)
            return complain(status);
        std::fputs(text.ptr, stdout);
        return kExitOk;
    }

    if (plan->parsed()) {
        ConfigHandle config;
        if (int rc = load_config(plan_opts, config); rc != kExitOk)
            return rc;
        if (int rc = apply_filter(plan_opts, config); rc != kExitOk)
            return rc;
        FixturesHandle fixtures;
        if (int rc = load_fixtures(plan_opts, fixtures, false); rc != kExitOk)
            return rc;
        OwnedString json;
        tracescope_status status =
            tracescope_emit_probe_plan(config.ptr, fixtures.ptr, &json.ptr);
        if (status != TRACESCOPE_OK)
            return complain(status);
        if (plan_out.empty()) {
            std::fputs(json.ptr, stdout);
        } else {
            std::FILE* out = std::fopen(plan_out.c_str(), "wb");
            if (out == nullptr) {
                std::fprintf(stderr, "tracescope: cannot create %s\n", plan_out.c_str());
                return kExitInput;
            }
            std::fputs(json.ptr, out);
            std::fclose(out);
        }
        return kExitOk;
    }

    if (simulate->parsed()) {
        ConfigHandle config;
        if (int rc = load_config(sim_opts, config); rc != kExitOk)
            return rc;
        if (int rc = apply_filter(sim_opts, config); rc != kExitOk)
            return rc;
        SourceHandle source;
        tracescope_status status =
            tracescope_source_simulate(scenario.c_str(), seed, app_uid, app_pid, &source.ptr);
        if (status != TRACESCOPE_OK)
            return complain(status);
        FixturesHandle fixtures; // simulation metadata is built in
        return run_source(config, source, fixtures, sim_flags);
    }

    if (replay->parsed()) {
        ConfigHandle config;
        if (int rc = load_config(replay_opts, config); rc != kExitOk)
            return rc;
        if (int rc = apply_filter(replay_opts, config); rc != kExitOk)
            return rc;
        FixturesHandle fixtures;
        if (int rc = load_fixtures(replay_opts, fixtures, false); rc != kExitOk)
            return rc;
        SourceHandle source;
        tracescope_status status =
            tracescope_source_open_replay(replay_path.c_str(), &source.ptr);
        if (status != TRACESCOPE_OK)
            return complain(status);
        return run_source(config, source, fixtures, replay_flags);
    }

    if (live->parsed()) {
        std::fprintf(stderr,
                     "tracescope: \"run\" is reserved for a kernel backend; this build attaches "
                     "nothing. Use \"plan\" to emit the attachment contract, or \"simulate\"/"
                     "\"replay\" to drive the pipeline.\n");
        return kExitUsage;
    }

    return kExitUsage;
}
