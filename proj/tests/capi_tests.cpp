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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "tracescope.h"

namespace {

std::string fixture(const std::string& name)
{
    return std::string(TRACESCOPE_FIXTURE_DIR) + "/" + name;
}

struct Lines {
    std::vector<std::string> events;
    std::vector<std::string> alerts;
};

void event_cb(void* user, const char* line, size_t len)
{
    static_cast<Lines*>(user)->events.emplace_back(line, len);
}

void alert_cb(void* user, const char* line, size_t len)
{
    static_cast<Lines*>(user)->alerts.emplace_back(line, len);
}

} // namespace

TEST_CASE("version and error strings are stable C strings")
{
    CHECK(std::strlen(tracescope_version()) > 0);
    CHECK(tracescope_last_error() != nullptr);
}

TEST_CASE("config lifecycle through the C surface")
{
    tracescope_config* config = nullptr;
    REQUIRE(tracescope_config_default(&config) == TRACESCOPE_OK);
    CHECK(tracescope_config_hook_count(config, -1) == 106);
    CHECK(tracescope_config_hook_count(config, TRACESCOPE_HOOK_API) == 50);
    CHECK(tracescope_config_hook_count(config, TRACESCOPE_HOOK_SYSCALL) == 49);
    CHECK(tracescope_config_hook_count(config, TRACESCOPE_HOOK_KPROBE) == 3);
    CHECK(tracescope_config_hook_count(config, TRACESCOPE_HOOK_UPROBE) == 4);

    char* serialized = nullptr;
    REQUIRE(tracescope_config_serialize(config, &serialized) == TRACESCOPE_OK);
    tracescope_config* reparsed = nullptr;
    REQUIRE(tracescope_config_parse(serialized, std::strlen(serialized), &reparsed) ==
            TRACESCOPE_OK);
    CHECK(tracescope_config_hook_count(reparsed, -1) == 106);
    tracescope_string_free(serialized);
    tracescope_config_free(reparsed);

    char* diagnostics = nullptr;
    REQUIRE(tracescope_config_validate(config, &diagnostics) == TRACESCOPE_OK);
    CHECK(std::string(diagnostics).find("[]") == 0);
    tracescope_string_free(diagnostics);
    tracescope_config_free(config);
}

TEST_CASE("parse errors set a status and a message")
{
    tracescope_config* config = nullptr;
    const char* bad = "{\"jprobe\": [\"x\"]}";
    CHECK(tracescope_config_parse(bad, std::strlen(bad), &config) == TRACESCOPE_ERR_SYNTAX);
    CHECK(std::string(tracescope_last_error()).find("jprobe") != std::string::npos);

    CHECK(tracescope_config_from_file("/nonexistent/hooks.json", &config) == TRACESCOPE_ERR_IO);
}

TEST_CASE("simulate and run: dropper fires exactly one alert")
{
    tracescope_config* config = nullptr;
    REQUIRE(tracescope_config_default(&config) == TRACESCOPE_OK);

    tracescope_source* source = nullptr;
    REQUIRE(tracescope_source_simulate("dropper_dex", 7, 0, 0, &source) == TRACESCOPE_OK);

    Lines lines;
    tracescope_run_options options{};
    options.jsonl_alerts = 1;
    tracescope_run_summary summary{};
    REQUIRE(tracescope_run(config, source, nullptr, &options, event_cb, alert_cb, &lines,
                           &summary) == TRACESCOPE_OK);

    CHECK(summary.dropped_file_alerts == 1);
    CHECK(summary.privilege_escalation_alerts == 0);
    CHECK(summary.events_seen > 0);
    CHECK(summary.events_traced == summary.events_seen);
    REQUIRE(lines.alerts.size() == 1);
    CHECK(lines.alerts[0].find("\"kind\":\"dropped_file\"") != std::string::npos);
    CHECK(lines.events.size() == summary.events_traced);

    tracescope_source_free(source);
    tracescope_config_free(config);
}

TEST_CASE("unknown scenario and missing replay are reported")
{
    tracescope_source* source = nullptr;
    CHECK(tracescope_source_simulate("dropper_pdf", 1, 0, 0, &source) ==
          TRACESCOPE_ERR_INVALID_ARGUMENT);
    CHECK(tracescope_source_open_replay("/nonexistent.rpl", &source) == TRACESCOPE_ERR_IO);
    CHECK(std::string(tracescope_last_error()).find("nonexistent") != std::string::npos);
}

TEST_CASE("fixtures drive plan emission and event listing")
{
    tracescope_fixtures* fixtures = nullptr;
    REQUIRE(tracescope_fixtures_new(&fixtures) == TRACESCOPE_OK);
    REQUIRE(tracescope_fixtures_load_maps(fixtures, fixture("zygote64_maps.txt").c_str()) ==
            TRACESCOPE_OK);
    REQUIRE(tracescope_fixtures_add_oatdump(fixtures,
                                            "/system/framework/arm64/boot-framework.oat",
                                            fixture("framework_oatdump.txt").c_str()) ==
            TRACESCOPE_OK);
    for (const char* lib : {"libc.so", "libdl.so", "libbinder_ndk.so", "libcamera2ndk.so"})
        REQUIRE(tracescope_fixtures_add_library(fixtures, fixture(lib).c_str()) ==
                TRACESCOPE_OK);

    tracescope_config* config = nullptr;
    REQUIRE(tracescope_config_default(&config) == TRACESCOPE_OK);

    char* plan = nullptr;
    REQUIRE(tracescope_emit_probe_plan(config, fixtures, &plan) == TRACESCOPE_OK);
    std::string plan_text(plan);
    CHECK(plan_text.find("\"entry\": true") != std::string::npos);
    CHECK(plan_text.find("0x705ca2c0") != std::string::npos); // TelephonyManager.listen
    tracescope_string_free(plan);

    char* listing = nullptr;
    REQUIRE(tracescope_list_events(config, fixtures, &listing) == TRACESCOPE_OK);
    std::string listing_text(listing);
    CHECK(listing_text.find("libc.so!open") != std::string::npos);
    CHECK(listing_text.find("0x7fb0001f40") != std::string::npos);
    tracescope_string_free(listing);

    tracescope_config_free(config);
    tracescope_fixtures_free(fixtures);
}

TEST_CASE("filter overrides through the C surface")
{
    tracescope_config* config = nullptr;
    REQUIRE(tracescope_config_default(&config) == TRACESCOPE_OK);

    uint32_t uids[] = {99999};
    REQUIRE(tracescope_config_set_filter_uids(config, uids, 1) == TRACESCOPE_OK);

    tracescope_source* source = nullptr;
    REQUIRE(tracescope_source_simulate("dropper_dex", 1, 0, 0, &source) == TRACESCOPE_OK);
    tracescope_run_summary summary{};
    REQUIRE(tracescope_run(config, source, nullptr, nullptr, nullptr, nullptr, nullptr,
                           &summary) == TRACESCOPE_OK);
    CHECK(summary.events_traced == 0);
    CHECK(summary.dropped_file_alerts == 0);

    tracescope_source_free(source);
    tracescope_config_free(config);
}
