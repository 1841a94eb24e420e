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

/*
 * C interface of the tracescope shared library. All objects are opaque
 * handles; every function that can fail returns a tracescope_status and
 * leaves a human-readable message in tracescope_last_error() (thread-local).
 * Strings returned through char** out-parameters are owned by the caller and
 * released with tracescope_string_free().
 */

#ifndef TRACESCOPE_H
#define TRACESCOPE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tracescope_status {
    TRACESCOPE_OK = 0,
    TRACESCOPE_ERR_INVALID_ARGUMENT = 1,
    TRACESCOPE_ERR_SYNTAX = 2,
    TRACESCOPE_ERR_IO = 3,
    TRACESCOPE_ERR_FORMAT = 4,
    TRACESCOPE_ERR_UNRESOLVED = 5,
    TRACESCOPE_ERR_INTERNAL = 6
} tracescope_status;

typedef enum tracescope_hook_kind {
    TRACESCOPE_HOOK_API = 0,
    TRACESCOPE_HOOK_SYSCALL = 1,
    TRACESCOPE_HOOK_KPROBE = 2,
    TRACESCOPE_HOOK_UPROBE = 3
} tracescope_hook_kind;

typedef struct tracescope_config tracescope_config;
typedef struct tracescope_fixtures tracescope_fixtures;
typedef struct tracescope_source tracescope_source;

typedef struct tracescope_run_summary {
    uint64_t events_seen;
    uint64_t events_traced;
    uint64_t dropped_file_alerts;
    uint64_t privilege_escalation_alerts;
    uint64_t signature_errors;
} tracescope_run_summary;

/* Receives one rendered output line (NUL-terminated, no trailing newline). */
typedef void (*tracescope_line_cb)(void* user, const char* line, size_t len);

typedef struct tracescope_run_options {
    const char* capture_dir;       /* NULL: no forensic capture */
    const char* package_map_path;  /* required for package filters, else NULL */
    const char* alert_jsonl_path;  /* NULL: no alert JSONL file */
    int jsonl_events;              /* nonzero: event callback lines are JSONL */
    int jsonl_alerts;              /* nonzero: alert callback lines are JSONL */
} tracescope_run_options;

const char* tracescope_version(void);
const char* tracescope_last_error(void);
void tracescope_string_free(char* s);

/* Configuration */
tracescope_status tracescope_config_parse(const char* text, size_t len,
                                          tracescope_config** out);
tracescope_status tracescope_config_from_file(const char* path, tracescope_config** out);
tracescope_status tracescope_config_default(tracescope_config** out);
void tracescope_config_free(tracescope_config* config);

tracescope_status tracescope_config_serialize(const tracescope_config* config, char** out);
/* JSON array of {hook_index, rule, message}; empty array means valid. */
tracescope_status tracescope_config_validate(const tracescope_config* config, char** out);
size_t tracescope_config_hook_count(const tracescope_config* config, int kind /* -1: all */);

tracescope_status tracescope_config_set_filter_all_user_apps(tracescope_config* config);
tracescope_status tracescope_config_set_filter_uids(tracescope_config* config,
                                                    const uint32_t* uids, size_t count);
tracescope_status tracescope_config_set_filter_packages(tracescope_config* config,
                                                        const char* const* packages,
                                                        size_t count);
/* Replaces the hook list with a comma-separated kind:name list. */
tracescope_status tracescope_config_override_events(tracescope_config* config,
                                                    const char* events);

/* Fixtures standing in for a live device: maps file, oatdump output, libraries */
tracescope_status tracescope_fixtures_new(tracescope_fixtures** out);
void tracescope_fixtures_free(tracescope_fixtures* fixtures);
tracescope_status tracescope_fixtures_load_maps(tracescope_fixtures* fixtures,
                                                const char* path);
tracescope_status tracescope_fixtures_add_oatdump(tracescope_fixtures* fixtures,
                                                  const char* image_path,
                                                  const char* dump_path);
tracescope_status tracescope_fixtures_add_library(tracescope_fixtures* fixtures,
                                                  const char* path);

/* Probe plan and listings */
tracescope_status tracescope_emit_probe_plan(const tracescope_config* config,
                                             const tracescope_fixtures* fixtures,
                                             char** plan_json);
tracescope_status tracescope_list_events(const tracescope_config* config,
                                         const tracescope_fixtures* fixtures /* NULL ok */,
                                         char** text);

/* Event sources (single-consumer; a source is exhausted after one run) */
tracescope_status tracescope_source_open_replay(const char* path, tracescope_source** out);
tracescope_status tracescope_source_simulate(const char* scenario, uint64_t seed,
                                             uint32_t app_uid, uint32_t app_pid,
                                             tracescope_source** out);
void tracescope_source_free(tracescope_source* source);

/*
 * Runs the full pipeline: uid filtering, name resolution, both behavioral
 * signatures, rendering, optional forensic capture. The address map comes
 * from the fixtures when given, otherwise from the simulation defaults.
 */
tracescope_status tracescope_run(const tracescope_config* config, tracescope_source* source,
                                 const tracescope_fixtures* fixtures /* NULL ok */,
                                 const tracescope_run_options* options /* NULL ok */,
                                 tracescope_line_cb event_cb, tracescope_line_cb alert_cb,
                                 void* user, tracescope_run_summary* summary);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TRACESCOPE_H */
