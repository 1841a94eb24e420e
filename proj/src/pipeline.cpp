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

#include "tracescope/pipeline.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tracescope {

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::io_error, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        fail(Errc::io_error, "read failed for " + path);
    return std::move(buf).str();
}

std::vector<uint8_t> read_binary_file(const std::string& path)
{
    std::string text = read_text_file(path);
    return {text.begin(), text.end()};
}

namespace {

std::string_view basename_of(std::string_view path)
{
    size_t slash = path.rfind('/');
    return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

} // namespace

void FixtureSet::load_maps_file(const std::string& path)
{
    load_maps_text(read_text_file(path));
}

void FixtureSet::load_maps_text(std::string_view text)
{
    images_ = executable_images(parse_proc_maps(text));
}

void FixtureSet::add_oatdump_file(const std::string& image_path, const std::string& dump_path)
{
    add_oatdump_text(image_path, read_text_file(dump_path));
}

void FixtureSet::add_oatdump_text(const std::string& image_path, std::string_view text)
{
    oat_records_[image_path] = parse_oatdump(text);
}

void FixtureSet::add_library_file(const std::string& path)
{
    add_library_image(std::string(basename_of(path)), read_binary_file(path));
}

void FixtureSet::add_library_image(const std::string& name, std::vector<uint8_t> image)
{
    libraries_[name] = std::move(image);
}

SymbolReader FixtureSet::symbol_reader() const
{
    return [this](const std::string& library_path, const std::string& symbol) -> SymbolRecord {
        auto it = libraries_.find(std::string(basename_of(library_path)));
        if (it == libraries_.end())
            fail(Errc::symbol_not_found,
                 symbol + " (no library image for " + library_path + ")");
        return read_symbol_offset(it->second, symbol);
    };
}

Resolution FixtureSet::resolve(const HooksConfig& config) const
{
    return resolve_probes(config, images_, oat_records_, symbol_reader());
}

RunSummary run_pipeline(EventSource& source, const HooksConfig& config,
                        const AddressMap& addresses, const PipelineOptions& options)
{
    EffectiveFilter filter = EffectiveFilter::make(config.filter, options.packages);
    NameResolver resolver(addresses, KprobeRegistry::from_config(config));
    ProcessTable table;

    DropperSignature dropper;
    PrivEscSignature privesc(table);
    Signature* signatures[] = {&dropper, &privesc};

    auto clock = std::make_shared<RelativeClock>();

    std::vector<std::unique_ptr<EventSink>> event_sink_storage;
    std::vector<std::unique_ptr<AlertSink>> alert_sink_storage;
    std::vector<EventSink*> event_sinks;
    std::vector<AlertSink*> alert_sinks;

    if (options.event_line) {
        if (options.jsonl_events)
            event_sink_storage.push_back(std::make_unique<JsonlEventSink>(options.event_line));
        else
            event_sink_storage.push_back(
                std::make_unique<TextEventSink>(options.event_line, clock));
        event_sinks.push_back(event_sink_storage.back().get());
    }
    if (options.alert_line) {
        if (options.jsonl_alerts)
            alert_sink_storage.push_back(std::make_unique<JsonlAlertSink>(options.alert_line));
        else
            alert_sink_storage.push_back(
                std::make_unique<TextAlertSink>(options.alert_line, clock));
        alert_sinks.push_back(alert_sink_storage.back().get());
    }

    std::unique_ptr<std::ofstream> alert_file;
    std::unique_ptr<JsonlAlertSink> alert_file_sink;
    if (options.alert_jsonl_path) {
        alert_file = std::make_unique<std::ofstream>(*options.alert_jsonl_path,
                                                     std::ios::binary | std::ios::trunc);
        if (!*alert_file)
            fail(Errc::io_error, "cannot create " + *options.alert_jsonl_path);
        std::ofstream* out = alert_file.get();
        alert_file_sink = std::make_unique<JsonlAlertSink>(
            [out](std::string_view line) { *out << line << '\n'; });
        alert_sinks.push_back(alert_file_sink.get());
    }

    std::unique_ptr<CaptureStore> capture;
    if (options.capture_dir) {
        capture = std::make_unique<CaptureStore>(*options.capture_dir);
        event_sinks.push_back(capture.get());
        alert_sinks.push_back(capture.get());
    }

    RunSummary summary = dispatch_loop(source, filter, resolver, signatures, event_sinks,
                                       alert_sinks, table);
    if (alert_file) {
        alert_file->flush();
        if (!*alert_file)
            fail(Errc::io_error, "short write to " + *options.alert_jsonl_path);
    }
    return summary;
}

std::string render_event_list(const HooksConfig& config, const Resolution* resolution)
{
    std::string out = "KIND     NAME                                                         ADDRESS\n";
    for (const HookSpec& hook : config.hooks) {
        std::string address = "-";
        if (resolution != nullptr &&
            (hook.kind == HookKind::ApiCall || hook.kind == HookKind::Uprobe)) {
            for (const ResolvedProbe& probe : resolution->probes) {
                if (probe.display_name == hook.display_name()) {
                    char buf[24];
                    std::snprintf(buf, sizeof buf, "0x%" PRIx64, probe.address);
                    address = buf;
                    break;
                }
            }
        }
        char line[256];
        std::snprintf(line, sizeof line, "%-8s %-60s %s\n", hook_kind_name(hook.kind),
                      hook.display_name().c_str(), address.c_str());
        out += line;
    }
    return out;
}

} // namespace tracescope
