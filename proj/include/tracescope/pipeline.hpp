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

#include <optional>
#include <string>

#include "tracescope/dispatch.hpp"
#include "tracescope/signatures.hpp"
#include "tracescope/sources.hpp"

namespace tracescope {

// Host-side artifact inputs standing in for a live zygote: a recorded maps
// file, oatdump output per oat image, and library images for symbol lookup.
class FixtureSet {
public:
    // Throws Errc::io_error / parse errors of the respective formats.
    void load_maps_file(const std::string& path);
    void load_maps_text(std::string_view text);
    void add_oatdump_file(const std::string& image_path, const std::string& dump_path);
    void add_oatdump_text(const std::string& image_path, std::string_view text);
    void add_library_file(const std::string& path);
    void add_library_image(const std::string& name, std::vector<uint8_t> image);

    const std::map<std::string, uint64_t>& images() const { return images_; }
    SymbolReader symbol_reader() const;

    Resolution resolve(const HooksConfig& config) const;

private:
    std::map<std::string, uint64_t> images_;
    std::map<std::string, std::vector<OatMethodRecord>> oat_records_;
    std::map<std::string, std::vector<uint8_t>> libraries_; // keyed by basename
};

struct PipelineOptions {
    std::optional<std::string> capture_dir;
    PackageMap packages;
    bool jsonl_events = false;
    bool jsonl_alerts = false;
    LineFn event_line;                          // null: events are not rendered
    LineFn alert_line;                          // null: alerts are not rendered
    std::optional<std::string> alert_jsonl_path; // canonical alert JSONL stream
};

// Assembles the standard pipeline (uid filter, name resolution, dropper and
// privilege-escalation signatures, rendering sinks, optional forensic
// capture) and drives the source to completion.
RunSummary run_pipeline(EventSource& source, const HooksConfig& config,
                        const AddressMap& addresses, const PipelineOptions& options);

// Operator listing: one header line, then one line per hook with kind, name,
// and the resolved attach address where the resolution provides one.
std::string render_event_list(const HooksConfig& config, const Resolution* resolution);

std::string read_text_file(const std::string& path);       // Errc::io_error
std::vector<uint8_t> read_binary_file(const std::string& path); // Errc::io_error

} // namespace tracescope
