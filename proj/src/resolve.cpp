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

#include "tracescope/address.hpp"

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

std::string_view basename_of(std::string_view path)
{
    size_t slash = path.rfind('/');
    return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

// Config uprobes name libraries by bare name or full path; maps carry full
// paths.
const std::pair<const std::string, uint64_t>*
find_image(const std::map<std::string, uint64_t>& images, const std::string& lib)
{
    auto exact = images.find(lib);
    if (exact != images.end())
        return &*exact;
    for (const auto& entry : images) {
        if (basename_of(entry.first) == lib)
            return &entry;
    }
    return nullptr;
}

} // namespace

const char* probe_kind_name(ProbeKind kind)
{
    return kind == ProbeKind::ApiCall ? "api" : "native";
}

const AddressMapEntry* AddressMap::find(uint64_t address) const
{
    auto it = entries_.find(address);
    return it == entries_.end() ? nullptr : &it->second;
}

bool AddressMap::insert(uint64_t address, AddressMapEntry entry)
{
    auto it = entries_.find(address);
    if (it != entries_.end()) {
        // Keep the map injective on addresses: the entry names every candidate.
        it->second.display_name += "|" + entry.display_name;
        return false;
    }
    entries_.emplace(address, std::move(entry));
    return true;
}

std::string address_map_to_json(const AddressMap& map)
{
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [addr, entry] : map) {
        doc[hex_addr(addr)] = {{"name", entry.display_name},
                               {"kind", probe_kind_name(entry.kind)},
                               {"arg_encoding", entry.arg_encoding}};
    }
    return doc.dump(2) + "\n";
}

Resolution resolve_probes(const HooksConfig& config,
                          const std::map<std::string, uint64_t>& images,
                          const std::map<std::string, std::vector<OatMethodRecord>>& oat_records,
                          const SymbolReader& symbol_reader)
{
    Resolution out;

    auto add_probe = [&](ResolvedProbe probe) {
        const AddressMapEntry* existing = out.address_map.find(probe.address);
        if (existing != nullptr) {
            out.issues.push_back({Errc::address_collision, probe.display_name,
                                  "address " + hex_addr(probe.address) + " already maps to " +
                                      existing->display_name});
        }
        out.address_map.insert(probe.address,
                               {probe.display_name, probe.kind, probe.arg_encoding});
        out.probes.push_back(std::move(probe));
    };

    auto unresolved = [&](const HookSpec& hook, const std::string& reason) {
        out.issues.push_back({Errc::hook_unresolved, hook.display_name(), reason});
    };

    for (const HookSpec& hook : config.hooks) {
        switch (hook.kind) {
        case HookKind::Syscall:
        case HookKind::Kprobe:
            break; // no address to compute; these attach by name

        case HookKind::ApiCall: {
            bool matched = false;
            bool compiled = false;
            for (const auto& [image_path, records] : oat_records) {
                auto image = images.find(image_path);
                for (const OatMethodRecord& rec : records) {
                    if (rec.class_name != hook.class_name || rec.method_name != hook.method_name)
                        continue;
                    matched = true;
                    if (!rec.compiled())
                        continue;
                    compiled = true;
                    if (image == images.end()) {
                        unresolved(hook, "oat image " + image_path + " is not mapped executable");
                        continue;
                    }
                    add_probe({ProbeKind::ApiCall, image->second + rec.code_offset,
                               hook.display_name(), encode_arg_types(rec.arg_types), image_path});
                }
            }
            if (!matched)
                unresolved(hook, "no oat method record");
            else if (!compiled)
                unresolved(hook, "not-compiled: method has no AOT code");
            break;
        }

        case HookKind::Uprobe: {
            const auto* image = find_image(images, hook.library_path);
            if (image == nullptr) {
                unresolved(hook, "library is not mapped executable");
                break;
            }
            SymbolRecord sym;
            try {
                sym = symbol_reader(image->first, hook.symbol_name);
            } catch (const Error& e) {
                unresolved(hook, e.what());
                break;
            }
            add_probe({ProbeKind::NativeFunction, image->second + sym.offset,
                       hook.display_name(), encode_arg_types(hook.declared_arg_types),
                       image->first});
            break;
        }
        }
    }
    return out;
}

} // namespace tracescope
