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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracescope/config.hpp"
#include "tracescope/event.hpp"

namespace tracescope {

// One /proc/PID/maps line.
struct MemoryRegion {
    uint64_t start = 0;
    uint64_t end = 0;
    std::string perms; // 4 chars, e.g. "r-xp"
    uint64_t file_offset = 0;
    std::string device; // "major:minor"
    uint64_t inode = 0;
    std::string path; // may be empty

    bool executable() const { return perms.size() == 4 && perms[2] == 'x'; }

    bool operator==(const MemoryRegion&) const = default;
};

// Parses maps-format text, one region per line in file order. Throws
// Errc::malformed_line with the 1-based line number.
std::vector<MemoryRegion> parse_proc_maps(std::string_view text);

// Base address per mapped .oat/.so file: the start of its lowest executable
// region. Files without an executable region are omitted.
std::map<std::string, uint64_t> executable_images(const std::vector<MemoryRegion>& regions);

// One method entry from oatdump output. code_offset 0 means the method is not
// AOT compiled and cannot be probed.
struct OatMethodRecord {
    std::string class_name;
    std::string method_name;
    std::string signature; // pretty-printed descriptor as oatdump prints it
    uint64_t code_offset = 0;
    std::vector<ArgType> arg_types;

    bool compiled() const { return code_offset > 0; }

    bool operator==(const OatMethodRecord&) const = default;
};

// Parses the supported oatdump output subset: method signature header lines
// ("N: <return> <class>.<method>(<params>) (dex_method_idx=...)") each
// followed by a "code_offset: 0x..." attribute line. Everything else is
// ignored. Throws Errc::malformed_method_entry, Errc::unsupported_descriptor.
std::vector<OatMethodRecord> parse_oatdump(std::string_view text);

// Maps one pretty-printed Java parameter type to its wire argument type.
// References and arrays become Addr. Throws Errc::unsupported_descriptor.
ArgType arg_type_from_java(std::string_view java_type);

struct SymbolRecord {
    std::string symbol_name;
    uint64_t offset = 0; // relative to the executable segment mapping

    bool operator==(const SymbolRecord&) const = default;
};

// Looks a symbol up in the dynamic symbol table of an ELF64 shared object and
// returns its offset relative to the executable PT_LOAD segment containing
// it. Throws Errc::not_an_elf, Errc::symbol_not_found.
SymbolRecord read_symbol_offset(std::span<const uint8_t> library_image,
                                std::string_view symbol_name);

enum class ProbeKind { ApiCall, NativeFunction };

const char* probe_kind_name(ProbeKind kind);

struct ResolvedProbe {
    ProbeKind kind = ProbeKind::ApiCall;
    uint64_t address = 0; // absolute, in the zygote64-derived address space
    std::string display_name; // class.method or lib!symbol
    uint64_t arg_encoding = 0;
    std::string target_path; // mapped file the probe attaches to

    bool operator==(const ResolvedProbe&) const = default;
};

struct AddressMapEntry {
    std::string display_name; // collision candidates joined with '|'
    ProbeKind kind = ProbeKind::ApiCall;
    uint64_t arg_encoding = 0;

    bool operator==(const AddressMapEntry&) const = default;
};

// Address-keyed probe metadata, the userspace mirror of the map the probe
// handlers consult by instruction pointer.
class AddressMap {
public:
    const AddressMapEntry* find(uint64_t address) const;
    // Returns false when the address was already present (caller handles the
    // collision); the existing entry gains the new display name.
    bool insert(uint64_t address, AddressMapEntry entry);

    size_t size() const { return entries_.size(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    bool operator==(const AddressMap&) const = default;

private:
    std::map<uint64_t, AddressMapEntry> entries_;
};

// {"0x<addr>": {"name":..., "kind":..., "arg_encoding":...}}, keys ascending.
std::string address_map_to_json(const AddressMap& map);

struct ResolutionIssue {
    Errc kind = Errc::hook_unresolved; // hook_unresolved or address_collision
    std::string subject;               // hook or probe display name
    std::string reason;

    bool operator==(const ResolutionIssue&) const = default;
};

struct Resolution {
    std::vector<ResolvedProbe> probes;
    AddressMap address_map;
    std::vector<ResolutionIssue> issues;
};

// Reads a symbol from a library identified by its mapped path.
using SymbolReader =
    std::function<SymbolRecord(const std::string& library_path, const std::string& symbol)>;

// Computes attach addresses for every ApiCall and Uprobe hook: base of the
// containing image plus the method code offset or symbol offset. Unresolvable
// hooks and address collisions are reported in issues, never dropped silently.
Resolution resolve_probes(const HooksConfig& config,
                          const std::map<std::string, uint64_t>& images,
                          const std::map<std::string, std::vector<OatMethodRecord>>& oat_records,
                          const SymbolReader& symbol_reader);

} // namespace tracescope
