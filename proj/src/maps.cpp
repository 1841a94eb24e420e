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

#include <charconv>

namespace tracescope {

namespace {

bool parse_hex(std::string_view text, uint64_t& out)
{
    if (text.empty())
        return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out, 16);
    return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_dec(std::string_view text, uint64_t& out)
{
    if (text.empty())
        return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out, 10);
    return ec == std::errc() && ptr == text.data() + text.size();
}

std::string_view next_field(std::string_view& rest)
{
    size_t start = rest.find_first_not_of(' ');
    if (start == std::string_view::npos) {
        rest = {};
        return {};
    }
    size_t end = rest.find(' ', start);
    std::string_view field = rest.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                              : end - start);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    return field;
}

bool perms_ok(std::string_view perms)
{
    if (perms.size() != 4)
        return false;
    auto in = [](char c, const char* allowed) {
        for (const char* p = allowed; *p; ++p)
            if (*p == c)
                return true;
        return false;
    };
    return in(perms[0], "r-") && in(perms[1], "w-") && in(perms[2], "x-") && in(perms[3], "ps-");
}

MemoryRegion parse_maps_line(std::string_view line, size_t line_no)
{
    auto malformed = [&](const std::string& why) -> MemoryRegion {
        fail(Errc::malformed_line,
             "line " + std::to_string(line_no) + ": " + why);
    };

    std::string_view rest = line;
    std::string_view range = next_field(rest);
    size_t dash = range.find('-');
    MemoryRegion region;
    if (dash == std::string_view::npos)
        return malformed("missing address range");
    if (!parse_hex(range.substr(0, dash), region.start) ||
        !parse_hex(range.substr(dash + 1), region.end))
        return malformed("bad address range \"" + std::string(range) + "\"");
    if (region.start >= region.end)
        return malformed("empty address range");

    std::string_view perms = next_field(rest);
    if (!perms_ok(perms))
        return malformed("bad permission flags \"" + std::string(perms) + "\"");
    region.perms = std::string(perms);

    if (!parse_hex(next_field(rest), region.file_offset))
        return malformed("bad file offset");

    std::string_view device = next_field(rest);
    if (device.find(':') == std::string_view::npos)
        return malformed("bad device field");
    region.device = std::string(device);

    if (!parse_dec(next_field(rest), region.inode))
        return malformed("bad inode");

    // Remainder, if any, is the pathname; it may contain spaces.
    size_t path_start = rest.find_first_not_of(' ');
    if (path_start != std::string_view::npos)
        region.path = std::string(rest.substr(path_start));
    return region;
}

} // namespace

std::vector<MemoryRegion> parse_proc_maps(std::string_view text)
{
    std::vector<MemoryRegion> regions;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.find_first_not_of(' ') == std::string_view::npos)
            continue;
        regions.push_back(parse_maps_line(line, line_no));
    }
    return regions;
}

std::map<std::string, uint64_t> executable_images(const std::vector<MemoryRegion>& regions)
{
    std::map<std::string, uint64_t> images;
    for (const MemoryRegion& r : regions) {
        if (!r.executable() || r.path.empty())
            continue;
        if (!r.path.ends_with(".oat") && !r.path.ends_with(".so"))
            continue;
        auto [it, inserted] = images.emplace(r.path, r.start);
        if (!inserted && r.start < it->second)
            it->second = r.start;
    }
    return images;
}

} // namespace tracescope
