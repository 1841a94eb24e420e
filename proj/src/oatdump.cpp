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

constexpr std::string_view kMethodMarker = "(dex_method_idx=";
constexpr std::string_view kOffsetKey = "code_offset:";

std::string_view trim(std::string_view s)
{
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void malformed(size_t line_no, const std::string& why)
{
    fail(Errc::malformed_method_entry, "line " + std::to_string(line_no) + ": " + why);
}

struct PendingMethod {
    OatMethodRecord record;
    size_t header_line = 0;
};

std::vector<ArgType> parse_params(std::string_view params, size_t line_no)
{
    std::vector<ArgType> out;
    size_t pos = 0;
    while (pos < params.size()) {
        size_t comma = params.find(',', pos);
        std::string_view token = trim(params.substr(
            pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        pos = comma == std::string_view::npos ? params.size() : comma + 1;
        if (token.empty())
            malformed(line_no, "empty parameter type");
        out.push_back(arg_type_from_java(token));
    }
    if (out.size() > kMaxArgs)
        out.resize(kMaxArgs); // probes carry at most 8 argument slots
    return out;
}

PendingMethod parse_method_header(std::string_view line, size_t line_no)
{
    std::string_view body = trim(line);

    // "<n>: " prefix
    size_t colon = body.find(':');
    if (colon == std::string_view::npos || colon == 0)
        malformed(line_no, "missing method index");
    for (char c : body.substr(0, colon)) {
        if (c < '0' || c > '9')
            malformed(line_no, "bad method index");
    }
    body = trim(body.substr(colon + 1));

    size_t marker = body.rfind(kMethodMarker);
    if (marker == std::string_view::npos)
        malformed(line_no, "missing dex_method_idx attribute");
    std::string_view sig = trim(body.substr(0, marker));

    size_t open = sig.find('(');
    size_t close = sig.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        malformed(line_no, "missing parameter list");

    std::string_view head = sig.substr(0, open); // "<return> <qualified.name>"
    size_t space = head.find(' ');
    if (space == std::string_view::npos)
        malformed(line_no, "missing return type");
    std::string_view qualified = head.substr(space + 1);
    size_t dot = qualified.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == qualified.size())
        malformed(line_no, "method name is not fully qualified");

    PendingMethod pending;
    pending.header_line = line_no;
    pending.record.class_name = std::string(qualified.substr(0, dot));
    pending.record.method_name = std::string(qualified.substr(dot + 1));
    pending.record.signature = std::string(sig);
    pending.record.arg_types = parse_params(sig.substr(open + 1, close - open - 1), line_no);
    return pending;
}

uint64_t parse_offset(std::string_view line, size_t line_no)
{
    std::string_view value = trim(trim(line).substr(kOffsetKey.size()));
    // Trailing annotations after the hex value are ignored.
    size_t end = value.find_first_of(" \t");
    if (end != std::string_view::npos)
        value = value.substr(0, end);
    if (!value.starts_with("0x"))
        malformed(line_no, "code_offset is not hexadecimal");
    value.remove_prefix(2);
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out, 16);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
        malformed(line_no, "bad code_offset value");
    return out;
}

} // namespace

ArgType arg_type_from_java(std::string_view java_type)
{
    std::string_view base = java_type;
    bool array = false;
    while (base.ends_with("[]")) {
        base.remove_suffix(2);
        array = true;
    }
    if (base.empty())
        fail(Errc::unsupported_descriptor, std::string(java_type));
    if (array)
        return ArgType::Addr;

    if (base == "int") return ArgType::Int;
    if (base == "boolean") return ArgType::Uint;
    if (base == "byte") return ArgType::Int;
    if (base == "char") return ArgType::Uint;
    if (base == "short") return ArgType::Int;
    if (base == "long") return ArgType::Long;
    if (base == "float") return ArgType::Uint;   // raw 32-bit pattern
    if (base == "double") return ArgType::Ulong; // raw 64-bit pattern
    if (base.find('.') != std::string_view::npos)
        return ArgType::Addr; // reference type; contents are not decoded
    fail(Errc::unsupported_descriptor, std::string(java_type));
}

std::vector<OatMethodRecord> parse_oatdump(std::string_view text)
{
    std::vector<OatMethodRecord> records;
    std::optional<PendingMethod> pending;

    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        bool done = nl == std::string_view::npos && pos >= text.size();
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (done)
            break;
        ++line_no;

        std::string_view body = trim(line);
        if (body.find(kMethodMarker) != std::string_view::npos) {
            if (pending)
                malformed(pending->header_line, "method entry has no code_offset");
            pending = parse_method_header(line, line_no);
        } else if (body.starts_with(kOffsetKey)) {
            if (!pending)
                malformed(line_no, "code_offset outside a method entry");
            pending->record.code_offset = parse_offset(line, line_no);
            records.push_back(std::move(pending->record));
            pending.reset();
        }
    }
    if (pending)
        malformed(pending->header_line, "method entry has no code_offset");
    return records;
}

} // namespace tracescope
