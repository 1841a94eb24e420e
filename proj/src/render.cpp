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

#include "tracescope/dispatch.hpp"

#include <cinttypes>
#include <cstdio>

#include <json.hpp>

namespace tracescope {

namespace {

using json = nlohmann::ordered_json;

std::string hex_addr(uint64_t addr)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%" PRIx64, addr);
    return buf;
}

std::string relative_time(uint64_t ts_ns, uint64_t epoch_ns)
{
    uint64_t delta = ts_ns >= epoch_ns ? ts_ns - epoch_ns : 0;
    uint64_t micros = delta / 1000;
    uint64_t secs = micros / 1'000'000;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%02" PRIu64 ":%02" PRIu64 ":%02" PRIu64 ".%06" PRIu64,
                  secs / 3600, (secs / 60) % 60, secs % 60, micros % 1'000'000);
    return buf;
}

std::string escape_text(std::string_view s)
{
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
    return out;
}

std::string bytes_preview(const std::vector<uint8_t>& data)
{
    static const char* kHex = "0123456789abcdef";
    size_t shown = data.size() > 8 ? 8 : data.size();
    std::string out = "b\"";
    for (size_t i = 0; i < shown; ++i) {
        out += kHex[data[i] >> 4];
        out += kHex[data[i] & 0xf];
    }
    out += '"';
    if (data.size() > shown)
        out += "+" + std::to_string(data.size() - shown);
    return out;
}

std::string full_hex(const std::vector<uint8_t>& data)
{
    static const char* kHex = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out += kHex[b >> 4];
        out += kHex[b & 0xf];
    }
    return out;
}

std::string arg_text(const ArgValue& arg)
{
    switch (arg.type()) {
    case ArgType::None: return "-";
    case ArgType::Int: return std::to_string(std::get<int32_t>(arg.value));
    case ArgType::Uint: return std::to_string(std::get<uint32_t>(arg.value));
    case ArgType::Long: return std::to_string(std::get<int64_t>(arg.value));
    case ArgType::Ulong: return std::to_string(std::get<uint64_t>(arg.value));
    case ArgType::Addr: return hex_addr(std::get<Addr>(arg.value).value);
    case ArgType::Str: return escape_text(lossy_utf8(std::get<std::string>(arg.value)));
    case ArgType::Bytes: return bytes_preview(std::get<std::vector<uint8_t>>(arg.value));
    }
    return "?";
}

json arg_json(const ArgValue& arg)
{
    switch (arg.type()) {
    case ArgType::None: return nullptr;
    case ArgType::Int: return std::get<int32_t>(arg.value);
    case ArgType::Uint: return std::get<uint32_t>(arg.value);
    case ArgType::Long: return std::get<int64_t>(arg.value);
    case ArgType::Ulong: return std::get<uint64_t>(arg.value);
    case ArgType::Addr: return hex_addr(std::get<Addr>(arg.value).value);
    case ArgType::Str: return lossy_utf8(std::get<std::string>(arg.value));
    case ArgType::Bytes: return full_hex(std::get<std::vector<uint8_t>>(arg.value));
    }
    return nullptr;
}

} // namespace

std::string lossy_utf8(std::string_view bytes)
{
    static const char kReplacement[] = "\xef\xbf\xbd";
    std::string out;
    out.reserve(bytes.size());
    size_t i = 0;
    while (i < bytes.size()) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        size_t len;
        uint32_t min_cp;
        if (c < 0x80) {
            out += static_cast<char>(c);
            ++i;
            continue;
        } else if ((c & 0xe0) == 0xc0) {
            len = 2;
            min_cp = 0x80;
        } else if ((c & 0xf0) == 0xe0) {
            len = 3;
            min_cp = 0x800;
        } else if ((c & 0xf8) == 0xf0) {
            len = 4;
            min_cp = 0x10000;
        } else {
            out += kReplacement;
            ++i;
            continue;
        }
        if (i + len > bytes.size()) {
            out += kReplacement;
            ++i;
            continue;
        }
        uint32_t cp = c & (0xff >> (len + 1));
        bool ok = true;
        for (size_t k = 1; k < len; ++k) {
            unsigned char cont = static_cast<unsigned char>(bytes[i + k]);
            if ((cont & 0xc0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cont & 0x3f);
        }
        if (!ok || cp < min_cp || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) {
            out += kReplacement;
            ++i;
            continue;
        }
        out.append(bytes.substr(i, len));
        i += len;
    }
    return out;
}

std::string render_event_text(const ResolvedEvent& event, uint64_t epoch_ns)
{
    const EventContext& ctx = event.record.context;
    std::string out = relative_time(ctx.timestamp_ns, epoch_ns);
    out += " " + std::to_string(ctx.uid) + " " + std::to_string(ctx.pid) + " " +
           std::to_string(ctx.tid) + " " + std::to_string(ctx.ppid);
    out += " " + lossy_utf8(ctx.comm);
    out += " ";
    out += layer_name(event.layer);
    out += " " + event.display_name;

    out += "(";
    for (size_t i = 0; i < event.record.args.size(); ++i) {
        if (i != 0)
            out += ", ";
        out += arg_text(event.record.args[i]);
    }
    out += ")";
    if (const auto* exit = std::get_if<SyscallExit>(&event.record.kind))
        out += " = " + std::to_string(exit->ret);
    return out;
}

std::string render_event_jsonl(const ResolvedEvent& event)
{
    const EventContext& ctx = event.record.context;
    json doc;
    doc["ts_ns"] = ctx.timestamp_ns;
    doc["uid"] = ctx.uid;
    doc["pid"] = ctx.pid;
    doc["tid"] = ctx.tid;
    doc["ppid"] = ctx.ppid;
    doc["comm"] = lossy_utf8(ctx.comm);
    doc["layer"] = layer_name(event.layer);
    doc["name"] = event.display_name;
    if (const auto* exit = std::get_if<SyscallExit>(&event.record.kind))
        doc["ret"] = exit->ret;
    json args = json::array();
    for (const ArgValue& a : event.record.args)
        args.push_back(arg_json(a));
    doc["args"] = std::move(args);
    return doc.dump();
}

std::string render_alert_text(const Alert& alert, uint64_t epoch_ns)
{
    const EventContext& ctx = alert.context;
    std::string out = relative_time(ctx.timestamp_ns, epoch_ns);
    out += " ALERT ";
    out += alert.kind_name();
    out += " pid=" + std::to_string(ctx.pid) + " uid=" + std::to_string(ctx.uid) +
           " comm=" + lossy_utf8(ctx.comm);
    if (alert.kind == Alert::Kind::DroppedFile) {
        const DroppedFileDetail& d = alert.dropped();
        out += std::string(" magic=") + to_string(d.magic);
        out += " device=" + std::to_string(d.file.device) +
               " inode=" + std::to_string(d.file.inode);
        out += " path=" + escape_text(lossy_utf8(d.file.last_known_path));
    } else {
        const PrivEscDetail& d = alert.privesc();
        out += " target_pid=" + std::to_string(d.pid) + " old_uid=" + std::to_string(d.old_uid) +
               " new_uid=" + std::to_string(d.new_uid);
    }
    return out;
}

std::string render_alert_jsonl(const Alert& alert)
{
    json doc;
    doc["seq"] = alert.alert_seq;
    doc["ts_ns"] = alert.context.timestamp_ns;
    doc["kind"] = alert.kind_name();
    doc["pid"] = alert.context.pid;
    doc["tid"] = alert.context.tid;
    doc["uid"] = alert.context.uid;
    doc["comm"] = lossy_utf8(alert.context.comm);
    json details;
    if (alert.kind == Alert::Kind::DroppedFile) {
        const DroppedFileDetail& d = alert.dropped();
        details["magic"] = to_string(d.magic);
        details["device"] = d.file.device;
        details["inode"] = d.file.inode;
        details["path"] = lossy_utf8(d.file.last_known_path);
    } else {
        const PrivEscDetail& d = alert.privesc();
        details["pid"] = d.pid;
        details["old_uid"] = d.old_uid;
        details["new_uid"] = d.new_uid;
    }
    doc["details"] = std::move(details);
    return doc.dump();
}

void TextEventSink::on_event(const ResolvedEvent& event)
{
    out_(render_event_text(event, clock_->origin(event.record.context.timestamp_ns)));
}

void TextAlertSink::on_alert(const Alert& alert)
{
    out_(render_alert_text(alert, clock_->origin(alert.context.timestamp_ns)));
}

} // namespace tracescope
