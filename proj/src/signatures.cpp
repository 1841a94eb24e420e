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

#include "tracescope/signatures.hpp"

#include <algorithm>

namespace tracescope {

const char* to_string(MagicKind kind)
{
    switch (kind) {
    case MagicKind::Elf: return "elf";
    case MagicKind::Dex: return "dex";
    case MagicKind::Archive: return "archive";
    }
    return "?";
}

std::optional<MagicKind> match_magic(std::span<const uint8_t, 4> header)
{
    for (MagicKind kind : {MagicKind::Elf, MagicKind::Dex, MagicKind::Archive}) {
        auto expected = magic_bytes(kind);
        if (std::equal(expected.begin(), expected.end(), header.begin()))
            return kind;
    }
    return std::nullopt;
}

std::optional<WriteView> parse_write_event(const ResolvedEvent& event)
{
    if (event.layer != Layer::Kernel)
        return std::nullopt;
    if (event.display_name != "vfs_write" && event.display_name != "vfs_writev")
        return std::nullopt;

    const auto& args = event.record.args;
    if (args.size() != 5 || args[0].type() != ArgType::Str || args[1].type() != ArgType::Bytes ||
        args[2].type() != ArgType::Ulong || args[3].type() != ArgType::Ulong ||
        args[4].type() != ArgType::Ulong) {
        fail(Errc::malformed_write_event,
             event.display_name + " arguments do not match [str,bytes,ulong,ulong,ulong]");
    }

    WriteView view;
    view.path = std::get<std::string>(args[0].value);
    view.data = &std::get<std::vector<uint8_t>>(args[1].value);
    view.offset = std::get<uint64_t>(args[2].value);
    view.device = std::get<uint64_t>(args[3].value);
    view.inode = std::get<uint64_t>(args[4].value);
    return view;
}

void DropperSignature::on_event(const ResolvedEvent& event, std::vector<Alert>& alerts)
{
    std::optional<WriteView> write;
    try {
        write = parse_write_event(event);
    } catch (const Error&) {
        ++malformed_; // recorded, never alerted on
        return;
    }
    if (!write)
        return;

    HeaderState& state = files_[{write->device, write->inode}];
    state.last_known_path = std::string(write->path);

    // Merge the bytes this write contributes to the [0,4) header window.
    const auto& data = *write->data;
    if (write->offset < 4) {
        for (uint64_t pos = write->offset; pos < 4 && pos - write->offset < data.size(); ++pos) {
            state.bytes[pos] = data[pos - write->offset];
            state.known_mask |= static_cast<uint8_t>(1u << pos);
        }
    }
    if (state.alerted || state.known_mask != 0xf)
        return;

    auto magic = match_magic(std::span<const uint8_t, 4>(state.bytes));
    if (!magic)
        return;
    state.alerted = true;

    Alert alert;
    alert.kind = Alert::Kind::DroppedFile;
    alert.context = event.record.context;
    alert.detail = DroppedFileDetail{
        *magic, FileIdentity{write->device, write->inode, state.last_known_path}};
    alerts.push_back(std::move(alert));
}

void PrivEscSignature::on_event(const ResolvedEvent& event, std::vector<Alert>& alerts)
{
    const EventContext& ctx = event.record.context;

    // Fork and clone exits seed the child pid with the parent's current uid.
    if (const auto* exit = std::get_if<SyscallExit>(&event.record.kind)) {
        bool is_clone = event.display_name == "clone" || event.display_name == "clone3" ||
                        event.display_name == "fork" || event.display_name == "vfork";
        if (is_clone && exit->ret > 0) {
            EventContext child = ctx;
            child.pid = static_cast<uint32_t>(exit->ret);
            table_.ensure(child.pid, child);
        }
    }

    if (event.layer != Layer::Syscall)
        return;

    ProcessEntry& entry = table_.ensure(ctx.pid, ctx);
    if (entry.uid == ctx.uid)
        return;

    uint32_t old_uid = entry.uid;
    entry.uid = ctx.uid;
    if (!fired_.insert({ctx.pid, old_uid, ctx.uid}).second)
        return;

    Alert alert;
    alert.kind = Alert::Kind::PrivilegeEscalation;
    alert.context = ctx;
    alert.detail = PrivEscDetail{ctx.pid, old_uid, ctx.uid};
    alerts.push_back(std::move(alert));
}

std::vector<uint8_t> reconstruct_file(std::span<const CaptureChunk> chunks)
{
    std::vector<uint8_t> out;
    const CaptureChunk* first = nullptr;
    for (const CaptureChunk& chunk : chunks) {
        if (first == nullptr)
            first = &chunk;
        else if (!(chunk.file == first->file))
            fail(Errc::mixed_identity,
                 "chunks mix " + std::to_string(first->file.device) + ":" +
                     std::to_string(first->file.inode) + " with " +
                     std::to_string(chunk.file.device) + ":" + std::to_string(chunk.file.inode));

        uint64_t end = chunk.offset + chunk.data.size();
        if (end > out.size())
            out.resize(end, 0);
        std::copy(chunk.data.begin(), chunk.data.end(),
                  out.begin() + static_cast<ptrdiff_t>(chunk.offset));
    }
    return out;
}

} // namespace tracescope
