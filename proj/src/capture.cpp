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

#include <fstream>

#include <json.hpp>

namespace tracescope {

namespace {

void write_all(const std::filesystem::path& path, const void* data, size_t len, bool append)
{
    std::ofstream out(path, append ? std::ios::binary | std::ios::app : std::ios::binary);
    if (!out)
        fail(Errc::io_error, "cannot open " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out)
        fail(Errc::io_error, "short write to " + path.string());
}

} // namespace

CaptureStore::CaptureStore(std::filesystem::path capture_dir) : root_(std::move(capture_dir))
{
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec)
        fail(Errc::io_error, "cannot create " + root_.string() + ": " + ec.message());
}

std::filesystem::path CaptureStore::dir_for(const FileIdentity& identity) const
{
    return root_ / (std::to_string(identity.device) + "_" + std::to_string(identity.inode));
}

void CaptureStore::append_chunk_frame(const FileIdentity& identity, const CaptureChunk& chunk)
{
    // Frame: u64 offset + u32 length + data, little-endian.
    uint8_t header[12];
    for (int i = 0; i < 8; ++i)
        header[i] = static_cast<uint8_t>(chunk.offset >> (8 * i));
    uint32_t len = static_cast<uint32_t>(chunk.data.size());
    for (int i = 0; i < 4; ++i)
        header[8 + i] = static_cast<uint8_t>(len >> (8 * i));

    std::filesystem::path dir = dir_for(identity);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        fail(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
    std::ofstream out(dir / "chunks.log", std::ios::binary | std::ios::app);
    if (!out)
        fail(Errc::io_error, "cannot open " + (dir / "chunks.log").string());
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    out.write(reinterpret_cast<const char*>(chunk.data.data()),
              static_cast<std::streamsize>(chunk.data.size()));
    if (!out)
        fail(Errc::io_error, "short write to " + (dir / "chunks.log").string());
}

std::optional<CaptureChunk> CaptureStore::capture_write(const ResolvedEvent& event)
{
    std::optional<WriteView> write = parse_write_event(event);
    if (!write || write->data->empty())
        return std::nullopt;

    FileCapture& capture = files_[{write->device, write->inode}];
    capture.identity = FileIdentity{write->device, write->inode, std::string(write->path)};
    capture.identity.last_known_path = std::string(write->path);

    CaptureChunk chunk{capture.identity, write->offset, *write->data};
    append_chunk_frame(capture.identity, chunk);
    capture.chunks.push_back(chunk);
    return chunk;
}

void CaptureStore::on_event(const ResolvedEvent& event)
{
    try {
        capture_write(event);
    } catch (const Error& e) {
        if (e.code() == Errc::io_error)
            throw;
        // malformed write events are not capturable; nothing to persist
    }
}

void CaptureStore::on_alert(const Alert& alert)
{
    if (alert.kind != Alert::Kind::DroppedFile)
        return;
    const DroppedFileDetail& d = alert.dropped();
    auto it = files_.find({d.file.device, d.file.inode});
    if (it == files_.end())
        return;
    it->second.alert_seq = alert.alert_seq;
    it->second.magic = d.magic;
}

void CaptureStore::finalize()
{
    if (finalized_)
        return;
    finalized_ = true;
    using json = nlohmann::ordered_json;
    for (const auto& [key, capture] : files_) {
        std::filesystem::path dir = dir_for(capture.identity);
        std::vector<uint8_t> content = reconstruct_file(capture.chunks);
        write_all(dir / "reconstructed.bin", content.data(), content.size(), false);

        json manifest;
        manifest["device"] = capture.identity.device;
        manifest["inode"] = capture.identity.inode;
        manifest["last_known_path"] = capture.identity.last_known_path;
        manifest["bytes"] = content.size();
        manifest["chunks"] = capture.chunks.size();
        if (capture.alert_seq != 0) {
            manifest["alert_seq"] = capture.alert_seq;
            manifest["magic"] = to_string(*capture.magic);
        } else {
            manifest["alert_seq"] = nullptr;
            manifest["magic"] = nullptr;
        }
        std::string text = manifest.dump(2) + "\n";
        write_all(dir / "manifest.json", text.data(), text.size(), false);
    }
}

const std::vector<CaptureChunk>* CaptureStore::chunks_for(uint64_t device, uint64_t inode) const
{
    auto it = files_.find({device, inode});
    return it == files_.end() ? nullptr : &it->second.chunks;
}

} // namespace tracescope
