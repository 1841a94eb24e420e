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

#include "tracescope/sources.hpp"

#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <deque>
#include <mutex>
#include <optional>
#include <thread>

namespace tracescope {

namespace {

// Frames larger than this are treated as corruption, not as a real event.
constexpr uint32_t kMaxFrameBytes = 1u << 20;

struct FileCloser {
    void operator()(std::FILE* f) const
    {
        if (f != nullptr)
            std::fclose(f);
    }
};

using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

class ReplaySource final : public EventSource {
public:
    explicit ReplaySource(const std::string& path) : path_(path)
    {
        file_.reset(std::fopen(path.c_str(), "rb"));
        if (!file_)
            fail(Errc::io_error, "cannot open " + path);
        char magic[8];
        size_t got = std::fread(magic, 1, sizeof magic, file_.get());
        if (got == 0 && std::feof(file_.get())) {
            // An empty file is an empty stream.
            eof_ = true;
            return;
        }
        if (got != sizeof magic || std::memcmp(magic, kReplayMagic, sizeof magic) != 0)
            fail(Errc::format_error, path + ": not a replay file");
        offset_ = sizeof magic;
    }

    bool next_batch(std::vector<EventRecord>& out) override
    {
        // Intact records ahead of a corrupt frame are delivered first; the
        // error surfaces on the following call.
        if (pending_error_) {
            eof_ = true;
            auto err = pending_error_;
            pending_error_ = nullptr;
            std::rethrow_exception(err);
        }
        if (eof_)
            return false;
        size_t produced = 0;
        while (produced < kBatch && !eof_) {
            try {
                if (!read_frame(out))
                    eof_ = true;
                else
                    ++produced;
            } catch (...) {
                if (produced == 0) {
                    eof_ = true;
                    throw;
                }
                pending_error_ = std::current_exception();
                break;
            }
        }
        return produced > 0;
    }

private:
    static constexpr size_t kBatch = 256;

    // Returns false at a clean end of file.
    bool read_frame(std::vector<EventRecord>& out)
    {
        uint8_t len_bytes[4];
        size_t got = std::fread(len_bytes, 1, 4, file_.get());
        if (got == 0 && std::feof(file_.get()))
            return false;
        if (got != 4)
            corrupt("truncated frame length");
        uint32_t len = static_cast<uint32_t>(len_bytes[0]) |
                       static_cast<uint32_t>(len_bytes[1]) << 8 |
                       static_cast<uint32_t>(len_bytes[2]) << 16 |
                       static_cast<uint32_t>(len_bytes[3]) << 24;
        if (len == 0 || len > kMaxFrameBytes)
            corrupt("implausible frame length " + std::to_string(len));
        buf_.resize(len);
        if (std::fread(buf_.data(), 1, len, file_.get()) != len)
            corrupt("truncated frame body");
        try {
            out.push_back(decode_event(buf_));
        } catch (const Error& e) {
            corrupt(e.what());
        }
        offset_ += 4 + len;
        return true;
    }

    [[noreturn]] void corrupt(const std::string& why)
    {
        fail(Errc::format_error, path_ + " at offset " + std::to_string(offset_) + ": " + why);
    }

    std::string path_;
    FileHandle file_;
    std::vector<uint8_t> buf_;
    uint64_t offset_ = 0;
    bool eof_ = false;
    std::exception_ptr pending_error_;
};

} // namespace

std::unique_ptr<EventSource> open_replay(const std::string& path)
{
    return std::make_unique<ReplaySource>(path);
}

struct ReplayWriter::Impl {
    FileHandle file;
    std::string path;
};

ReplayWriter::ReplayWriter(const std::string& path) : impl_(std::make_unique<Impl>())
{
    impl_->path = path;
    impl_->file.reset(std::fopen(path.c_str(), "wb"));
    if (!impl_->file)
        fail(Errc::io_error, "cannot create " + path);
    if (std::fwrite(kReplayMagic, 1, sizeof kReplayMagic, impl_->file.get()) !=
        sizeof kReplayMagic)
        fail(Errc::io_error, "short write to " + path);
}

ReplayWriter::~ReplayWriter() = default;

void ReplayWriter::append(const EventRecord& record)
{
    if (!impl_->file)
        fail(Errc::io_error, "writer is closed");
    std::vector<uint8_t> msg = encode_event(record);
    uint32_t len = static_cast<uint32_t>(msg.size());
    uint8_t len_bytes[4] = {static_cast<uint8_t>(len), static_cast<uint8_t>(len >> 8),
                            static_cast<uint8_t>(len >> 16), static_cast<uint8_t>(len >> 24)};
    if (std::fwrite(len_bytes, 1, 4, impl_->file.get()) != 4 ||
        std::fwrite(msg.data(), 1, msg.size(), impl_->file.get()) != msg.size())
        fail(Errc::io_error, "short write to " + impl_->path);
}

void ReplayWriter::close()
{
    if (impl_->file && std::fflush(impl_->file.get()) != 0)
        fail(Errc::io_error, "flush failed for " + impl_->path);
    impl_->file.reset();
}

void write_replay(const std::string& path, const std::vector<EventRecord>& events)
{
    ReplayWriter writer(path);
    for (const EventRecord& e : events)
        writer.append(e);
    writer.close();
}

namespace {

// Order-preserving handoff between a producer thread and the consuming loop.
class ThreadedSourceImpl final : public EventSource {
public:
    ThreadedSourceImpl(std::unique_ptr<EventSource> inner, size_t capacity)
        : inner_(std::move(inner)), capacity_(capacity == 0 ? 1 : capacity)
    {
        feeder_ = std::thread([this] { feed(); });
    }

    ~ThreadedSourceImpl() override
    {
        {
            std::lock_guard lock(mu_);
            stop_ = true;
        }
        room_.notify_all();
        if (feeder_.joinable())
            feeder_.join();
    }

    bool next_batch(std::vector<EventRecord>& out) override
    {
        std::unique_lock lock(mu_);
        avail_.wait(lock, [this] { return !queue_.empty() || done_; });
        if (queue_.empty()) {
            if (error_)
                std::rethrow_exception(error_);
            return false;
        }
        out.insert(out.end(), std::make_move_iterator(queue_.front().begin()),
                   std::make_move_iterator(queue_.front().end()));
        queue_.pop_front();
        lock.unlock();
        room_.notify_one();
        return true;
    }

private:
    void feed()
    {
        try {
            std::vector<EventRecord> batch;
            while (inner_->next_batch(batch)) {
                std::unique_lock lock(mu_);
                room_.wait(lock, [this] { return queue_.size() < capacity_ || stop_; });
                if (stop_)
                    return;
                queue_.push_back(std::move(batch));
                batch.clear();
                lock.unlock();
                avail_.notify_one();
            }
        } catch (...) {
            std::lock_guard lock(mu_);
            error_ = std::current_exception();
        }
        {
            std::lock_guard lock(mu_);
            done_ = true;
        }
        avail_.notify_all();
    }

    std::unique_ptr<EventSource> inner_;
    size_t capacity_;
    std::thread feeder_;
    std::mutex mu_;
    std::condition_variable avail_;
    std::condition_variable room_;
    std::deque<std::vector<EventRecord>> queue_;
    std::exception_ptr error_;
    bool done_ = false;
    bool stop_ = false;
};

} // namespace

std::unique_ptr<EventSource> threaded_source(std::unique_ptr<EventSource> inner,
                                             size_t queue_capacity)
{
    return std::make_unique<ThreadedSourceImpl>(std::move(inner), queue_capacity);
}

} // namespace tracescope
