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

#include <algorithm>
#include <array>

#include "tracescope/syscalls.hpp"

namespace tracescope {

namespace {

constexpr uint32_t kOpenatNr = 56;
constexpr uint32_t kGetpidNr = 172;
constexpr uint32_t kGetuidNr = 174;
constexpr uint32_t kCloneNr = 220;
constexpr int32_t kAtFdcwd = -100;
constexpr int32_t kOpenFlagsCreate = 0x241; // O_WRONLY|O_CREAT|O_TRUNC
constexpr uint32_t kZygotePid = 911;
constexpr uint64_t kSimDevice = 64768; // fd:00

struct SplitMix64 {
    uint64_t state;

    uint64_t next()
    {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t range(uint64_t n) { return next() % n; }
};

uint64_t scenario_salt(ScenarioName name)
{
    return 0x5ce4a1100ull + static_cast<uint64_t>(name) * 0x1000193ull;
}

const char* scenario_comm(ScenarioName name)
{
    switch (name) {
    case ScenarioName::DropperDex: return "ufD.wykyx.vlhvh";
    case ScenarioName::DropperElf: return "lmh.android.gjb";
    case ScenarioName::DropperArchive: return "com.apk.dropper";
    case ScenarioName::PrivEsc: return "com.priv.escal";
    case ScenarioName::Benign: return "com.benign.note";
    }
    return "app";
}

std::array<uint8_t, 4> scenario_magic(ScenarioName name)
{
    switch (name) {
    case ScenarioName::DropperElf: return {0x7f, 0x45, 0x4c, 0x46};
    case ScenarioName::DropperDex: return {0x64, 0x65, 0x78, 0x0a}; // "dex\n"
    case ScenarioName::DropperArchive: return {0x50, 0x4b, 0x03, 0x04};
    default: return {};
    }
}

// Builds the full deterministic stream up front; scenarios are desk-scale.
class SimSource final : public EventSource {
public:
    explicit SimSource(const Scenario& s) : scenario_(s), rng_{s.seed ^ scenario_salt(s.name)}
    {
        ts_ = 1'000'000'000ull + (s.seed % 1000) * 7919;
        switch (s.name) {
        case ScenarioName::DropperDex:
        case ScenarioName::DropperElf:
        case ScenarioName::DropperArchive:
            build_dropper();
            break;
        case ScenarioName::PrivEsc:
            build_privesc();
            break;
        case ScenarioName::Benign:
            build_benign();
            break;
        }
    }

    bool next_batch(std::vector<EventRecord>& out) override
    {
        if (cursor_ >= events_.size())
            return false;
        size_t n = std::min<size_t>(128, events_.size() - cursor_);
        out.insert(out.end(), events_.begin() + static_cast<ptrdiff_t>(cursor_),
                   events_.begin() + static_cast<ptrdiff_t>(cursor_ + n));
        cursor_ += n;
        return true;
    }

private:
    EventContext ctx(uint32_t uid)
    {
        ts_ += 1000 + rng_.range(40'000);
        return {ts_, scenario_.app_pid, scenario_.app_pid, kZygotePid, uid,
                scenario_comm(scenario_.name)};
    }

    EventContext ctx() { return ctx(scenario_.app_uid); }

    void syscall_enter(uint32_t nr, std::vector<ArgValue> args, uint32_t uid)
    {
        events_.push_back({ctx(uid), SyscallEnter{nr}, std::move(args)});
    }

    void syscall_exit(uint32_t nr, int64_t ret, uint32_t uid)
    {
        events_.push_back({ctx(uid), SyscallExit{nr, ret}, {}});
    }

    void openat_pair(const std::string& path, int64_t fd, uint32_t uid)
    {
        syscall_enter(kOpenatNr,
                      {ArgValue::of_int(kAtFdcwd), ArgValue::of_str(path),
                       ArgValue::of_int(kOpenFlagsCreate), ArgValue::of_uint(0600)},
                      uid);
        syscall_exit(kOpenatNr, fd, uid);
    }

    void vfs_write(const std::string& path, std::vector<uint8_t> data, uint64_t offset)
    {
        events_.push_back({ctx(), KprobeHit{kKprobeIdVfsWrite},
                           {ArgValue::of_str(path), ArgValue::of_bytes(std::move(data)),
                            ArgValue::of_ulong(offset), ArgValue::of_ulong(scenario_.device()),
                            ArgValue::of_ulong(scenario_.inode())}});
    }

    void process_exit(uint32_t uid)
    {
        events_.push_back({ctx(uid), KprobeHit{kKprobeIdSchedProcessExit}, {}});
    }

    void build_dropper()
    {
        const std::string path = scenario_.target_path();
        openat_pair(path, 37, scenario_.app_uid);
        events_.push_back({ctx(), UserProbeHit{kSimLibcOpenAddr},
                           {ArgValue::of_str(path), ArgValue::of_int(kOpenFlagsCreate)}});

        // Contiguous chunked writes covering the payload; the first chunk is
        // occasionally shorter than the 4-byte header so header assembly
        // spans writes.
        const auto& payload = scenario_.payload;
        size_t off = 0;
        bool split_header = rng_.range(3) == 0;
        while (off < payload.size()) {
            size_t len;
            if (off == 0)
                len = split_header ? 1 + rng_.range(3) : 4 + rng_.range(700);
            else
                len = 1 + rng_.range(900);
            len = std::min(len, payload.size() - off);
            vfs_write(path, {payload.begin() + static_cast<ptrdiff_t>(off),
                             payload.begin() + static_cast<ptrdiff_t>(off + len)},
                      off);
            off += len;
        }

        if (scenario_.name == ScenarioName::DropperDex) {
            events_.push_back(
                {ctx(), UserProbeHit{kSimOpenDexFileAddr},
                 {ArgValue::of_addr(0x12c00000 + rng_.range(0x40000)), ArgValue::of_addr(0),
                  ArgValue::of_int(0), ArgValue::of_addr(0x70000000 + rng_.range(0x1000)),
                  ArgValue::of_addr(0x12c40000)}});
        }
    }

    void build_benign()
    {
        const std::string path = scenario_.target_path();
        openat_pair(path, 21, scenario_.app_uid);

        // Header bytes are written once and are not a watched magic.
        std::vector<uint8_t> head = {'T', 'X', 'T', '0'};
        size_t extra = 8 + rng_.range(64);
        for (size_t i = 0; i < extra; ++i)
            head.push_back(static_cast<uint8_t>(rng_.range(256)));
        vfs_write(path, std::move(head), 0);

        // Near miss: the dex magic written past the header window.
        vfs_write(path, {0x64, 0x65, 0x78, 0x0a}, 8);

        size_t writes = 3 + rng_.range(5);
        for (size_t i = 0; i < writes; ++i) {
            std::vector<uint8_t> data(1 + rng_.range(200));
            for (auto& b : data)
                b = static_cast<uint8_t>(rng_.range(256));
            vfs_write(path, std::move(data), 4 + rng_.range(4096));
        }

        syscall_enter(kGetpidNr, {}, scenario_.app_uid);
        syscall_exit(kGetpidNr, scenario_.app_pid, scenario_.app_uid);
        process_exit(scenario_.app_uid);
    }

    void build_privesc()
    {
        size_t before = 3 + rng_.range(4);
        for (size_t i = 0; i < before; ++i) {
            syscall_enter(kGetpidNr, {}, scenario_.app_uid);
            syscall_exit(kGetpidNr, scenario_.app_pid, scenario_.app_uid);
        }

        // A fork along the way; the child keeps the app uid.
        syscall_exit(kCloneNr, scenario_.app_pid + 1, scenario_.app_uid);

        // The process turns up with uid 0 from here on.
        syscall_enter(kGetuidNr, {}, 0);
        syscall_exit(kGetuidNr, 0, 0);
        syscall_enter(kGetpidNr, {}, 0);
        process_exit(0);
    }

    Scenario scenario_;
    SplitMix64 rng_;
    uint64_t ts_ = 0;
    std::vector<EventRecord> events_;
    size_t cursor_ = 0;
};

} // namespace

const char* to_string(ScenarioName name)
{
    switch (name) {
    case ScenarioName::DropperDex: return "dropper_dex";
    case ScenarioName::DropperElf: return "dropper_elf";
    case ScenarioName::DropperArchive: return "dropper_archive";
    case ScenarioName::PrivEsc: return "privesc";
    case ScenarioName::Benign: return "benign";
    }
    return "?";
}

ScenarioName scenario_from_string(std::string_view name)
{
    if (name == "dropper_dex") return ScenarioName::DropperDex;
    if (name == "dropper_elf") return ScenarioName::DropperElf;
    if (name == "dropper_archive") return ScenarioName::DropperArchive;
    if (name == "privesc") return ScenarioName::PrivEsc;
    if (name == "benign") return ScenarioName::Benign;
    fail(Errc::invalid_argument, "unknown scenario \"" + std::string(name) + "\"");
}

Scenario Scenario::make(ScenarioName name, uint64_t seed)
{
    return make(name, seed, 10050, 4242);
}

Scenario Scenario::make(ScenarioName name, uint64_t seed, uint32_t app_uid, uint32_t app_pid)
{
    Scenario s;
    s.name = name;
    s.seed = seed;
    s.app_uid = app_uid;
    s.app_pid = app_pid;

    auto magic = scenario_magic(name);
    if (name == ScenarioName::DropperDex || name == ScenarioName::DropperElf ||
        name == ScenarioName::DropperArchive) {
        SplitMix64 rng{seed ^ scenario_salt(name) ^ 0xdeadull};
        s.payload.assign(magic.begin(), magic.end());
        size_t body = 1200 + rng.range(4000);
        s.payload.reserve(4 + body);
        for (size_t i = 0; i < body; ++i)
            s.payload.push_back(static_cast<uint8_t>(rng.range(256)));
    }
    return s;
}

std::string Scenario::target_path() const
{
    switch (name) {
    case ScenarioName::DropperDex: return "/data/user/0/ufD.wykyx.vlhvh/files/dex";
    case ScenarioName::DropperElf: return "/data/data/lmh.android.gjbus/curl";
    case ScenarioName::DropperArchive: return "/storage/emulated/0/.apk.apk";
    case ScenarioName::Benign: return "/data/user/0/com.benign.notes/files/notes.txt";
    case ScenarioName::PrivEsc: return "";
    }
    return {};
}

uint64_t Scenario::device() const
{
    return kSimDevice;
}

uint64_t Scenario::inode() const
{
    return 500000 + static_cast<uint64_t>(name) * 1000 + seed;
}

std::unique_ptr<EventSource> simulate_scenario(const Scenario& scenario)
{
    return std::make_unique<SimSource>(scenario);
}

AddressMap simulation_address_map()
{
    AddressMap map;
    map.insert(kSimLibcOpenAddr,
               {"libc.so!open", ProbeKind::NativeFunction,
                encode_arg_types({ArgType::Str, ArgType::Int})});
    map.insert(kSimOpenDexFileAddr,
               {"dalvik.system.DexFile.openDexFile", ProbeKind::ApiCall,
                encode_arg_types({ArgType::Addr, ArgType::Addr, ArgType::Int, ArgType::Addr,
                                  ArgType::Addr})});
    return map;
}

} // namespace tracescope
