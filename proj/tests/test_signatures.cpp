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

#include <doctest.h>

#include <filesystem>

#include "test_support.hpp"
#include "tracescope/pipeline.hpp"
#include "tracescope/signatures.hpp"

using namespace tracescope;
using namespace tracescope::testing;

namespace {

ResolvedEvent resolved_write(uint64_t ts, const std::string& path, std::vector<uint8_t> data,
                             uint64_t offset, uint64_t device = 64768, uint64_t inode = 333)
{
    return resolve_event(make_write_record(ts, 500, 10050, path, std::move(data), offset,
                                           device, inode),
                         AddressMap{});
}

std::vector<Alert> feed(DropperSignature& sig, const ResolvedEvent& event)
{
    std::vector<Alert> alerts;
    sig.on_event(event, alerts);
    return alerts;
}

std::filesystem::path temp_capture_dir(const char* name)
{
    auto dir = std::filesystem::temp_directory_path() / "tracescope_tests" / name;
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("dropper fires on a magic written at offset zero")
{
    DropperSignature sig;
    std::vector<uint8_t> data = {'d', 'e', 'x', '\n', 1, 2, 3};
    auto alerts = feed(sig, resolved_write(100, "/data/app/f", data, 0));
    REQUIRE(alerts.size() == 1);
    CHECK(alerts[0].kind == Alert::Kind::DroppedFile);
    CHECK(alerts[0].dropped().magic == MagicKind::Dex);
    CHECK(alerts[0].dropped().file.device == 64768);
    CHECK(alerts[0].dropped().file.inode == 333);
    CHECK(alerts[0].dropped().file.last_known_path == "/data/app/f");
}

TEST_CASE("dropper ignores the same magic past the header window")
{
    DropperSignature sig;
    CHECK(feed(sig, resolved_write(100, "/f", {'d', 'e', 'x', '\n'}, 8)).empty());
    CHECK(feed(sig, resolved_write(101, "/f", {'x'}, 0)).empty()); // header still incomplete
}

TEST_CASE("dropper assembles split headers and fires on the completing write")
{
    DropperSignature sig;
    CHECK(feed(sig, resolved_write(100, "/f", {'P', 'K'}, 0)).empty());
    auto alerts = feed(sig, resolved_write(101, "/f", {0x03, 0x04}, 2));
    REQUIRE(alerts.size() == 1);
    CHECK(alerts[0].dropped().magic == MagicKind::Archive);
}

TEST_CASE("dropper alerts at most once per file identity")
{
    DropperSignature sig;
    std::vector<uint8_t> dex = {'d', 'e', 'x', '\n'};
    CHECK(feed(sig, resolved_write(100, "/f", dex, 0)).size() == 1);
    CHECK(feed(sig, resolved_write(101, "/f", dex, 0)).empty());
    // A different inode is a different file.
    CHECK(feed(sig, resolved_write(102, "/g", dex, 0, 64768, 334)).size() == 1);
}

TEST_CASE("dropper header bytes can be overwritten before the alert")
{
    DropperSignature sig;
    CHECK(feed(sig, resolved_write(100, "/f", {'X', 'X', 'X', 'X'}, 0)).empty());
    auto alerts = feed(sig, resolved_write(101, "/f", {0x7f, 'E', 'L', 'F'}, 0));
    REQUIRE(alerts.size() == 1);
    CHECK(alerts[0].dropped().magic == MagicKind::Elf);
}

TEST_CASE("malformed write events are recorded, never alerted")
{
    DropperSignature sig;
    EventRecord rec;
    rec.context = {100, 1, 1, 1, 10050, "x"};
    rec.kind = KprobeHit{kKprobeIdVfsWrite};
    rec.args = {ArgValue::of_int(5)}; // wrong convention
    ResolvedEvent bad = resolve_event(rec, AddressMap{});
    std::vector<Alert> alerts;
    sig.on_event(bad, alerts);
    CHECK(alerts.empty());
    CHECK(sig.malformed_write_events() == 1);
}

TEST_CASE("vfs_writev events follow the same convention")
{
    DropperSignature sig;
    EventRecord rec = make_write_record(100, 1, 10050, "/f", {0x7f, 'E', 'L', 'F'}, 0, 7, 9);
    rec.kind = KprobeHit{kKprobeIdVfsWritev};
    auto alerts = feed(sig, resolve_event(rec, AddressMap{}));
    REQUIRE(alerts.size() == 1);
    CHECK(alerts[0].dropped().magic == MagicKind::Elf);
}

TEST_CASE("dropper equals the brute-force oracle on randomized write streams")
{
    TestRng rng(404);
    for (int stream = 0; stream < 200; ++stream) {
        std::vector<EventRecord> events;
        size_t writes = 5 + rng.range(30);
        for (size_t i = 0; i < writes; ++i) {
            uint64_t inode = 100 + rng.range(3);
            uint64_t offset = rng.range(10) < 6 ? rng.range(6) : rng.range(64);
            std::vector<uint8_t> data(1 + rng.range(10));
            for (auto& b : data)
                b = static_cast<uint8_t>(rng.range(256));
            if (rng.range(10) < 3) {
                auto magic = magic_bytes(static_cast<MagicKind>(rng.range(3)));
                size_t take = 1 + rng.range(4);
                data.assign(magic.begin(), magic.begin() + static_cast<ptrdiff_t>(take));
                offset = rng.range(3);
            }
            events.push_back(
                make_write_record(1000 + i, 1, 10050, "/f", std::move(data), offset, 1, inode));
        }

        DropperSignature sig;
        std::set<std::pair<uint64_t, uint64_t>> fired;
        for (const EventRecord& rec : events) {
            for (const Alert& a : feed(sig, resolve_event(rec, AddressMap{})))
                fired.insert({a.dropped().file.device, a.dropped().file.inode});
        }
        CHECK(fired == dropper_oracle(events));
    }
}

TEST_CASE("reconstruct_file")
{
    FileIdentity f{1, 2, "/f"};
    SUBCASE("adjacent chunks")
    {
        std::vector<CaptureChunk> chunks = {{f, 0, {'A', 'B'}}, {f, 2, {'C', 'D'}}};
        CHECK(reconstruct_file(chunks) == std::vector<uint8_t>{'A', 'B', 'C', 'D'});
    }
    SUBCASE("gap is zero-filled")
    {
        std::vector<CaptureChunk> chunks = {{f, 4, {'Z'}}};
        CHECK(reconstruct_file(chunks) == std::vector<uint8_t>{0, 0, 0, 0, 'Z'});
    }
    SUBCASE("overlap: last write wins")
    {
        std::vector<CaptureChunk> chunks = {{f, 0, {'X', 'X', 'X', 'X'}},
                                            {f, 0, {'d', 'e', 'x', '\n'}}};
        CHECK(reconstruct_file(chunks) == std::vector<uint8_t>{'d', 'e', 'x', '\n'});
    }
    SUBCASE("mixed identities are rejected")
    {
        FileIdentity g{1, 3, "/g"};
        std::vector<CaptureChunk> chunks = {{f, 0, {'A'}}, {g, 1, {'B'}}};
        try {
            reconstruct_file(chunks);
            FAIL("expected MixedIdentity");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::mixed_identity);
        }
    }
    SUBCASE("non-overlapping chunks reconstruct identically in any order")
    {
        TestRng rng(99);
        for (int round = 0; round < 50; ++round) {
            std::vector<CaptureChunk> chunks;
            uint64_t offset = 0;
            while (offset < 64) {
                size_t len = 1 + rng.range(9);
                std::vector<uint8_t> data(len);
                for (auto& b : data)
                    b = static_cast<uint8_t>(rng.range(256));
                chunks.push_back({f, offset, std::move(data)});
                offset += len + rng.range(4); // occasional gaps
            }
            auto expected = reconstruct_file(chunks);
            for (int shuffle = 0; shuffle < 5; ++shuffle) {
                for (size_t i = chunks.size(); i > 1; --i)
                    std::swap(chunks[i - 1], chunks[rng.range(i)]);
                CHECK(reconstruct_file(chunks) == expected);
            }
        }
    }
}

TEST_CASE("privilege escalation signature")
{
    ProcessTable table;
    PrivEscSignature sig(table);
    AddressMap addresses;

    auto syscall_event = [&](uint32_t pid, uint32_t uid, uint64_t ts) {
        EventRecord rec;
        rec.context = {ts, pid, pid, 1, uid, "app"};
        rec.kind = SyscallEnter{172};
        ResolvedEvent resolved = resolve_event(rec, addresses);
        table.ensure(pid, rec.context); // what the dispatch loop does first
        std::vector<Alert> alerts;
        sig.on_event(resolved, alerts);
        return alerts;
    };

    SUBCASE("uid change alerts once, stable new uid stays quiet")
    {
        CHECK(syscall_event(4242, 10050, 1).empty());
        CHECK(syscall_event(4242, 10050, 2).empty());
        auto alerts = syscall_event(4242, 0, 3);
        REQUIRE(alerts.size() == 1);
        CHECK(alerts[0].privesc().pid == 4242);
        CHECK(alerts[0].privesc().old_uid == 10050);
        CHECK(alerts[0].privesc().new_uid == 0);
        CHECK(syscall_event(4242, 0, 4).empty());
    }
    SUBCASE("constant uid never alerts")
    {
        for (uint64_t i = 0; i < 50; ++i)
            CHECK(syscall_event(7, 10123, i).empty());
    }
    SUBCASE("the same transition repeated alerts only once")
    {
        CHECK(syscall_event(9, 10050, 1).empty());
        CHECK(syscall_event(9, 0, 2).size() == 1);      // 10050 -> 0
        CHECK(syscall_event(9, 10050, 3).size() == 1);  // 0 -> 10050, distinct transition
        CHECK(syscall_event(9, 0, 4).empty());          // 10050 -> 0 again, deduplicated
    }
    SUBCASE("clone exit seeds the child pid")
    {
        EventRecord clone_exit;
        clone_exit.context = {10, 100, 100, 1, 10050, "parent"};
        clone_exit.kind = SyscallExit{220, 101}; // child pid 101
        table.ensure(100, clone_exit.context);
        std::vector<Alert> alerts;
        sig.on_event(resolve_event(clone_exit, addresses), alerts);
        CHECK(alerts.empty());
        REQUIRE(table.contains(101));
        CHECK(table.find(101)->uid == 10050);
        // The child showing up as root now alerts with old_uid from the fork.
        auto child_alerts = syscall_event(101, 0, 11);
        REQUIRE(child_alerts.size() == 1);
        CHECK(child_alerts[0].privesc().old_uid == 10050);
    }
}

TEST_CASE("privesc scenario end-to-end fires exactly once, at the oracle event")
{
    for (uint64_t seed : {1, 2, 3}) {
        Scenario s = Scenario::make(ScenarioName::PrivEsc, seed);
        auto events = drain(*simulate_scenario(s));
        size_t oracle_index = privesc_oracle_first_transition(events);
        REQUIRE(oracle_index != static_cast<size_t>(-1));

        VectorSource source(events);
        HooksConfig cfg = default_multilayer_config();
        cfg.filter = FilterSpec::uid_list({s.app_uid, 0});
        CollectingAlertSink alerts;
        EffectiveFilter filter = EffectiveFilter::make(cfg.filter);
        NameResolver resolver(simulation_address_map(), KprobeRegistry::from_config(cfg));
        ProcessTable table;
        DropperSignature dropper;
        PrivEscSignature privesc(table);
        Signature* signatures[] = {&dropper, &privesc};
        AlertSink* alert_sinks[] = {&alerts};
        dispatch_loop(source, filter, resolver, signatures, {}, alert_sinks, table);

        REQUIRE(alerts.alerts.size() == 1);
        CHECK(alerts.alerts[0].kind == Alert::Kind::PrivilegeEscalation);
        CHECK(alerts.alerts[0].context.timestamp_ns ==
              events[oracle_index].context.timestamp_ns);
        CHECK(alerts.alerts[0].privesc().new_uid == 0);
        CHECK(alerts.alerts[0].privesc().old_uid == s.app_uid);
    }
}

TEST_CASE("capture store persists chunks and reconstructs files")
{
    auto dir = temp_capture_dir("capture_basic");
    CaptureStore store(dir);

    store.on_event(resolved_write(100, "/data/f", {'d', 'e', 'x', '\n'}, 0, 7, 42));
    store.on_event(resolved_write(101, "/data/f", {'A', 'B'}, 4, 7, 42));
    store.on_event(resolved_write(102, "/data/f", {}, 6, 7, 42)); // zero-length: no chunk

    const auto* chunks = store.chunks_for(7, 42);
    REQUIRE(chunks != nullptr);
    CHECK(chunks->size() == 2);

    Alert alert;
    alert.kind = Alert::Kind::DroppedFile;
    alert.alert_seq = 5;
    alert.detail = DroppedFileDetail{MagicKind::Dex, FileIdentity{7, 42, "/data/f"}};
    store.on_alert(alert);
    store.finalize();

    auto reconstructed = read_binary_file((dir / "7_42" / "reconstructed.bin").string());
    CHECK(reconstructed == std::vector<uint8_t>{'d', 'e', 'x', '\n', 'A', 'B'});

    auto chunk_log = read_binary_file((dir / "7_42" / "chunks.log").string());
    // Two frames: (8 offset + 4 len + data) each.
    CHECK(chunk_log.size() == (12 + 4) + (12 + 2));
    CHECK(chunk_log[8] == 4);   // first frame length
    CHECK(chunk_log[12] == 'd');

    auto manifest = read_text_file((dir / "7_42" / "manifest.json").string());
    CHECK(manifest.find("\"last_known_path\": \"/data/f\"") != std::string::npos);
    CHECK(manifest.find("\"alert_seq\": 5") != std::string::npos);
    CHECK(manifest.find("\"magic\": \"dex\"") != std::string::npos);
}

TEST_CASE("capture fidelity: reconstructed output equals the scenario payload")
{
    for (auto name : {ScenarioName::DropperDex, ScenarioName::DropperElf,
                      ScenarioName::DropperArchive}) {
        Scenario s = Scenario::make(name, 6);
        auto dir = temp_capture_dir("capture_fidelity");
        auto source = simulate_scenario(s);
        PipelineOptions opts;
        opts.capture_dir = dir.string();
        RunSummary summary = run_pipeline(*source, default_multilayer_config(),
                                          simulation_address_map(), opts);
        CHECK(summary.alerts_by_kind.at("dropped_file") == 1);

        auto path = dir / (std::to_string(s.device()) + "_" + std::to_string(s.inode())) /
                    "reconstructed.bin";
        CHECK(read_binary_file(path.string()) == s.payload);
    }
}

TEST_CASE("capture is unconditional: files without alerts are still reconstructible")
{
    auto dir = temp_capture_dir("capture_unconditional");
    auto source = simulate_scenario(Scenario::make(ScenarioName::Benign, 2));
    PipelineOptions opts;
    opts.capture_dir = dir.string();
    RunSummary summary =
        run_pipeline(*source, default_multilayer_config(), simulation_address_map(), opts);
    CHECK(summary.alerts_by_kind.empty());

    bool found = false;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (std::filesystem::exists(entry.path() / "reconstructed.bin"))
            found = true;
        auto manifest = read_text_file((entry.path() / "manifest.json").string());
        CHECK(manifest.find("\"alert_seq\": null") != std::string::npos);
    }
    CHECK(found);
}
