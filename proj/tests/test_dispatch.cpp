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

#include "test_support.hpp"
#include "tracescope/dispatch.hpp"
#include "tracescope/pipeline.hpp"
#include "tracescope/syscalls.hpp"

using namespace tracescope;
using namespace tracescope::testing;

namespace {

EventContext ctx_with_uid(uint32_t uid)
{
    return {1000, 42, 42, 1, uid, "app"};
}

} // namespace

TEST_CASE("arm64 syscall table spot checks")
{
    REQUIRE(syscall_by_name("execve") != nullptr);
    CHECK(syscall_by_name("execve")->nr == 221);
    CHECK(syscall_by_name("openat")->nr == 56);
    CHECK(syscall_by_name("clone")->nr == 220);
    CHECK(syscall_by_name("setuid")->nr == 146);
    CHECK(syscall_by_name("memfd_create")->nr == 279);
    CHECK(syscall_name(221) == "execve");
    CHECK(syscall_name(99999) == "syscall_99999");
    CHECK(syscall_by_nr(56)->args().size() == 4);
}

TEST_CASE("should_trace filter semantics")
{
    CHECK(should_trace(ctx_with_uid(10123), FilterSpec::all_user_apps()));
    CHECK_FALSE(should_trace(ctx_with_uid(1000), FilterSpec::all_user_apps()));
    CHECK_FALSE(should_trace(ctx_with_uid(10000), FilterSpec::all_user_apps())); // boundary

    CHECK(should_trace(ctx_with_uid(10050), FilterSpec::uid_list({10050})));
    CHECK_FALSE(should_trace(ctx_with_uid(10051), FilterSpec::uid_list({10050})));

    // Mode none traces nothing.
    CHECK_FALSE(should_trace(ctx_with_uid(10123), FilterSpec::none()));
    CHECK_FALSE(should_trace(ctx_with_uid(0), FilterSpec::none()));
}

TEST_CASE("package filters resolve at construction")
{
    PackageMap packages = parse_package_map("com.a 10050\ncom.b 10123\n");
    CHECK(should_trace(ctx_with_uid(10123), FilterSpec::package_list({"com.b"}), packages));
    CHECK_FALSE(should_trace(ctx_with_uid(10050), FilterSpec::package_list({"com.b"}), packages));

    SUBCASE("unknown package fails at filter construction")
    {
        try {
            EffectiveFilter::make(FilterSpec::package_list({"com.nope"}), packages);
            FAIL("expected UnknownPackage");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::unknown_package);
        }
    }
    SUBCASE("package map parsing rejects conflicts and junk")
    {
        CHECK_THROWS_AS(parse_package_map("com.a 10050\ncom.a 10051\n"), Error);
        CHECK_THROWS_AS(parse_package_map("justonename\n"), Error);
        CHECK(parse_package_map("# comment\ncom.a 10050\ncom.a 10050\n").size() == 1);
    }
}

TEST_CASE("resolve_event names all four layers")
{
    AddressMap addresses = simulation_address_map();

    EventRecord syscall;
    syscall.context = ctx_with_uid(10050);
    syscall.kind = SyscallEnter{221};
    ResolvedEvent r = resolve_event(syscall, addresses);
    CHECK(r.display_name == "execve");
    CHECK(r.layer == Layer::Syscall);

    EventRecord api;
    api.context = ctx_with_uid(10050);
    api.kind = UserProbeHit{kSimOpenDexFileAddr};
    r = resolve_event(api, addresses);
    CHECK(r.display_name == "dalvik.system.DexFile.openDexFile");
    CHECK(r.layer == Layer::Api);

    EventRecord native;
    native.context = ctx_with_uid(10050);
    native.kind = UserProbeHit{kSimLibcOpenAddr};
    r = resolve_event(native, addresses);
    CHECK(r.display_name == "libc.so!open");
    CHECK(r.layer == Layer::Native);

    EventRecord unknown;
    unknown.context = ctx_with_uid(10050);
    unknown.kind = UserProbeHit{0xdead};
    r = resolve_event(unknown, addresses);
    CHECK(r.display_name == "unknown@0xdead");
    CHECK(r.layer == Layer::Native);

    EventRecord kprobe;
    kprobe.context = ctx_with_uid(10050);
    kprobe.kind = KprobeHit{kKprobeIdVfsWrite};
    r = resolve_event(kprobe, addresses);
    CHECK(r.display_name == "vfs_write");
    CHECK(r.layer == Layer::Kernel);
}

TEST_CASE("kprobe registry assigns stable ids")
{
    KprobeRegistry reg;
    CHECK(*reg.id_for("vfs_write") == kKprobeIdVfsWrite);
    CHECK(*reg.id_for("sched_process_exit") == kKprobeIdSchedProcessExit);
    CHECK(reg.id_for("my_custom_fn") == nullptr);

    HooksConfig cfg;
    cfg.hooks.push_back(HookSpec::kprobe("vfs_write"));
    cfg.hooks.push_back(HookSpec::kprobe("my_custom_fn"));
    KprobeRegistry from_cfg = KprobeRegistry::from_config(cfg);
    CHECK(*from_cfg.id_for("vfs_write") == kKprobeIdVfsWrite); // fixed id kept
    CHECK(*from_cfg.id_for("my_custom_fn") == 100);
    CHECK(*from_cfg.name_for(100) == "my_custom_fn");
}

TEST_CASE("dispatch loop: filtering, counting, alerts")
{
    SUBCASE("benign scenario through both signatures: no alerts")
    {
        auto source = simulate_scenario(Scenario::make(ScenarioName::Benign, 1));
        PipelineOptions opts;
        RunSummary summary = run_pipeline(*source, default_multilayer_config(),
                                          simulation_address_map(), opts);
        CHECK(summary.alerts_by_kind.empty());
        CHECK(summary.events_traced == summary.events_seen);
        CHECK(summary.signature_errors == 0);
    }
    SUBCASE("dropper_dex: exactly one dropped-file alert, matching the oracle")
    {
        Scenario s = Scenario::make(ScenarioName::DropperDex, 7);
        auto events = drain(*simulate_scenario(s));
        auto oracle = dropper_oracle(events);
        REQUIRE(oracle.size() == 1);

        VectorSource source(events);
        PipelineOptions opts;
        std::vector<std::string> alert_lines;
        opts.jsonl_alerts = true;
        opts.alert_line = [&](std::string_view line) { alert_lines.emplace_back(line); };
        RunSummary summary =
            run_pipeline(source, default_multilayer_config(), simulation_address_map(), opts);
        CHECK(summary.alerts_by_kind.at("dropped_file") == 1);
        CHECK(summary.alerts_by_kind.size() == 1);
        REQUIRE(alert_lines.size() == 1);
        CHECK(alert_lines[0].find("\"kind\":\"dropped_file\"") != std::string::npos);
        CHECK(alert_lines[0].find(std::to_string(s.inode())) != std::string::npos);
    }
    SUBCASE("a uid filter that matches nothing traces nothing")
    {
        HooksConfig cfg = default_multilayer_config();
        cfg.filter = FilterSpec::uid_list({99999});
        auto source = simulate_scenario(Scenario::make(ScenarioName::DropperDex, 1));
        RunSummary summary =
            run_pipeline(*source, cfg, simulation_address_map(), PipelineOptions{});
        CHECK(summary.events_traced == 0);
        CHECK(summary.events_seen > 0);
        CHECK(summary.alerts_by_kind.empty());
    }
}

TEST_CASE("filter soundness: no off-uid event reaches sinks or signatures")
{
    // Mixed-uid stream: interleave two scenarios with different uids.
    auto a = drain(*simulate_scenario(Scenario::make(ScenarioName::DropperDex, 1, 10050, 4242)));
    auto b = drain(*simulate_scenario(Scenario::make(ScenarioName::Benign, 1, 10333, 5555)));
    std::vector<EventRecord> mixed;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (i < a.size())
            mixed.push_back(a[i++]);
        if (j < b.size())
            mixed.push_back(b[j++]);
    }

    VectorSource source(mixed);
    EffectiveFilter filter = EffectiveFilter::make(FilterSpec::uid_list({10050}));
    NameResolver resolver(simulation_address_map(), KprobeRegistry());
    ProcessTable table;
    CollectingEventSink events;
    CollectingAlertSink alerts;
    EventSink* event_sinks[] = {&events};
    AlertSink* alert_sinks[] = {&alerts};
    RunSummary summary =
        dispatch_loop(source, filter, resolver, {}, event_sinks, alert_sinks, table);

    CHECK(summary.events_seen == mixed.size());
    CHECK(summary.events_traced == a.size());
    for (const ResolvedEvent& e : events.events)
        CHECK(e.record.context.uid == 10050);
}

TEST_CASE("process table entries disappear on process exit")
{
    std::vector<EventRecord> events;
    EventRecord e1;
    e1.context = {100, 77, 77, 1, 10050, "app"};
    e1.kind = SyscallEnter{56};
    e1.args = {ArgValue::of_int(-100), ArgValue::of_str("/x"), ArgValue::of_int(0),
               ArgValue::of_uint(0)};
    events.push_back(e1);
    EventRecord exit_event;
    exit_event.context = {200, 77, 77, 1, 10050, "app"};
    exit_event.kind = KprobeHit{kKprobeIdSchedProcessExit};
    events.push_back(exit_event);

    VectorSource source(events);
    EffectiveFilter filter = EffectiveFilter::make(FilterSpec::all_user_apps());
    NameResolver resolver(AddressMap{}, KprobeRegistry());
    ProcessTable table;
    dispatch_loop(source, filter, resolver, {}, {}, {}, table);
    CHECK_FALSE(table.contains(77));
}

TEST_CASE("one signature failing does not suppress another's alerts")
{
    struct ThrowingSignature final : Signature {
        std::string_view name() const override { return "broken"; }
        void on_event(const ResolvedEvent&, std::vector<Alert>&) override
        {
            throw std::runtime_error("boom");
        }
    };

    Scenario s = Scenario::make(ScenarioName::DropperDex, 3);
    auto events = drain(*simulate_scenario(s));
    VectorSource source(events);
    EffectiveFilter filter = EffectiveFilter::make(FilterSpec::all_user_apps());
    NameResolver resolver(simulation_address_map(), KprobeRegistry());
    ProcessTable table;

    ThrowingSignature broken;
    DropperSignature dropper;
    Signature* signatures[] = {&broken, &dropper};
    CollectingAlertSink alerts;
    AlertSink* alert_sinks[] = {&alerts};
    RunSummary summary =
        dispatch_loop(source, filter, resolver, signatures, {}, alert_sinks, table);

    CHECK(summary.signature_errors == summary.events_traced); // broken threw every time
    REQUIRE(alerts.alerts.size() == 1);
    CHECK(alerts.alerts[0].kind == Alert::Kind::DroppedFile);
    CHECK(alerts.alerts[0].alert_seq == 1);
}

TEST_CASE("determinism: identical source bytes give identical summaries and alert lines")
{
    Scenario s = Scenario::make(ScenarioName::DropperElf, 4);
    auto run_once = [&](std::string& alert_jsonl) {
        auto source = simulate_scenario(s);
        PipelineOptions opts;
        opts.jsonl_alerts = true;
        opts.alert_line = [&](std::string_view line) {
            alert_jsonl.append(line);
            alert_jsonl.push_back('\n');
        };
        return run_pipeline(*source, default_multilayer_config(), simulation_address_map(),
                            opts);
    };
    std::string first, second;
    RunSummary s1 = run_once(first);
    RunSummary s2 = run_once(second);
    CHECK(s1 == s2);
    CHECK(first == second);
    CHECK_FALSE(first.empty());
}

TEST_CASE("text rendering is stable and carries the spec'd columns")
{
    EventRecord rec;
    rec.context = {1'000'000'000, 4242, 4243, 911, 10050, "ufD.wykyx.vlhvh"};
    rec.kind = SyscallEnter{56};
    rec.args = {ArgValue::of_int(-100), ArgValue::of_str("/data/f"), ArgValue::of_int(577),
                ArgValue::of_uint(384)};
    ResolvedEvent resolved = resolve_event(rec, AddressMap{});
    std::string line = render_event_text(resolved, 1'000'000'000);
    CHECK(line == "00:00:00.000000 10050 4242 4243 911 ufD.wykyx.vlhvh syscall "
                  "openat(-100, \"/data/f\", 577, 384)");

    EventRecord exit_rec;
    exit_rec.context = {2'500'000'000, 4242, 4243, 911, 10050, "ufD.wykyx.vlhvh"};
    exit_rec.kind = SyscallExit{56, 33};
    std::string exit_line =
        render_event_text(resolve_event(exit_rec, AddressMap{}), 1'000'000'000);
    CHECK(exit_line == "00:00:01.500000 10050 4242 4243 911 ufD.wykyx.vlhvh syscall openat() = 33");
}

TEST_CASE("lossy utf8 replaces invalid sequences")
{
    CHECK(lossy_utf8("plain ascii") == "plain ascii");
    CHECK(lossy_utf8("caf\xc3\xa9") == "caf\xc3\xa9");
    CHECK(lossy_utf8(std::string_view("\xff\xfe", 2)) == "\xef\xbf\xbd\xef\xbf\xbd");
    CHECK(lossy_utf8(std::string_view("a\xc3", 2)) == "a\xef\xbf\xbd"); // truncated sequence
}
