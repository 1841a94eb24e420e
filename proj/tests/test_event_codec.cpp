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
#include "tracescope/event.hpp"

using namespace tracescope;
using namespace tracescope::testing;

TEST_CASE("minimal syscall-exit message layout")
{
    EventRecord rec;
    rec.context = {}; // zeroed context, wire-level example
    rec.kind = SyscallExit{221, 0};

    auto bytes = encode_event(rec);
    // magic 4 + context 40 + tag 1 + (nr 4 + ret 8) + argnum 1
    CHECK(bytes.size() == 58);
    CHECK(bytes[0] == 0x44);
    CHECK(bytes[1] == 0x46);
    CHECK(bytes[2] == 0x50);
    CHECK(bytes[3] == 0x42);
    CHECK(bytes[44] == 2);    // kind tag
    CHECK(bytes[45] == 221);  // nr low byte
    CHECK(bytes[57] == 0);    // argnum

    CHECK(decode_event(bytes) == rec);
}

TEST_CASE("golden user-probe message, hand-assembled")
{
    EventRecord rec;
    rec.context = {0x12345678, 1111, 1112, 1, 10050, "app_process64"};
    rec.kind = UserProbeHit{0x7fb0001f40};
    rec.args = {ArgValue::of_str("libtest.so")};

    const uint8_t expected[] = {
        0x44, 0x46, 0x50, 0x42,                         // magic
        0x78, 0x56, 0x34, 0x12, 0x00, 0x00, 0x00, 0x00, // timestamp
        0x57, 0x04, 0x00, 0x00,                         // pid 1111
        0x58, 0x04, 0x00, 0x00,                         // tid 1112
        0x01, 0x00, 0x00, 0x00,                         // ppid
        0x42, 0x27, 0x00, 0x00,                         // uid 10050
        'a', 'p', 'p', '_', 'p', 'r', 'o', 'c',         // comm, NUL padded
        'e', 's', 's', '6', '4', 0x00, 0x00, 0x00,
        0x04,                                           // kind tag UserProbe
        0x40, 0x1f, 0x00, 0xb0, 0x7f, 0x00, 0x00, 0x00, // address
        0x01,                                           // argnum
        0x06,                                           // str type code
        0x0a, 0x00, 0x00, 0x00,                         // length 10
        'l', 'i', 'b', 't', 'e', 's', 't', '.', 's', 'o',
    };

    auto bytes = encode_event(rec);
    REQUIRE(bytes.size() == sizeof expected);
    CHECK(std::equal(bytes.begin(), bytes.end(), expected));
    CHECK(decode_event(bytes) == rec);
}

TEST_CASE("decode rejects bad magic and unknown tags")
{
    EventRecord rec;
    rec.context.pid = rec.context.tid = 1;
    rec.kind = SyscallEnter{56};
    auto bytes = encode_event(rec);

    SUBCASE("bad magic")
    {
        bytes[0] ^= 0xff;
        CHECK_THROWS_WITH_AS(decode_event(bytes), doctest::Contains("BadMagic"), Error);
    }
    SUBCASE("unknown kind tag")
    {
        bytes[44] = 9;
        try {
            decode_event(bytes);
            FAIL("expected UnknownKindTag");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::unknown_kind_tag);
            CHECK(std::string(e.what()).find("9") != std::string::npos);
        }
    }
    SUBCASE("unknown arg type code")
    {
        EventRecord with_arg = rec;
        with_arg.args = {ArgValue::of_int(5)};
        auto b = encode_event(with_arg);
        b[50] = 0x0b; // type code of the first argument
        try {
            decode_event(b);
            FAIL("expected UnknownArgType");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::unknown_arg_type);
        }
    }
}

TEST_CASE("every strict prefix decodes to Truncated")
{
    TestRng rng(77);
    for (int i = 0; i < 25; ++i) {
        auto bytes = encode_event(random_event_record(rng));
        for (size_t cut = 0; cut < bytes.size(); ++cut) {
            try {
                decode_event(std::span<const uint8_t>(bytes.data(), cut));
                FAIL("prefix of length ", cut, " decoded");
            } catch (const Error& e) {
                CHECK(e.code() == Errc::truncated);
            }
        }
    }
}

TEST_CASE("randomized round-trip")
{
    TestRng rng(2026);
    for (int i = 0; i < 2000; ++i) {
        EventRecord rec = random_event_record(rng);
        CHECK(decode_event(encode_event(rec)) == rec);
    }
}

TEST_CASE("comm truncates to 15 bytes plus NUL")
{
    EventRecord rec;
    rec.context.pid = rec.context.tid = 1;
    rec.context.comm = "a.very.long.process.name";
    rec.kind = SyscallEnter{56};

    EventRecord back = decode_event(encode_event(rec));
    CHECK(back.context.comm == "a.very.long.pro");
    CHECK(back.context.comm.size() == 15);
}

TEST_CASE("oversized str and bytes arguments are capped at 4096")
{
    EventRecord rec;
    rec.context.pid = rec.context.tid = 1;
    rec.kind = KprobeHit{1};
    rec.args = {ArgValue::of_str(std::string(6000, 'x')),
                ArgValue::of_bytes(std::vector<uint8_t>(5000, 0xab))};

    EventRecord back = decode_event(encode_event(rec));
    CHECK(std::get<std::string>(back.args[0].value).size() == kMaxArgPayload);
    CHECK(std::get<std::vector<uint8_t>>(back.args[1].value).size() == kMaxArgPayload);
}

TEST_CASE("arg type packing")
{
    CHECK(encode_arg_types({}) == 0x0);
    CHECK(encode_arg_types({ArgType::Str}) == 0x06);
    CHECK(encode_arg_types({ArgType::Addr, ArgType::Int}) == 0x0105);

    CHECK(decode_arg_types(0x0).empty());
    CHECK(decode_arg_types(0x0105) == std::vector<ArgType>{ArgType::Addr, ArgType::Int});

    SUBCASE("unknown code anywhere is rejected, even past a zero byte")
    {
        CHECK_THROWS_AS(decode_arg_types(0x09), Error);
        CHECK_THROWS_AS(decode_arg_types(0x0900000000000000ull), Error);
    }
    SUBCASE("more than eight types")
    {
        std::vector<ArgType> nine(9, ArgType::Int);
        CHECK_THROWS_AS(encode_arg_types(nine), Error);
    }
    SUBCASE("round-trip, exhaustive over short lists and randomized over long ones")
    {
        for (int a = 0; a <= 7; ++a) {
            for (int b = 0; b <= 7; ++b) {
                std::vector<ArgType> types;
                if (a != 0)
                    types.push_back(static_cast<ArgType>(a));
                if (a != 0 && b != 0)
                    types.push_back(static_cast<ArgType>(b));
                CHECK(decode_arg_types(encode_arg_types(types)) == types);
            }
        }
        TestRng rng(5);
        for (int i = 0; i < 500; ++i) {
            std::vector<ArgType> types(rng.range(kMaxArgs + 1));
            for (auto& t : types)
                t = static_cast<ArgType>(1 + rng.range(7)); // no interior None
            CHECK(decode_arg_types(encode_arg_types(types)) == types);
        }
    }
}
