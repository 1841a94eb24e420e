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

#pragma once

#include <vector>

#include "fixture_elf.hpp"

namespace tracescope::testing {

struct FixtureLibrary {
    const char* file_name;
    uint64_t exec_vaddr;
    std::vector<FixtureSymbol> symbols;
};

// The four shipped library fixtures. libdl and libcamera2ndk use the split
// segment layout (nonzero executable vaddr) so symbol offsets are exercised
// relative to the executable mapping, not the file start.
inline std::vector<FixtureLibrary> fixture_libraries()
{
    return {
        {"libc.so", 0x0, {{"open", 0x1f40}, {"read", 0x1d80}, {"write", 0x1e20}}},
        {"libdl.so", 0x1000, {{"dlopen", 0x1a80}, {"dlsym", 0x1b40}, {"dlclose", 0x1bc0}}},
        {"libbinder_ndk.so", 0x0, {{"AIBinder_new", 0x3c20}, {"AIBinder_Class_define", 0x3a00}}},
        {"libcamera2ndk.so",
         0x2000,
         {{"ACameraManager_openCamera", 0x2e00}, {"ACameraManager_create", 0x2c00}}},
    };
}

} // namespace tracescope::testing
