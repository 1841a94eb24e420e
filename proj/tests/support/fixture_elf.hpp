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

#include <cstdint>
#include <string>
#include <vector>

namespace tracescope::testing {

struct FixtureSymbol {
    std::string name;
    uint64_t value; // st_value
};

// Builds a minimal valid ELF64 aarch64 shared object with a dynamic symbol
// table. exec_vaddr 0 produces a single RX PT_LOAD from vaddr 0; a nonzero
// exec_vaddr produces a read-only PT_LOAD for the headers and an RX PT_LOAD
// at that vaddr (split layout). Output is deterministic.
std::vector<uint8_t> build_fixture_elf(uint64_t exec_vaddr,
                                       const std::vector<FixtureSymbol>& symbols);

} // namespace tracescope::testing
