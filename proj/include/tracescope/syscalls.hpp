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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracescope/event.hpp"

namespace tracescope {

// arm64 system call numbering (asm-generic/unistd.h). Entries carry typed
// argument declarations only where this artifact constructs or inspects the
// arguments; the rest declare arity 0.
struct SyscallInfo {
    uint32_t nr;
    const char* name;
    uint8_t argc;
    ArgType argv[6];

    std::vector<ArgType> args() const { return {argv, argv + argc}; }
};

std::span<const SyscallInfo> syscall_table();
const SyscallInfo* syscall_by_nr(uint32_t nr);
const SyscallInfo* syscall_by_name(std::string_view name);

// "execve" for known numbers, "syscall_<nr>" otherwise.
std::string syscall_name(uint32_t nr);

} // namespace tracescope
