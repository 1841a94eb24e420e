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

#include <stdexcept>
#include <string>

namespace tracescope {

// One code per failure class named in the module contracts. Diagnostics that
// are reported as values (validate(), resolution issues) reuse these codes.
enum class Errc {
    syntax_error,
    unknown_kind,
    duplicate_hook,
    invalid_arg_types,
    malformed_line,
    malformed_method_entry,
    unsupported_descriptor,
    not_an_elf,
    symbol_not_found,
    too_many_args,
    hook_unresolved,
    address_collision,
    bad_magic,
    truncated,
    unknown_kind_tag,
    unknown_arg_type,
    io_error,
    format_error,
    unknown_package,
    mixed_identity,
    malformed_write_event,
    invalid_argument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message)
{
    throw Error(code, std::string(errc_name(code)) + ": " + message);
}

} // namespace tracescope
