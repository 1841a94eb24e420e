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

#include "tracescope/address.hpp"

#include <cstring>

namespace tracescope {

namespace {

// Minimal ELF64 little-endian reader over section headers. Offsets follow the
// System V gABI structure layouts.
constexpr uint32_t kShtSymtab = 2;
constexpr uint32_t kShtDynsym = 11;
constexpr uint32_t kPtLoad = 1;
constexpr uint32_t kPfX = 1;

class Image {
public:
    explicit Image(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    uint8_t u8(uint64_t off) const
    {
        check(off, 1);
        return bytes_[off];
    }

    uint16_t u16(uint64_t off) const
    {
        check(off, 2);
        return static_cast<uint16_t>(bytes_[off] | bytes_[off + 1] << 8);
    }

    uint32_t u32(uint64_t off) const
    {
        check(off, 4);
        return static_cast<uint32_t>(bytes_[off]) |
               static_cast<uint32_t>(bytes_[off + 1]) << 8 |
               static_cast<uint32_t>(bytes_[off + 2]) << 16 |
               static_cast<uint32_t>(bytes_[off + 3]) << 24;
    }

    uint64_t u64(uint64_t off) const
    {
        return static_cast<uint64_t>(u32(off)) | static_cast<uint64_t>(u32(off + 4)) << 32;
    }

    std::string_view cstr(uint64_t off) const
    {
        check(off, 1);
        size_t end = off;
        while (end < bytes_.size() && bytes_[end] != 0)
            ++end;
        if (end == bytes_.size())
            fail(Errc::not_an_elf, "unterminated string table entry");
        return {reinterpret_cast<const char*>(bytes_.data() + off), end - off};
    }

    size_t size() const { return bytes_.size(); }

private:
    void check(uint64_t off, uint64_t n) const
    {
        if (off > bytes_.size() || bytes_.size() - off < n)
            fail(Errc::not_an_elf, "structure exceeds image size");
    }

    std::span<const uint8_t> bytes_;
};

struct Section {
    uint32_t type;
    uint64_t offset;
    uint64_t size;
    uint64_t entsize;
    uint32_t link;
};

Section read_section(const Image& img, uint64_t shoff, uint16_t entsize, uint16_t index)
{
    uint64_t base = shoff + static_cast<uint64_t>(entsize) * index;
    return {img.u32(base + 4), img.u64(base + 24), img.u64(base + 32), img.u64(base + 56),
            img.u32(base + 40)};
}

} // namespace

SymbolRecord read_symbol_offset(std::span<const uint8_t> library_image,
                                std::string_view symbol_name)
{
    Image img(library_image);
    if (img.size() < 64)
        fail(Errc::not_an_elf, "image smaller than an ELF header");
    static const uint8_t kMagic[4] = {0x7f, 'E', 'L', 'F'};
    for (int i = 0; i < 4; ++i) {
        if (img.u8(i) != kMagic[i])
            fail(Errc::not_an_elf, "bad magic");
    }
    if (img.u8(4) != 2)
        fail(Errc::not_an_elf, "not a 64-bit object");
    if (img.u8(5) != 1)
        fail(Errc::not_an_elf, "not little-endian");

    uint64_t phoff = img.u64(32);
    uint64_t shoff = img.u64(40);
    uint16_t phentsize = img.u16(54);
    uint16_t phnum = img.u16(56);
    uint16_t shentsize = img.u16(58);
    uint16_t shnum = img.u16(60);
    if (shoff == 0 || shnum == 0 || shentsize < 64)
        fail(Errc::not_an_elf, "missing section headers");

    // Prefer .dynsym, fall back to .symtab for stripped-dynamic test objects.
    int sym_index = -1;
    for (uint16_t i = 0; i < shnum; ++i) {
        Section s = read_section(img, shoff, shentsize, i);
        if (s.type == kShtDynsym) {
            sym_index = i;
            break;
        }
        if (s.type == kShtSymtab && sym_index < 0)
            sym_index = i;
    }
    if (sym_index < 0)
        fail(Errc::symbol_not_found,
             std::string(symbol_name) + " (no dynamic symbol table)");

    Section symtab = read_section(img, shoff, shentsize, static_cast<uint16_t>(sym_index));
    if (symtab.entsize < 24 || symtab.link >= shnum)
        fail(Errc::not_an_elf, "bad symbol table layout");
    Section strtab = read_section(img, shoff, shentsize, static_cast<uint16_t>(symtab.link));

    uint64_t st_value = 0;
    bool found = false;
    uint64_t count = symtab.entsize == 0 ? 0 : symtab.size / symtab.entsize;
    for (uint64_t i = 0; i < count; ++i) {
        uint64_t sym = symtab.offset + i * symtab.entsize;
        uint32_t name_off = img.u32(sym);
        if (name_off == 0)
            continue;
        if (img.cstr(strtab.offset + name_off) != symbol_name)
            continue;
        uint16_t shndx = img.u16(sym + 6);
        if (shndx == 0)
            continue; // undefined reference, not a definition
        st_value = img.u64(sym + 8);
        found = true;
        break;
    }
    if (!found || st_value == 0)
        fail(Errc::symbol_not_found, std::string(symbol_name));

    // Offset relative to the executable segment mapping: subtract the vaddr of
    // the executable PT_LOAD containing the symbol. Objects without one keep
    // the raw value (single-segment layouts loaded from vaddr 0).
    uint64_t offset = st_value;
    for (uint16_t i = 0; i < phnum; ++i) {
        uint64_t base = phoff + static_cast<uint64_t>(phentsize) * i;
        if (img.u32(base) != kPtLoad || (img.u32(base + 4) & kPfX) == 0)
            continue;
        uint64_t vaddr = img.u64(base + 16);
        uint64_t memsz = img.u64(base + 40);
        if (st_value >= vaddr && st_value < vaddr + memsz) {
            offset = st_value - vaddr;
            break;
        }
    }
    return {std::string(symbol_name), offset};
}

} // namespace tracescope
