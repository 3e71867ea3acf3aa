// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_ROM_IO_HPP
#define PARMOR_ROM_IO_HPP

#include <string>

#include "parmor/rom.hpp"

namespace parmor {

// Reduced models travel as section-tagged plaintext so any implementation
// can parse them with a line reader:
//
//   # parmor rom v1
//   [dims]     r / n_u / n_y
//   [ansatz]   mode flags, diagonal shifts, domain bounds, and one
//              descriptor line per weight function (fB = const 1, ...)
//   [theta]    one "v = <decimal>" per entry, 17 significant digits
//
// Writes are atomic and bit-stable; load(save(rom)) reproduces dimensions,
// ansatz, and every theta entry exactly. User-kind weight functions cannot
// be serialized (StructureError).
std::string rom_to_string(const ParametricRom &rom);
ParametricRom rom_from_string(const std::string &text, const std::string &origin);

void save_rom(const ParametricRom &rom, const std::string &path);
ParametricRom load_rom(const std::string &path);

} // namespace parmor

#endif // PARMOR_ROM_IO_HPP
