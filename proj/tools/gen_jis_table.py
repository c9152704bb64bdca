#!/usr/bin/env python3
"""Regenerates include/subalign/jis_x0208_table.hpp.

Enumerates every JIS X 0208 cell (ku 1..94, ten 1..94), encodes it as
Shift-JIS with the stock Python codec, and records the Unicode scalar it
decodes to. Both the Shift-JIS and EUC-JP codecs address the same plane,
so one table serves both.
"""

import sys


def sjis_bytes(ku: int, ten: int) -> bytes:
    lead = (ku - 1) // 2 + (0x81 if ku <= 62 else 0xC1)
    if ku % 2 == 1:
        trail = ten + 0x3F if ten <= 63 else ten + 0x40
    else:
        trail = ten + 0x9E
    return bytes([lead, trail])


def main() -> None:
    entries = []
    for ku in range(1, 95):
        for ten in range(1, 95):
            raw = sjis_bytes(ku, ten)
            try:
                ch = raw.decode("shift_jis")
            except UnicodeDecodeError:
                continue
            if len(ch) != 1:
                continue
            cp = ord(ch)
            if cp > 0xFFFF:
                raise RuntimeError(f"non-BMP mapping at {ku}-{ten}")
            entries.append(((ku - 1) * 94 + (ten - 1), cp))

    out = sys.stdout
    out.write("#pragma once\n\n")
    out.write("// Generated by tools/gen_jis_table.py. Do not edit by hand.\n")
    out.write("// Maps JIS X 0208 cell index (ku-1)*94 + (ten-1) to a Unicode scalar.\n\n")
    out.write("#include <cstdint>\n\n")
    out.write("namespace subalign::detail {\n\n")
    out.write("struct jis_entry {\n  std::uint16_t cell;\n  std::uint16_t unicode;\n};\n\n")
    out.write(f"inline constexpr jis_entry k_jis_x0208_table[{len(entries)}] = {{\n")
    for i in range(0, len(entries), 8):
        row = entries[i : i + 8]
        out.write("    " + " ".join(f"{{{c}, 0x{u:04X}}}," for c, u in row) + "\n")
    out.write("};\n\n")
    out.write("}  // namespace subalign::detail\n")


if __name__ == "__main__":
    main()
