#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata."""
import sys
import unicodedata


def ranges(pred):
    out, start = [], None
    for cp in range(0x110000):
        hit = pred(cp)
        if hit and start is None:
            start = cp
        elif not hit and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, 0x10FFFF))
    return out


def is_separator(cp):
    cat = unicodedata.category(chr(cp))
    return cat[0] in "PSZ" or cat == "Cc"


def lower_pairs():
    pairs = []
    for cp in range(0x110000):
        c = chr(cp)
        low = c.lower()
        if len(low) == 1 and low != c:
            pairs.append((cp, ord(low)))
    return pairs


def main():
    sep = ranges(is_separator)
    low = lower_pairs()
    w = sys.stdout.write
    w("// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n\n"
      % unicodedata.unidata_version)
    w("// Code points in general categories P*, S*, Z* and Cc.\n")
    w("inline constexpr CodepointRange kSeparatorRanges[] = {\n")
    for a, b in sep:
        w("    {0x%04X, 0x%04X},\n" % (a, b))
    w("};\n\n")
    w("// Simple one-to-one lowercase mappings.\n")
    w("inline constexpr CodepointPair kLowerMap[] = {\n")
    for a, b in low:
        w("    {0x%04X, 0x%04X},\n" % (a, b))
    w("};\n")


if __name__ == "__main__":
    main()
