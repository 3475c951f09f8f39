"""Small helpers for bitstrings stored as Python ints.

Strings are printed MSB-first: position 0 (the leftmost character) is the
most significant bit, so ``to_str(0b0110, 4) == "0110"``.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "weight",
    "parity",
    "dot",
    "bit_at",
    "set_bit",
    "to_str",
    "from_str",
    "rand_bits",
    "rand_parity_bits",
]


def weight(x: int) -> int:
    """Hamming weight of x."""
    return x.bit_count()


def parity(x: int) -> int:
    """Hamming weight of x mod 2."""
    return x.bit_count() & 1


def dot(a: int, b: int) -> int:
    """GF(2) inner product of two bit vectors."""
    return (a & b).bit_count() & 1


def bit_at(x: int, pos: int, width: int) -> int:
    """Bit at position pos (0 = leftmost / most significant) of a width-bit string."""
    if not 0 <= pos < width:
        raise IndexError(f"bit position {pos} out of range for width {width}")
    return (x >> (width - 1 - pos)) & 1


def set_bit(x: int, pos: int, width: int, value: int) -> int:
    """Return x with the bit at position pos set to value."""
    mask = 1 << (width - 1 - pos)
    return (x | mask) if value else (x & ~mask)


def to_str(x: int, width: int) -> str:
    """MSB-first string form, e.g. to_str(6, 4) == '0110'."""
    if x < 0 or x >= 1 << width:
        raise ValueError(f"{x} does not fit in {width} bits")
    return format(x, f"0{width}b")


def from_str(s: str) -> tuple[int, int]:
    """Parse an MSB-first bitstring; returns (value, width)."""
    if not s or any(c not in "01" for c in s):
        raise ValueError(f"not a bitstring: {s!r}")
    return int(s, 2), len(s)


def rand_bits(rng: np.random.Generator, width: int) -> int:
    """Uniform width-bit integer drawn from rng."""
    x = 0
    remaining = width
    while remaining > 0:
        chunk = min(remaining, 62)
        x = (x << chunk) | int(rng.integers(0, 1 << chunk))
        remaining -= chunk
    return x


def rand_parity_bits(rng: np.random.Generator, width: int, par: int) -> int:
    """Uniform width-bit integer with prescribed Hamming-weight parity."""
    if width < 1:
        raise ValueError("width must be >= 1")
    head = rand_bits(rng, width - 1) if width > 1 else 0
    last = par ^ parity(head)
    return (head << 1) | last
