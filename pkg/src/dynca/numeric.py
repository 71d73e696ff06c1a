"""Arithmetic kernel: exact rationals, floor-log tables, bit helpers.

Preorder numbers ("ordinals") are plain Python ints. With the dynamic
parameter set (c=5, e=4) they reach c*n**4, which clears 64 bits once n
grows past roughly 39000, so nothing in this package assumes a native
word width; Python ints give the needed 128-bit range for free.

All base/ratio comparisons are exact: a rational is a (num, den) pair
of ints with den > 0, and every threshold is an integer ceiling of an
exact rational power. No floats anywhere.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import NamedTuple


class Rational(NamedTuple):
    num: int
    den: int


def cmp_rational(a: Rational, b: Rational) -> int:
    """Three-way compare of two rationals by comparing a.num*b.den and b.num*a.den.

    Returns -1, 0, or 1. Denominators must be positive.
    """
    if a[1] <= 0 or b[1] <= 0:
        raise ValueError("rational denominators must be positive")
    lhs = a[0] * b[1]
    rhs = b[0] * a[1]
    if lhs < rhs:
        return -1
    if lhs > rhs:
        return 1
    return 0


def msb(b: int) -> int:
    """Index of the most significant set bit, 0-indexed. msb(0b0110) == 2."""
    if b <= 0:
        raise ValueError("msb requires a positive word")
    return b.bit_length() - 1


def lsb(b: int) -> int:
    """Index of the least significant set bit, 0-indexed. lsb(0b0110) == 1."""
    if b <= 0:
        raise ValueError("lsb requires a positive word")
    return (b & -b).bit_length() - 1


def _scan_msb(b: int) -> int:
    i = -1
    while b:
        b >>= 1
        i += 1
    return i


def _scan_lsb(b: int) -> int:
    i = 0
    while not b & 1:
        b >>= 1
        i += 1
    return i


class LogTable:
    """Floor-log machinery for a fixed rational base beta > 1.

    The least integer at or above beta**i (an exact ceiling of the exact
    rational power) is the threshold for exponent i, so floor_log_beta
    reduces to a binary search over an int array. Bases close to 1 give
    several exponents the same ceiling; ties keep only the largest
    exponent, which leaves thresholds strictly increasing and resolves
    an equal-threshold lookup to the right answer. For beta == 2 the
    answer is r.bit_length() - 1 directly.

    The byte tables _msb8/_lsb8 are the portable reference for the bit
    scans; msb()/lsb() use int.bit_length, and msb_by_table/lsb_by_table
    walk the word in 8-bit chunks. Tests hold all three paths equal.
    """

    def __init__(self, beta: Rational, max_r: int):
        bn, bd = beta
        if bd <= 0 or bn <= bd:
            raise ValueError("beta must be a rational greater than 1")
        if max_r < 1:
            raise ValueError("max_r must be at least 1")
        self.beta = Rational(bn, bd)
        self.max_r = max_r
        self._beta_is_two = bn == 2 * bd
        thresholds = [1]
        expos = [0]
        num, den = bn, bd
        i = 1
        while True:
            t = -(-num // den)
            if t == thresholds[-1]:
                expos[-1] = i
            else:
                thresholds.append(t)
                expos.append(i)
            if t > max_r:
                break
            num *= bn
            den *= bd
            i += 1
        self.thresholds = thresholds
        self.expos = expos
        self._msb8 = [0] * 256
        self._lsb8 = [0] * 256
        for v in range(1, 256):
            self._msb8[v] = _scan_msb(v)
            self._lsb8[v] = _scan_lsb(v)

    def floor_log_beta(self, r: int) -> int:
        """Largest i with beta**i <= r, for 1 <= r <= max_r."""
        if r < 1:
            raise ValueError("floor_log_beta requires r >= 1")
        if r > self.max_r:
            raise ValueError(f"r={r} exceeds the table range {self.max_r}")
        if self._beta_is_two:
            return r.bit_length() - 1
        return self.expos[bisect_right(self.thresholds, r) - 1]

    def msb(self, b: int) -> int:
        return msb(b)

    def lsb(self, b: int) -> int:
        return lsb(b)

    def msb_by_table(self, b: int) -> int:
        if b <= 0:
            raise ValueError("msb requires a positive word")
        shift = 0
        while b >> (shift + 8):
            shift += 8
        return shift + self._msb8[b >> shift]

    def lsb_by_table(self, b: int) -> int:
        if b <= 0:
            raise ValueError("lsb requires a positive word")
        shift = 0
        while not b & (0xFF << shift):
            shift += 8
        return shift + self._lsb8[(b >> shift) & 0xFF]
