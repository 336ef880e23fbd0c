"""Coefficient rings used by the matrix families.

Ring elements are plain Python ints:

* ``ZMod(k)``: residues normalised to ``[0, k)``;
* ``TruncPoly2(k)``: F_2[t]/(t^k) as bit masks below ``2**k`` (bit i holds the
  coefficient of t^i);
* ``ArbInt``: unbounded integers;
* ``Poly2``: F_2[t] as bit masks of arbitrary size.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, UnsupportedParameter


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit masks (multiplication in F_2[t])."""
    if a < b:
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


class Ring:
    name = "ring"
    finite = True
    characteristic2 = False

    def normalize(self, x: int) -> int:
        return x

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    zero = 0
    one = 1

    def generators(self) -> list[int]:
        """Ring generators a_1..a_l beyond 1 (empty for quotients of Z)."""
        return []

    def spec(self) -> str:
        return self.name

    def entry_bytes(self) -> int | None:
        """Fixed byte width of an entry in element keys, or None if unbounded."""
        return None

    def cardinality(self) -> int | None:
        return None


@dataclass(frozen=True)
class ZMod(Ring):
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise UnsupportedParameter(f"ZMod needs k >= 2, got {self.k}")

    @property
    def name(self):
        return f"zmod{self.k}"

    @property
    def characteristic2(self):
        return self.k == 2

    def normalize(self, x):
        return x % self.k

    def add(self, a, b):
        return (a + b) % self.k

    def neg(self, a):
        return (-a) % self.k

    def mul(self, a, b):
        return (a * b) % self.k

    def entry_bytes(self):
        return max(1, ((self.k - 1).bit_length() + 7) // 8)

    def cardinality(self):
        return self.k


@dataclass(frozen=True)
class TruncPoly2(Ring):
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise UnsupportedParameter(f"TruncPoly2 needs k >= 1, got {self.k}")

    @property
    def name(self):
        return f"f2t:{self.k}"

    characteristic2 = True

    @property
    def mask(self):
        return (1 << self.k) - 1

    def normalize(self, x):
        return x & self.mask

    def add(self, a, b):
        return a ^ b

    def neg(self, a):
        return a

    def mul(self, a, b):
        return clmul(a, b) & self.mask

    def generators(self):
        return [0b10 & self.mask]

    def entry_bytes(self):
        return max(1, (self.k + 7) // 8)

    def cardinality(self):
        return 1 << self.k


@dataclass(frozen=True)
class ArbInt(Ring):
    name = "int"
    finite = False

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b


@dataclass(frozen=True)
class Poly2(Ring):
    name = "f2t"
    finite = False
    characteristic2 = True

    def add(self, a, b):
        return a ^ b

    def neg(self, a):
        return a

    def mul(self, a, b):
        return clmul(a, b)

    def generators(self):
        return [0b10]


_RING_RE = re.compile(r"^(?:zmod(\d+)|f2t:(\d+)|int|f2t)$")


def parse_ring(text: str) -> Ring:
    """Parse ``zmod<k>``, ``f2t:<k>``, ``int`` or ``f2t``."""
    m = _RING_RE.match(text.strip())
    if not m:
        raise ParseError(f"unknown ring {text!r}", text, 0)
    if m.group(1) is not None:
        return ZMod(int(m.group(1)))
    if m.group(2) is not None:
        return TruncPoly2(int(m.group(2)))
    return ArbInt() if text.strip() == "int" else Poly2()
