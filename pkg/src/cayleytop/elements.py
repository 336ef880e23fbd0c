"""Group elements for the finite families and the infinite limit groups.

Every element is immutable and hashable; equality is equality of the group
element.  ``key()`` gives a canonical byte string, injective within a family.

Products use the composition convention ``(g * h)(x) = g(h(x))`` for
permutations and ordinary matrix products for matrices, so a word
``w_1 w_2 ... w_n`` evaluates to ``pi(w_1) * pi(w_2) * ... * pi(w_n)``.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence

from .rings import ArbInt, Ring, ZMod, clmul


def _varint(x: int) -> bytes:
    # zigzag + LEB128, used wherever entries are unbounded
    z = (x << 1) if x >= 0 else ((-x) << 1) - 1
    out = bytearray()
    while True:
        b = z & 0x7F
        z >>= 7
        if z:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


class Element:
    __slots__ = ()

    def key(self) -> bytes:
        raise NotImplementedError

    def is_identity(self) -> bool:
        raise NotImplementedError


def element_key(e: Element) -> bytes:
    """Canonical byte key of an element (equal elements <=> equal keys)."""
    return e.key()


# --------------------------------------------------------------------------
# permutations


@dataclass(frozen=True, slots=True)
class Permutation(Element):
    """Bijection of {0, ..., m-1}; ``image[j]`` is the image of j."""

    image: tuple[int, ...]

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(m)))

    @property
    def degree(self) -> int:
        return len(self.image)

    def __mul__(self, other: "Permutation") -> "Permutation":
        g = self.image
        return Permutation(tuple([g[x] for x in other.image]))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, x in enumerate(self.image):
            inv[x] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.image))

    def key(self) -> bytes:
        # b"P" + degree (2 bytes) + images (1 byte each, 2 bytes if degree > 256)
        m = len(self.image)
        head = b"P" + m.to_bytes(2, "big")
        if m <= 256:
            return head + bytes(self.image)
        return head + struct.pack(f">{m}H", *self.image)


# --------------------------------------------------------------------------
# matrices over a ring


def _matmul(ring: Ring, m: int, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (m * m)
    cols = [b[j::m] for j in range(m)]
    if ring.characteristic2:
        for i in range(m):
            row = a[i * m:(i + 1) * m]
            for j in range(m):
                acc = 0
                for x, y in zip(row, cols[j]):
                    if x and y:
                        acc ^= clmul(x, y)
                out[i * m + j] = acc
    else:
        for i in range(m):
            row = a[i * m:(i + 1) * m]
            for j in range(m):
                out[i * m + j] = sum([x * y for x, y in zip(row, cols[j]) if x and y])
    norm = ring.normalize
    return tuple([norm(v) for v in out])


def identity_entries(m: int) -> tuple[int, ...]:
    return tuple(1 if i == j else 0 for i in range(m) for j in range(m))


@dataclass(frozen=True, slots=True)
class Matrix(Element):
    """Square matrix over ``ring`` with entries stored row-major."""

    ring: Ring
    size: int
    entries: tuple[int, ...]

    @classmethod
    def identity(cls, ring: Ring, m: int) -> "Matrix":
        return cls(ring, m, identity_entries(m))

    def __mul__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ring, self.size, _matmul(self.ring, self.size, self.entries, other.entries))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.size + j]

    def rows(self) -> list[tuple[int, ...]]:
        m = self.size
        return [self.entries[i * m:(i + 1) * m] for i in range(m)]

    def is_identity(self) -> bool:
        return self.entries == identity_entries(self.size)

    def key(self) -> bytes:
        # b"M" + ring name + b"|" + size (2 bytes) + entries (fixed width or varint)
        head = b"M" + self.ring.name.encode() + b"|" + self.size.to_bytes(2, "big")
        w = self.ring.entry_bytes()
        if w == 1:
            return head + bytes(self.entries)
        if w is not None:
            return head + b"".join(v.to_bytes(w, "big") for v in self.entries)
        return head + b"".join(_varint(v) for v in self.entries)


def elementary(ring: Ring, m: int, i: int, j: int, a: int) -> Matrix:
    """e_{i,j}(a): identity plus ``a`` at position (i, j), 0-based."""
    if i == j:
        raise ValueError("elementary matrix needs i != j")
    e = list(identity_entries(m))
    e[i * m + j] = ring.normalize(a)
    return Matrix(ring, m, tuple(e))


def cyclic_shift_matrix(ring: Ring, m: int, power: int = 1) -> Matrix:
    """sigma^power where sigma_{i,j} = 1 iff i = j + 1 (mod m)."""
    e = [0] * (m * m)
    for j in range(m):
        e[((j + power) % m) * m + j] = 1
    return Matrix(ring, m, tuple(e))


def determinant(mat: Matrix) -> int:
    """Determinant over the matrix's ring (Laplace-free, by permutation expansion
    for tiny sizes and by integer elimination otherwise)."""
    ring, m, e = mat.ring, mat.size, mat.entries
    if ring.characteristic2:
        # Gaussian elimination is awkward over F2[t]/(t^k); use the Leibniz
        # expansion through recursive minors with memoisation on column sets.
        from functools import lru_cache

        @lru_cache(maxsize=None)
        def minor(row: int, cols: int) -> int:
            if row == m:
                return 1
            acc = 0
            for c in range(m):
                if cols >> c & 1:
                    x = e[row * m + c]
                    if x:
                        acc ^= clmul(x, minor(row + 1, cols & ~(1 << c)))
            return ring.normalize(acc)

        return minor(0, (1 << m) - 1)
    from fractions import Fraction

    a = [[Fraction(e[i * m + j]) for j in range(m)] for i in range(m)]
    det = Fraction(1)
    for c in range(m):
        piv = next((r for r in range(c, m) if a[r][c] != 0), None)
        if piv is None:
            return ring.normalize(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, m):
            f = a[r][c] / a[c][c]
            if f:
                for j in range(c, m):
                    a[r][j] -= f * a[c][j]
    assert det.denominator == 1
    return ring.normalize(int(det))


# --------------------------------------------------------------------------
# PSL(2, p)


def _canonical_sign(p: int, e: tuple[int, ...]) -> tuple[int, ...]:
    e = tuple(x % p for x in e)
    for x in e:
        if x:
            if x <= p // 2:
                return e
            return tuple((-y) % p for y in e)
    return e


@dataclass(frozen=True, slots=True)
class ProjMatrix(Element):
    """2x2 matrix mod p up to a global sign; first nonzero entry lies in [1, p/2]."""

    p: int
    entries: tuple[int, int, int, int]

    @classmethod
    def make(cls, p: int, entries: Sequence[int]) -> "ProjMatrix":
        return cls(p, _canonical_sign(p, tuple(entries)))

    def __mul__(self, other: "ProjMatrix") -> "ProjMatrix":
        a, b, c, d = self.entries
        x, y, z, w = other.entries
        return ProjMatrix.make(self.p, (a * x + b * z, a * y + b * w, c * x + d * z, c * y + d * w))

    def inverse(self) -> "ProjMatrix":
        a, b, c, d = self.entries
        return ProjMatrix.make(self.p, (d, -b, -c, a))

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def key(self) -> bytes:
        return b"J" + struct.pack(">5I", self.p, *self.entries)


# --------------------------------------------------------------------------
# limit group elements


@dataclass(frozen=True, slots=True)
class ShiftPermutation(Element):
    """Bijection of Z of the form j -> gamma(j) + shift.

    ``support`` lists the pairs (j, gamma(j)) with gamma(j) != j, sorted by j;
    gamma is a finitely supported permutation of Z.
    """

    shift: int
    support: tuple[tuple[int, int], ...] = ()

    def __call__(self, j: int) -> int:
        for x, y in self.support:
            if x == j:
                return y + self.shift
        return j + self.shift

    def _gamma(self) -> dict[int, int]:
        return dict(self.support)

    def __mul__(self, other: "ShiftPermutation") -> "ShiftPermutation":
        gamma, delta = self._gamma(), other._gamma()
        q = other.shift
        cands = set(delta) | {x - q for x in gamma}
        eps = {}
        for j in cands:
            v = delta.get(j, j) + q
            v = gamma.get(v, v) - q
            if v != j:
                eps[j] = v
        return ShiftPermutation(self.shift + q, tuple(sorted(eps.items())))

    def inverse(self) -> "ShiftPermutation":
        p = self.shift
        eps = {y + p: x + p for x, y in self.support}
        return ShiftPermutation(-p, tuple(sorted(eps.items())))

    def is_identity(self) -> bool:
        return self.shift == 0 and not self.support

    def key(self) -> bytes:
        out = [b"S", _varint(self.shift)]
        for x, y in self.support:
            out.append(_varint(x))
            out.append(_varint(y))
        return b"".join(out)


@dataclass(frozen=True, slots=True)
class ShiftMatrix(Element):
    """Infinite matrix D * P^shift over Z x Z.

    P^s has (P^s)_{i,j} = 1 iff i = j + s (so the cyclic generator sigma is
    P^1), and D agrees with the identity outside the window [-n, n]^2.  The
    window is stored row-major and is always minimal: ``n = -1`` (empty
    window) means D is the identity.
    """

    ring: Ring
    shift: int
    n: int
    window: tuple[int, ...] = ()

    @classmethod
    def make(cls, ring: Ring, shift: int, entries: dict[tuple[int, int], int]) -> "ShiftMatrix":
        """Build from the nonidentity part of D given as {(i, j): value}."""
        return _trimmed(ring, shift, entries)

    def entry(self, i: int, j: int) -> int:
        """Entry (i, j) of the full infinite matrix."""
        return self.d_entry(i, j - self.shift)

    def d_entry(self, i: int, j: int) -> int:
        n = self.n
        if -n <= i <= n and -n <= j <= n:
            w = 2 * n + 1
            return self.window[(i + n) * w + (j + n)]
        return 1 if i == j else 0

    def d_dict(self) -> dict[tuple[int, int], int]:
        n, w = self.n, 2 * self.n + 1
        out = {}
        for a in range(w):
            for b in range(w):
                v = self.window[a * w + b]
                if v != (1 if a == b else 0):
                    out[(a - n, b - n)] = v
        return out

    def __mul__(self, other: "ShiftMatrix") -> "ShiftMatrix":
        ring = self.ring
        a = self.shift
        n1, n2 = self.n, other.n
        if n2 < 0:
            return ShiftMatrix(ring, a + other.shift, n1, self.window)
        if n1 < 0:
            # P^a D2 P^-a, i.e. D2 moved by a along the diagonal
            moved = {(i + a, j + a): v for (i, j), v in other.d_dict().items()}
            return _trimmed(ring, a + other.shift, moved)
        lo = min(-n1, a - n2)
        hi = max(n1, a + n2)
        size = hi - lo + 1
        A = list(identity_entries(size))
        B = list(identity_entries(size))
        w1 = 2 * n1 + 1
        off = -n1 - lo
        for r in range(w1):
            A[(r + off) * size + off:(r + off) * size + off + w1] = self.window[r * w1:(r + 1) * w1]
        w2 = 2 * n2 + 1
        off = a - n2 - lo
        for r in range(w2):
            B[(r + off) * size + off:(r + off) * size + off + w2] = other.window[r * w2:(r + 1) * w2]
        C = _matmul(ring, size, A, B)
        entries = {}
        for i in range(size):
            row = C[i * size:(i + 1) * size]
            for j, v in enumerate(row):
                if v != (1 if i == j else 0):
                    entries[(i + lo, j + lo)] = v
        return _trimmed(ring, a + other.shift, entries)

    def is_identity(self) -> bool:
        return self.shift == 0 and self.n < 0

    def max_entry_bits(self) -> int:
        return max((abs(v).bit_length() for v in self.window), default=1)

    def key(self) -> bytes:
        out = [b"W", self.ring.name.encode(), b"|", _varint(self.shift), _varint(self.n)]
        out.extend(_varint(v) for v in self.window)
        return b"".join(out)

    def is_upper_unitriangular(self) -> bool:
        """True when D is upper triangular with unit diagonal."""
        # d_dict holds only the entries differing from the identity
        return all(i < j for (i, j) in self.d_dict())


def _trimmed(ring: Ring, shift: int, entries: dict[tuple[int, int], int]) -> ShiftMatrix:
    norm = ring.normalize
    ent = {}
    for (i, j), v in entries.items():
        v = norm(v)
        if v != (1 if i == j else 0):
            ent[(i, j)] = v
    if not ent:
        return ShiftMatrix(ring, shift, -1, ())
    n = max(max(abs(i), abs(j)) for i, j in ent)
    w = 2 * n + 1
    win = list(identity_entries(w))
    for (i, j), v in ent.items():
        win[(i + n) * w + (j + n)] = v
    return ShiftMatrix(ring, shift, n, tuple(win))


def shift_matrix_elementary(ring: Ring, i: int, j: int, a: int) -> ShiftMatrix:
    return ShiftMatrix.make(ring, 0, {(i, j): a})


def fold_to_cyclic(e: ShiftMatrix, m: int, ring: Ring | None = None) -> Matrix:
    """Image of a limit-group element in SL(m, ring): indices of the window are
    read mod m and P^s becomes sigma^s.  Needs ``2n + 1 <= m``."""
    ring = ring or e.ring
    if 2 * e.n + 1 > m:
        raise ValueError(f"window half-width {e.n} does not fit in size {m}")
    ent = list(identity_entries(m))
    for (i, j), v in e.d_dict().items():
        ent[(i % m) * m + (j % m)] = ring.normalize(v)
    d = Matrix(ring, m, tuple(ent))
    return d * cyclic_shift_matrix(ring, m, e.shift)


def reduce_entries(e: ShiftMatrix, ring: Ring) -> ShiftMatrix:
    """Push every entry of an integer limit element into ``ring``."""
    return ShiftMatrix.make(ring, e.shift, e.d_dict())


__all__ = [
    "ArbInt",
    "Element",
    "Matrix",
    "Permutation",
    "ProjMatrix",
    "ShiftMatrix",
    "ShiftPermutation",
    "ZMod",
    "cyclic_shift_matrix",
    "determinant",
    "element_key",
    "elementary",
    "fold_to_cyclic",
    "reduce_entries",
]
