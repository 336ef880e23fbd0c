"""Rel(G; R): the smallest relative boundary |∂Y|/|Y| over nonempty Y inside
the R-ball of the identity, with ∂Y = nbhd_1(Y) \\ Y for left multiplication.

Exact mode enumerates every subset of the ball with bitmask arithmetic;
heuristic mode returns an upper bound from sub-balls and local search.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .elements import Element
from .errors import ExactTooLarge
from .groups import MarkedGroup, make_group

EXACT_THRESHOLD = 22
_LOW_BITS = 16


class BallContext:
    """Elements of the (R+1)-ball of the identity, found by BFS.

    ``elements[:n_inner]`` is the R-ball, sorted by element key (bit i of a
    subset mask is the i-th of them); the outer shell follows.
    """

    def __init__(self, G: MarkedGroup, R: int):
        self.G = G
        self.R = R
        letters = [e for _, e in G.letters()]
        dist = {G.identity: 0}
        frontier = [G.identity]
        for r in range(R + 1):
            nxt = []
            for g in frontier:
                for s in letters:
                    h = G.mul(s, g)
                    if h not in dist:
                        dist[h] = r + 1
                        nxt.append(h)
            frontier = nxt
        inner = sorted((g for g, d in dist.items() if d <= R), key=lambda g: g.key())
        outer = sorted((g for g, d in dist.items() if d == R + 1), key=lambda g: g.key())
        self.elements: list[Element] = inner + outer
        self.n_inner = len(inner)
        self.dist = dist
        self.index = {g: i for i, g in enumerate(self.elements)}
        # closed neighbourhood of each inner element as a set of indices
        self.nbhd = []
        for g in inner:
            nb = {self.index[g]}
            for s in letters:
                nb.add(self.index[G.mul(s, g)])
            self.nbhd.append(nb)

    def inner(self) -> list[Element]:
        return self.elements[:self.n_inner]

    def ball(self, r: int) -> list[int]:
        return [i for i in range(self.n_inner) if self.dist[self.elements[i]] <= r]


def boundary(G: MarkedGroup, Y: Iterable[Element]) -> set[Element]:
    """∂_1(Y) = {s y : y in Y, s in S u S^{-1}} \\ Y."""
    Y = set(Y)
    if not Y:
        raise ValueError("boundary needs a nonempty set")
    out = set()
    for y in Y:
        for _, s in G.letters():
            h = G.mul(s, y)
            if h not in Y:
                out.add(h)
    return out


@dataclass
class FolnerEntry:
    """Rel value at radius R with a witness set (element keys)."""

    R: int
    value: Fraction
    witness: tuple[bytes, ...]
    exact: bool
    boundary_size: int

    @property
    def witness_size(self) -> int:
        return len(self.witness)

    def __float__(self):
        return float(self.value)


def _entry(ctx: BallContext, idx: list[int], exact: bool) -> FolnerEntry:
    Y = set(idx)
    nb = set().union(*(ctx.nbhd[i] for i in idx))
    b = len(nb - Y)
    keys = tuple(sorted(ctx.elements[i].key() for i in idx))
    return FolnerEntry(ctx.R, Fraction(b, len(Y)), keys, exact, b)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).sum(axis=-1, dtype=np.int64) if a.ndim > 1 else np.bitwise_count(a).astype(np.int64)


def _exact(ctx: BallContext) -> FolnerEntry:
    n = ctx.n_inner
    total = len(ctx.elements)
    words = (total + 63) // 64
    masks = np.zeros((n, words), dtype=np.uint64)
    for i, nb in enumerate(ctx.nbhd):
        for j in nb:
            masks[i, j // 64] |= np.uint64(1) << np.uint64(j % 64)
    low = min(n, _LOW_BITS)
    # table[x] = union of the closed neighbourhoods of the bits of x
    table = np.zeros((1 << low, words), dtype=np.uint64)
    ysize = np.zeros(1 << low, dtype=np.int64)
    for i in range(low):
        half = 1 << i
        table[half:2 * half] = table[:half] | masks[i]
        ysize[half:2 * half] = ysize[:half] + 1
    best = None
    ties: list[int] = []
    for hi in range(1 << (n - low)):
        hmask = np.zeros(words, dtype=np.uint64)
        hsize = 0
        for i in range(n - low):
            if hi >> i & 1:
                hmask |= masks[low + i]
                hsize += 1
        nb = _popcount(table | hmask)
        y = ysize + hsize
        if hi == 0:
            nb, y = nb[1:], y[1:]
            base = 1
        else:
            base = 0
        ratio = (nb - y) / y
        r = float(ratio.min())
        if best is None or r < best:
            best = r
            ties = []
        if r == best:
            for j in np.flatnonzero(ratio == r):
                ties.append((hi << low) | int(j + base))
    # canonical tie-break: lexicographic order of the sorted element keys
    keys = [g.key() for g in ctx.inner()]

    def key_list(mask):
        return [keys[i] for i in range(n) if mask >> i & 1]

    pick = min(ties, key=key_list)
    return _entry(ctx, [i for i in range(n) if pick >> i & 1], True)


def _heuristic(ctx: BallContext) -> FolnerEntry:
    n = ctx.n_inner
    cands = [_entry(ctx, ctx.ball(r), False) for r in range(ctx.R + 1)]
    best = min(cands, key=lambda e: e.value)
    cur = {ctx.index[g] for g in _by_key(ctx, best.witness)}
    cur_val = best.value

    def value(S):
        nb = set().union(*(ctx.nbhd[i] for i in S))
        return Fraction(len(nb - S), len(S))

    improved = True
    while improved:
        improved = False
        nb = set().union(*(ctx.nbhd[i] for i in cur))
        adds = [cur | {i} for i in sorted(nb - cur) if i < n]
        dels = [cur - {i} for i in sorted(cur)] if len(cur) > 1 else []
        for S in adds + dels:
            v = value(S)
            if v < cur_val:
                cur, cur_val = S, v
                improved = True
                break
    return _entry(ctx, sorted(cur), False)


def _by_key(ctx: BallContext, keys):
    lookup = {g.key(): g for g in ctx.inner()}
    return [lookup[k] for k in keys]


def rel(G: MarkedGroup | str, R: int, mode: str = "exact",
        threshold: int = EXACT_THRESHOLD, ctx: BallContext | None = None) -> FolnerEntry:
    """Rel(G; R) exactly (``mode="exact"``) or as a heuristic upper bound."""
    if isinstance(G, str):
        G = make_group(G)
    if R < 1:
        raise ValueError("R must be >= 1")
    ctx = ctx or BallContext(G, R)
    if mode == "exact":
        if ctx.n_inner > threshold:
            raise ExactTooLarge(f"{G.spec}: {ctx.n_inner}-element {R}-ball exceeds exact threshold {threshold}")
        return _exact(ctx)
    if mode == "heuristic":
        return _heuristic(ctx)
    raise ValueError(f"unknown mode {mode!r}")


def recompute(G: MarkedGroup, entry: FolnerEntry, ctx: BallContext | None = None) -> Fraction:
    """|∂Y|/|Y| for the entry's witness, from scratch via group multiplication."""
    ctx = ctx or BallContext(G, entry.R)
    Y = _by_key(ctx, entry.witness)
    return Fraction(len(boundary(G, Y)), len(Y))


def rel_profile(G: MarkedGroup | str, rmax: int, threshold: int = EXACT_THRESHOLD,
                heuristic_beyond: bool = True) -> list[FolnerEntry]:
    """Rel(G; R) for R = 1..rmax, exact while the ball fits the threshold.

    A rise between exact entries would contradict Rel(G; R) >= Rel(G; R+1)
    and is reported as an internal error.
    """
    if isinstance(G, str):
        G = make_group(G)
    out = []
    for R in range(1, rmax + 1):
        ctx = BallContext(G, R)
        if ctx.n_inner <= threshold:
            e = rel(G, R, "exact", threshold, ctx)
        elif heuristic_beyond:
            e = rel(G, R, "heuristic", threshold, ctx)
        else:
            break
        out.append(e)
    exact = [e for e in out if e.exact]
    for a, b in zip(exact, exact[1:]):
        if b.value > a.value:
            raise RuntimeError(f"internal error: Rel rose from {a.value} at R={a.R} to {b.value} at R={b.R}")
    return out


def profile_csv(entries: list[FolnerEntry]) -> str:
    buf = io.StringIO()
    buf.write("R,value_num,value_den,exact,witness_size\n")
    for e in entries:
        buf.write(f"{e.R},{e.value.numerator},{e.value.denominator},{str(e.exact).lower()},{e.witness_size}\n")
    return buf.getvalue()
