"""Ball kernels N ∩ nbhd_R(1) of a marked group and agreement between groups.

Two k-marked groups are close in the Cayley topology when the words of length
<= R that evaluate to the identity are the same in both.  Everything here
works on that word-set level; no graph isomorphism is involved.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ArityError
from .groups import MarkedGroup, make_group
from .words import Word, _fast_word, ball_size, letters_in_order

BALL_WORD_LIMIT = 10 ** 6


def default_rmax(arity: int, limit: int = BALL_WORD_LIMIT) -> int:
    """Largest R with |ball(arity, R)| <= limit."""
    r = 0
    while ball_size(arity, r + 1) <= limit:
        r += 1
    return r


def elm(G: MarkedGroup, w: Word) -> bool:
    """True iff w evaluates to the identity of G."""
    return G.evaluate(w) == G.identity


def vol(G: MarkedGroup, Z: Iterable[Word]) -> int:
    """Number of distinct elements among the images of the words in Z."""
    keys = {G.evaluate(w).key() for w in Z}
    if not keys:
        raise ValueError("vol needs a nonempty word set")
    return len(keys)


def iter_spheres(groups: list[MarkedGroup], radius: int) -> Iterator[list[tuple[tuple[int, ...], list]]]:
    """Yield, for r = 0..radius, the sphere of reduced words of length r in
    canonical order together with their images in each group.

    Images are built incrementally from the parent word (w = parent * letter),
    so each word costs one multiplication per group.
    """
    arity = groups[0].arity
    for G in groups:
        if G.arity != arity:
            raise ArityError("groups must share the same arity")
    order = letters_in_order(arity)
    sphere = [((), [G.identity for G in groups])]
    yield sphere
    for _ in range(radius):
        nxt = []
        for w, imgs in sphere:
            last = w[-1] if w else 0
            for v in order:
                if v == -last:
                    continue
                nxt.append((w + (v,), [G.mul(g, G.letter(v)) for G, g in zip(groups, imgs)]))
        sphere = nxt
        yield sphere


@dataclass(frozen=True)
class BallKernel:
    """Identity-evaluating words of length <= radius, in canonical order."""

    arity: int
    radius: int
    members: tuple[Word, ...]

    def __contains__(self, w: Word) -> bool:
        return w in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_cache")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_cache", s)
        return s

    def __len__(self):
        return len(self.members)

    def restrict(self, radius: int) -> "BallKernel":
        return BallKernel(self.arity, radius, tuple(w for w in self.members if len(w) <= radius))

    def to_json(self) -> str:
        """Bit-stable JSON: {"arity", "radius", "members"} in that key order."""
        return json.dumps({"arity": self.arity, "radius": self.radius,
                           "members": [str(w) for w in self.members]},
                          separators=(",", ":"), ensure_ascii=True)

    @classmethod
    def from_json(cls, text: str) -> "BallKernel":
        from .words import parse_word

        d = json.loads(text)
        return cls(d["arity"], d["radius"], tuple(parse_word(s, d["arity"]) for s in d["members"]))


def ball_kernel(G: MarkedGroup, R: int) -> BallKernel:
    """All words of length <= R evaluating to the identity, canonical order."""
    if R < 0:
        raise ValueError("radius must be >= 0")
    members = []
    ident = G.identity
    for sphere in iter_spheres([G], R):
        for w, (g,) in sphere:
            if g == ident:
                members.append(_fast_word(G.arity, w))
    return BallKernel(G.arity, R, tuple(members))


@dataclass
class AgreementReport:
    """Outcome of comparing two ball kernels radius by radius.

    ``radius`` is the largest R <= rmax with equal kernels.  When it is below
    rmax, ``witness`` is the first word of length radius+1 (canonical order)
    on which the groups differ and ``witness_side`` says which group's kernel
    holds it (1 or 2).  ``kernel_sizes[r]`` = (|N_1 ∩ S_r|, |N_2 ∩ S_r|) for
    each fully compared sphere r.
    """

    radius: int
    rmax: int
    witness: Word | None = None
    witness_side: int | None = None
    kernel_sizes: list[tuple[int, int]] = field(default_factory=list)

    def to_dict(self):
        return {"radius": self.radius, "rmax": self.rmax,
                "witness": None if self.witness is None else str(self.witness),
                "witness_side": self.witness_side,
                "kernel_sizes": [list(x) for x in self.kernel_sizes]}


def agreement_radius(G1: MarkedGroup, G2: MarkedGroup, rmax: int | None = None) -> AgreementReport:
    """Largest R <= rmax with ball_kernel(G1, R) == ball_kernel(G2, R)."""
    if G1.arity != G2.arity:
        raise ArityError(f"arity mismatch: {G1.arity} vs {G2.arity}")
    if rmax is None:
        rmax = default_rmax(G1.arity)
    id1, id2 = G1.identity, G2.identity
    sizes = []
    r = 0
    for sphere in iter_spheres([G1, G2], rmax):
        n1 = n2 = 0
        for w, (a, b) in sphere:
            e1, e2 = a == id1, b == id2
            if e1 != e2:
                return AgreementReport(r - 1, rmax, _fast_word(G1.arity, w), 1 if e1 else 2, sizes)
            n1 += e1
            n2 += e2
        sizes.append((n1, n2))
        r += 1
    return AgreementReport(rmax, rmax, None, None, sizes)


@dataclass
class ConvergenceRow:
    index: int
    spec: str
    k: int | None
    report: AgreementReport
    threshold_met: bool
    agrees: bool

    def to_dict(self):
        d = {"index": self.index, "spec": self.spec, "k": self.k,
             "threshold_met": self.threshold_met, "agrees": self.agrees}
        d.update(self.report.to_dict())
        return d


def threshold_met(m: int, r: int, k: int | None, limit: MarkedGroup) -> bool:
    """Sufficient condition for radius-r agreement: m >= 2r+3, plus
    k > 2^r when the limit group has integer entries."""
    ok = m >= 2 * r + 3
    if limit.ring is not None and not limit.ring.finite:
        ok = ok and k is not None and k > 2 ** r
    return ok


def converge_certify(family, limit, r: int, rmax: int | None = None) -> list[ConvergenceRow]:
    """Agreement radius of each family member against a candidate limit.

    Parameters
    ----------
    family : FamilySpec
    limit : MarkedGroup or str
    r : int
        Target radius.  Each row records whether the sufficient threshold is
        met at r and whether agreement up to r actually holds.
    rmax : int, optional
        Radius explored (defaults to r).
    """
    if isinstance(limit, str):
        limit = make_group(limit)
    rmax = r if rmax is None else rmax
    rows = []
    km = family.km
    for pos, (idx, spec) in enumerate(family.specs()):
        G = make_group(spec)
        if G.arity != limit.arity:
            raise ArityError(f"{spec} has arity {G.arity}, limit has {limit.arity}")
        k = km[pos] if km else (G.ring.k if G.ring is not None and hasattr(G.ring, "k") else None)
        rep = agreement_radius(G, limit, rmax)
        rows.append(ConvergenceRow(idx, spec, k, rep, threshold_met(idx, r, k, limit), rep.radius >= r))
    return rows
