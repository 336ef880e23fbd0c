"""Marked groups: generator tuples with an exact word evaluator.

``make_group`` understands the text specs

    sym:m=<int>            cycle:n=<int>          psl2:p=<prime>
    sl:m=<odd>,ring=<ring>,gens=<st|stu|stt'|stt'uu'>
    esl:m=<4n>,ring=<ring>,gens=hadad
    limit:sym
    limit:gl-shift,ring=<int|zmod<k>>,gens=<stu|st>
    limit:ut-shift,ring=<int|zmod<k>>

with ``<ring>`` one of ``zmod<k>`` or ``f2t:<k>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .elements import (
    Element,
    Matrix,
    Permutation,
    ProjMatrix,
    ShiftMatrix,
    ShiftPermutation,
    cyclic_shift_matrix,
    elementary,
    identity_entries,
    shift_matrix_elementary,
)
from .errors import ArityError, CapExceeded, ParseError, UnsupportedParameter
from .rings import ArbInt, Ring, TruncPoly2, ZMod, parse_ring
from .words import Word

DEFAULT_MAX_WINDOW = 64
DEFAULT_MAX_ENTRY_BITS = 4096


@dataclass(frozen=True)
class AtLeast:
    """Lower bound returned when a search gives up at ``value``."""

    value: int

    def __str__(self):
        return f">={self.value}"


class MarkedGroup:
    """A group with an ordered generating tuple (s_1, ..., s_k).

    Parameters
    ----------
    spec : str
        Canonical text spec of the group.
    family : str
        Family tag (``sym``, ``cycle``, ``psl2``, ``sl``, ``esl``, ``limit:sym``, ...).
    generators, inverses : sequence of Element
        s_i and s_i^{-1}, in marking order.
    identity : Element
    order : int, optional
        Known group order, None for infinite groups or when unknown.
    """

    def __init__(self, spec: str, family: str, generators: Sequence[Element],
                 inverses: Sequence[Element], identity: Element, order: int | None = None,
                 finite: bool = True, ring: Ring | None = None, params: dict | None = None,
                 names: Sequence[str] | None = None,
                 max_window: int = DEFAULT_MAX_WINDOW,
                 max_entry_bits: int = DEFAULT_MAX_ENTRY_BITS):
        if len(generators) != len(inverses) or not generators:
            raise ValueError("need one inverse per generator and at least one generator")
        self.spec = spec
        self.family = family
        self.generators = tuple(generators)
        self.inverses = tuple(inverses)
        self.identity = identity
        self.order = order
        self.finite = finite
        self.ring = ring
        self.params = dict(params or {})
        self.names = tuple(names) if names else tuple(f"s{i + 1}" for i in range(len(generators)))
        self.max_window = max_window
        self.max_entry_bits = max_entry_bits
        self._capped = isinstance(identity, ShiftMatrix)

    def __repr__(self):
        return f"MarkedGroup({self.spec!r})"

    @property
    def arity(self) -> int:
        return len(self.generators)

    def letter(self, v: int) -> Element:
        """Element for letter v (+i -> s_i, -i -> s_i^{-1})."""
        if v > 0:
            return self.generators[v - 1]
        return self.inverses[-v - 1]

    def letters(self) -> list[tuple[int, Element]]:
        """(letter, element) for S u S^{-1} in letter order +1, -1, +2, -2, ..."""
        out = []
        for i in range(self.arity):
            out.append((i + 1, self.generators[i]))
            out.append((-(i + 1), self.inverses[i]))
        return out

    def _check(self, e: Element) -> Element:
        if self._capped:
            if e.n > self.max_window:
                raise CapExceeded(f"window half-width {e.n} exceeds cap {self.max_window}")
            if e.window and e.max_entry_bits() > self.max_entry_bits:
                raise CapExceeded(f"entry size exceeds {self.max_entry_bits} bits")
        return e

    def mul(self, a: Element, b: Element) -> Element:
        return self._check(a * b)

    def evaluate_letters(self, letters: Iterable[int], start: Element | None = None) -> Element:
        g = self.identity if start is None else start
        for v in letters:
            if v == 0 or abs(v) > self.arity:
                raise ArityError(f"letter {v} out of range for arity {self.arity}")
            g = self._check(g * self.letter(v))
        return g

    def evaluate(self, w: Word) -> Element:
        """pi(w) = pi(w_1) pi(w_2) ... pi(w_n)."""
        if w.arity != self.arity:
            raise ArityError(f"word of arity {w.arity} used with a {self.arity}-marked group")
        return self.evaluate_letters(w.letters)

    def is_identity(self, e: Element) -> bool:
        return e == self.identity


# --------------------------------------------------------------------------
# group orders


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def sl_order_field(m: int, q: int) -> int:
    """|SL(m, F_q)|."""
    out = q ** (m * (m - 1) // 2)
    for i in range(2, m + 1):
        out *= q ** i - 1
    return out


def sl_order(m: int, ring: Ring) -> int | None:
    """|SL(m, ring)| for Z/k and F_2[t]/(t^k); None for infinite rings."""
    if isinstance(ring, ZMod):
        out = 1
        for p, e in _factor(ring.k).items():
            out *= p ** ((e - 1) * (m * m - 1)) * sl_order_field(m, p)
        return out
    if isinstance(ring, TruncPoly2):
        return 2 ** ((ring.k - 1) * (m * m - 1)) * sl_order_field(m, 2)
    return None


# --------------------------------------------------------------------------
# finite families


def sym_group(m: int) -> MarkedGroup:
    """Symmetric group on Z/m marked by sigma(j) = j+1 and tau = (0 1)."""
    if m < 2:
        raise UnsupportedParameter(f"sym needs m >= 2, got {m}")
    sigma = Permutation(tuple((j + 1) % m for j in range(m)))
    tau = Permutation((1, 0) + tuple(range(2, m)))
    return MarkedGroup(f"sym:m={m}", "sym", [sigma, tau], [sigma.inverse(), tau],
                       Permutation.identity(m), order=math.factorial(m),
                       params={"m": m}, names=["sigma", "tau"])


def cyclic_group(n: int, steps: Sequence[int] = (1,)) -> MarkedGroup:
    """Z/n realised by rotations of n points, one generator per step.

    ``cyclic_group(n, range(1, n))`` is the marking by every nonidentity
    element, whose Cayley graph is the complete graph K_n.
    """
    if n < 1:
        raise UnsupportedParameter(f"cycle needs n >= 1, got {n}")
    steps = list(steps)
    if not steps:
        raise UnsupportedParameter("need at least one generator step")
    gens = [Permutation(tuple((j + s) % n for j in range(n))) for s in steps]
    spec = f"cycle:n={n}" if steps == [1] else f"cycle:n={n},steps={'/'.join(map(str, steps))}"
    return MarkedGroup(spec, "cycle", gens, [g.inverse() for g in gens],
                       Permutation.identity(n), order=n, params={"n": n, "steps": steps})


def psl2_group(p: int) -> MarkedGroup:
    """PSL(2, p) marked by [[1,1],[0,1]] and [[0,1],[-1,0]]."""
    if p == 2 or not _is_prime(p):
        raise UnsupportedParameter(f"psl2 needs an odd prime, got {p}")
    s1 = ProjMatrix.make(p, (1, 1, 0, 1))
    s2 = ProjMatrix.make(p, (0, 1, -1, 0))
    return MarkedGroup(f"psl2:p={p}", "psl2", [s1, s2], [s1.inverse(), s2.inverse()],
                       ProjMatrix.make(p, (1, 0, 0, 1)), order=p * (p * p - 1) // 2,
                       params={"p": p})


_SL_GENS = {"st": ("s", "t"), "stu": ("s", "t", "u"), "stt'": ("s", "t", "t'"),
            "stt'uu'": ("s", "t", "t'", "u", "u'")}
_GEN_NAMES = {"s": "sigma", "t": "tau", "u": "upsilon", "t'": "tau'", "u'": "upsilon'"}


def _t_of(ring: Ring) -> int:
    gens = ring.generators()
    if not gens:
        raise UnsupportedParameter(f"ring {ring.name} has no generator t")
    return gens[0]


def sl_group(m: int, ring: Ring | str, gens: str = "st") -> MarkedGroup:
    """SL(m, ring) marked by sigma (sigma_{i,j} = 1 iff i = j+1 mod m) and
    elementary matrices tau = e_{0,1}(1), upsilon = e_{1,0}(1),
    tau' = e_{0,1}(t), upsilon' = e_{1,0}(t).  Only odd m >= 3."""
    if isinstance(ring, str):
        ring = parse_ring(ring)
    if m < 3 or m % 2 == 0:
        raise UnsupportedParameter(f"sl needs odd m >= 3, got {m}")
    if gens not in _SL_GENS:
        raise UnsupportedParameter(f"unknown generator set {gens!r}")
    if not ring.finite:
        raise UnsupportedParameter("sl needs a finite ring")
    els, invs = [], []
    for g in _SL_GENS[gens]:
        if g == "s":
            els.append(cyclic_shift_matrix(ring, m, 1))
            invs.append(cyclic_shift_matrix(ring, m, -1))
            continue
        a = 1 if len(g) == 1 else _t_of(ring)
        i, j = (0, 1) if g[0] == "t" else (1, 0)
        els.append(elementary(ring, m, i, j, a))
        invs.append(elementary(ring, m, i, j, ring.neg(a)))
    order = sl_order(m, ring)
    if isinstance(ring, TruncPoly2) and "'" not in gens:
        # only constant entries appear, so the group is SL(m, F_2)
        order = sl_order_field(m, 2)
    return MarkedGroup(f"sl:m={m},ring={ring.name},gens={gens}", "sl", els, invs,
                       Matrix.identity(ring, m), order=order, ring=ring,
                       params={"m": m, "ring": ring.name, "gens": gens},
                       names=[_GEN_NAMES[g] for g in _SL_GENS[gens]])


def _block_elementary(ring: Ring, n: int, i: int, j: int, block: Sequence[int]) -> Matrix:
    size = 4 * n
    e = list(identity_entries(size))
    for r in range(n):
        for c in range(n):
            e[(i * n + r) * size + (j * n + c)] = ring.normalize(block[r * n + c])
    return Matrix(ring, size, tuple(e))


def matrix_ring_generators(n: int, ring: Ring) -> list[tuple[int, ...]]:
    """Generators of M_n(ring) as a ring: I_n, a_i E_12 for a_0 = 1 and the
    ring generators a_1..a_l, and the cyclic permutation matrix C."""
    ident = identity_entries(n)
    out = [ident]
    for a in [1] + ring.generators():
        e = [0] * (n * n)
        e[1] = a
        out.append(tuple(e))
    c = [0] * (n * n)
    for j in range(n):
        c[((j + 1) % n) * n + j] = 1
    out.append(tuple(c))
    return out


def hadad_generators(n: int, ring: Ring | str) -> list[Matrix]:
    """Standard generators e_{i,j}(+-b) of E(4, M_n(ring)) inside SL(4n, ring),
    with b running over the ring generators of M_n(ring).

    Returns 24(l+3) matrices (l = number of extra ring generators).  In
    characteristic 2 the +b and -b entries coincide and are kept twice.
    """
    if isinstance(ring, str):
        ring = parse_ring(ring)
    if n < 2:
        raise UnsupportedParameter(f"hadad generators need n >= 2, got {n}")
    if not isinstance(ring, (ZMod, TruncPoly2)):
        raise UnsupportedParameter("hadad generators need zmod<k> or f2t:<k>")
    out = []
    for b in matrix_ring_generators(n, ring):
        neg = tuple(ring.neg(x) for x in b)
        for i in range(4):
            for j in range(4):
                if i != j:
                    out.append(_block_elementary(ring, n, i, j, b))
                    out.append(_block_elementary(ring, n, i, j, neg))
    return out


def esl_group(m: int, ring: Ring | str, gens: str = "hadad") -> MarkedGroup:
    if isinstance(ring, str):
        ring = parse_ring(ring)
    if gens != "hadad":
        raise UnsupportedParameter(f"esl supports gens=hadad only, got {gens!r}")
    if m % 4 or m < 8:
        raise UnsupportedParameter(f"esl needs m = 4n with n >= 2, got {m}")
    n = m // 4
    els = hadad_generators(n, ring)
    invs = []
    # e_{ij}(b) and e_{ij}(-b) alternate in the list
    for idx in range(0, len(els), 2):
        invs.extend((els[idx + 1], els[idx]))
    return MarkedGroup(f"esl:m={m},ring={ring.name},gens=hadad", "esl", els, invs,
                       Matrix.identity(ring, m), order=sl_order(m, ring), ring=ring,
                       params={"m": m, "ring": ring.name, "gens": gens})


# --------------------------------------------------------------------------
# limit groups


def limit_sym() -> MarkedGroup:
    """Z ⋉ (finitary permutations of Z), marked by j -> j+1 and (0 1)."""
    sigma = ShiftPermutation(1)
    tau = ShiftPermutation(0, ((0, 1), (1, 0)))
    return MarkedGroup("limit:sym", "limit:sym", [sigma, tau], [sigma.inverse(), tau],
                       ShiftPermutation(0), finite=False, names=["sigma", "tau"])


def _limit_ring(ring: Ring | str) -> Ring:
    if isinstance(ring, str):
        ring = parse_ring(ring)
    if not isinstance(ring, (ArbInt, ZMod)):
        raise UnsupportedParameter("limit matrix groups take ring=int or ring=zmod<k>")
    return ring


def limit_gl_shift(ring: Ring | str = "int", gens: str = "stu",
                   max_window: int = DEFAULT_MAX_WINDOW,
                   max_entry_bits: int = DEFAULT_MAX_ENTRY_BITS) -> MarkedGroup:
    """Z ⋉ SL(infinity, ring) marked by the shift P, e_{0,1}(1) and e_{1,0}(1)."""
    ring = _limit_ring(ring)
    if gens not in ("st", "stu"):
        raise UnsupportedParameter(f"limit:gl-shift takes gens=st or gens=stu, got {gens!r}")
    return _limit_matrix(f"limit:gl-shift,ring={ring.name},gens={gens}", "limit:gl-shift",
                         ring, _SL_GENS[gens], max_window, max_entry_bits)


def limit_ut_shift(ring: Ring | str = "int", max_window: int = DEFAULT_MAX_WINDOW,
                   max_entry_bits: int = DEFAULT_MAX_ENTRY_BITS) -> MarkedGroup:
    """Z ⋉ (upper unitriangular finitary matrices), marked by P and e_{0,1}(1)."""
    ring = _limit_ring(ring)
    return _limit_matrix(f"limit:ut-shift,ring={ring.name}", "limit:ut-shift", ring,
                         ("s", "t"), max_window, max_entry_bits)


def _limit_matrix(spec, family, ring, letters, max_window, max_entry_bits):
    els, invs = [], []
    for g in letters:
        if g == "s":
            els.append(ShiftMatrix(ring, 1, -1, ()))
            invs.append(ShiftMatrix(ring, -1, -1, ()))
        else:
            i, j = (0, 1) if g == "t" else (1, 0)
            els.append(shift_matrix_elementary(ring, i, j, 1))
            invs.append(shift_matrix_elementary(ring, i, j, -1))
    return MarkedGroup(spec, family, els, invs, ShiftMatrix(ring, 0, -1, ()), finite=False,
                       ring=ring, params={"ring": ring.name},
                       names=[_GEN_NAMES[g] for g in letters],
                       max_window=max_window, max_entry_bits=max_entry_bits)


# --------------------------------------------------------------------------
# spec parsing


def _parse_params(text: str, body: str, offset: int) -> dict[str, str]:
    out: dict[str, str] = {}
    pos = offset
    for part in body.split(","):
        if "=" not in part:
            raise ParseError(f"expected key=value, got {part!r}", text, pos)
        key, val = part.split("=", 1)
        key = key.strip()
        if key in out:
            raise ParseError(f"duplicate parameter {key!r}", text, pos)
        if not key or not val:
            raise ParseError(f"empty key or value in {part!r}", text, pos)
        out[key] = val.strip()
        pos += len(part) + 1
    return out


def _int_param(params: dict, key: str, text: str) -> int:
    if key not in params:
        raise ParseError(f"missing parameter {key!r}", text, len(text))
    val = params[key]
    if not val.lstrip("-").isdigit():
        raise ParseError(f"parameter {key} must be an integer, got {val!r}", text, text.find(val))
    return int(val)


def _expect_keys(params: dict, allowed: set[str], text: str):
    for key in params:
        if key not in allowed:
            raise ParseError(f"unknown parameter {key!r}", text, text.find(key))


def make_group(spec: str, **caps) -> MarkedGroup:
    """Build a marked group from its text spec (see module docstring).

    ``caps`` (``max_window``, ``max_entry_bits``) apply to limit matrix groups.
    """
    text = spec.strip()
    if ":" not in text:
        raise ParseError("missing ':' after family name", text, len(text))
    fam, body = text.split(":", 1)
    off = len(fam) + 1
    if fam == "limit":
        kind, _, rest = body.partition(",")
        params = _parse_params(text, rest, off + len(kind) + 1) if rest else {}
        if kind == "sym":
            _expect_keys(params, set(), text)
            return limit_sym()
        if kind == "gl-shift":
            _expect_keys(params, {"ring", "gens"}, text)
            if "ring" not in params or "gens" not in params:
                raise ParseError("limit:gl-shift needs ring= and gens=", text, len(text))
            return limit_gl_shift(_limit_ring_parse(params["ring"], text), params["gens"], **caps)
        if kind == "ut-shift":
            _expect_keys(params, {"ring"}, text)
            if "ring" not in params:
                raise ParseError("limit:ut-shift needs ring=", text, len(text))
            return limit_ut_shift(_limit_ring_parse(params["ring"], text), **caps)
        raise ParseError(f"unknown limit family {kind!r}", text, off)
    params = _parse_params(text, body, off)
    if fam == "sym":
        _expect_keys(params, {"m"}, text)
        return sym_group(_int_param(params, "m", text))
    if fam == "cycle":
        _expect_keys(params, {"n"}, text)
        return cyclic_group(_int_param(params, "n", text))
    if fam == "psl2":
        _expect_keys(params, {"p"}, text)
        return psl2_group(_int_param(params, "p", text))
    if fam in ("sl", "esl"):
        _expect_keys(params, {"m", "ring", "gens"}, text)
        m = _int_param(params, "m", text)
        if "ring" not in params or "gens" not in params:
            raise ParseError(f"{fam} needs ring= and gens=", text, len(text))
        ring = params["ring"]
        if not (ring.startswith("zmod") or ring.startswith("f2t:")):
            raise ParseError(f"ring must be zmod<k> or f2t:<k>, got {ring!r}", text, text.find(ring))
        r = _ring_parse(ring, text)
        if fam == "sl":
            if params["gens"] not in _SL_GENS:
                raise ParseError(f"unknown gens {params['gens']!r}", text, text.find(params["gens"]))
            return sl_group(m, r, params["gens"])
        if params["gens"] != "hadad":
            raise ParseError(f"esl needs gens=hadad, got {params['gens']!r}", text, text.find(params["gens"]))
        return esl_group(m, r)
    raise ParseError(f"unknown family {fam!r}", text, 0)


def _ring_parse(val: str, text: str) -> Ring:
    try:
        return parse_ring(val)
    except ParseError:
        raise ParseError(f"unknown ring {val!r}", text, text.find(val)) from None


def _limit_ring_parse(val: str, text: str) -> Ring:
    if val != "int" and not val.startswith("zmod"):
        raise ParseError(f"limit ring must be int or zmod<k>, got {val!r}", text, text.find(val))
    return _ring_parse(val, text)


# --------------------------------------------------------------------------


def order_of_generator(G: MarkedGroup, index: int, cap: int = 1000) -> int | AtLeast:
    """Smallest n >= 1 with s_index^n = 1, or AtLeast(cap) if none up to cap."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if not 1 <= index <= G.arity:
        raise ArityError(f"generator index {index} out of range 1..{G.arity}")
    s = G.generators[index - 1]
    g = s
    for n in range(1, cap + 1):
        if g == G.identity:
            return n
        g = G.mul(g, s)
    return AtLeast(cap)
