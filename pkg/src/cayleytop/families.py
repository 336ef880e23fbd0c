"""Families of marked groups indexed by one integer parameter.

Text form (the same tokens the command line accepts)::

    sym --range 3..8
    cycle --range 3..7:2
    psl2 --primes 3,5,7,11,13
    sl,ring=zmod{km},gens=st --range 3..7:2 --km 2,3,5

``{km}`` is replaced by the k_m rule: a constant (``--km 5``), a list with one
value per member (``--km 2,3,5``), ``--km prime`` (the m-th prime) or
``--km plan:<path>`` (a KmPlan JSON whose rows give k_m in tower form).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import CapExceeded, ParseError

_VAR = {"sym": "m", "cycle": "n", "psl2": "p", "sl": "m", "esl": "m"}
_RANGE_RE = re.compile(r"^(-?\d+)\.\.(-?\d+)(?::(\d+))?$")


@dataclass(frozen=True)
class FamilySpec:
    """A family {G^(m)}: base spec with one variable parameter and a range."""

    base: str
    var: str
    members: tuple[int, ...]
    km: tuple[int, ...] | None = None
    text: str = field(default="", compare=False)

    def specs(self) -> list[tuple[int, str]]:
        """(index, GroupSpec text) for every member, in range order."""
        fam, _, params = self.base.partition(",")
        out = []
        for pos, v in enumerate(self.members):
            parts = [f"{self.var}={v}"]
            if params:
                p = params
                if self.km is not None:
                    p = p.replace("{km}", str(self.km[pos]))
                parts.append(p)
            out.append((v, f"{fam}:" + ",".join(parts)))
        return out

    def groups(self):
        from .groups import make_group

        return [(i, make_group(s)) for i, s in self.specs()]

    def __len__(self):
        return len(self.members)


def parse_range(text: str, full: str | None = None, offset: int = 0) -> list[int]:
    """``a..b[:step]`` inclusive of both ends."""
    m = _RANGE_RE.match(text)
    if not m:
        raise ParseError(f"bad range {text!r}, expected a..b[:step]", full or text, offset)
    a, b = int(m.group(1)), int(m.group(2))
    step = int(m.group(3)) if m.group(3) else 1
    if step < 1 or b < a:
        raise ParseError(f"empty range {text!r}", full or text, offset)
    return list(range(a, b + 1, step))


def _int_list(text: str, full: str, offset: int) -> list[int]:
    out = []
    pos = offset
    for tok in text.split(","):
        if not tok.strip().isdigit():
            raise ParseError(f"expected an integer, got {tok!r}", full, pos)
        out.append(int(tok))
        pos += len(tok) + 1
    return out


def nth_prime(n: int) -> int:
    count, c = 0, 1
    while count < n:
        c += 1
        if all(c % d for d in range(2, int(c ** 0.5) + 1)):
            count += 1
    return c


def _km_from_plan(path: str, members: list[int]) -> list[int]:
    from .embedding import Tower

    with open(path) as fh:
        rows = json.load(fh)
    rows = rows.get("rows", rows) if isinstance(rows, dict) else rows
    by_m = {int(r["m"]): Tower(int(r["tower_height"]), float(r["top_value"])) for r in rows}
    out = []
    for m in members:
        if m not in by_m:
            raise ParseError(f"plan has no row for m={m}", path, 0)
        v = by_m[m].materialize(limit_bits=62)
        if v is None:
            raise CapExceeded(f"k_m for m={m} is too large to build a group")
        out.append(max(2, int(v)))
    return out


def parse_family(text: str) -> FamilySpec:
    """Parse a family description; positions in errors index into ``text``."""
    toks = []
    pos = 0
    for tok in text.split():
        pos = text.index(tok, pos)
        toks.append((tok, pos))
        pos += len(tok)
    if not toks:
        raise ParseError("empty family", text, 0)
    base, bpos = toks[0]
    fam = base.split(",", 1)[0]
    if fam not in _VAR:
        raise ParseError(f"unknown family {fam!r}", text, bpos)
    opts: dict[str, tuple[str, int]] = {}
    i = 1
    while i < len(toks):
        tok, tpos = toks[i]
        if tok not in ("--range", "--km", "--primes"):
            raise ParseError(f"unexpected token {tok!r}", text, tpos)
        if tok in opts:
            raise ParseError(f"duplicate option {tok}", text, tpos)
        if i + 1 >= len(toks):
            raise ParseError(f"{tok} needs a value", text, tpos + len(tok))
        opts[tok] = toks[i + 1]
        i += 2
    if "--primes" in opts:
        if fam != "psl2" or "--range" in opts:
            raise ParseError("--primes only applies to psl2 without --range", text, opts["--primes"][1])
        members = _int_list(opts["--primes"][0], text, opts["--primes"][1])
    elif "--range" in opts:
        members = parse_range(opts["--range"][0], text, opts["--range"][1])
    else:
        raise ParseError("family needs --range or --primes", text, len(text))
    km = None
    if "{km}" in base:
        if "--km" not in opts:
            raise ParseError("base uses {km} but no --km rule given", text, base.index("{km}") + bpos)
        val, vpos = opts["--km"]
        if val == "prime":
            km = [nth_prime(m) for m in members]
        elif val.startswith("plan:"):
            km = _km_from_plan(val[5:], members)
        else:
            km = _int_list(val, text, vpos)
            if len(km) == 1:
                km = km * len(members)
            elif len(km) != len(members):
                raise ParseError(f"--km lists {len(km)} values for {len(members)} members", text, vpos)
    elif "--km" in opts:
        raise ParseError("--km given but base has no {km} placeholder", text, opts["--km"][1])
    spec = FamilySpec(base, _VAR[fam], tuple(members), tuple(km) if km else None, text)
    # every instantiation must be a valid group spec
    from .groups import make_group

    for _, s in spec.specs():
        make_group(s)
    return spec
