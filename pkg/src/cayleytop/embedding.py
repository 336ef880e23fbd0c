"""Distortion brackets, compression trend checks and the k_m planner.

Numbers such as k_m = exp(exp(exp(m^3))) cannot be stored, so the planner
keeps them in tower form: ``Tower(h, x)`` stands for exp^h(x), the h-fold
iterated exponential of a float x.  All inequalities are checked on logs.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, Unsatisfiable
from .graph import CayleyGraph, diameter
from .spectral import SpectralReport


# --------------------------------------------------------------------------
# distortion


def jv_lower_bound(diam: float, lambda1: float, degree: float) -> float:
    """diam * sqrt(lambda1 / (2 degree)), a lower bound on Hilbert distortion."""
    if diam <= 0 or lambda1 <= 0 or degree <= 0:
        raise ValueError("diam, lambda1 and degree must be positive")
    return diam * math.sqrt(lambda1 / (2.0 * degree))


@dataclass
class DistortionBounds:
    lower_jv: float
    upper_trivial: float
    diam: int
    degree: int
    lambda1: float


def distortion_bounds(g: CayleyGraph, report: SpectralReport) -> DistortionBounds:
    """Bracket [jv, diam] for the distortion of the graph metric into Hilbert
    space.  The upper end comes from sending each vertex to diam/2 times a
    basis vector (Lipschitz constant diam/sqrt(2), co-Lipschitz sqrt(2))."""
    if report.spec != g.spec or report.n_vertices != g.n_vertices:
        raise ValueError("spectral report belongs to a different graph")
    d = diameter(g)
    return DistortionBounds(jv_lower_bound(d, report.lambda1, g.degree), float(d), d,
                            g.degree, report.lambda1)


# --------------------------------------------------------------------------
# compression functions


class RhoSpec:
    """A nondecreasing unbounded modulus rho; ``t0`` is where it is defined."""

    t0 = 0.0
    name = "rho"

    def __call__(self, t: float) -> float:
        if not t >= self.t0 or math.isnan(t):
            raise DomainError(f"{self.name} is not defined at t={t}")
        return self._eval(t)

    def _eval(self, t):
        raise NotImplementedError

    def of_log(self, u: float) -> float:
        """rho(e^u) for large u without forming e^u."""
        return self(math.exp(u))


@dataclass(frozen=True)
class Power(RhoSpec):
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    @property
    def name(self):
        return f"pow:{self.alpha:g}"

    def _eval(self, t):
        return t ** self.alpha

    def of_log(self, u):
        return math.exp(self.alpha * u) if self.alpha * u < 709 else math.inf


@dataclass(frozen=True)
class Log(RhoSpec):
    t0 = 1.0
    name = "log"

    def _eval(self, t):
        return math.log(t)

    def of_log(self, u):
        return u


@dataclass(frozen=True)
class LogLog(RhoSpec):
    t0 = math.e
    name = "loglog"

    def _eval(self, t):
        return math.log(math.log(t))

    def of_log(self, u):
        if u < 1:
            raise DomainError("loglog needs t >= e")
        return math.log(u)


@dataclass(frozen=True)
class Table(RhoSpec):
    """Piecewise-linear rho through (t, rho(t)) points, strictly increasing in
    both coordinates; undefined outside the first and last t."""

    ts: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.ts) < 2 or len(self.ts) != len(self.values):
            raise ValueError("table needs at least two (t, value) points")
        if any(b <= a for a, b in zip(self.ts, self.ts[1:])) or \
                any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("table points must be strictly increasing in both coordinates")

    name = "table"

    @property
    def t0(self):
        return self.ts[0]

    def _eval(self, t):
        if t > self.ts[-1]:
            raise DomainError(f"table ends at t={self.ts[-1]}, asked for {t}")
        return float(np.interp(t, self.ts, self.values))

    def of_log(self, u):
        if u > math.log(self.ts[-1]):
            raise DomainError("argument beyond the table")
        return self(math.exp(u))

    def inverse(self, y: float) -> float:
        """Smallest t with rho(t) >= y."""
        if y > self.values[-1]:
            raise Unsatisfiable(f"table maximum {self.values[-1]} is below {y}")
        if y <= self.values[0]:
            return self.ts[0]
        return float(np.interp(y, self.values, self.ts))

    @classmethod
    def from_csv(cls, path: str) -> "Table":
        ts, vs = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    t, v = float(row[0]), float(row[1])
                except ValueError:
                    continue  # header line
                ts.append(t)
                vs.append(v)
        return cls(tuple(ts), tuple(vs))


def parse_rho(text: str) -> RhoSpec:
    """``pow:<alpha>``, ``log``, ``loglog`` or ``table:<path.csv>``."""
    from .errors import ParseError

    if text == "log":
        return Log()
    if text == "loglog":
        return LogLog()
    if text.startswith("pow:"):
        try:
            return Power(float(text[4:]))
        except ValueError as exc:
            raise ParseError(str(exc), text, 4) from None
    if text.startswith("table:"):
        return Table.from_csv(text[6:])
    raise ParseError(f"unknown rho {text!r}", text, 0)


# --------------------------------------------------------------------------
# compression trend


@dataclass
class CompressionVerdict:
    verdict: str
    ratios: list[float]
    factor: float

    @property
    def obstructed(self) -> bool:
        return self.verdict.startswith("obstructed")


def compression_obstruction(diams: Sequence[float], lowers: Sequence[float], rho: RhoSpec,
                            factor: float = 10.0) -> CompressionVerdict:
    """r_m = lower_m * rho(diam_m) / diam_m and a trend verdict.

    "obstructed (at sampled scale)" when r_m is strictly increasing and the
    last ratio exceeds ``factor`` times the first; "inconclusive" otherwise.
    """
    if len(diams) != len(lowers) or len(diams) < 2:
        raise ValueError("need at least two (diam, lower) pairs")
    if any(b <= a for a, b in zip(diams, diams[1:])):
        raise ValueError("diameters must be strictly increasing")
    q = [rho(d) / d for d in diams]
    if any(b > a * (1 + 1e-12) for a, b in zip(q, q[1:])):
        raise DomainError(f"rho(t)/t increases on the sampled range for {rho.name}")
    r = [lo * rho(d) / d for d, lo in zip(diams, lowers)]
    increasing = all(b > a for a, b in zip(r, r[1:]))
    if increasing and r[-1] > factor * r[0]:
        return CompressionVerdict("obstructed (at sampled scale)", r, factor)
    return CompressionVerdict("inconclusive", r, factor)


# --------------------------------------------------------------------------
# tower arithmetic and the k_m planner


def _exp_iter(x: float, h: int) -> float:
    for _ in range(h):
        if x > 709.78:
            return math.inf
        x = math.exp(x)
    return x


@dataclass(frozen=True)
class Tower:
    """exp^height(top); height 0 is the plain number ``top``."""

    height: int
    top: float

    def value(self) -> float:
        """Float value, ``inf`` when it overflows."""
        return _exp_iter(self.top, self.height)

    def log(self) -> "Tower":
        if self.height >= 1:
            return Tower(self.height - 1, self.top)
        return Tower(0, math.log(self.top))

    def materialize(self, limit_bits: int = 62) -> int | None:
        """Nearest integer when below 2**limit_bits, else None."""
        v = self.value()
        if not math.isfinite(v) or v >= 2.0 ** limit_bits:
            return None
        return int(round(v))

    def __lt__(self, other: "Tower") -> bool:
        h = min(self.height, other.height)
        return _exp_iter(self.top, self.height - h) < _exp_iter(other.top, other.height - h)

    def to_dict(self):
        return {"tower_height": self.height, "top_value": self.top}


def _log_a_plus(a: float, t: Tower) -> float:
    """log(a + value(t)) computed stably, for a >= 0."""
    if t.height == 0:
        return math.log(a + t.top)
    v = Tower(t.height - 1, t.top).value()  # value(t) = e^v
    if math.isinf(v):
        return math.inf
    return v + math.log1p(a * math.exp(-v))


def rho_at_scaled(rho: RhoSpec, a: float, logL: Tower) -> float:
    """rho(t) for log t = a + value(logL), evaluated in log-space."""
    if isinstance(rho, Power):
        u = a + logL.value()
        return math.inf if math.isinf(u) else rho.of_log(u)
    if isinstance(rho, Log):
        return a + logL.value()
    if isinstance(rho, LogLog):
        return _log_a_plus(a, logL)
    u = a + logL.value()
    return rho.of_log(u)


@dataclass
class KmRow:
    m: int
    tower: Tower

    @property
    def L(self) -> Tower:
        """log k_m = exp^(h-1)(x)."""
        return self.tower.log()

    def to_dict(self):
        return {"m": self.m, **self.tower.to_dict()}


@dataclass
class KmPlan:
    rho: str
    s: int
    c: float
    rows: list[KmRow]

    def to_json_obj(self):
        return [r.to_dict() for r in self.rows]


def _logL_of(tower: Tower) -> Tower:
    # log L where L = log k = exp^(h-1)(x)
    L = tower.log()
    return L.log()


def km_satisfies(rho: RhoSpec, m: int, s: int, c: float, tower: Tower) -> bool:
    """rho(c m^2 L) >= m^s with L = log k_m, checked in log-space."""
    if tower.height < 1:
        raise ValueError("k_m towers have height >= 1")
    scale = c * m * m
    L = tower.log().value()
    try:
        if math.isfinite(L) and math.isfinite(scale * L) and scale * L > 0:
            return rho(scale * L) >= float(m) ** s
        lhs = rho_at_scaled(rho, math.log(scale), _logL_of(tower))
    except (DomainError, ValueError, OverflowError):
        return False
    return lhs >= float(m) ** s


def _raw_tower(rho: RhoSpec, m: int, s: int, c: float) -> Tower:
    a = math.log(c * m * m)
    target = float(m) ** s
    if isinstance(rho, Power):
        logL = (s / rho.alpha) * math.log(m) - a
        if logL < 700:
            return Tower(1, float(m) ** (s / rho.alpha) / (c * m * m))
        return Tower(2, logL)
    if isinstance(rho, Log):
        return Tower(2, target - a)
    if isinstance(rho, LogLog):
        # exp(x) = e^target - a
        return Tower(3, target + math.log1p(-a * math.exp(-target)))
    if isinstance(rho, Table):
        t = rho.inverse(target)
        return Tower(1, t / (c * m * m))
    raise TypeError(f"unsupported rho {rho!r}")


def choose_km(rho: RhoSpec, ms: Sequence[int], s: int = 3, c: float = 1.0) -> KmPlan:
    """Smallest tower-form k_m with rho(c m^2 log k_m) >= m^s for each m."""
    if c <= 0:
        raise ValueError("c must be positive")
    rows = []
    for m in ms:
        t = _raw_tower(rho, m, s, c)
        x = t.top
        for _ in range(256):
            if km_satisfies(rho, m, s, c, Tower(t.height, x)):
                break
            x = math.nextafter(x, math.inf)
        else:
            raise Unsatisfiable(f"could not satisfy the inequality at m={m}")
        rows.append(KmRow(m, Tower(t.height, x)))
    return KmPlan(rho.name, s, c, rows)


def decremented(t: Tower, frac: float = 0.01) -> Tower:
    return Tower(t.height, t.top - frac * abs(t.top))


# --------------------------------------------------------------------------
# diameter law


@dataclass
class DiameterRow:
    m: int
    k: int
    diameter: int
    ratio: float


def diameter_law_fit(ms: Sequence[int], ks: Sequence[int], **kw) -> tuple[list[DiameterRow], dict]:
    """diam(SL(m, Z/k), (sigma, tau)) / (m^2 log k) over a grid.

    Returns the rows and summary statistics: ``band`` = max/min ratio,
    ``within_decade`` = band <= 10, and per-m monotonicity in k.
    """
    from .graph import group_metrics
    from .groups import sl_group

    rows = []
    for m in ms:
        for k in ks:
            d = group_metrics(sl_group(m, f"zmod{k}", "st"), **kw).diameter
            rows.append(DiameterRow(m, k, d, d / (m * m * math.log(k))))
    ratios = [r.ratio for r in rows]
    mono = {}
    for m in ms:
        ds = [r.diameter for r in rows if r.m == m]
        mono[m] = all(b >= a for a, b in zip(ds, ds[1:]))
    stats = {"min_ratio": min(ratios), "max_ratio": max(ratios),
             "band": max(ratios) / min(ratios), "within_decade": max(ratios) / min(ratios) <= 10,
             "nondecreasing_in_k": mono}
    return rows, stats
