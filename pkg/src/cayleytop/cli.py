"""Command line: ``cayleytop <command> [options]``.

Every command prints one JSON report (or writes it to ``--out``).  Exit codes:
0 success, 2 invalid input, 3 cap exceeded or numerical failure; on failure
the report is ``{"error": {...}}``.

All flags come from the ``COMMANDS`` table below, which is also what
``--help`` renders.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

from . import __version__
from .errors import (ArityError, CapExceeded, CayleyTopError, DomainError, ExactTooLarge, NotFound,
                     NumericalFailure, ParseError, Unsatisfiable, UnsupportedParameter)

REPORT_FORMAT = "1"


class UsageError(Exception):
    pass


@dataclass
class Command:
    name: str
    help: str
    args: list[tuple[str, dict]]
    run: Callable
    family: bool = False


def _family_text(ns) -> str:
    if not ns.family:
        raise UsageError("--family is required")
    parts = [ns.family]
    for flag in ("range", "km", "primes"):
        v = getattr(ns, flag, None)
        if v is not None:
            parts += [f"--{flag}", v]
    return " ".join(parts)


def _family(ns):
    from .families import parse_family

    return parse_family(_family_text(ns))


# --------------------------------------------------------------------------
# command implementations; each returns (result dict, tables dict)


def cmd_ball_agree(ns):
    from .groups import make_group
    from .topology import agreement_radius, ball_kernel

    G1, G2 = make_group(ns.group), make_group(ns.other)
    rep = agreement_radius(G1, G2, ns.rmax)
    res = {"group": G1.spec, "other": G2.spec, **rep.to_dict()}
    if ns.kernel:
        res["kernel"] = json.loads(ball_kernel(G1, rep.radius).to_json())
    return res, {}


def cmd_converge(ns):
    from .topology import converge_certify

    rows = converge_certify(_family(ns), ns.limit, ns.radius, ns.rmax)
    lines = ["index,spec,k,radius,threshold_met,agrees,witness"]
    for r in rows:
        w = "" if r.report.witness is None else str(r.report.witness)
        lines.append(f"{r.index},{r.spec},{'' if r.k is None else r.k},{r.report.radius},"
                     f"{str(r.threshold_met).lower()},{str(r.agrees).lower()},{w}")
    sound = all(r.agrees for r in rows if r.threshold_met)
    return {"limit": ns.limit, "radius": ns.radius, "rows": [r.to_dict() for r in rows],
            "threshold_sound": sound}, {"agreement": "\n".join(lines) + "\n"}


def cmd_folner(ns):
    from .folner import profile_csv, rel, rel_profile
    from .groups import make_group

    G = make_group(ns.group)
    if ns.mode == "auto":
        entries = rel_profile(G, ns.rmax, ns.threshold)
    else:
        entries = [rel(G, R, ns.mode, ns.threshold) for R in range(1, ns.rmax + 1)]
    res = {"group": G.spec, "entries": [
        {"R": e.R, "value": f"{e.value.numerator}/{e.value.denominator}", "exact": e.exact,
         "witness_size": e.witness_size} for e in entries]}
    return res, {"rel": profile_csv(entries)}


def cmd_graph(ns):
    from .graph import bfs_metrics, build_graph, export

    g = build_graph(ns.group, ns.cap)
    m = bfs_metrics(g)
    res = {"group": g.spec, "vertices": g.n_vertices, "edges": g.n_edges, "degree": g.degree,
           "diameter": m.diameter, "sphere_sizes": m.sphere_sizes}
    data = export(g, ns.format)
    if ns.export:
        with open(ns.export, "wb") as fh:
            fh.write(data)
        res["export_path"] = ns.export
    else:
        res["export"] = data.decode()
    res["format"] = ns.format
    return res, {}


def cmd_spectral(ns):
    from .graph import build_graph
    from .spectral import kappa_interval, laplacian_lambda1, reports_csv

    g = build_graph(ns.group, ns.cap)
    r = laplacian_lambda1(g, ns.tol)
    k = kappa_interval(r, g.degree)
    res = {"group": g.spec, "vertices": r.n_vertices, "degree": r.degree, "lambda1": r.lambda1,
           "method": r.method, "tol": r.tol, "residual": r.residual,
           "kappa": {"lower": k.lower, "upper": k.upper}}
    return res, {"spectral": reports_csv([r])}


def cmd_expander_scan(ns):
    from .spectral import expander_scan, reports_csv

    reports, lo = expander_scan(_family(ns), ns.tol, ns.cap)
    lams = [r.lambda1 for r in reports]
    dec = all(b < a - ns.tol for a, b in zip(lams, lams[1:]))
    return {"members": [{"spec": r.spec, "lambda1": r.lambda1, "method": r.method} for r in reports],
            "min_lambda1": lo, "strictly_decreasing": dec}, {"spectral": reports_csv(reports)}


def _distortion_rows(specs, tol, cap):
    from .embedding import distortion_bounds
    from .graph import build_graph
    from .spectral import laplacian_lambda1

    rows = []
    for idx, spec in specs:
        g = build_graph(spec, cap)
        b = distortion_bounds(g, laplacian_lambda1(g, tol))
        rows.append((idx, spec, b))
    return rows


def cmd_distortion(ns):
    if ns.group:
        specs = [(None, ns.group)]
    else:
        specs = _family(ns).specs()
    rows = _distortion_rows(specs, ns.tol, ns.cap)
    lines = ["spec,diam,degree,lambda1,lower_jv,upper"]
    out = []
    for _, spec, b in rows:
        lines.append(f"{spec},{b.diam},{b.degree},{b.lambda1:.12g},{b.lower_jv:.12g},{b.upper_trivial:g}")
        out.append({"spec": spec, "diam": b.diam, "degree": b.degree, "lambda1": b.lambda1,
                    "lower_jv": b.lower_jv, "upper": b.upper_trivial})
    return {"rows": out}, {"distortion": "\n".join(lines) + "\n"}


def cmd_union(ns):
    from .union import build_union, export_union

    u = build_union(_family(ns), ns.cap)
    doc = json.loads(export_union(u, ns.matrix_limit, not ns.no_matrices))
    res = {"union": doc}
    if ns.query:
        out = []
        for q in ns.query:
            try:
                a, b = q.split(",")
                m, x = (int(t) for t in a.split(":"))
                n, y = (int(t) for t in b.split(":"))
            except ValueError:
                raise ParseError("query must look like m:i,n:j", q, 0) from None
            out.append({"query": q, "dist": u.dist((m, x), (n, y))})
        res["queries"] = out
    return res, {}


def cmd_compression(ns):
    from .embedding import compression_obstruction, parse_rho

    rho = parse_rho(ns.rho)
    if ns.data:
        import csv

        diams, lowers, labels = [], [], []
        with open(ns.data, newline="") as fh:
            for row in csv.DictReader(fh):
                diams.append(float(row["diam"]))
                lowers.append(float(row["lower"]))
                labels.append(row.get("index", str(len(labels))))
    else:
        rows = _distortion_rows(_family(ns).specs(), ns.tol, ns.cap)
        diams = [float(b.diam) for _, _, b in rows]
        lowers = [b.lower_jv for _, _, b in rows]
        labels = [str(i) for i, _, _ in rows]
    v = compression_obstruction(diams, lowers, rho, ns.factor)
    lines = ["index,diam,lower,ratio"]
    for lab, d, lo, r in zip(labels, diams, lowers, v.ratios):
        lines.append(f"{lab},{d:g},{lo:.12g},{r:.12g}")
    return {"rho": ns.rho, "verdict": v.verdict, "factor": ns.factor, "ratios": v.ratios}, \
        {"compression": "\n".join(lines) + "\n"}


def cmd_choose_k(ns):
    from .embedding import choose_km, decremented, km_satisfies, parse_rho
    from .families import parse_range

    rho = parse_rho(ns.rho)
    ms = parse_range(ns.range)
    plan = choose_km(rho, ms, ns.s, ns.c)
    rows = []
    for r in plan.rows:
        d = r.to_dict()
        d["verified"] = km_satisfies(rho, r.m, ns.s, ns.c, r.tower)
        d["decrement_falsifies"] = not km_satisfies(rho, r.m, ns.s, ns.c, decremented(r.tower))
        rows.append(d)
    return {"rho": ns.rho, "s": ns.s, "c": ns.c, "plan": rows}, {}


def cmd_order(ns):
    from .groups import AtLeast, make_group, order_of_generator

    G = make_group(ns.group)
    o = order_of_generator(G, ns.generator, ns.cap)
    return {"group": G.spec, "generator": ns.generator,
            "order": str(o) if isinstance(o, AtLeast) else o,
            "finite": not isinstance(o, AtLeast)}, {}


def cmd_elementary_lengths(ns):
    from .graph import elementary_lengths

    rows, mx = elementary_lengths(ns.m, ns.ring, ns.cap)
    lines = ["i,j,a,length"] + [f"{r.i},{r.j},{r.a},{r.length}" for r in rows]
    return {"m": ns.m, "ring": ns.ring, "max_length": mx, "count": len(rows)}, \
        {"lengths": "\n".join(lines) + "\n"}


# --------------------------------------------------------------------------
# declarative command table

_GROUP = ("--group", {"required": True, "help": "group spec, e.g. sym:m=5"})
_FAMILY = [("--family", {"help": "family base, e.g. sym or sl,ring=zmod{km},gens=st"}),
           ("--range", {"help": "a..b[:step]"}),
           ("--km", {"help": "k_m rule: const, list, prime or plan:<path>"}),
           ("--primes", {"help": "comma-separated primes (psl2)"})]
_CAP = ("--cap", {"type": int, "default": 2_000_000, "help": "vertex cap"})
_TOL = ("--tol", {"type": float, "default": 1e-9, "help": "eigen-residual tolerance"})

COMMANDS = [
    Command("ball-agree", "agreement radius of two marked groups",
            [_GROUP, ("--other", {"required": True}), ("--rmax", {"type": int, "default": 4}),
             ("--kernel", {"action": "store_true", "help": "include the first group's kernel"})],
            cmd_ball_agree),
    Command("converge", "agreement radii of a family against a limit group",
            _FAMILY + [("--limit", {"required": True}), ("--radius", {"type": int, "required": True}),
                       ("--rmax", {"type": int, "default": None})],
            cmd_converge, family=True),
    Command("folner", "Rel(G; R) profile",
            [_GROUP, ("--rmax", {"type": int, "default": 3}),
             ("--mode", {"choices": ["auto", "exact", "heuristic"], "default": "auto"}),
             ("--threshold", {"type": int, "default": 22})],
            cmd_folner),
    Command("graph", "build and export a Cayley graph",
            [_GROUP, ("--format", {"choices": ["edges", "dot", "json"], "default": "json"}),
             ("--export", {"help": "write the export here instead of inline"}), _CAP],
            cmd_graph),
    Command("spectral", "lambda_1 and displacement interval",
            [_GROUP, _TOL, _CAP], cmd_spectral),
    Command("expander-scan", "lambda_1 across a family",
            _FAMILY + [_TOL, _CAP], cmd_expander_scan, family=True),
    Command("distortion", "distortion bracket [jv, diam]",
            [("--group", {"help": "single group spec"})] + _FAMILY + [_TOL, _CAP], cmd_distortion),
    Command("union", "coarse disjoint union export and distance queries",
            _FAMILY + [("--matrix-limit", {"type": int, "default": 500}),
                       ("--no-matrices", {"action": "store_true"}),
                       ("--query", {"action": "append", "help": "m:i,n:j (vertex indices)"}), _CAP],
            cmd_union, family=True),
    Command("compression", "compression trend verdict",
            _FAMILY + [("--rho", {"required": True}), ("--data", {"help": "CSV with diam,lower columns"}),
                       ("--factor", {"type": float, "default": 10.0}), _TOL, _CAP],
            cmd_compression),
    Command("choose-k", "tower-form k_m plan",
            [("--rho", {"required": True}), ("--range", {"required": True}),
             ("--s", {"type": int, "default": 3}), ("--c", {"type": float, "default": 1.0})],
            cmd_choose_k),
    Command("order", "order of a generator",
            [_GROUP, ("--generator", {"type": int, "required": True}),
             ("--cap", {"type": int, "default": 1000})],
            cmd_order),
    Command("elementary-lengths", "word lengths of e_ij(+-1) in the (sigma, tau) marking",
            [("--m", {"type": int, "required": True}), ("--ring", {"required": True}), _CAP],
            cmd_elementary_lengths),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cayleytop", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="store_true", help="print tool and report format versions")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for c in COMMANDS:
        sp = sub.add_parser(c.name, help=c.help, description=c.help)
        for flag, kw in c.args:
            sp.add_argument(flag, **kw)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--threads", type=int, default=1, help="worker cap (results do not depend on it)")
    return p


def _check_duplicates(argv: list[str]):
    seen = set()
    for tok in argv:
        if tok.startswith("--"):
            flag = tok.split("=", 1)[0]
            if flag in seen and flag != "--query":
                raise UsageError(f"duplicate flag {flag}")
            seen.add(flag)


_EXIT3 = (CapExceeded, NumericalFailure, ExactTooLarge)
_EXIT2 = (ParseError, ArityError, UnsupportedParameter, NotFound, DomainError, Unsatisfiable,
          UsageError, ValueError)


def _emit(doc: dict, out: str | None, stream) -> None:
    text = json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False, default=_json_default) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)


def _json_default(o):
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    out = None
    try:
        _check_duplicates(argv)
        ns = build_parser().parse_args(argv)
        if ns.version:
            stdout.write(f"cayleytop {__version__} (report format {REPORT_FORMAT})\n")
            return 0
        if not ns.command:
            raise UsageError("missing command")
        out = ns.out
        if ns.threads < 1:
            raise UsageError("--threads must be >= 1")
        cmd = next(c for c in COMMANDS if c.name == ns.command)
        t0 = time.perf_counter()
        result, tables = cmd.run(ns)
        config = {k: v for k, v in sorted(vars(ns).items()) if k not in ("out", "version")}
        doc = {"command": ns.command, "config": config, "result": result, "tables": tables,
               "version": {"tool": __version__, "format": REPORT_FORMAT},
               "wall_time": round(time.perf_counter() - t0, 6)}
        _emit(doc, out, stdout)
        return 0
    except _EXIT3 as exc:
        code = 3
        err = exc
    except (CayleyTopError, *_EXIT2) as exc:
        code = 2
        err = exc
    doc = {"error": {"type": type(err).__name__, "message": str(err), "exit_code": code}}
    _emit(doc, out, stdout)
    print(f"cayleytop: {err}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
