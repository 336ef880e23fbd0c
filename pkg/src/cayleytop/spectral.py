"""Laplacian spectral gap of Cayley graphs and the scalar displacement constant.

lambda_1 is the second-smallest eigenvalue of L = D - A on the simple graph.
For a unit vector x orthogonal to the constants,

    sum over s in S u S^{-1} of ||s.x - x||^2 = 2 x^T L x,

because each edge {g, s g} is counted once for s and once for s^{-1}.  The
largest displacement is at least the average, so it is >= sqrt(2 lambda_1 / d),
and at the lambda_1 eigenvector every single displacement is <= sqrt(2 lambda_1).
With d = |S u S^{-1}| this brackets the displacement constant kappa.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh
from scipy.sparse import diags
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .errors import NumericalFailure
from .graph import CayleyGraph, build_graph

DENSE_LIMIT = 3000
DEFAULT_TOL = 1e-9


@dataclass
class SpectralReport:
    spec: str
    n_vertices: int
    degree: int
    lambda1: float
    method: str
    tol: float
    residual: float
    vector: np.ndarray | None = None

    def csv_row(self) -> str:
        return f"{self.spec},{self.n_vertices},{self.degree},{self.lambda1:.12g},{self.method},{self.tol:g}"


def laplacian(g: CayleyGraph):
    A = g.adjacency()
    deg = np.asarray(A.sum(axis=1)).ravel()
    return diags(deg) - A


def _residual(L, lam: float, x: np.ndarray) -> float:
    return float(np.linalg.norm(L @ x - lam * x) / np.linalg.norm(x))


def laplacian_lambda1(g: CayleyGraph, tol: float = DEFAULT_TOL, dense_limit: int = DENSE_LIMIT,
                      maxiter: int | None = None) -> SpectralReport:
    """Second-smallest Laplacian eigenvalue with a residual certificate.

    Dense symmetric eigensolve up to ``dense_limit`` vertices.  Beyond that,
    Lanczos on L + c J/n (c = 2 deg + 1) which moves the constant vector above
    the rest of the spectrum, so the smallest eigenvalue is lambda_1.
    """
    n = g.n_vertices
    if n < 2:
        raise ValueError("need at least two vertices")
    L = laplacian(g)
    if n <= dense_limit:
        w, V = eigh(L.toarray())
        lam, x = float(w[1]), V[:, 1]
        method = "dense"
    else:
        c = 2.0 * g.degree + 1.0
        Lc = L.tocsr()

        def matvec(v):
            v = np.asarray(v).ravel()
            return Lc @ v + c * v.mean()

        op = LinearOperator((n, n), matvec=matvec, dtype=np.float64)
        v0 = np.cos(np.arange(n) * 0.7071) + 0.1
        try:
            w, V = eigsh(op, k=1, which="SA", tol=tol * 1e-2, v0=v0, maxiter=maxiter or 20 * n)
        except ArpackNoConvergence as exc:
            raise NumericalFailure(f"Lanczos did not converge on {g.spec}: {exc}") from None
        lam, x = float(w[0]), V[:, 0]
        # project out constants picked up by rounding
        x = x - x.mean()
        method = "iterative"
    res = _residual(L, lam, x)
    if res > tol:
        raise NumericalFailure(f"residual {res:.3g} above tolerance {tol:g} on {g.spec}")
    return SpectralReport(g.spec, n, g.degree, lam, method, tol, res, x)


@dataclass
class KappaInterval:
    lower: float
    upper: float


def kappa_interval(report: SpectralReport, n_moves: int) -> KappaInterval:
    """[sqrt(2 lambda_1 / |S u S^{-1}|), sqrt(2 lambda_1)].

    ``n_moves`` is |S u S^{-1}| counted as distinct nonidentity elements,
    which is the degree of the simple Cayley graph.
    """
    lam = max(report.lambda1, 0.0)
    return KappaInterval(math.sqrt(2 * lam / n_moves), math.sqrt(2 * lam))


def displacement(g: CayleyGraph, x: np.ndarray) -> float:
    """max over s in S u S^{-1} of ||lambda(s) x - x|| for the left-regular
    action (lambda(s) x)(v) = x(s^{-1} v)."""
    best = 0.0
    for c in range(g.moves.shape[1]):
        # moves[:, c] maps v to l_c v; x(s^{-1} v) evaluated at w = s v is x(v)
        shifted = np.empty_like(x)
        shifted[g.moves[:, c]] = x
        best = max(best, float(np.linalg.norm(shifted - x)))
    return best


def expander_scan(family, tol: float = DEFAULT_TOL, cap: int = 2_000_000) -> tuple[list[SpectralReport], float]:
    """lambda_1 for every member of a family and the minimum over them."""
    reports = []
    for _, spec in family.specs():
        reports.append(laplacian_lambda1(build_graph(spec, cap), tol))
    return reports, min(r.lambda1 for r in reports)


def reports_csv(reports: list[SpectralReport]) -> str:
    buf = io.StringIO()
    buf.write("spec,|V|,degree,lambda1,method,tol\n")
    for r in reports:
        buf.write(r.csv_row() + "\n")
    return buf.getvalue()
