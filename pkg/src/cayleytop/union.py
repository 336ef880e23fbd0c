"""Coarse disjoint union of a family of finite Cayley graphs.

Inside component m the distance is the word metric.  Between components m
and n (m != n) it is diam(X_m) + diam(X_n) + m + n, with m, n the family
indices themselves (not positions in the list).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .elements import Element
from .errors import NotFound
from .graph import DEFAULT_VERTEX_CAP, CayleyGraph, all_pairs, build_graph, distances_from, group_metrics

METRIC_TAG = "remark-cdu-v1"
MATRIX_LIMIT = 500


@dataclass
class Component:
    index: int
    spec: str
    size: int
    diameter: int
    _graph: CayleyGraph | None = field(default=None, repr=False)
    _matrix: np.ndarray | None = field(default=None, repr=False)
    cap: int = DEFAULT_VERTEX_CAP

    @property
    def graph(self) -> CayleyGraph:
        if self._graph is None:
            self._graph = build_graph(self.spec, self.cap)
        return self._graph

    def vertex(self, x) -> int:
        if isinstance(x, Element):
            return self.graph.vertex_of(x)
        x = int(x)
        if not 0 <= x < self.size:
            raise NotFound(f"vertex {x} not in component {self.index}")
        return x

    def distance(self, u: int, v: int) -> int:
        if self._matrix is not None:
            return int(self._matrix[u, v])
        return int(self._row(u)[v])

    @lru_cache(maxsize=512)
    def _row(self, u: int) -> np.ndarray:
        return distances_from(self.graph, u)

    def __hash__(self):
        return hash((self.index, self.spec))


class CoarseUnion:
    """Metric space X = disjoint union of Cay(G^(m)) over the family."""

    def __init__(self, family: str, components: list[Component]):
        idx = [c.index for c in components]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("component indices must be strictly increasing")
        self.family = family
        self.components = {c.index: c for c in components}

    @property
    def indices(self) -> list[int]:
        return list(self.components)

    def component(self, m: int) -> Component:
        try:
            return self.components[m]
        except KeyError:
            raise NotFound(f"no component with index {m}") from None

    def dist(self, a: tuple[int, object], b: tuple[int, object]) -> int:
        """Distance between (m, x) and (n, y); x, y are elements or vertex indices."""
        (m, x), (n, y) = a, b
        cm, cn = self.component(m), self.component(n)
        u, v = cm.vertex(x), cn.vertex(y)
        if m == n:
            return cm.distance(u, v)
        return cm.diameter + cn.diameter + m + n


def build_union(family, cap: int = DEFAULT_VERTEX_CAP) -> CoarseUnion:
    """Union over a FamilySpec (or a list of (index, spec) pairs)."""
    if hasattr(family, "specs"):
        pairs, name = family.specs(), family.text or family.base
    else:
        pairs, name = list(family), "custom"
    comps = []
    for idx, spec in pairs:
        met = group_metrics(spec, cap=cap)
        comps.append(Component(idx, spec, met.order, met.diameter, cap=cap))
    return CoarseUnion(name, comps)


def export_union(u: CoarseUnion, matrix_limit: int = MATRIX_LIMIT, matrices: bool = True) -> str:
    """JSON with component metadata and, for components of at most
    ``matrix_limit`` vertices, the full distance matrix (vertex indices in
    BFS discovery order).  Larger components are listed in
    ``matrices_omitted``."""
    comps = []
    mats = {}
    omitted = []
    for c in u.components.values():
        comps.append({"index": c.index, "size": c.size, "diameter": c.diameter, "spec": c.spec})
        if matrices:
            if c.size <= matrix_limit:
                mats[str(c.index)] = all_pairs(c.graph, matrix_limit).tolist()
            else:
                omitted.append(c.index)
    doc = {"family": u.family, "components": comps, "metric": METRIC_TAG}
    if matrices:
        doc["distance_matrices"] = mats
        doc["matrices_omitted"] = omitted
    return json.dumps(doc, separators=(",", ":"))


def import_union(text: str, cap: int = DEFAULT_VERTEX_CAP) -> CoarseUnion:
    doc = json.loads(text)
    if doc.get("metric") != METRIC_TAG:
        raise ValueError(f"unknown metric tag {doc.get('metric')!r}")
    mats = doc.get("distance_matrices", {})
    comps = []
    for c in doc["components"]:
        mat = mats.get(str(c["index"]))
        comps.append(Component(c["index"], c["spec"], c["size"], c["diameter"],
                               _matrix=None if mat is None else np.asarray(mat, dtype=np.int64), cap=cap))
    return CoarseUnion(doc["family"], comps)
