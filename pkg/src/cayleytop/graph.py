"""Explicit Cayley graphs of finite marked groups.

Vertices are discovered by BFS from the identity under left multiplication,
g -> s g for s in S u S^{-1}, letters tried in the order +1, -1, +2, -2, ...
The graph is simple: involutions and coinciding generators give one edge, and
a generator equal to the identity gives no loop.  Right multiplications are
graph automorphisms, so distances from the identity already give the diameter.
"""
from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import _fastbfs
from .elements import Element, Matrix, elementary
from .errors import CapExceeded, NotFound, ParseError
from .groups import MarkedGroup, make_group, sl_group
from .rings import Ring, ZMod, parse_ring

DEFAULT_VERTEX_CAP = 2_000_000
ALL_PAIRS_LIMIT = 1000


@dataclass
class BfsMetrics:
    """Eccentricity of the identity and sphere sizes |S_r|, r = 0..ecc."""

    eccentricity: int
    sphere_sizes: list[int]
    method: str = "graph"

    @property
    def diameter(self) -> int:
        return self.eccentricity

    @property
    def order(self) -> int:
        return sum(self.sphere_sizes)


@dataclass
class CayleyGraph:
    """Cayley graph Cay(G, S) with vertices in BFS discovery order.

    Attributes
    ----------
    moves : ndarray, shape (n, 2k)
        ``moves[v, c]`` is the index of ``l_c * vertex[v]`` where ``l_c`` is the
        c-th letter in the order +1, -1, +2, -2, ...  (generator edge labels).
    indptr, indices : ndarray
        CSR adjacency of the simple undirected graph, neighbours sorted.
    dist : ndarray
        BFS distance from the identity (vertex 0).
    """

    spec: str
    group: MarkedGroup
    vertices: list[Element]
    index: dict
    moves: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    dist: np.ndarray
    _csr: object = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return int(np.max(np.diff(self.indptr))) if len(self.vertices) else 0

    @property
    def n_edges(self) -> int:
        return int(len(self.indices) // 2)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges (u, v) with u < v, sorted."""
        out = []
        for u in range(self.n_vertices):
            for v in self.neighbors(u):
                if u < v:
                    out.append((u, int(v)))
        return out

    def edge_labels(self, u: int, v: int) -> list[int]:
        """Letters l with l * vertex[u] = vertex[v]."""
        letters = [c for i in range(self.group.arity) for c in (i + 1, -(i + 1))]
        return [letters[c] for c in range(self.moves.shape[1]) if self.moves[u, c] == v]

    def adjacency(self) -> csr_matrix:
        if self._csr is None:
            n = self.n_vertices
            data = np.ones(len(self.indices), dtype=np.float64)
            self._csr = csr_matrix((data, self.indices, self.indptr), shape=(n, n))
        return self._csr

    def key_of(self, v: int) -> bytes:
        return self.vertices[v].key()

    def vertex_of(self, target: Element) -> int:
        try:
            return self.index[target]
        except KeyError:
            raise NotFound(f"element is not a vertex of {self.spec}") from None


def build_graph(G: MarkedGroup | str, cap: int = DEFAULT_VERTEX_CAP) -> CayleyGraph:
    """BFS closure of the identity under left multiplication by S u S^{-1}."""
    if isinstance(G, str):
        G = make_group(G)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if G.order is not None and G.order > cap:
        raise CapExceeded(f"{G.spec} has {G.order} elements > vertex cap {cap}")
    letters = [e for _, e in G.letters()]
    vertices = [G.identity]
    index = {G.identity: 0}
    dist = [0]
    moves = []
    i = 0
    mul = G.mul
    while i < len(vertices):
        g = vertices[i]
        row = []
        for s in letters:
            h = mul(s, g)
            j = index.get(h)
            if j is None:
                j = len(vertices)
                if j >= cap:
                    raise CapExceeded(f"{G.spec}: more than {cap} vertices")
                index[h] = j
                vertices.append(h)
                dist.append(dist[i] + 1)
            row.append(j)
        moves.append(row)
        i += 1
    moves = np.asarray(moves, dtype=np.int64).reshape(len(vertices), len(letters))
    indptr, indices = _simple_csr(moves)
    return CayleyGraph(G.spec, G, vertices, index, moves, indptr, indices,
                       np.asarray(dist, dtype=np.int64))


def _simple_csr(moves: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = moves.shape[0]
    src = np.repeat(np.arange(n), moves.shape[1])
    dst = moves.ravel()
    keep = src != dst
    # symmetrise (the move set is closed under inverses, this is a safeguard)
    u = np.concatenate([src[keep], dst[keep]])
    v = np.concatenate([dst[keep], src[keep]])
    pairs = np.unique(u * n + v)
    u, v = pairs // n, pairs % n
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, u + 1, 1)
    indptr = np.cumsum(indptr)
    return indptr, v.astype(np.int64)


def bfs_metrics(g: CayleyGraph) -> BfsMetrics:
    sizes = np.bincount(g.dist).tolist()
    return BfsMetrics(len(sizes) - 1, sizes, "graph")


def diameter(g: CayleyGraph) -> int:
    """max_v d(1, v), the diameter by vertex-transitivity."""
    return int(g.dist.max())


def word_length(g: CayleyGraph, target: Element) -> int:
    """d(1, target) in the Cayley graph."""
    return int(g.dist[g.vertex_of(target)])


def distances_from(g: CayleyGraph, source: int) -> np.ndarray:
    """BFS distances from one vertex, as an integer array."""
    d = shortest_path(g.adjacency(), unweighted=True, directed=False, indices=[source])[0]
    return d.astype(np.int64)


def all_pairs(g: CayleyGraph, limit: int = ALL_PAIRS_LIMIT) -> np.ndarray:
    """Full distance matrix (validation mode, at most ``limit`` vertices)."""
    if g.n_vertices > limit:
        raise CapExceeded(f"all-pairs mode limited to {limit} vertices")
    return shortest_path(g.adjacency(), unweighted=True, directed=False).astype(np.int64)


def group_metrics(G: MarkedGroup | str, cap: int = DEFAULT_VERTEX_CAP,
                  max_bytes: int = _fastbfs.DEFAULT_MAX_BYTES,
                  compiled_from: int = 50_000) -> BfsMetrics:
    """Diameter and sphere sizes, through the compiled search for large
    SL(m, Z/k) families and an explicit graph otherwise."""
    if isinstance(G, str):
        G = make_group(G)
    big = G.order is None or G.order > compiled_from
    if big and isinstance(G.ring, ZMod) and G.family in ("sl", "esl"):
        m, k = G.identity.size, G.ring.k
        gens = [e.entries for _, e in G.letters()]
        sizes = _fastbfs.matrix_sphere_sizes(m, k, gens, max_bytes, G.order)
        if sizes is not None:
            if G.order is not None and sum(sizes) != G.order:
                raise RuntimeError(f"compiled search found {sum(sizes)} elements, expected {G.order}")
            return BfsMetrics(len(sizes) - 1, sizes, "compiled")
        if G.order is not None and G.order > cap:
            raise CapExceeded(f"{G.spec}: {G.order} elements exceed both the vertex cap "
                              f"and the compiled search budget of {max_bytes} bytes")
    return bfs_metrics(build_graph(G, cap))


def group_diameter(G: MarkedGroup | str, **kw) -> int:
    return group_metrics(G, **kw).eccentricity


# --------------------------------------------------------------------------


@dataclass
class ElementaryRow:
    i: int
    j: int
    a: int
    length: int


def standard_generators(m: int, ring: Ring) -> list[tuple[int, int, int, Matrix]]:
    """e_{i,j}(+1) and e_{i,j}(-1) for all i != j (0-based), as (i, j, a, matrix)."""
    out = []
    for i in range(m):
        for j in range(m):
            if i != j:
                for a in (1, ring.neg(1)):
                    out.append((i, j, a, elementary(ring, m, i, j, a)))
    return out


def elementary_lengths(m: int, ring: Ring | str, cap: int = DEFAULT_VERTEX_CAP) -> tuple[list[ElementaryRow], int]:
    """Word length in the (sigma, tau) marking of every standard generator
    e_{i,j}(+-1) of SL(m, ring); returns the table and its maximum."""
    if isinstance(ring, str):
        ring = parse_ring(ring)
    g = build_graph(sl_group(m, ring, "st"), cap)
    rows = [ElementaryRow(i, j, a, word_length(g, e)) for i, j, a, e in standard_generators(m, ring)]
    return rows, max(r.length for r in rows)


# --------------------------------------------------------------------------
# exports


def export(g: CayleyGraph, fmt: str = "edges") -> bytes:
    """Serialise the graph as ``edges``, ``dot`` or ``json`` (UTF-8 bytes).

    edges: one ``u v`` line per edge, u < v, sorted.
    dot:   ``graph "<spec>" {`` then one ``u -- v;`` line per edge, then ``}``.
    json:  keys spec, vertices, degree, diameter, sphere_sizes, edges.
    """
    edges = g.edges()
    if fmt == "edges":
        return "".join(f"{u} {v}\n" for u, v in edges).encode()
    if fmt == "dot":
        buf = io.StringIO()
        buf.write(f'graph "{g.spec}" {{\n')
        buf.write(f"  // vertices={g.n_vertices} degree={g.degree}\n")
        for u, v in edges:
            buf.write(f"  {u} -- {v};\n")
        buf.write("}\n")
        return buf.getvalue().encode()
    if fmt == "json":
        m = bfs_metrics(g)
        doc = {"spec": g.spec, "vertices": g.n_vertices, "degree": g.degree,
               "diameter": m.diameter, "sphere_sizes": m.sphere_sizes,
               "edges": [list(e) for e in edges]}
        return json.dumps(doc, separators=(",", ":")).encode()
    raise ValueError(f"unknown export format {fmt!r}")


_DOT_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*;\s*$")


def parse_dot(data: bytes | str) -> set[tuple[int, int]]:
    """Edge set of a dot file written by :func:`export`."""
    text = data.decode() if isinstance(data, bytes) else data
    out = set()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("graph"):
        raise ParseError("not a dot graph", text, 0)
    pos = len(lines[0]) + 1
    for line in lines[1:]:
        s = line.strip()
        if s and not s.startswith("//") and s != "}":
            mt = _DOT_EDGE.match(line)
            if not mt:
                raise ParseError(f"bad edge line {line!r}", text, pos)
            u, v = int(mt.group(1)), int(mt.group(2))
            out.add((min(u, v), max(u, v)))
        pos += len(line) + 1
    return out
