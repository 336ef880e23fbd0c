"""Independent reference implementations used to cross-check the package.

Nothing here imports cayleytop: group elements are plain tuples, matrices
are multiplied with the schoolbook formula mod k, and searches are written
from scratch.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction


# ---- generators as plain tuples -------------------------------------------

def perm_mul(a, b):
    # (ab)(x) = a(b(x))
    return tuple(a[x] for x in b)


def perm_inv(a):
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def sym_gens(m):
    sigma = tuple((j + 1) % m for j in range(m))
    tau = (1, 0) + tuple(range(2, m))
    return [sigma, tau]


def mat_mul(a, b, m, k):
    return tuple(sum(a[i * m + t] * b[t * m + j] for t in range(m)) % k
                 for i in range(m) for j in range(m))


def mat_id(m):
    return tuple(int(i == j) for i in range(m) for j in range(m))


def mat_elem(m, i, j, a, k):
    e = list(mat_id(m))
    e[i * m + j] = a % k
    return tuple(e)


def sl_gens(m, k, gens="st"):
    # sigma sends basis vector j to j+1: entry (i, j) is 1 iff i = j + 1 mod m
    sigma = tuple(int(i == (j + 1) % m) for i in range(m) for j in range(m))
    out = [sigma, mat_elem(m, 0, 1, 1, k)]
    if gens == "stu":
        out.append(mat_elem(m, 1, 0, 1, k))
    return out


def mat_inverse_by_power(g, m, k, cap=10 ** 6):
    # g^{-1} = g^{n-1} where n is the order of g
    x, prev = g, mat_id(m)
    for _ in range(cap):
        if x == mat_id(m):
            return prev
        prev = x
        x = mat_mul(x, g, m, k)
    raise RuntimeError("order not found")


# ---- generic BFS over a closure ---------------------------------------------

def bfs(identity, moves, mul):
    """Distances from the identity under left multiplication by ``moves``."""
    dist = {identity: 0}
    q = deque([identity])
    while q:
        g = q.popleft()
        for s in moves:
            h = mul(s, g)
            if h not in dist:
                dist[h] = dist[g] + 1
                q.append(h)
    return dist


def perm_moves(gens):
    return [x for g in gens for x in (g, perm_inv(g))]


def matrix_moves(gens, m, k):
    return [x for g in gens for x in (g, mat_inverse_by_power(g, m, k))]


def all_pairs_diameter(identity, moves, mul):
    """Max over every pair, not only from the identity."""
    elems = list(bfs(identity, moves, mul))
    best = 0
    for g in elems:
        best = max(best, max(bfs(g, moves, mul).values()))
    return best


def bidirectional_distance(identity, target, moves, mul):
    """Meet-in-the-middle: grow balls around 1 and around target alternately."""
    if identity == target:
        return 0
    inv_moves = moves  # moves is closed under inverses
    fa, fb = {identity: 0}, {target: 0}
    qa, qb = [identity], [target]
    while qa and qb:
        if len(qa) <= len(qb):
            frontier, seen, other, ms = qa, fa, fb, moves
        else:
            frontier, seen, other, ms = qb, fb, fa, inv_moves
        nxt = []
        best = None
        for g in frontier:
            for s in ms:
                h = mul(s, g)
                if h in seen:
                    continue
                seen[h] = seen[g] + 1
                if h in other:
                    d = seen[h] + other[h]
                    best = d if best is None else min(best, d)
                nxt.append(h)
        if best is not None:
            return best
        if frontier is qa:
            qa = nxt
        else:
            qb = nxt
    raise RuntimeError("target not reachable")


# ---- the limit symmetric group as (shift, finite correction) ---------------

class ZPerm:
    """Bijection x -> f(x) of Z equal to x + shift outside a finite set."""

    def __init__(self, shift, table=None):
        self.shift = shift
        self.table = {x: y for x, y in (table or {}).items() if y != x + shift}

    def __call__(self, x):
        return self.table.get(x, x + self.shift)

    def __mul__(self, other):
        # (fg)(x) = f(g(x)); outside the supports both act as shifts
        pts = set(other.table) | {y - other.shift for y in self.table}
        return ZPerm(self.shift + other.shift, {x: self(other(x)) for x in pts})

    def key(self):
        return (self.shift, tuple(sorted(self.table.items())))

    def __eq__(self, other):
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def limit_sym_gens():
    sigma = ZPerm(1)
    tau = ZPerm(0, {0: 1, 1: 0})
    sigma_inv = ZPerm(-1)
    return [sigma, sigma_inv, tau, tau]


# ---- brute-force relative boundary ------------------------------------------

def brute_rel(identity, moves, mul, R):
    """min |nbhd_1(Y) \\ Y| / |Y| over all nonempty Y in the R-ball."""
    dist = {identity: 0}
    frontier = [identity]
    for r in range(R):
        nxt = []
        for g in frontier:
            for s in moves:
                h = mul(s, g)
                if h not in dist:
                    dist[h] = r + 1
                    nxt.append(h)
        frontier = nxt
    ball = list(dist)
    nbr = {g: {mul(s, g) for s in moves} for g in ball}
    best = None
    for size in range(1, len(ball) + 1):
        for Y in itertools.combinations(ball, size):
            Ys = set(Y)
            b = set().union(*(nbr[g] for g in Y)) - Ys
            v = Fraction(len(b), size)
            if best is None or v < best:
                best = v
    return best


# ---- spectra ---------------------------------------------------------------

def cycle_lambda1(n):
    return 2 - 2 * math.cos(2 * math.pi / n)


def sym_order(m):
    return math.factorial(m)


def sl_order_prime_power(m, p, e=1):
    q = p
    n = q ** (m * (m - 1) // 2)
    for i in range(2, m + 1):
        n *= q ** i - 1
    return n * p ** ((e - 1) * (m * m - 1))


def ball_elements(identity, moves, mul, R):
    dist = {identity: 0}
    frontier = [identity]
    for r in range(R):
        nxt = []
        for g in frontier:
            for s in moves:
                h = mul(s, g)
                if h not in dist:
                    dist[h] = r + 1
                    nxt.append(h)
        frontier = nxt
    return list(dist)


def dp_rel(identity, moves, mul, R):
    """Same minimum as brute_rel, by a lowest-set-bit recurrence over masks:
    N(mask) = N(mask without its lowest bit) | N(lowest bit)."""
    ball = ball_elements(identity, moves, mul, R)
    pos = {g: i for i, g in enumerate(ball)}
    extra = {}
    closed = []
    for g in ball:
        bits = 0
        for h in [g] + [mul(s, g) for s in moves]:
            if h not in pos:
                pos[h] = len(ball) + len(extra)
                extra[h] = True
            bits |= 1 << pos[h]
        closed.append(bits)
    n = len(ball)
    nb = [0] * (1 << n)
    best = None
    for mask in range(1, 1 << n):
        low = mask & -mask
        nb[mask] = nb[mask ^ low] | closed[low.bit_length() - 1]
        y = mask.bit_count()
        v = Fraction(nb[mask].bit_count() - y, y)
        if best is None or v < best:
            best = v
    return best


def psl2_graph_lambda1(p):
    """lambda_1 of Cay(PSL(2,p), {s1, s2}) from an independent construction."""
    import numpy as np

    def canon(a):
        a = tuple(x % p for x in a)
        neg = tuple((-x) % p for x in a)
        return min(a, neg)

    def mul(a, b):
        return canon((a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                      a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]))

    s1, s2 = canon((1, 1, 0, 1)), canon((0, 1, -1, 0))
    moves = [s1, canon((1, -1, 0, 1)), s2, canon((0, -1, 1, 0))]
    elems = list(bfs(canon((1, 0, 0, 1)), moves, mul))
    idx = {g: i for i, g in enumerate(elems)}
    A = np.zeros((len(elems), len(elems)))
    for g in elems:
        for s in moves:
            h = mul(s, g)
            if h != g:
                A[idx[g], idx[h]] = A[idx[h], idx[g]] = 1
    L = np.diag(A.sum(1)) - A
    return float(np.linalg.eigvalsh(L)[1])
