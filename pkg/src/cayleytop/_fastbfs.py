"""Compiled breadth-first search over SL(m, Z/k) for diameters and sphere sizes.

States are integer codes of matrices and the visited set is a byte array
holding BFS level + 1 (0 = unseen), scanned level by level.  Two encodings:

* full: every entry is a base-k digit, k^(m*m) codes;
* compressed (m = 3, k prime): rows 1 and 2 fully, plus two entries of row 3.
  The cross product n = r1 x r2 is nonzero and det = r3 . n = 1, so row 3 is
  fixed by its entries off the first nonzero coordinate j of n.  That gives
  k^8 codes instead of k^9.
"""
from __future__ import annotations

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover
    nb = None

DEFAULT_MAX_BYTES = 1_000_000_000


def _jit(f):
    return nb.njit(cache=True)(f) if nb is not None else f


@_jit
def _decode_full(idx, k, mm, mat):
    x = idx
    for c in range(mm - 1, -1, -1):
        mat[c] = x % k
        x //= k


@_jit
def _encode_full(mat, k, mm):
    x = 0
    for c in range(mm):
        x = x * k + mat[c]
    return x


@_jit
def _decode3(idx, p, inv, mat):
    x = idx
    d0 = x % p
    x //= p
    d1 = x % p
    x //= p
    for c in range(6):
        mat[c] = x % p
        x //= p
    n0 = (mat[1] * mat[5] - mat[2] * mat[4]) % p
    n1 = (mat[2] * mat[3] - mat[0] * mat[5]) % p
    n2 = (mat[0] * mat[4] - mat[1] * mat[3]) % p
    if n0 != 0:
        mat[7] = d0
        mat[8] = d1
        mat[6] = ((1 - d0 * n1 - d1 * n2) % p) * inv[n0] % p
    elif n1 != 0:
        mat[6] = d0
        mat[8] = d1
        mat[7] = ((1 - d0 * n0 - d1 * n2) % p) * inv[n1] % p
    else:
        mat[6] = d0
        mat[7] = d1
        mat[8] = ((1 - d0 * n0 - d1 * n1) % p) * inv[n2] % p


@_jit
def _encode3(mat, p):
    n0 = (mat[1] * mat[5] - mat[2] * mat[4]) % p
    n1 = (mat[2] * mat[3] - mat[0] * mat[5]) % p
    x = 0
    for c in range(5, -1, -1):
        x = x * p + mat[c]
    if n0 != 0:
        a = mat[7]
        b = mat[8]
    elif n1 != 0:
        a = mat[6]
        b = mat[8]
    else:
        a = mat[6]
        b = mat[7]
    return (x * p + b) * p + a


@_jit
def _left_mul(g, m, k, src, coef, nnz, mat, out):
    # out = gens[g] @ mat, using the nonzero pattern of the generator rows
    for r in range(m):
        q = nnz[g, r]
        if q == 1 and coef[g, r, 0] == 1:
            base = src[g, r, 0] * m
            for c in range(m):
                out[r * m + c] = mat[base + c]
        else:
            for c in range(m):
                acc = 0
                for t in range(q):
                    acc += coef[g, r, t] * mat[src[g, r, t] * m + c]
                out[r * m + c] = acc % k


@_jit
def _bfs(k, m, src, coef, nnz, inv, n_states, compressed, max_levels):
    mm = m * m
    dist = np.zeros(n_states, np.uint8)
    mat = np.zeros(mm, np.int64)
    out = np.zeros(mm, np.int64)
    for i in range(m):
        out[i * m + i] = 1
    if compressed:
        start = _encode3(out, k)
    else:
        start = _encode_full(out, k, mm)
    dist[start] = 1
    sizes = np.zeros(max_levels + 1, np.int64)
    sizes[0] = 1
    level = 1
    lo = start
    hi = start
    ng = nnz.shape[0]
    while True:
        cnt = 0
        nlo = n_states
        nhi = -1
        for i in range(lo, hi + 1):
            if dist[i] != level:
                continue
            if compressed:
                _decode3(i, k, inv, mat)
            else:
                _decode_full(i, k, mm, mat)
            for g in range(ng):
                _left_mul(g, m, k, src, coef, nnz, mat, out)
                if compressed:
                    j = _encode3(out, k)
                else:
                    j = _encode_full(out, k, mm)
                if dist[j] == 0:
                    dist[j] = level + 1
                    cnt += 1
                    if j < nlo:
                        nlo = j
                    if j > nhi:
                        nhi = j
        if cnt == 0:
            break
        if level >= max_levels:
            return sizes[:0]
        sizes[level] = cnt
        level += 1
        lo = nlo
        hi = nhi
    return sizes[:level]


@_jit
def _bfs_queue(k, m, src, coef, nnz, inv, n_states, compressed, order):
    # classic FIFO search; needs 8 bytes per group element on top of the
    # visited array but touches each element once
    mm = m * m
    seen = np.zeros(n_states, np.uint8)
    queue = np.empty(order, np.int64)
    mat = np.zeros(mm, np.int64)
    out = np.zeros(mm, np.int64)
    for i in range(m):
        out[i * m + i] = 1
    if compressed:
        start = _encode3(out, k)
    else:
        start = _encode_full(out, k, mm)
    seen[start] = 1
    queue[0] = start
    tail = 1
    head = 0
    sizes = np.zeros(order + 1, np.int64)
    level = 0
    level_end = 1
    ng = nnz.shape[0]
    while head < tail:
        if head == level_end:
            level += 1
            level_end = tail
        i = queue[head]
        head += 1
        sizes[level] += 1
        if compressed:
            _decode3(i, k, inv, mat)
        else:
            _decode_full(i, k, mm, mat)
        for g in range(ng):
            _left_mul(g, m, k, src, coef, nnz, mat, out)
            if compressed:
                j = _encode3(out, k)
            else:
                j = _encode_full(out, k, mm)
            if seen[j] == 0:
                if tail >= order:
                    return sizes[:0]
                seen[j] = 1
                queue[tail] = j
                tail += 1
    return sizes[:level + 1]


def _sparse_rows(gens, m, k):
    ng = len(gens)
    src = np.zeros((ng, m, m), np.int64)
    coef = np.zeros((ng, m, m), np.int64)
    nnz = np.zeros((ng, m), np.int64)
    for g, row in enumerate(gens):
        for r in range(m):
            for t in range(m):
                a = row[r * m + t] % k
                if a:
                    q = nnz[g, r]
                    src[g, r, q] = t
                    coef[g, r, q] = a
                    nnz[g, r] = q + 1
    return src, coef, nnz


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def plan(m: int, k: int, max_bytes: int = DEFAULT_MAX_BYTES) -> tuple[str, int] | None:
    """Encoding and state count for SL(m, Z/k), or None if over budget."""
    full = k ** (m * m)
    if full <= max_bytes:
        return "full", full
    if m == 3 and _is_prime(k) and k ** 8 <= max_bytes:
        return "compressed", k ** 8
    return None


def matrix_sphere_sizes(m: int, k: int, gens: list[tuple[int, ...]],
                        max_bytes: int = DEFAULT_MAX_BYTES,
                        order: int | None = None) -> list[int] | None:
    """Sphere sizes of the Cayley graph of <gens> in SL(m, Z/k) by left
    multiplication, or None when the state space exceeds ``max_bytes``.

    ``gens`` must list S u S^{-1} as row-major integer tuples.  With a known
    group ``order`` that fits the budget alongside the visited array, a FIFO
    queue replaces the level scans.
    """
    if nb is None:
        return None
    p = plan(m, k, max_bytes)
    if p is None:
        return None
    mode, n = p
    inv = np.zeros(k, np.int64)
    if mode == "compressed":
        for a in range(1, k):
            inv[a] = pow(a, -1, k)
    src, coef, nnz = _sparse_rows(gens, m, k)
    if order is not None and n + 8 * order <= max_bytes:
        sizes = _bfs_queue(k, m, src, coef, nnz, inv, n, mode == "compressed", order)
    else:
        sizes = _bfs(k, m, src, coef, nnz, inv, n, mode == "compressed", 254)
    if len(sizes) == 0:
        return None
    return [int(x) for x in sizes]
