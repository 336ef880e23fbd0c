"""Spectral gaps: expanders against symmetric groups.

PSL(2, p) with the standard two generators keeps lambda_1 away from 0; the
symmetric groups with (cycle, transposition) do not.  The gap feeds a
distortion lower bound diam * sqrt(lambda_1 / (2 * degree)).
"""
import numpy as np

from cayleytop.embedding import distortion_bounds
from cayleytop.graph import build_graph
from cayleytop.groups import psl2_group, sym_group
from cayleytop.spectral import kappa_interval, laplacian_lambda1

print(f"{'group':12s} {'|G|':>6s} {'lambda1':>10s} {'kappa':>19s} {'diam':>5s} {'jv':>7s}")
for G in [psl2_group(p) for p in (5, 7, 11, 13)] + [sym_group(m) for m in (4, 5, 6, 7)]:
    g = build_graph(G)
    rep = laplacian_lambda1(g)
    k = kappa_interval(rep, g.degree)
    b = distortion_bounds(g, rep)
    print(f"{G.spec:12s} {g.n_vertices:6d} {rep.lambda1:10.6f} "
          f"[{k.lower:.4f}, {k.upper:.4f}] {b.diam:5d} {b.lower_jv:7.3f}")

# lambda_1 of sym(m) against 1/m^2 scaling
lams = np.array([laplacian_lambda1(build_graph(sym_group(m))).lambda1 for m in range(4, 8)])
print("\nm^2 * lambda1(sym(m)), m = 4..7:", np.round(lams * np.arange(4, 8) ** 2, 3))
