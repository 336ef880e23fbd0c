"""Coarse unions and how fast k_m must grow.

A family of Cayley graphs becomes one metric space by putting component m at
distance diam_m + diam_n + m + n from component n.  The second half shows
the tower-form choice of k_m for the compression modulus log log t.
"""
from cayleytop.embedding import LogLog, choose_km, decremented, km_satisfies
from cayleytop.families import parse_family
from cayleytop.union import build_union

u = build_union(parse_family("sym --range 3..6"))
for m in u.indices:
    c = u.component(m)
    print(f"component {m}: {c.size:4d} vertices, diameter {c.diameter}")
print("d((3, 0), (6, 0)) =", u.dist((3, 0), (6, 0)))
print("d((6, 0), (6, 719)) =", u.dist((6, 0), (6, 719)))

rho = LogLog()
plan = choose_km(rho, range(3, 12, 2))
print("\nlog-tower plan for k_m (rho = loglog, s = 3)")
for row in plan.rows:
    tight = not km_satisfies(rho, row.m, 3, 1.0, decremented(row.tower))
    print(f"  m={row.m:2d}  k_m = exp^{row.tower.height}({row.tower.top:.6g})  tight={tight}")
