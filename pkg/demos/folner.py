"""Relative boundary Rel(G; R) inside balls.

For the cycle the best sets are arcs and the ratio decays like 1/R.  The
limit of symmetric groups is amenable as well, yet its ratio shrinks slowly
at these radii.  Values are exact fractions while the ball has at most 22
elements, heuristic beyond.
"""
from cayleytop.folner import rel_profile
from cayleytop.groups import make_group

for spec in ("cycle:n=101", "sym:m=4", "sl:m=3,ring=zmod2,gens=st", "limit:sym"):
    prof = rel_profile(make_group(spec), 6)
    cells = []
    for e in prof:
        tag = "" if e.exact else "~"
        cells.append(f"R={e.R}:{tag}{e.value}")
    print(f"{spec:28s} " + "  ".join(cells))
