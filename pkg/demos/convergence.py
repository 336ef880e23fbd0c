"""Finite marked groups approaching an infinite limit.

Symmetric groups with the marking (m-cycle, transposition) look, inside a
ball of radius r, exactly like the shift-and-swap group on Z once m is large
enough.  Same story for SL(m, Z/k) and its limits.
"""
from cayleytop.groups import make_group, sl_group, sym_group
from cayleytop.topology import agreement_radius, ball_kernel

limit = make_group("limit:sym")

print("agreement radius of sym(m) with limit:sym (capped at 5)")
for m in range(3, 16, 2):
    rep = agreement_radius(sym_group(m), limit, 5)
    note = "" if rep.witness is None else f"  first difference: {rep.witness}"
    print(f"  m={m:2d}  radius={rep.radius}{note}")

# relators of the limit group in the 4-ball: the words that evaluate to 1
K = ball_kernel(limit, 4)
print(f"\nlimit:sym has {len(K.members)} nontrivial relators of length <= 4")

# SL(m, Z/k) with (sigma, tau, upsilon) vs. integer shift matrices: k also matters
gl = make_group("limit:gl-shift,ring=int,gens=stu")
print("\nsl(9, zmod k, stu) against limit:gl-shift")
for k in (2, 3, 5, 9, 17):
    print(f"  k={k:2d}  radius={agreement_radius(sl_group(9, f'zmod{k}', 'stu'), gl, 3).radius}")
