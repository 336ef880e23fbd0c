import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as o
from cayleytop.errors import ExactTooLarge
from cayleytop.folner import BallContext, boundary, profile_csv, recompute, rel, rel_profile
from cayleytop.graph import build_graph
from cayleytop.groups import make_group
from cayleytop.words import parse_word

# exact Rel profiles up to the 22-element threshold, frozen from the subset
# oracles in oracles.py (brute_rel for small balls, dp_rel for the rest)
REL_CYCLE101 = [Fraction(2, 2 * R + 1) for R in range(1, 11)]
REL_SYM3 = [Fraction(1, 2), Fraction(0), Fraction(0)]
REL_SYM4 = [Fraction(5, 4), Fraction(2, 3), Fraction(1, 3), Fraction(3, 20)]
REL_SL3_2 = [Fraction(1), Fraction(2, 3), Fraction(1, 2), Fraction(4, 9)]
REL_LIMIT_SYM = [Fraction(3, 2), Fraction(6, 5), Fraction(12, 11)]


def test_oracle_values():
    cyc = lambda a, b: (a + b) % 101
    assert [o.brute_rel(0, [1, 100], cyc, R) for R in (1, 2, 3)] == REL_CYCLE101[:3]
    assert [o.brute_rel(tuple(range(4)), o.perm_moves(o.sym_gens(4)), o.perm_mul, R)
            for R in (1, 2)] == REL_SYM4[:2]
    mul = lambda a, b: o.mat_mul(a, b, 3, 2)
    assert [o.brute_rel(o.mat_id(3), o.matrix_moves(o.sl_gens(3, 2), 3, 2), mul, R)
            for R in (1, 2)] == REL_SL3_2[:2]
    assert [o.brute_rel(o.ZPerm(0), o.limit_sym_gens(), lambda a, b: a * b, R)
            for R in (1, 2)] == REL_LIMIT_SYM[:2]


@pytest.mark.slow
def test_oracle_values_at_threshold():
    assert o.dp_rel(tuple(range(4)), o.perm_moves(o.sym_gens(4)), o.perm_mul, 4) == REL_SYM4[3]
    mul = lambda a, b: o.mat_mul(a, b, 3, 2)
    moves = o.matrix_moves(o.sl_gens(3, 2), 3, 2)
    assert [o.dp_rel(o.mat_id(3), moves, mul, R) for R in (3, 4)] == REL_SL3_2[2:]
    assert o.dp_rel(o.ZPerm(0), o.limit_sym_gens(), lambda a, b: a * b, 3) == REL_LIMIT_SYM[2]
    assert o.dp_rel(0, [1, 100], lambda a, b: (a + b) % 101, 10) == REL_CYCLE101[9]


def test_boundary_examples():
    G = make_group("cycle:n=9")
    b = boundary(G, [G.identity])
    assert b == {G.generators[0], G.inverses[0]}
    assert boundary(G, build_graph(G).vertices) == set()
    G = make_group("sym:m=4")
    ball = BallContext(G, 1).inner()
    moves = o.perm_moves(o.sym_gens(4))
    one_ball = {tuple(range(4))} | set(moves)
    two = {o.perm_mul(s, g) for g in one_ball for s in moves} - one_ball
    assert len(boundary(G, ball)) == len(two) == 5


def test_rel_cycle101_r1():
    G = make_group("cycle:n=101")
    e = rel(G, 1)
    assert e.value == Fraction(2, 3) and e.exact
    assert set(e.witness) == {G.identity.key(), G.generators[0].key(), G.inverses[0].key()}


def test_rel_whole_group():
    G = make_group("cycle:n=5")
    e = rel(G, 2)
    assert e.value == 0 and e.witness_size == 5


def test_rel_sym4_r2():
    assert rel(make_group("sym:m=4"), 2).value == REL_SYM4[1]


def test_exact_threshold():
    with pytest.raises(ExactTooLarge):
        rel(make_group("sym:m=5"), 4)
    with pytest.raises(ExactTooLarge):
        rel(make_group("cycle:n=101"), 3, threshold=5)


@pytest.mark.parametrize("spec,expected", [("cycle:n=101", REL_CYCLE101), ("sym:m=3", REL_SYM3),
                                           ("sym:m=4", REL_SYM4), ("sl:m=3,ring=zmod2,gens=st", REL_SL3_2),
                                           ("limit:sym", REL_LIMIT_SYM)])
def test_profiles(spec, expected):
    prof = rel_profile(make_group(spec), len(expected), heuristic_beyond=False)
    assert [e.value for e in prof] == expected
    assert all(e.exact for e in prof)


def test_profile_reaches_zero_past_diameter():
    prof = rel_profile(make_group("sym:m=3"), 3)
    assert prof[-1].value == 0


@pytest.mark.parametrize("spec,R", [("sym:m=4", 2), ("cycle:n=11", 3), ("limit:sym", 2),
                                    ("psl2:p=5", 1), ("sl:m=3,ring=zmod3,gens=st", 1)])
def test_witness_recomputes(spec, R):
    G = make_group(spec)
    e = rel(G, R)
    assert recompute(G, e) == e.value
    assert e.boundary_size == e.value * e.witness_size
    ctx = BallContext(G, R)
    inner = {g.key() for g in ctx.inner()}
    assert set(e.witness) <= inner


@pytest.mark.parametrize("spec,R", [("sym:m=4", 2), ("cycle:n=101", 3), ("limit:sym", 2)])
def test_tie_break_is_smallest_key_list(spec, R):
    G = make_group(spec)
    ctx = BallContext(G, R)
    inner = ctx.inner()
    best, ties = None, []
    for size in range(1, len(inner) + 1):
        for Y in itertools.combinations(inner, size):
            v = Fraction(len(boundary(G, Y)), size)
            if best is None or v < best:
                best, ties = v, []
            if v == best:
                ties.append(sorted(g.key() for g in Y))
    e = rel(G, R)
    assert e.value == best
    assert list(e.witness) == min(ties)


@pytest.mark.parametrize("spec,R", [("sym:m=4", 2), ("cycle:n=20", 3), ("limit:sym", 3),
                                    ("sl:m=3,ring=zmod2,gens=st", 2)])
def test_heuristic_upper_bound(spec, R):
    G = make_group(spec)
    h = rel(G, R, "heuristic")
    x = rel(G, R, "exact")
    assert not h.exact and h.value >= x.value
    assert recompute(G, h) == h.value


def test_heuristic_beyond_threshold():
    prof = rel_profile(make_group("sym:m=4"), 5)
    assert [e.exact for e in prof] == [True, True, True, True, False]
    assert prof[4].value <= prof[3].value


def test_continuity_sym_vs_limit():
    L = make_group("limit:sym")
    for R in (1, 2):
        for m in (9, 11):
            assert rel(make_group(f"sym:m={m}"), R).value == rel(L, R).value


def test_csv():
    prof = rel_profile(make_group("cycle:n=101"), 2)
    assert profile_csv(prof) == "R,value_num,value_den,exact,witness_size\n1,2,3,true,3\n2,2,5,true,5\n"


@settings(max_examples=12)
@given(st.integers(5, 40), st.integers(1, 3))
def test_cycle_rel_closed_form(n, R):
    # on a cycle the best set in the R-ball is the whole ball (an interval),
    # whose boundary is the rest of the cycle when fewer than two vertices remain
    size = min(2 * R + 1, n)
    expected = Fraction(min(2, n - size), size)
    assert rel(make_group(f"cycle:n={n}"), R).value == expected
