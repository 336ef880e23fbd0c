import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as o
from cayleytop.families import parse_family
from cayleytop.groups import make_group
from cayleytop.topology import (BallKernel, agreement_radius, ball_kernel, converge_certify,
                                default_rmax, elm, vol)
from cayleytop.words import concat, enumerate_ball, format_word, invert, parse_word


def sym_oracle_kernel(m, R):
    # evaluate each word with tuple permutations, independent of the package
    gens = o.sym_gens(m)
    moves = {1: gens[0], -1: o.perm_inv(gens[0]), 2: gens[1], -2: gens[1]}
    ident = tuple(range(m))
    out = []
    for w in enumerate_ball(2, R):
        g = ident
        for v in w.letters:
            g = o.perm_mul(g, moves[v])
        if g == ident:
            out.append(w)
    return out


def test_elm_examples():
    assert elm(make_group("cycle:n=3"), parse_word("s1.s1.s1", 1))
    assert elm(make_group("sym:m=5"), parse_word("s2.s2", 2))
    assert elm(make_group("sl:m=3,ring=zmod2,gens=st"), parse_word("s1.s1.s1", 2))
    assert not elm(make_group("sym:m=5"), parse_word("s1.s2", 2))


def test_vol_examples():
    assert vol(make_group("cycle:n=2"), enumerate_ball(1, 1)) == 2
    for spec in ("sym:m=4", "limit:sym", "psl2:p=5"):
        G = make_group(spec)
        assert vol(G, [parse_word("e", G.arity)]) == 1
    assert vol(make_group("sym:m=3"), enumerate_ball(2, 2)) == 6
    with pytest.raises(ValueError):
        vol(make_group("sym:m=3"), [])


def test_kernel_examples():
    assert [format_word(w) for w in ball_kernel(make_group("cycle:n=5"), 4).members] == ["e"]
    assert [format_word(w) for w in ball_kernel(make_group("cycle:n=3"), 3).members] == [
        "e", "s1.s1.s1", "S1.S1.S1"]
    K = ball_kernel(make_group("sym:m=5"), 4)
    assert parse_word("s2.s2", 2) in K
    assert list(K.members) == sym_oracle_kernel(5, 4)


@pytest.mark.parametrize("spec,R", [("sym:m=5", 6), ("sym:m=6", 6), ("cycle:n=4", 6),
                                    ("sl:m=3,ring=zmod2,gens=st", 6), ("limit:sym", 6),
                                    ("psl2:p=5", 5)])
def test_kernel_closure(spec, R):
    G = make_group(spec)
    K = ball_kernel(G, R)
    members = set(K.members)
    for w in K.members:
        assert elm(G, w)
        assert invert(w) in members
    for a in K.members:
        for b in K.members:
            c = concat(a, b)
            if len(c) <= R:
                assert c in members


@pytest.mark.parametrize("spec", ["sym:m=5", "cycle:n=6", "limit:sym"])
def test_kernel_monotone_refinement(spec):
    G = make_group(spec)
    for R in range(0, 6):
        assert ball_kernel(G, R).members == ball_kernel(G, R + 1).restrict(R).members


def test_kernel_json_round_trip():
    K = ball_kernel(make_group("sym:m=4"), 5)
    text = K.to_json()
    assert text.startswith('{"arity":2,"radius":5,"members":["e","s2.s2"')
    assert BallKernel.from_json(text) == K
    assert BallKernel.from_json(text).to_json() == text


def test_agreement_examples():
    r = agreement_radius(make_group("sym:m=9"), make_group("limit:sym"), 3)
    assert r.radius == 3 and r.witness is None
    r = agreement_radius(make_group("sl:m=9,ring=zmod17,gens=stu"),
                         make_group("limit:gl-shift,ring=int,gens=stu"), 3)
    assert r.radius == 3 and r.witness is None
    r = agreement_radius(make_group("cycle:n=3"), make_group("cycle:n=5"), 5)
    assert r.radius == 2 and format_word(r.witness) == "s1.s1.s1" and r.witness_side == 1
    assert len(r.witness) == r.radius + 1


def test_agreement_arity_mismatch():
    from cayleytop.errors import ArityError
    with pytest.raises(ArityError):
        agreement_radius(make_group("cycle:n=3"), make_group("sym:m=3"), 2)


PAIRS = [("sym:m=5", "sym:m=7"), ("cycle:n=4", "cycle:n=6"), ("sym:m=6", "limit:sym"),
         ("sl:m=3,ring=zmod2,gens=st", "sl:m=5,ring=zmod2,gens=st"), ("psl2:p=5", "psl2:p=7")]


@pytest.mark.parametrize("a,b", PAIRS)
def test_agreement_symmetric_and_matches_kernels(a, b):
    G1, G2 = make_group(a), make_group(b)
    r12 = agreement_radius(G1, G2, 7)
    r21 = agreement_radius(G2, G1, 7)
    assert r12.radius == r21.radius
    assert r12.witness == r21.witness
    if r12.witness is not None:
        assert r12.witness_side != r21.witness_side
    R = r12.radius
    assert ball_kernel(G1, R).members == ball_kernel(G2, R).members
    if R < 7:
        assert ball_kernel(G1, R + 1).members != ball_kernel(G2, R + 1).members
        assert elm(G1, r12.witness) != elm(G2, r12.witness)


def test_default_rmax_keeps_ball_under_a_million_words():
    from cayleytop.words import ball_size
    for k, R in [(2, 11), (3, 8), (5, 6)]:
        assert default_rmax(k) == R
        assert ball_size(k, R) <= 10 ** 6 < ball_size(k, R + 1)


def test_converge_sym():
    rows = converge_certify(parse_family("sym --range 5..13:2"), "limit:sym", 3)
    for row in rows:
        if row.index >= 9:
            assert row.threshold_met and row.agrees and row.report.radius >= 3


def test_converge_ut_shift():
    rows = converge_certify(parse_family("sl,ring=zmod{km},gens=st --range 3..11:2 --km 2"),
                            "limit:ut-shift,ring=zmod2", 2)
    assert [r.agrees for r in rows if r.index >= 7] == [True, True, True]


def test_converge_gl_shift_prime_k():
    rows = converge_certify(parse_family("sl,ring=zmod{km},gens=stu --range 3..11:2 --km prime"),
                            "limit:gl-shift,ring=int,gens=stu", 2)
    for r in rows:
        assert r.threshold_met == (r.index >= 7 and r.k > 4)
        if r.threshold_met:
            assert r.agrees


@settings(max_examples=15)
@given(st.integers(3, 9), st.integers(3, 9))
def test_cycle_agreement_is_min_order(n1, n2):
    r = agreement_radius(make_group(f"cycle:n={n1}"), make_group(f"cycle:n={n2}"), 10)
    assert r.radius == (10 if n1 == n2 else min(n1, n2, 11) - 1)
