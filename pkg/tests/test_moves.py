"""Move soundness: every rewrite yields a valid planar diagram, every
insert/remove pair restores the original up to relabeling, and link
invariants survive random move sequences."""

import random

import pytest

from graphhom.catalog import (
    braid_closure,
    figure_eight,
    handcuff,
    hopf_handcuff,
    hopf_negative,
    hopf_positive,
    theta,
    trefoil_right,
    unknot,
)
from graphhom.errors import PatternMismatch
from graphhom.invariants import jones, kauffman_bracket
from graphhom.laurent import Laurent
from graphhom.moves import (
    MoveSite,
    apply_move,
    apply_move_with_inverse,
    legal_sites,
    random_move_sequence,
)

A = ("A",)


def check_round_trip(d, site):
    out, inv = apply_move_with_inverse(d, site)
    out.validate_strict()
    assert out.euler_ok()
    back = apply_move(out, inv)
    assert back.canonical_key() == d.canonical_key()
    return out


def test_r1_insert_all_variants_invert():
    d = trefoil_right()
    for arc in sorted(d.arc_ids()):
        for var in range(4):
            out = check_round_trip(d, MoveSite("R1", True, (arc, var)))
            assert len(out.crossings) == 4


def test_r1_free_loop_variants():
    d = unknot()
    for var in (0, 2):
        out = check_round_trip(d, MoveSite("R1", True, (None, var)))
        assert out.loops == 0
        assert len(out.crossings) == 1


def test_r1_kink_scales_bracket():
    d = trefoil_right()
    base = kauffman_bracket(d)
    pos = Laurent(A, {(6,): -1})
    neg = Laurent(A, {(-6,): -1})
    arc = min(d.arc_ids())
    assert kauffman_bracket(apply_move(d, MoveSite("R1", True, (arc, 0)))) == base * pos
    assert kauffman_bracket(apply_move(d, MoveSite("R1", True, (arc, 1)))) == base * pos
    assert kauffman_bracket(apply_move(d, MoveSite("R1", True, (arc, 2)))) == base * neg
    assert kauffman_bracket(apply_move(d, MoveSite("R1", True, (arc, 3)))) == base * neg


def test_r1_remove_needs_monogon():
    d = trefoil_right()
    with pytest.raises(PatternMismatch):
        apply_move(d, MoveSite("R1", False, (0,)))
    with pytest.raises(PatternMismatch):
        apply_move(d, MoveSite("R1", False, (17,)))


def test_r2_round_trip_every_site():
    d = trefoil_right()
    jv = jones(d)
    n = 0
    for f in d.faces():
        for da in f:
            for db in f:
                if da == db or d.arc_at(da) == d.arc_at(db):
                    continue
                for over in (False, True):
                    out = check_round_trip(d, MoveSite("R2", True, (da, db, over)))
                    assert len(out.crossings) == 5
                    assert jones(out) == jv
                    n += 1
    assert n == 36


def test_r2_rejects_darts_on_different_faces():
    d = trefoil_right()
    faces = d.faces()
    da = faces[0][0]
    db = next(f[0] for f in faces if da not in f)
    with pytest.raises(PatternMismatch):
        apply_move(d, MoveSite("R2", True, (da, db, False)))


def test_r2_remove_rejects_clasp_bigons():
    d = hopf_positive()
    bigons = [f for f in d.faces() if len(f) == 2]
    assert bigons
    for f in bigons:
        with pytest.raises(PatternMismatch):
            apply_move(d, MoveSite("R2", False, (f[0],)))


def test_r3_braid_relation_sites():
    legal = {(1, 2, 1): 1, (-1, -2, -1): 1, (1, 2, -1): 1, (-1, 2, -1): 0, (1, -2, 1): 0}
    for word, count in legal.items():
        d = braid_closure(list(word), 3)
        sites = [s for s in legal_sites(d, kinds={"R3"})]
        assert len(sites) == count, word
        for s in sites:
            out = check_round_trip(d, s)
            assert len(out.crossings) == len(d.crossings)
            assert jones(out) == jones(d)


def test_r3_rejects_non_triangle():
    d = trefoil_right()
    dart = d.faces()[0][0]
    with pytest.raises(PatternMismatch):
        apply_move(d, MoveSite("R3", True, (dart,)))


def test_r4_site_counts():
    assert not [s for s in legal_sites(theta(), kinds={"R4"}) if s.insert]
    assert len([s for s in legal_sites(handcuff(), kinds={"R4"}) if s.insert]) == 8
    assert len([s for s in legal_sites(hopf_handcuff(), kinds={"R4"}) if s.insert]) == 12


def test_r4_round_trip_every_site():
    for d in (handcuff(), hopf_handcuff()):
        for s in legal_sites(d, kinds={"R4"}):
            if not s.insert:
                continue
            deg = len(d.vertices[s.params[0][1]])
            out = check_round_trip(d, s)
            assert len(out.crossings) == len(d.crossings) + deg


def test_r4_rejects_strand_ending_on_vertex():
    d = handcuff()
    corner = ("v", 0, 0)
    face = next(f for f in d.faces() if corner in f)
    bar = next(da for da in face if da != corner and d.arc_at(da) == 1)
    with pytest.raises(PatternMismatch):
        apply_move(d, MoveSite("R4", True, (corner, bar, False)))


def test_r4_remove_rejects_uncrossed_vertex():
    with pytest.raises(PatternMismatch):
        apply_move(handcuff(), MoveSite("R4", False, (0, 0)))


def test_r5_round_trip_every_corner():
    for d in (theta(), handcuff(), hopf_handcuff()):
        sites = [s for s in legal_sites(d, kinds={"R5"}) if s.insert]
        assert len(sites) == 12
        for s in sites:
            out = check_round_trip(d, s)
            assert len(out.crossings) == len(d.crossings) + 1


def test_r5_needs_vertex():
    with pytest.raises(PatternMismatch):
        apply_move(trefoil_right(), MoveSite("R5", True, (("v", 0, 0), True)))
    d = hopf_positive()
    bigon = next(f for f in d.faces() if len(f) == 2)
    with pytest.raises(PatternMismatch):
        apply_move(d, MoveSite("R5", False, (bigon[0],)))


def test_unknown_kind_rejected():
    with pytest.raises(PatternMismatch):
        apply_move(unknot(), MoveSite("R7", True, ()))


WALK_SEEDS = (0, 1, 2)


@pytest.mark.parametrize(
    "make",
    [trefoil_right, hopf_positive, theta, handcuff, hopf_handcuff, unknot],
)
def test_random_walk_every_step_invertible(make):
    d = make()
    budget = len(d.crossings) + 4
    for seed in WALK_SEEDS:
        rng = random.Random(seed)
        cur = d
        for _ in range(6):
            sites = legal_sites(cur)
            if len(cur.crossings) >= budget:
                shrinking = [s for s in sites if not s.insert or s.kind == "R3"]
                sites = shrinking or sites
            site = rng.choice(sites)
            nxt, inv = apply_move_with_inverse(cur, site)
            nxt.validate_strict()
            assert nxt.euler_ok()
            assert apply_move(nxt, inv).canonical_key() == cur.canonical_key()
            cur = nxt


@pytest.mark.parametrize("make", [trefoil_right, figure_eight, hopf_negative])
def test_jones_invariant_under_random_link_moves(make):
    d = make()
    jv = jones(d)
    for seed in WALK_SEEDS:
        out, applied = random_move_sequence(d, 10, seed, kinds={"R1", "R2", "R3"})
        out.validate_strict()
        assert applied
        assert jones(out) == jv


def test_random_sequence_deterministic():
    first = random_move_sequence(theta(), 10, seed=99)
    second = random_move_sequence(theta(), 10, seed=99)
    assert first[1] == second[1]
    assert first[0].canonical_key() == second[0].canonical_key()


def test_legal_sites_all_apply():
    for d in (trefoil_right(), handcuff(), theta()):
        for s in legal_sites(d):
            out = apply_move(d, s)
            out.validate_strict()
            assert out.euler_ok()
