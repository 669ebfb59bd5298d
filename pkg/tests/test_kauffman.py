"""Replacement enumeration against the worked handcuff/theta examples
and the family's invariance under diagram moves."""

import pytest

from graphhom.catalog import (
    handcuff,
    hopf_handcuff,
    hopf_negative,
    theta,
    trefoil_right,
    unknot,
    unlink,
)
from graphhom.diagrams import GraphDiagram
from graphhom.errors import CapExceeded, InvalidDiagram
from graphhom.invariants import fingerprint
from graphhom.kauffman import (
    apply_replacement,
    assignment_count,
    family,
    vertex_choices,
)
from graphhom.moves import random_move_sequence

FP_UNKNOT = fingerprint(unknot())
FP_UNLINK2 = fingerprint(unlink(2))
FP_HOPF = fingerprint(hopf_negative())


def by_fingerprint(fam):
    return {m.fingerprint: m.multiplicity for m in fam.members}


def test_vertex_choices_counts():
    assert len(vertex_choices(3)) == 3
    assert len(vertex_choices(4)) == 6
    assert vertex_choices(1) == []
    assert vertex_choices(0) == []


def test_assignment_counts():
    assert assignment_count(handcuff()) == 9
    assert assignment_count(theta()) == 9
    assert assignment_count(trefoil_right()) == 1


def test_family_handcuff():
    fam = family(handcuff())
    assert fam.assignments == 9
    assert by_fingerprint(fam) == {FP_UNLINK2: 1, FP_UNKNOT: 4}


def test_family_hopf_handcuff():
    fam = family(hopf_handcuff())
    assert fam.assignments == 9
    assert by_fingerprint(fam) == {FP_HOPF: 1, FP_UNKNOT: 4}


def test_family_theta():
    fam = family(theta())
    assert fam.assignments == 9
    assert by_fingerprint(fam) == {FP_UNKNOT: 3}


def test_family_vertexless_is_identity():
    fam = family(trefoil_right())
    assert fam.assignments == 1
    assert len(fam.members) == 1
    assert fam.members[0].fingerprint == fingerprint(trefoil_right())
    assert fam.members[0].multiplicity == 1


def test_members_are_valid_nonempty_links():
    for g in (handcuff(), hopf_handcuff(), theta()):
        for m in family(g).members:
            m.diagram.validate_strict()
            assert not m.diagram.vertices
            assert m.diagram.loops > 0 or m.diagram.crossings


def test_members_sorted_by_fingerprint():
    fam = family(handcuff())
    keys = [m.fingerprint.sort_key() for m in fam.members]
    assert keys == sorted(keys)


def test_apply_replacement_closes_both_loops():
    out = apply_replacement(handcuff(), {0: (0, 1), 1: (0, 1)})
    assert out.loops == 2 and not out.crossings


def test_apply_replacement_routes_loop_into_bridge():
    out = apply_replacement(handcuff(), {0: (0, 1), 1: (0, 2)})
    assert out.loops == 1 and not out.crossings


def test_apply_replacement_all_open_is_empty():
    out = apply_replacement(handcuff(), {0: (0, 2), 1: (0, 2)})
    assert out.loops == 0 and not out.crossings


def test_apply_replacement_splices_surviving_strand():
    # deleting one clasped loop drags the other straight through both
    # crossings, leaving a bare circle
    out = apply_replacement(hopf_handcuff(), {0: (1, 2), 1: (0, 1)})
    assert out.loops == 1 and not out.crossings
    both = apply_replacement(hopf_handcuff(), {0: (0, 2), 1: (0, 1)})
    assert fingerprint(both) == FP_HOPF


def test_choice_validation():
    g = handcuff()
    with pytest.raises(InvalidDiagram):
        apply_replacement(g, {0: (0, 1)})
    with pytest.raises(InvalidDiagram):
        apply_replacement(g, {0: (0, 1), 1: None})
    with pytest.raises(InvalidDiagram):
        apply_replacement(g, {0: (0, 3), 1: (0, 1)})
    with pytest.raises(InvalidDiagram):
        apply_replacement(g, {0: (1, 1), 1: (0, 1)})


def test_valence_one_isolates():
    bar = GraphDiagram([], [(0,), (0,)], 0, {0: ("v", 1, 0)})
    bar.validate_strict()
    out = apply_replacement(bar, {0: None, 1: None})
    assert out.loops == 0 and not out.crossings
    with pytest.raises(InvalidDiagram):
        apply_replacement(bar, {0: (0, 1), 1: None})


def test_family_cap():
    with pytest.raises(CapExceeded) as err:
        family(handcuff(), cap=4)
    assert "9" in str(err.value)


def test_family_json_shape():
    doc = family(handcuff()).to_json()
    assert doc["assignments"] == 9
    assert {"fingerprint", "diagram", "multiplicity"} == set(doc["members"][0])


@pytest.mark.parametrize("make", [theta, handcuff, hopf_handcuff])
def test_family_fingerprints_invariant_under_moves(make):
    g = make()
    base = [m.fingerprint for m in family(g).members]
    for seed in (0, 1, 2):
        moved, applied = random_move_sequence(g, 8, seed)
        assert applied
        assert [m.fingerprint for m in family(moved).members] == base
