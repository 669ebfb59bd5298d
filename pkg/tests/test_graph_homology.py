"""Family direct sums: handcuff-type decompositions plus skip/empty paths."""

import pytest

from graphhom.catalog import handcuff, hopf_handcuff, theta, trefoil_right
from graphhom.diagrams import GraphDiagram
from graphhom.graph_homology import (
    SKIP_CROSSINGS,
    SKIP_GRID,
    euler_check,
    graph_homology,
    hfg,
    kkh_graph,
)
from graphhom.laurent import Laurent, T


def test_handcuff_hfg_decomposition():
    report = hfg(handcuff())
    assert len(report.members) == 2
    assert report.aggregate_floer.ranks() == {(1, 0): 1, (-1, 0): 1, (0, 0): 1}
    assert report.aggregate_floer.total_rank() == 3
    assert report.verdicts["floer_euler"] == "pass"
    assert euler_check(report) == "pass"
    # The unlink member's Euler characteristic cancels to zero, so only
    # the unknot contributes to the aggregate.
    assert report.aggregate_floer_euler == Laurent(T, {(0,): 1})


def test_hopf_handcuff_hfg():
    report = hfg(hopf_handcuff())
    assert len(report.members) == 2
    by_components = {m.fingerprint.components: m for m in report.members}
    hopf_member = by_components[2]
    assert hopf_member.floer.total_rank() == 4
    assert hopf_member.floer.ranks() == {(-3, -2): 1, (-1, 0): 2, (1, 2): 1}
    assert hopf_member.total_check == "pass"
    assert by_components[1].floer.total_rank() == 1
    assert report.aggregate_floer.total_rank() == 5
    assert report.verdicts["floer_euler"] == "pass"


def test_vertexless_link_is_a_singleton_family():
    report = hfg(trefoil_right())
    assert len(report.members) == 1
    assert report.aggregate_floer.total_rank() == 3
    assert euler_check(report) == "pass"


def test_handcuff_kkh():
    report = kkh_graph(handcuff())
    assert report.aggregate_khovanov.total_rank() == 6
    assert report.verdicts["khovanov_euler"] == "pass"


def test_hopf_handcuff_kkh():
    report = kkh_graph(hopf_handcuff())
    assert report.aggregate_khovanov.total_rank() == 6
    assert report.verdicts["khovanov_euler"] == "pass"
    members = sorted(m.khovanov.total_rank() for m in report.members)
    assert members == [2, 4]


def test_empty_family_is_flagged_zero_homology():
    bare_edge = GraphDiagram.from_pd([], [(0,), (0,)])
    report = graph_homology(bare_edge)
    assert report.empty_family
    assert not report.members
    assert report.aggregate_floer.total_rank() == 0
    assert report.aggregate_khovanov.total_rank() == 0


def test_multiset_weights_by_multiplicity():
    plain = hfg(handcuff())
    weighted = hfg(handcuff(), multiset=True)
    expected = sum(
        m.multiplicity * m.floer.total_rank() for m in weighted.members
    )
    assert weighted.aggregate_floer.total_rank() == expected
    assert weighted.aggregate_floer.total_rank() >= plain.aggregate_floer.total_rank()


def test_floer_skip_degrades_verdict_to_partial():
    report = graph_homology(trefoil_right(), grid_cap=2)
    member = report.members[0]
    assert member.floer_skip == SKIP_GRID
    assert member.floer is None
    assert member.grid_size == 5
    assert report.verdicts["floer_euler"] == "partial"
    assert euler_check(report) == "partial"


def test_khovanov_skip_degrades_verdict_to_partial():
    report = graph_homology(trefoil_right(), crossing_cap=2)
    assert report.members[0].khovanov_skip == SKIP_CROSSINGS
    assert report.verdicts["khovanov_euler"] == "partial"


def test_theta_graph_reports_cleanly():
    report = graph_homology(theta())
    assert report.verdicts["floer_euler"] == "pass"
    assert report.verdicts["khovanov_euler"] == "pass"
    assert report.to_json()["distinct_members"] == len(report.members)
