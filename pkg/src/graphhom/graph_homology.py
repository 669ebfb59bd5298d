"""Graph homology assembly: link-family direct sums with Euler
bookkeeping.

The floer and khovanov flavors aggregate the per-member link homologies
over the distinct members of the replacement family.  Members whose
computation would breach a size cap are skipped with a reason instead
of failing the whole report, and any skip downgrades the corresponding
Euler verdict from pass/fail to partial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, List, Optional, Tuple

from .bigraded import BigradedDims
from .diagrams import GraphDiagram
from .errors import CapExceeded
from .floer import (
    euler_matches_skein,
    hat_euler,
    hat_from_grid,
    skein_euler_target,
    total_homology_from_grid,
)
from .grid import pd_to_grid, simplify_grid
from .invariants import Fingerprint, alexander, reduce_diagram
from .kauffman import LinkFamily, family
from .khovanov import graded_euler, khovanov_homology, unnormalized_jones
from .laurent import Laurent, Q, T, U

FLOER_GRID_CAP = 8
KHOVANOV_CROSSING_CAP = 14

SKIP_GRID = "floer: skipped (grid too large)"
SKIP_CROSSINGS = "khovanov: skipped (too many crossings)"


@dataclass(frozen=True)
class MemberReport:
    """One distinct family member's homologies, or the reason they were
    skipped."""

    fingerprint: Fingerprint
    multiplicity: int
    grid_size: Optional[int] = None
    floer: Optional[BigradedDims] = None
    floer_skip: Optional[str] = None
    floer_euler: Optional[Laurent] = None
    floer_check: Optional[dict] = None
    total_poincare: Optional[Laurent] = None
    total_check: Optional[str] = None
    khovanov: Optional[BigradedDims] = None
    khovanov_skip: Optional[str] = None
    khovanov_euler: Optional[Laurent] = None
    jones_check: Optional[str] = None

    def to_json(self) -> dict:
        doc: dict = {
            "fingerprint": self.fingerprint.to_json(),
            "multiplicity": self.multiplicity,
        }
        if self.grid_size is not None:
            doc["grid_size"] = self.grid_size
        if self.floer is not None:
            doc["floer"] = self.floer.to_json()
            doc["floer_euler"] = self.floer_euler.to_json()
            doc["floer_check"] = self.floer_check
            doc["total_poincare"] = self.total_poincare.to_json()
            doc["total_check"] = self.total_check
        if self.floer_skip:
            doc["floer_skip"] = self.floer_skip
        if self.khovanov is not None:
            doc["khovanov"] = self.khovanov.to_json()
            doc["khovanov_euler"] = self.khovanov_euler.to_json()
            doc["jones_check"] = self.jones_check
        if self.khovanov_skip:
            doc["khovanov_skip"] = self.khovanov_skip
        return doc


@dataclass(frozen=True)
class GraphHomologyReport:
    """Family summary plus per-member and aggregate homology tables."""

    assignments: int
    members: Tuple[MemberReport, ...]
    multiset: bool
    empty_family: bool
    aggregate_floer: Optional[BigradedDims] = None
    aggregate_floer_euler: Optional[Laurent] = None
    aggregate_skein_target: Optional[Laurent] = None
    aggregate_alexander_sum: Optional[Laurent] = None
    aggregate_khovanov: Optional[BigradedDims] = None
    aggregate_khovanov_euler: Optional[Laurent] = None
    verdicts: Dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        doc: dict = {
            "assignments": self.assignments,
            "distinct_members": len(self.members),
            "multiset": self.multiset,
            "empty_family": self.empty_family,
            "members": [m.to_json() for m in self.members],
            "verdicts": self.verdicts,
        }
        if self.aggregate_floer is not None:
            doc["aggregate_floer"] = self.aggregate_floer.to_json()
            doc["aggregate_floer_euler"] = self.aggregate_floer_euler.to_json()
            doc["aggregate_skein_target"] = self.aggregate_skein_target.to_json()
            doc["aggregate_alexander_sum"] = self.aggregate_alexander_sum.to_json()
        if self.aggregate_khovanov is not None:
            doc["aggregate_khovanov"] = self.aggregate_khovanov.to_json()
            doc["aggregate_khovanov_euler"] = self.aggregate_khovanov_euler.to_json()
        return doc


def _weight(member_multiplicity: int, multiset: bool) -> int:
    return member_multiplicity if multiset else 1


def _weighted(dims: BigradedDims, weight: int) -> BigradedDims:
    out = BigradedDims({})
    for _ in range(weight):
        out = out.add(dims)
    return out


def _expected_total(ell: int) -> Laurent:
    return Laurent(U, {(1,): 1, (-1,): 1}) ** (ell - 1)


def _floer_member(diagram: GraphDiagram, fp: Fingerprint, cap: int) -> dict:
    grid = simplify_grid(pd_to_grid(diagram))
    fields: dict = {"grid_size": grid.n}
    if grid.n > cap:
        fields["floer_skip"] = SKIP_GRID
        return fields
    hat = hat_from_grid(grid, cap)
    total = total_homology_from_grid(grid, cap)
    fields["floer"] = hat
    fields["floer_euler"] = hat_euler(hat)
    fields["floer_check"] = euler_matches_skein(hat, diagram)
    fields["total_poincare"] = total
    fields["total_check"] = (
        "pass" if total == _expected_total(fp.components) else "fail"
    )
    return fields


def _khovanov_member(diagram: GraphDiagram, coeffs: str, cap: int) -> dict:
    reduced = reduce_diagram(diagram)
    if len(reduced.crossings) > cap:
        return {"khovanov_skip": SKIP_CROSSINGS}
    dims = khovanov_homology(reduced, coeffs, cap)
    euler = graded_euler(dims)
    check = "pass" if euler == unnormalized_jones(diagram) else "fail"
    return {"khovanov": dims, "khovanov_euler": euler, "jones_check": check}


def _member_fields(
    fm,
    floer: bool,
    khovanov: bool,
    coeffs: str,
    grid_cap: int,
    crossing_cap: int,
) -> dict:
    fields: dict = {}
    if floer:
        fields.update(_floer_member(fm.diagram, fm.fingerprint, grid_cap))
    if khovanov:
        fields.update(_khovanov_member(fm.diagram, coeffs, crossing_cap))
    return fields


def graph_homology(
    g: GraphDiagram,
    floer: bool = True,
    khovanov: bool = True,
    coeffs: str = "z",
    grid_cap: int = FLOER_GRID_CAP,
    crossing_cap: int = KHOVANOV_CROSSING_CAP,
    multiset: bool = False,
    family_cap: int = 10**6,
    fam: Optional[LinkFamily] = None,
    mapper: Callable = map,
) -> GraphHomologyReport:
    """Direct-sum homology report over the graph's link family.

    ``fam`` short-circuits family enumeration when the caller already
    holds it, and ``mapper`` lets the CLI farm the independent member
    computations out to a process pool; results fold in family order
    either way.
    """
    if fam is None:
        fam = family(g, cap=family_cap)

    compute = partial(
        _member_fields,
        floer=floer,
        khovanov=khovanov,
        coeffs=coeffs,
        grid_cap=grid_cap,
        crossing_cap=crossing_cap,
    )
    all_fields = list(mapper(compute, fam.members))

    members: List[MemberReport] = []
    agg_f = BigradedDims({})
    agg_f_euler = Laurent.zero(T)
    agg_target = Laurent.zero(T)
    agg_alex = Laurent.zero(T)
    agg_k = BigradedDims({})
    agg_k_euler = Laurent.zero(Q)
    floer_states: List[str] = []
    khov_states: List[str] = []

    for fm, fields in zip(fam.members, all_fields):
        weight = _weight(fm.multiplicity, multiset)
        if floer:
            if "floer" in fields:
                agg_f = agg_f.add(_weighted(fields["floer"], weight))
                agg_f_euler = agg_f_euler + fields["floer_euler"].scale(weight)
                agg_target = agg_target + skein_euler_target(fm.diagram).scale(weight)
                agg_alex = agg_alex + alexander(fm.diagram).scale(weight)
                floer_states.append(fields["floer_check"]["verdict"])
                if fields["total_check"] == "fail":
                    floer_states.append("fail")
            else:
                floer_states.append("skipped")
        if khovanov:
            if "khovanov" in fields:
                agg_k = agg_k.add(_weighted(fields["khovanov"], weight))
                agg_k_euler = agg_k_euler + fields["khovanov_euler"].scale(weight)
                khov_states.append(fields["jones_check"])
            else:
                khov_states.append("skipped")
        members.append(
            MemberReport(
                fingerprint=fm.fingerprint, multiplicity=fm.multiplicity, **fields
            )
        )

    verdicts: Dict[str, str] = {}
    if floer:
        verdicts["floer_euler"] = _verdict(floer_states)
    if khovanov:
        verdicts["khovanov_euler"] = _verdict(khov_states)

    return GraphHomologyReport(
        assignments=fam.assignments,
        members=tuple(members),
        multiset=multiset,
        empty_family=not fam.members,
        aggregate_floer=agg_f if floer else None,
        aggregate_floer_euler=agg_f_euler if floer else None,
        aggregate_skein_target=agg_target if floer else None,
        aggregate_alexander_sum=agg_alex if floer else None,
        aggregate_khovanov=agg_k if khovanov else None,
        aggregate_khovanov_euler=agg_k_euler if khovanov else None,
        verdicts=verdicts,
    )


def _verdict(states: List[str]) -> str:
    if any(s == "fail" for s in states):
        return "fail"
    if any(s == "skipped" for s in states):
        return "partial"
    return "pass"


def hfg(g: GraphDiagram, **kwargs) -> GraphHomologyReport:
    """Floer graph homology: direct sum of hat tables over the family."""
    return graph_homology(g, floer=True, khovanov=False, **kwargs)


def kkh_graph(g: GraphDiagram, coeffs: str = "z", **kwargs) -> GraphHomologyReport:
    """Khovanov graph homology: direct sum over the family."""
    return graph_homology(g, floer=False, khovanov=True, coeffs=coeffs, **kwargs)


def euler_check(report: GraphHomologyReport) -> str:
    """Aggregate Euler verdict for whichever flavors the report holds."""
    states = [v for v in report.verdicts.values()]
    if not states:
        return "partial"
    return _verdict(
        ["skipped" if s == "partial" else s for s in states]
    )
