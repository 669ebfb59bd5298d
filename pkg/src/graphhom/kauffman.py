"""Vertex replacements and the link family they generate.

A replacement choice routes one pair of edge-ends through each vertex
and leaves the rest as free ends.  Applying a full assignment deletes
every open strand, splices surviving strands straight through the
crossings that lose a passage, and keeps the closed curves.  The family
collects the nonempty results over all assignments, deduplicated by
fingerprint with multiplicities.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import comb, prod
from typing import Dict, List, Optional, Tuple

from .diagrams import GraphDiagram
from .errors import CapExceeded, InvalidDiagram
from .invariants import Fingerprint, fingerprint, reduce_diagram

log = logging.getLogger(__name__)

SlotPair = Tuple[int, int]
ReplacementChoice = Dict[int, Optional[SlotPair]]

# an arc end is (arc id, endpoint it sits at)
_End = Tuple[int, Tuple[str, int, int]]


def vertex_choices(valence: int) -> List[SlotPair]:
    """All unordered slot pairs a replacement can connect; empty when
    there is nothing to connect through."""
    if valence < 0:
        raise InvalidDiagram(["negative valence"])
    return [(i, j) for i in range(valence) for j in range(i + 1, valence)]


def assignment_count(g: GraphDiagram) -> int:
    return prod(max(comb(len(v), 2), 1) for v in g.vertices)


def _check_choice(g: GraphDiagram, choice: ReplacementChoice) -> None:
    if set(choice) != set(range(len(g.vertices))):
        raise InvalidDiagram(["replacement choice does not cover the vertex set"])
    for vi, pair in choice.items():
        deg = len(g.vertices[vi])
        if deg <= 1:
            if pair is not None:
                raise InvalidDiagram([f"vertex {vi} has valence {deg}; nothing to connect"])
            continue
        if pair is None:
            raise InvalidDiagram([f"vertex {vi} needs a connected pair"])
        a, b = pair
        if not (0 <= a < deg and 0 <= b < deg and a != b):
            raise InvalidDiagram([f"slot pair {pair} invalid at vertex {vi}"])


def apply_replacement(g: GraphDiagram, choice: ReplacementChoice) -> GraphDiagram:
    """Route each vertex through its chosen pair, delete open strands,
    and return the remaining link diagram (possibly empty)."""
    _check_choice(g, choice)
    ends = g.arc_endpoints()

    def end_at(e: Tuple[str, int, int]) -> _End:
        kind, i, s = e
        arc = (g.crossings if kind == "x" else g.vertices)[i][s]
        return (arc, e)

    def other_end(end: _End) -> _End:
        arc, e = end
        e1, e2 = ends[arc]
        return (arc, e2 if e == e1 else e1)

    # strands: arcs joined through crossing passages and chosen pairs
    parent: Dict[int, int] = {a: a for a in ends}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in g.crossings:
        union(c[0], c[2])
        union(c[1], c[3])
    for vi, pair in choice.items():
        if pair is not None:
            union(g.vertices[vi][pair[0]], g.vertices[vi][pair[1]])

    open_roots = set()
    for vi, v in enumerate(g.vertices):
        pair = choice[vi] or ()
        for s, arc in enumerate(v):
            if s not in pair:
                open_roots.add(find(arc))

    def closed(arc: int) -> bool:
        return find(arc) not in open_roots

    junction: Dict[_End, _End] = {}

    def join(e1: Tuple[str, int, int], e2: Tuple[str, int, int]) -> None:
        a, b = end_at(e1), end_at(e2)
        junction[a] = b
        junction[b] = a

    kept: List[int] = []
    for i, c in enumerate(g.crossings):
        under_closed, over_closed = closed(c[0]), closed(c[1])
        if under_closed and over_closed:
            kept.append(i)
        elif under_closed:
            join(("x", i, 0), ("x", i, 2))
        elif over_closed:
            join(("x", i, 1), ("x", i, 3))
    for vi, pair in choice.items():
        if pair is not None and closed(g.vertices[vi][pair[0]]):
            join(("v", vi, pair[0]), ("v", vi, pair[1]))

    new_index = {ki: n for n, ki in enumerate(kept)}
    crossings: List[List[int]] = [[-1] * 4 for _ in kept]
    heads: Dict[int, Tuple[str, int, int]] = {}
    consumed: set = set()
    seen_arcs: set = set()
    seg = 0

    def walk_segment(dep: _End) -> Tuple[List[int], _End]:
        chain = [dep[0]]
        cur = dep
        while True:
            far = other_end(cur)
            if far not in junction:
                return chain, far
            cur = junction[far]
            chain.append(cur[0])

    for ki in kept:
        for s in range(4):
            start = end_at(("x", ki, s))
            if start in consumed:
                continue
            dep = start
            while True:
                chain, arr = walk_segment(dep)
                consumed.add(dep)
                consumed.add(arr)
                seen_arcs.update(chain)
                _, (_, a_ki, a_slot) = arr
                _, (_, d_ki, d_slot) = dep
                crossings[new_index[d_ki]][d_slot] = seg
                crossings[new_index[a_ki]][a_slot] = seg
                heads[seg] = ("x", new_index[a_ki], a_slot)
                seg += 1
                dep = end_at(("x", a_ki, (a_slot + 2) % 4))
                if dep == start:
                    break

    loops = g.loops
    for arc in sorted(ends):
        if arc in seen_arcs or not closed(arc):
            continue
        start = (arc, ends[arc][0])
        cur = start
        while True:
            seen_arcs.add(cur[0])
            cur = junction[other_end(cur)]
            if cur == start:
                break
        loops += 1

    # reorient crossings whose under-strand was walked backward
    for n, c in enumerate(crossings):
        if heads[c[2]] == ("x", n, 2):
            crossings[n] = [c[2], c[3], c[0], c[1]]
            for a in set(c):
                k, i, s = heads[a]
                if (k, i) == ("x", n):
                    heads[a] = ("x", n, (s + 2) % 4)
    return GraphDiagram(crossings, [], loops, heads)


@dataclass(frozen=True)
class FamilyMember:
    diagram: GraphDiagram
    fingerprint: Fingerprint
    multiplicity: int

    def to_json(self) -> dict:
        return {
            "fingerprint": self.fingerprint.to_json(),
            "diagram": self.diagram.to_json(),
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class LinkFamily:
    source: GraphDiagram
    assignments: int
    members: Tuple[FamilyMember, ...]

    def fingerprints(self) -> List[Fingerprint]:
        return [m.fingerprint for m in self.members]

    def multiset(self) -> List[Tuple[Fingerprint, int]]:
        return [(m.fingerprint, m.multiplicity) for m in self.members]

    def to_json(self) -> dict:
        return {
            "assignments": self.assignments,
            "members": [m.to_json() for m in self.members],
        }


def family(g: GraphDiagram, cap: int = 10**6) -> LinkFamily:
    """All nonempty links produced by vertex replacements, deduplicated
    by fingerprint in deterministic order."""
    g.validate_strict()
    n = assignment_count(g)
    if n > cap:
        raise CapExceeded(f"{n} replacement assignments exceed the cap of {cap}")
    per_vertex = [vertex_choices(len(v)) or [None] for v in g.vertices]
    found: Dict[Tuple, List] = {}
    for combo in itertools.product(*per_vertex):
        choice = dict(enumerate(combo))
        link = apply_replacement(g, choice)
        if not link.crossings and link.loops == 0:
            continue
        fp = fingerprint(link)
        key = fp.sort_key()
        reduced_key = reduce_diagram(link).canonical_key()
        if key in found:
            entry = found[key]
            entry[2] += 1
            if entry[3] is not None and reduced_key != entry[3]:
                log.warning(
                    "fingerprint collision: distinct reduced diagrams share %s", fp
                )
                entry[3] = None
        else:
            found[key] = [fp, link, 1, reduced_key]
    members = tuple(
        FamilyMember(diagram=v[1], fingerprint=v[0], multiplicity=v[2])
        for _, v in sorted(found.items())
    )
    return LinkFamily(source=g, assignments=n, members=members)
