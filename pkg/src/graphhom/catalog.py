"""Reference diagrams: braid closures and the bundled census shapes.

Braid conventions: strands run top to bottom; the positive generator
crosses strand i+1 over strand i (right over left), which makes sigma_1
cubed the right-handed trefoil with writhe +3.
"""

from __future__ import annotations

from typing import List, Sequence

from .diagrams import GraphDiagram
from .errors import InvalidDiagram


def braid_closure(word: Sequence[int], strands: int) -> GraphDiagram:
    """Close a braid word into a link diagram.

    Generators are 1-based: k means sigma_k, -k its inverse, crossing
    strand positions k-1 and k (0-based).
    """
    if strands < 1:
        raise InvalidDiagram(["braid needs at least one strand"])
    cur = list(range(strands))
    nxt = strands
    crossings: List[tuple] = []
    heads = {}
    for g in word:
        p = abs(g) - 1
        if not 0 <= p < strands - 1:
            raise InvalidDiagram([f"generator {g} out of range for {strands} strands"])
        a, b = cur[p], cur[p + 1]
        c, d = nxt, nxt + 1
        nxt += 2
        i = len(crossings)
        if g > 0:
            # under-in NW = a, under-out SE = d's position... the left
            # strand dives under to the right; right strand rides over to
            # the left
            crossings.append((a, c, d, b))
            heads[a] = ("x", i, 0)
            heads[b] = ("x", i, 3)
        else:
            crossings.append((b, a, c, d))
            heads[b] = ("x", i, 0)
            heads[a] = ("x", i, 1)
        cur[p], cur[p + 1] = c, d
    loops = 0
    relabel = {}
    for p in range(strands):
        if cur[p] == p:
            loops += 1
        else:
            relabel[cur[p]] = p
    if loops and not relabel and not crossings:
        return GraphDiagram([], [], loops, {})
    crossings2 = [tuple(relabel.get(a, a) for a in c) for c in crossings]
    heads2 = {relabel.get(a, a): e for a, e in heads.items()}
    return GraphDiagram(crossings2, [], loops, heads2).validate_strict()


# -- links -------------------------------------------------------------------

def unknot() -> GraphDiagram:
    return GraphDiagram([], [], 1, {})


def unlink(n: int) -> GraphDiagram:
    return GraphDiagram([], [], n, {})


def unknot_kink(sign: int = 1) -> GraphDiagram:
    if sign > 0:
        return GraphDiagram.from_pd([(0, 0, 1, 1)])
    return GraphDiagram.from_pd([(0, 1, 1, 0)])


def hopf_positive() -> GraphDiagram:
    return braid_closure([1, 1], 2)


def hopf_negative() -> GraphDiagram:
    return braid_closure([-1, -1], 2)


def trefoil_right() -> GraphDiagram:
    return braid_closure([1, 1, 1], 2)


def trefoil_left() -> GraphDiagram:
    return braid_closure([-1, -1, -1], 2)


def figure_eight() -> GraphDiagram:
    return braid_closure([1, -2, 1, -2], 3)


# -- graphs ------------------------------------------------------------------

def handcuff() -> GraphDiagram:
    """Two loops joined by a bridge; every replacement assignment is
    crossing-free."""
    return GraphDiagram.from_pd([], [(0, 0, 1), (2, 2, 1)])


def hopf_handcuff() -> GraphDiagram:
    """Handcuff whose two loops link once; closing both loops leaves a
    Hopf link (negative chirality with these rotations)."""
    return GraphDiagram(
        crossings=[(1, 3, 2, 4), (4, 0, 5, 1)],
        vertices=[(2, 6, 0), (3, 5, 6)],
        loops=0,
        heads={
            0: ("x", 1, 1),
            1: ("x", 0, 0),
            2: ("v", 0, 0),
            3: ("x", 0, 1),
            4: ("x", 1, 0),
            5: ("v", 1, 1),
            6: ("v", 1, 2),
        },
    ).validate_strict()


def theta() -> GraphDiagram:
    """Two vertices joined by three parallel edges."""
    return GraphDiagram.from_pd([], [(0, 1, 2), (2, 1, 0)])
