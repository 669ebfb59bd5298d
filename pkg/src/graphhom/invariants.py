"""Classical link invariants: bracket state sum, skein recursion, and the
fingerprints used to compare links up to the tool's resolving power.

Two independent computation routes are kept deliberately: the Conway
polynomial by skein recursion and the determinant by Wirtinger coloring
matrix.  Agreement of |Delta(-1)| between them is a standing cross-check
on the diagram plumbing.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .diagrams import GraphDiagram, splice_crossing, _splice_pairs
from .errors import CapExceeded, InvalidDiagram
from .laurent import Laurent, T, Z, conway_to_alexander, normalize_alexander
from .linalg import smith_invariant_factors

A = ("A",)

DELTA = Laurent(A, {(4,): -1, (-4,): -1})  # circle value -A^2 - A^-2


def kauffman_bracket(d: GraphDiagram, cap: int = 24) -> Laurent:
    """State sum over all smoothings; unoriented, unnormalized, <o> = 1.

    The A-smoothing joins slots 0-1 and 2-3, the B-smoothing 0-3 and 1-2.
    """
    if not d.is_link():
        raise InvalidDiagram(["bracket is defined for link diagrams"])
    c = len(d.crossings)
    if c > cap:
        raise CapExceeded(f"bracket state sum over {c} crossings exceeds cap {cap}")
    arcs = d.arc_ids()
    index = {a: k for k, a in enumerate(arcs)}
    out = Laurent.zero(A)
    for state in range(1 << c):
        parent = list(range(len(arcs)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        circles = 0
        for i, cr in enumerate(d.crossings):
            if state >> i & 1:  # B-smoothing
                pairs = ((cr[0], cr[3]), (cr[1], cr[2]))
            else:
                pairs = ((cr[0], cr[1]), (cr[2], cr[3]))
            for u, v in pairs:
                ru, rv = find(index[u]), find(index[v])
                if ru == rv:
                    circles += 1
                else:
                    parent[ru] = rv
        circles += d.loops
        b = bin(state).count("1")
        sigma = (c - b) - b
        term = Laurent.term(A, (2 * sigma,)) * DELTA ** (circles - 1)
        out = out + term
    return out


def jones(d: GraphDiagram, cap: int = 24) -> Laurent:
    """(-A^3)^(-w) <D> under A = t^(-1/4); half-integer powers of t occur
    exactly for even component counts."""
    bracket = kauffman_bracket(d, cap)
    w = d.writhe()
    correction = Laurent(A, {(-6 * w,): (-1) ** (w % 2)})
    normalized = correction * bracket
    terms: Dict[Tuple[int, ...], int] = {}
    for (m,), coeff in normalized.terms.items():
        k = m // 2  # true A exponent; always even after normalization
        if k % 2:
            raise InvalidDiagram([f"bracket exponent {k} not expressible in t"])
        terms[(-k // 2,)] = terms.get((-k // 2,), 0) + coeff
    return Laurent(T, terms)


# -- greedy reduction ---------------------------------------------------------

def reduce_diagram(d: GraphDiagram) -> GraphDiagram:
    """Remove kink and bigon patterns until none remain.

    A monogon face marks a kink; a bigon face whose strand parities are
    uniform marks a second Reidemeister pair.  Both erase by splicing the
    crossings straight through.  Vertices are left untouched.
    """
    changed = True
    while changed:
        changed = False
        for face in d.faces():
            if len(face) == 1 and face[0][0] == "x":
                d = splice_crossing(d, face[0][1])
                changed = True
                break
            if len(face) == 2:
                (k1, i1, s1), (k2, i2, s2) = face
                if k1 != "x" or k2 != "x" or i1 == i2:
                    continue
                if s1 % 2 == (s2 - 1) % 2:  # one strand over at both
                    d = splice_crossing(d, max(i1, i2))
                    d = splice_crossing(d, min(i1, i2))
                    changed = True
                    break
    return d


# -- skein recursion ----------------------------------------------------------

def _is_split(d: GraphDiagram) -> bool:
    pieces = d._site_components() + d.loops
    return pieces > 1


def _first_bad_crossing(d: GraphDiagram) -> Optional[int]:
    """Walk each component from its minimal arc in flow order; a crossing
    whose first visit rides the under-strand is bad.  None means the
    diagram is descending, hence an unlink."""
    _, labels = d.split_components()
    comps: Dict[int, List[int]] = {}
    for a, comp in labels.items():
        comps.setdefault(comp, []).append(a)
    visited: Dict[int, int] = {}
    ends = d.arc_endpoints()
    for comp in sorted(comps):
        base = min(comps[comp])
        a = base
        while True:
            e = d.heads[a]
            if e[0] != "x":
                raise InvalidDiagram(["skein recursion expects a link diagram"])
            _, i, s = e
            if i not in visited:
                visited[i] = s
                if s % 2 == 0:  # first arrival dives under
                    return i
            nxt = {0: 2, 1: 3, 3: 1}[s]
            a = d.crossings[i][nxt]
            if a == base:
                break
    return None


def _switch_crossing(d: GraphDiagram, i: int) -> GraphDiagram:
    c = d.crossings[i]
    r = 3 if d.heads.get(c[3]) == ("x", i, 3) else 1
    return d._rotate_crossings({i: r})


def _oriented_smoothing(d: GraphDiagram, i: int) -> GraphDiagram:
    if d.crossing_sign(i) > 0:
        return _splice_pairs(d, i, ((0, 1), (2, 3)))
    return _splice_pairs(d, i, ((0, 3), (1, 2)))


def conway(d: GraphDiagram, cap: int = 100000) -> Laurent:
    """Skein polynomial: nabla(o) = 1, split links vanish, and
    nabla(L+) - nabla(L-) = z nabla(L0)."""
    if not d.is_link():
        raise InvalidDiagram(["skein recursion is defined for link diagrams"])
    memo: Dict[Tuple, Laurent] = {}
    budget = [cap]

    z = Laurent.term(Z, (2,))

    def rec(cur: GraphDiagram) -> Laurent:
        cur = reduce_diagram(cur)
        if budget[0] <= 0:
            raise CapExceeded(f"skein recursion exceeded {cap} nodes")
        budget[0] -= 1
        if not cur.crossings:
            n = cur.loops
            return Laurent.one(Z) if n == 1 else Laurent.zero(Z)
        if _is_split(cur):
            return Laurent.zero(Z)
        key = cur.canonical_key()
        hit = memo.get(key)
        if hit is not None:
            return hit
        bad = _first_bad_crossing(cur)
        if bad is None:
            ncomp, _ = cur.split_components()
            value = Laurent.one(Z) if ncomp == 1 else Laurent.zero(Z)
        else:
            sign = cur.crossing_sign(bad)
            switched = rec(_switch_crossing(cur, bad))
            smoothed = rec(_oriented_smoothing(cur, bad))
            value = switched + z * smoothed.scale(sign)
        memo[key] = value
        return value

    return rec(d)


def alexander(d: GraphDiagram) -> Laurent:
    """Symmetric-normalized Alexander polynomial via the skein oracle."""
    return normalize_alexander(conway_to_alexander(conway(d)))


def determinant(d: GraphDiagram) -> int:
    """|H1| of the double branched cover by Wirtinger coloring rows.

    Independent of the skein route: over-arcs are fused across
    over-passages, each crossing contributes 2*over - in - out, and one
    row and column are struck before taking the determinant size.
    """
    if not d.is_link():
        raise InvalidDiagram(["determinant is defined for link diagrams"])
    if not d.crossings:
        return 1 if d.loops == 1 else 0
    if _is_split(d):
        return 0
    arcs = d.arc_ids()
    parent = {a: a for a in arcs}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in d.crossings:
        ru, rv = find(c[1]), find(c[3])
        if ru != rv:
            parent[ru] = rv
    classes = sorted({find(a) for a in arcs})
    col = {cls: k for k, cls in enumerate(classes)}
    rows = []
    for c in d.crossings:
        row = [0] * len(classes)
        row[col[find(c[1])]] += 2
        row[col[find(c[0])]] -= 1
        row[col[find(c[2])]] -= 1
        rows.append(row)
    minor = [row[1:] for row in rows[1:]]
    if not minor or not minor[0]:
        return 1
    factors = smith_invariant_factors(minor)
    if len(factors) < len(minor):
        return 0
    det = 1
    for f in factors:
        det *= f
    return det


# -- fingerprints -------------------------------------------------------------

def reverse_component(d: GraphDiagram, comp: int) -> GraphDiagram:
    """Reverse the orientation of one closed component of a link."""
    _, labels = d.split_components()
    arcs = {a for a, k in labels.items() if k == comp}
    ends = d.arc_endpoints()
    heads = dict(d.heads)
    for a in arcs:
        e1, e2 = ends[a]
        heads[a] = e1 if heads[a] == e2 else e2
    rot = {
        i: 2 for i, c in enumerate(d.crossings) if c[0] in arcs
    }
    return GraphDiagram(d.crossings, d.vertices, d.loops, heads)._rotate_crossings(rot)


class Fingerprint:
    """Comparison currency for links: component count, Jones, Alexander,
    minimized over component orientations so unoriented isotopy classes
    compare stably.  Presentation data (crossing counts, writhe) stays
    out: distinct diagrams of one link must compare equal."""

    __slots__ = ("components", "jones", "alexander")

    def __init__(self, components: int, jones_poly: Laurent, alex: Laurent):
        self.components = components
        self.jones = jones_poly
        self.alexander = alex

    def sort_key(self) -> Tuple:
        return (
            self.components,
            self.jones.sort_key(),
            self.alexander.sort_key(),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Fingerprint) and self.sort_key() == other.sort_key()

    def __hash__(self) -> int:
        return hash(self.sort_key())

    def to_json(self) -> Dict:
        return {
            "components": self.components,
            "jones": self.jones.to_json(),
            "alexander": self.alexander.to_json(),
        }

    def __repr__(self) -> str:
        return (
            f"Fingerprint(components={self.components}, "
            f"jones={self.jones!r}, alexander={self.alexander!r})"
        )


def oriented_invariant_min(d: GraphDiagram, flip_cap: int = 6) -> Tuple[GraphDiagram, Laurent, Laurent]:
    """The diagram reoriented to minimize (Jones, Alexander) sort keys.

    Global reversal fixes both polynomials, so one component stays
    pinned.  Makes downstream choices independent of how an unoriented
    link happened to be oriented on arrival."""
    ncomp, labels = d.split_components()
    flippable = sorted({k for k in labels.values()})[1:]
    if len(flippable) > flip_cap:
        raise CapExceeded(f"{len(flippable) + 1} components exceed the orientation cap")
    best = None
    for mask in range(1 << len(flippable)):
        cur = d
        for bit, comp in enumerate(flippable):
            if mask >> bit & 1:
                cur = reverse_component(cur, comp)
        key = (jones(cur).sort_key(), alexander(cur).sort_key())
        if best is None or key < best[0]:
            best = (key, cur)
    key, cur = best
    return cur, jones(cur), alexander(cur)


def fingerprint(d: GraphDiagram) -> Fingerprint:
    reduced = reduce_diagram(d)
    ncomp, _ = reduced.split_components()
    _, j, a = oriented_invariant_min(reduced)
    return Fingerprint(ncomp, j, a)
