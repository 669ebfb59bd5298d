"""Grid presentations of link diagrams.

A grid of size n places one X and one O marker in every row and every
column, with the two markers of a row never sharing a cell.  Row 0 is
drawn topmost.  Horizontal segments run O -> X, vertical segments run
X -> O, and verticals always cross over horizontals, so the pair of
permutations determines an oriented link.

Conversion from a planar diagram goes through braid form: Seifert
circles are made coherently nested by poking strands across defect
faces (a type II move through any face bordered by two same-sense arcs
of distinct circles), the braid word is read off the nested annuli, and
the closed braid is laid out on a grid column by column.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .catalog import braid_closure
from .diagrams import Dart, GraphDiagram
from .errors import InvalidDiagram, RoutingFailure
from .invariants import fingerprint, reduce_diagram
from .moves import _r2_insert, crossing_from_compass

_VERIFY_CAP = 14


def link_evidence(d: GraphDiagram) -> Tuple:
    """Invariant tuple used to certify that a conversion preserved the link."""
    fp = fingerprint(d)
    return (fp.components, fp.jones, fp.alexander)


@dataclass(frozen=True)
class GridDiagram:
    """Two marker permutations; X[r] and O[r] are the columns used by row r."""

    n: int
    X: Tuple[int, ...]
    O: Tuple[int, ...]

    def __post_init__(self) -> None:
        problems: List[str] = []
        if self.n < 2:
            problems.append("grid size must be at least 2")
        for name, perm in (("X", self.X), ("O", self.O)):
            if len(perm) != self.n or sorted(perm) != list(range(self.n)):
                problems.append(f"{name} is not a permutation of 0..{self.n - 1}")
        if not problems:
            for r in range(self.n):
                if self.X[r] == self.O[r]:
                    problems.append(f"row {r} places both markers in one cell")
        if problems:
            raise InvalidDiagram(problems)

    def component_count(self) -> int:
        seen = [False] * self.n
        cycles = 0
        for start in range(self.n):
            if seen[start]:
                continue
            cycles += 1
            r = start
            while not seen[r]:
                seen[r] = True
                r = self.O.index(self.X[r])
        return cycles

    def to_json(self) -> Dict:
        return {"n": self.n, "X": list(self.X), "O": list(self.O)}

    @staticmethod
    def from_json(payload: Dict) -> "GridDiagram":
        if not isinstance(payload, dict):
            raise InvalidDiagram(["grid payload must be an object"])
        missing = [k for k in ("n", "X", "O") if k not in payload]
        if missing:
            raise InvalidDiagram([f"grid payload lacks key {k!r}" for k in missing])
        n, xs, os_ = payload["n"], payload["X"], payload["O"]
        if not isinstance(n, int) or not all(
            isinstance(v, list) and all(isinstance(u, int) for u in v) for v in (xs, os_)
        ):
            raise InvalidDiagram(["grid payload fields must be an int and two int lists"])
        return GridDiagram(n, tuple(xs), tuple(os_))


def translate(g: GridDiagram, dr: int, dc: int) -> GridDiagram:
    """Cyclic shift; moving the outermost strand across infinity keeps the link."""
    n = g.n
    xs, os_ = [0] * n, [0] * n
    for r in range(n):
        xs[(r + dr) % n] = (g.X[r] + dc) % n
        os_[(r + dr) % n] = (g.O[r] + dc) % n
    return GridDiagram(n, tuple(xs), tuple(os_))


def transpose(g: GridDiagram) -> GridDiagram:
    """Reflect across the main diagonal.

    The reflection mirrors the picture but also trades the over strand
    for the under one, so the two flips cancel: the link is unchanged,
    with every component reversed.
    """
    xs, os_ = [0] * g.n, [0] * g.n
    for r in range(g.n):
        xs[g.X[r]] = r
        os_[g.O[r]] = r
    return GridDiagram(g.n, tuple(xs), tuple(os_))


def mirror_grid(g: GridDiagram) -> GridDiagram:
    """Reflect across a vertical line; presents the mirror link."""
    m = g.n - 1
    return GridDiagram(
        g.n,
        tuple(m - c for c in g.X),
        tuple(m - c for c in g.O),
    )


def reverse(g: GridDiagram) -> GridDiagram:
    """Swap marker roles, reversing the orientation of every component."""
    return GridDiagram(g.n, g.O, g.X)


def grid_union(a: GridDiagram, b: GridDiagram) -> GridDiagram:
    """Block-diagonal sum presenting the split union of the two links."""
    shift = a.n
    return GridDiagram(
        a.n + b.n,
        a.X + tuple(c + shift for c in b.X),
        a.O + tuple(c + shift for c in b.O),
    )


# -- stabilization and destabilization -----------------------------------------


def stabilize(g: GridDiagram, r: int, down: bool = True, right: bool = True) -> GridDiagram:
    """Split row r's X marker into an L of three markers on an n+1 grid."""
    c = g.X[r]
    rn = r + 1 if down else r
    cn = c + 1 if right else c
    rr = r if down else r + 1
    cc = c if right else c + 1

    def row_of(t: int) -> int:
        return t if t < rn else t + 1

    def col_of(u: int) -> int:
        return u if u < cn else u + 1

    n = g.n + 1
    xs, os_ = [-1] * n, [-1] * n
    for t in range(g.n):
        xs[row_of(t)] = col_of(g.X[t])
        os_[row_of(t)] = col_of(g.O[t])
    xs[rr], xs[rn], os_[rn] = cn, cc, cn
    return GridDiagram(n, tuple(xs), tuple(os_))


def _block_markers(g: GridDiagram, r: int, c: int) -> List[Tuple[int, int, str]]:
    found = []
    for t in (r, (r + 1) % g.n):
        for u in (c, (c + 1) % g.n):
            if g.X[t] == u:
                found.append((t, u, "X"))
            if g.O[t] == u:
                found.append((t, u, "O"))
    return found


def find_destabilization(g: GridDiagram) -> Optional[Tuple[int, int]]:
    """Top-left cell of some 2x2 block holding exactly three markers."""
    for r in range(g.n):
        for c in range(g.n):
            if len(_block_markers(g, r, c)) == 3:
                return (r, c)
    return None


def destabilize(g: GridDiagram, r: int, c: int) -> GridDiagram:
    """Collapse the three-marker block at (r, c) to a single marker."""
    if (r + 1) % g.n != r + 1:
        return destabilize(translate(g, 1, 0), 0, c)
    if (c + 1) % g.n != c + 1:
        return destabilize(translate(g, 0, 1), r, 0)
    marks = _block_markers(g, r, c)
    if len(marks) != 3:
        raise InvalidDiagram([f"block at ({r}, {c}) has {len(marks)} markers, not 3"])
    cells = {(t, u) for t, u, _ in marks}
    (re, ce) = next(
        (t, u) for t in (r, r + 1) for u in (c, c + 1) if (t, u) not in cells
    )
    rk, ck = r + r + 1 - re, c + c + 1 - ce
    kinds = {(t, u): k for t, u, k in marks}
    arm = kinds[(rk, ce)]
    if arm != kinds[(re, ck)] or kinds[(rk, ck)] == arm:
        raise InvalidDiagram(["destabilization block is not an L of equal arms"])
    xs, os_ = [], []
    for t in range(g.n):
        if t == rk:
            continue
        row = {"X": g.X[t], "O": g.O[t]}
        if t == re:
            row[arm] = ce
        xs.append(row["X"] - (row["X"] > ck))
        os_.append(row["O"] - (row["O"] > ck))
    return GridDiagram(g.n - 1, tuple(xs), tuple(os_))


def _spans_commute(a1: int, b1: int, a2: int, b2: int) -> bool:
    disjoint = b1 < a2 or b2 < a1
    nested = (a1 < a2 and b2 < b1) or (a2 < a1 and b1 < b2)
    return disjoint or nested


def commute_rows(g: GridDiagram, r: int) -> Optional[GridDiagram]:
    """Swap rows r and r+1 when their column spans are nested or disjoint."""
    if not 0 <= r < g.n - 1:
        return None
    s1 = sorted((g.X[r], g.O[r]))
    s2 = sorted((g.X[r + 1], g.O[r + 1]))
    if not _spans_commute(s1[0], s1[1], s2[0], s2[1]):
        return None
    xs, os_ = list(g.X), list(g.O)
    xs[r], xs[r + 1] = xs[r + 1], xs[r]
    os_[r], os_[r + 1] = os_[r + 1], os_[r]
    return GridDiagram(g.n, tuple(xs), tuple(os_))


def commute_cols(g: GridDiagram, c: int) -> Optional[GridDiagram]:
    """Swap columns c and c+1 when their row spans are nested or disjoint."""
    if not 0 <= c < g.n - 1:
        return None
    swapped = commute_rows(transpose(g), c)
    return None if swapped is None else transpose(swapped)


def simplify_grid(g: GridDiagram, search_cap: int = 4000) -> GridDiagram:
    """Greedy destabilization; commutations are searched breadth-first at
    fixed size until one exposes a destabilization, so n never increases."""
    while True:
        pos = find_destabilization(g)
        if pos is not None:
            g = destabilize(g, *pos)
            continue
        frontier = [g]
        seen = {(g.X, g.O)}
        unlocked = None
        while frontier and unlocked is None and len(seen) < search_cap:
            state = frontier.pop(0)
            for trial in [commute_rows(state, r) for r in range(state.n - 1)] + [
                commute_cols(state, c) for c in range(state.n - 1)
            ]:
                if trial is None or (trial.X, trial.O) in seen:
                    continue
                seen.add((trial.X, trial.O))
                if find_destabilization(trial) is not None:
                    unlocked = trial
                    break
                frontier.append(trial)
        if unlocked is None:
            return g
        g = unlocked


# -- grid to planar diagram -----------------------------------------------------


def grid_to_diagram(g: GridDiagram) -> GraphDiagram:
    """Planar diagram of the drawn grid; verticals cross over horizontals."""
    n = g.n
    row_x = {c: r for r, c in enumerate(g.X)}
    row_o = {c: r for r, c in enumerate(g.O)}
    crossings_at: Dict[Tuple[int, int], int] = {}
    for r in range(n):
        lo, hi = sorted((g.X[r], g.O[r]))
        for c in range(lo + 1, hi):
            vlo, vhi = sorted((row_x[c], row_o[c]))
            if vlo < r < vhi:
                crossings_at[(r, c)] = len(crossings_at)

    def row_passages(r: int) -> List[int]:
        cols = sorted(c for (t, c) in crossings_at if t == r)
        if g.O[r] > g.X[r]:
            cols.reverse()
        return [crossings_at[(r, c)] for c in cols]

    def col_passages(c: int) -> List[int]:
        rows = sorted(t for (t, u) in crossings_at if u == c)
        if row_x[c] > row_o[c]:
            rows.reverse()
        return [crossings_at[(r, c)] for r in rows]

    under_arcs: Dict[int, Tuple[int, int]] = {}
    over_arcs: Dict[int, Tuple[int, int]] = {}
    loops = 0
    next_arc = 0
    seen_rows = [False] * n
    for start in range(n):
        if seen_rows[start]:
            continue
        stops: List[Tuple[int, bool]] = []
        r = start
        while not seen_rows[r]:
            seen_rows[r] = True
            stops.extend((cid, True) for cid in row_passages(r))
            stops.extend((cid, False) for cid in col_passages(g.X[r]))
            r = row_o[g.X[r]]
        if not stops:
            loops += 1
            continue
        first = next_arc
        for k, (cid, under) in enumerate(stops):
            arc_in = first + k
            arc_out = first + (k + 1) % len(stops)
            (under_arcs if under else over_arcs)[cid] = (arc_in, arc_out)
        next_arc += len(stops)

    crossings: List[Tuple[int, int, int, int]] = [None] * len(crossings_at)
    heads: Dict[int, Dart] = {}
    for (r, c), cid in crossings_at.items():
        u_in, u_out = under_arcs[cid]
        o_in, o_out = over_arcs[cid]
        east = g.O[r] < g.X[r]
        south = row_x[c] < row_o[c]
        rays = {
            "W" if east else "E": u_in,
            "E" if east else "W": u_out,
            "N" if south else "S": o_in,
            "S" if south else "N": o_out,
        }
        tup, slot_of = crossing_from_compass(rays, "W" if east else "E")
        crossings[cid] = tup
        heads[u_in] = ("x", cid, slot_of["W" if east else "E"])
        heads[o_in] = ("x", cid, slot_of["N" if south else "S"])
    d = GraphDiagram([list(t) for t in crossings], [], loops, heads)
    d.validate()
    return d


# -- planar diagram to braid form ------------------------------------------------


def seifert_classes(d: GraphDiagram) -> Dict[int, int]:
    """Arc -> circle label after smoothing every crossing along orientation."""
    parent = {a: a for a in d.arc_ids()}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(d.crossings)):
        c = d.crossings[i]
        pairs = ((c[0], c[1]), (c[2], c[3])) if d.crossing_sign(i) > 0 else (
            (c[0], c[3]),
            (c[1], c[2]),
        )
        for a, b in pairs:
            parent[find(a)] = find(b)
    return {a: find(a) for a in parent}


def _dart_sense(d: GraphDiagram, dart: Dart) -> bool:
    """True when the face traversal through this corner runs with the arc."""
    return d.heads[d.arc_at(dart)] != dart


def _defect_pair(d: GraphDiagram, classes: Dict[int, int]) -> Optional[Tuple[Dart, Dart]]:
    for face in d.faces():
        for i in range(len(face)):
            for j in range(i + 1, len(face)):
                if classes[d.arc_at(face[i])] == classes[d.arc_at(face[j])]:
                    continue
                if _dart_sense(d, face[i]) == _dart_sense(d, face[j]):
                    return (face[i], face[j])
    return None


_NEXT_SLOT = {1: {0: 1, 3: 2}, -1: {0: 3, 1: 2}}


def _circle_walks(d: GraphDiagram, classes: Dict[int, int]) -> Dict[int, List[int]]:
    """Crossing sequence met by each Seifert circle, in traversal order."""
    walks: Dict[int, List[int]] = {}
    for label in sorted(set(classes.values())):
        start = min(a for a in classes if classes[a] == label)
        arc, seq = start, []
        while True:
            kind, i, s = d.heads[arc]
            if kind != "x":
                raise InvalidDiagram(["braid conversion expects a link diagram"])
            seq.append(i)
            arc = d.crossings[i][_NEXT_SLOT[d.crossing_sign(i)][s]]
            if arc == start:
                break
        walks[label] = seq
    return walks


def _rotate_min(items: Sequence[int]) -> List[int]:
    k = items.index(min(items))
    return list(items[k:]) + list(items[:k])


def braid_word(d: GraphDiagram) -> Tuple[List[int], int]:
    """Braid whose closure is the connected link diagram d.

    Defect faces are poked away first, so the Seifert circles nest into
    annuli; the word lists the crossings in angular order with one
    generator per annulus.
    """
    if not d.crossings:
        raise InvalidDiagram(["braid conversion needs at least one crossing"])
    classes = seifert_classes(d)
    guard = 2 * len(set(classes.values())) ** 2 + 10
    for _ in range(guard):
        pair = _defect_pair(d, classes)
        if pair is None:
            break
        d = _r2_insert(d, pair[0], pair[1], True)
        classes = seifert_classes(d)
    else:
        raise RoutingFailure("defect faces persist after the poke budget")

    pair_of: Dict[int, Tuple[int, int]] = {}
    adjacency: Dict[int, set] = {}
    for i, c in enumerate(d.crossings):
        labels = {classes[a] for a in c}
        if len(labels) != 2:
            raise RoutingFailure("crossing joins a Seifert circle to itself")
        a, b = sorted(labels)
        pair_of[i] = (a, b)
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)

    ends = sorted(v for v, nb in adjacency.items() if len(nb) == 1)
    if len(adjacency) == 1 or len(ends) != 2 or any(
        len(nb) > 2 for nb in adjacency.values()
    ):
        raise RoutingFailure("nested circles do not form a single chain")
    path = [ends[0]]
    while len(path) < len(adjacency):
        step = adjacency[path[-1]] - set(path[-2:])
        if len(step) != 1:
            raise RoutingFailure("nested circles do not form a single chain")
        path.append(step.pop())
    position = {label: k for k, label in enumerate(path)}

    walks = _circle_walks(d, classes)
    order = walks[path[0]]
    for k in range(1, len(path)):
        walk = walks[path[k]]
        anchors = [i for i in walk if position[pair_of[i][0]] == k - 1
                   or position[pair_of[i][1]] == k - 1]
        anchor_set = set(anchors)
        if _rotate_min([i for i in order if i in anchor_set]) != _rotate_min(anchors):
            raise RoutingFailure("annulus orders disagree between circle walks")
        shift = walk.index(anchors[0])
        walk = walk[shift:] + walk[:shift]
        merged: List[int] = []
        for i in order:
            merged.append(i)
            if i in anchor_set:
                at = walk.index(i) + 1
                while at < len(walk) and walk[at] not in anchor_set:
                    merged.append(walk[at])
                    at += 1
        order = merged

    word = []
    for i in _rotate_min(order):
        a, b = pair_of[i]
        word.append(d.crossing_sign(i) * (min(position[a], position[b]) + 1))
    return word, len(path)


# -- braid closure on a grid -----------------------------------------------------


def braid_to_grid(word: Sequence[int], strands: int) -> GridDiagram:
    """Grid of the closed braid: strand columns descend, return columns rise."""
    descend = [("d", j) for j in range(strands)]
    cols = descend + [("r", j) for j in reversed(range(strands))]
    rows: List[Tuple[Tuple, Tuple]] = []
    for j in range(strands):
        rows.append(((("d", j), "X"), (("r", j), "O")))
    pos = list(descend)
    for k, letter in enumerate(word):
        p = abs(letter) - 1
        if not 0 <= p < strands - 1:
            raise InvalidDiagram([f"braid letter {letter} exceeds {strands} strands"])
        new = ("s", k)
        if letter > 0:
            cols.insert(cols.index(pos[p + 1]) + 1, new)
            rows.append(((pos[p], "O"), (new, "X")))
            pos[p], pos[p + 1] = pos[p + 1], new
        else:
            cols.insert(cols.index(pos[p]), new)
            rows.append(((pos[p + 1], "O"), (new, "X")))
            pos[p], pos[p + 1] = new, pos[p]
    for j in reversed(range(strands)):
        rows.append(((pos[j], "O"), (("r", j), "X")))
    index = {key: k for k, key in enumerate(cols)}
    xs, os_ = [-1] * len(rows), [-1] * len(rows)
    for r, mark_pair in enumerate(rows):
        for key, kind in mark_pair:
            (xs if kind == "X" else os_)[r] = index[key]
    return GridDiagram(len(rows), tuple(xs), tuple(os_))


# -- full conversion ---------------------------------------------------------------


def _connected_pieces(d: GraphDiagram) -> List[GraphDiagram]:
    ends = d.arc_endpoints()
    assigned: Dict[int, int] = {}
    for i in range(len(d.crossings)):
        if i in assigned:
            continue
        group = len(set(assigned.values()))
        stack = [i]
        assigned[i] = group
        while stack:
            j = stack.pop()
            for a in d.crossings[j]:
                for kind, k, _ in ends[a]:
                    if kind == "x" and k not in assigned:
                        assigned[k] = group
                        stack.append(k)
    pieces = []
    for group in sorted(set(assigned.values())):
        members = [i for i in sorted(assigned) if assigned[i] == group]
        arcs = sorted({a for i in members for a in d.crossings[i]})
        arc_map = {a: k for k, a in enumerate(arcs)}
        site_map = {i: k for k, i in enumerate(members)}
        crossings = [[arc_map[a] for a in d.crossings[i]] for i in members]
        heads = {}
        for a in arcs:
            kind, i, s = d.heads[a]
            heads[arc_map[a]] = (kind, site_map[i], s)
        pieces.append(GraphDiagram(crossings, [], 0, heads))
    return pieces


def pd_to_grid(d: GraphDiagram) -> GridDiagram:
    """Grid presentation of the oriented link: reduce, braid pieces, stack blocks.

    Piece words short enough to afford a bracket computation are checked
    against the input by fingerprint before use.
    """
    if not d.is_link():
        raise InvalidDiagram(["grid conversion expects a link diagram"])
    d = reduce_diagram(d)
    grids = []
    for piece in _connected_pieces(d):
        word, strands = braid_word(piece)
        if len(word) <= _VERIFY_CAP:
            if link_evidence(braid_closure(word, strands)) != link_evidence(piece):
                raise RoutingFailure("extracted braid closure presents a different link")
        grids.append(braid_to_grid(word, strands))
    grids.extend(GridDiagram(2, (1, 0), (0, 1)) for _ in range(d.loops))
    if not grids:
        raise InvalidDiagram(["empty diagram has no grid presentation"])
    out = grids[0]
    for g in grids[1:]:
        out = grid_union(out, g)
    return out
