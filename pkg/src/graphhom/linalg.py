"""Exact linear algebra over F2 and Z.

F2 matrices are lists of Python ints used as bitsets: bit j of row i is
the (i, j) entry.  Integer matrices are dense lists of lists.  Both stay
exact; nothing here floats.
"""

from __future__ import annotations

from typing import List, Sequence


# -- GF(2) ------------------------------------------------------------------

def f2_rank(rows: Sequence[int]) -> int:
    lead: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in lead:
                r ^= lead[top]
            else:
                lead[top] = r
                rank += 1
                break
    return rank


def f2_mul(a_rows: Sequence[int], b_rows: Sequence[int]) -> List[int]:
    """Product of bitset matrices: row i of the result is XOR of the
    b-rows selected by the set bits of a_rows[i]."""
    out = []
    for a in a_rows:
        acc = 0
        x = a
        while x:
            j = (x & -x).bit_length() - 1
            acc ^= b_rows[j]
            x &= x - 1
        out.append(acc)
    return out


def f2_is_zero(rows: Sequence[int]) -> bool:
    return all(r == 0 for r in rows)


# -- integers ---------------------------------------------------------------

def int_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> List[List[int]]:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    ncols = len(b[0])
    out = []
    for row in a:
        acc = [0] * ncols
        for j, v in enumerate(row):
            if v:
                brow = b[j]
                for k in range(ncols):
                    acc[k] += v * brow[k]
        out.append(acc)
    return out


def int_is_zero(rows: Sequence[Sequence[int]]) -> bool:
    return all(v == 0 for row in rows for v in row)


def smith_invariant_factors(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal of the Smith normal form, d1 | d2 | ... | dr.

    Smallest-pivot elimination with integer row and column operations.
    The length of the result is the rank; entries greater than one are
    the torsion coefficients when the matrix presents a cokernel.
    """
    m = [list(row) for row in matrix]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    factors: List[int] = []
    t = 0
    while t < nrows and t < ncols:
        pr = pc = -1
        best = 0
        for i in range(t, nrows):
            row = m[i]
            for j in range(t, ncols):
                v = abs(row[j])
                if v and (best == 0 or v < best):
                    best, pr, pc = v, i, j
                    if best == 1:
                        break
            if best == 1:
                break
        if best == 0:
            break
        if pr != t:
            m[t], m[pr] = m[pr], m[t]
        if pc != t:
            for row in m:
                row[t], row[pc] = row[pc], row[t]

        pivot = m[t][t]
        clean = True
        for i in range(t + 1, nrows):
            v = m[i][t]
            if v:
                q = v // pivot
                if q:
                    ri, rt = m[i], m[t]
                    for k in range(t, ncols):
                        ri[k] -= q * rt[k]
                if m[i][t]:
                    clean = False
        if not clean:
            continue
        for j in range(t + 1, ncols):
            v = m[t][j]
            if v:
                q = v // pivot
                if q:
                    for i in range(t, nrows):
                        m[i][j] -= q * m[i][t]
                if m[t][j]:
                    clean = False
        if not clean:
            continue

        # Pivot must divide every remaining entry for the divisibility
        # chain; fold an offending row into row t and redo this step.
        offending = -1
        for i in range(t + 1, nrows):
            row = m[i]
            if any(row[j] % pivot for j in range(t + 1, ncols)):
                offending = i
                break
        if offending >= 0:
            ri, rt = m[offending], m[t]
            for k in range(t, ncols):
                rt[k] += ri[k]
            continue
        factors.append(abs(pivot))
        t += 1
    return factors


def int_rank(matrix: Sequence[Sequence[int]]) -> int:
    return len(smith_invariant_factors(matrix))
