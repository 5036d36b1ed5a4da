"""Smith normal form over the integers (exact, Python ints)."""

from __future__ import annotations


def smith_diagonal(matrix) -> list:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix.

    Works on a copy with Python ints, so there is no overflow.  Zero rows and
    columns contribute nothing; the number of returned factors is the rank.
    Unit pivots are eliminated on a sparse copy first, which keeps the large
    +-1 relation matrices of edge-path presentations cheap.
    """
    rows = [{j: int(x) for j, x in enumerate(row) if x} for row in matrix]
    units, rest = _eliminate_units(rows)
    cols = sorted({j for r in rest for j in r})
    pos = {j: k for k, j in enumerate(cols)}
    dense = []
    for r in rest:
        row = [0] * len(cols)
        for j, v in r.items():
            row[pos[j]] = v
        dense.append(row)
    return [1] * units + _dense_smith(dense)


def _eliminate_units(rows):
    rows = [r for r in rows if r]
    by_col = {}
    for k, r in enumerate(rows):
        for j in r:
            by_col.setdefault(j, set()).add(k)
    alive = set(range(len(rows)))
    units = 0
    progress = True
    while progress:
        progress = False
        for k in sorted(alive):
            r = rows[k]
            j = next((c for c, v in r.items() if abs(v) == 1), None)
            if j is None:
                continue
            sign = r[j]
            for other in list(by_col.get(j, ())):
                if other == k:
                    continue
                ro = rows[other]
                q = ro[j] * sign
                for c, v in r.items():
                    nv = ro.get(c, 0) - q * v
                    if nv:
                        if c not in ro:
                            by_col.setdefault(c, set()).add(other)
                        ro[c] = nv
                    elif c in ro:
                        del ro[c]
                        by_col[c].discard(other)
                if not ro:
                    alive.discard(other)
            for c in r:
                by_col[c].discard(k)
            alive.discard(k)
            units += 1
            progress = True
    return units, [rows[k] for k in sorted(alive) if rows[k]]


def _dense_smith(a) -> list:
    if not a or not a[0]:
        return []
    m, n = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(m, n):
        pivot = _min_nonzero(a, t, m, n)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    ai, at = a[i], a[t]
                    for k in range(t, n):
                        ai[k] -= q * at[k]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a[t:]:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # divisibility: fold an offending row into the pivot row
                bad = next(
                    (i for i in range(t + 1, m) if any(a[i][k] % p for k in range(t + 1, n))),
                    None,
                )
                if bad is None:
                    break
                at, ab = a[t], a[bad]
                for k in range(t, n):
                    at[k] += ab[k]
                continue
            i, j = _min_nonzero(a, t, m, n, cross=True)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _min_nonzero(a, t, m, n, cross=False):
    best = None
    if cross:
        cells = [(i, t) for i in range(t, m)] + [(t, j) for j in range(t + 1, n)]
    else:
        cells = ((i, j) for i in range(t, m) for j in range(t, n))
    for i, j in cells:
        v = abs(a[i][j])
        if v and (best is None or v < best[0]):
            best = (v, i, j)
            if v == 1:
                break
    return None if best is None else best[1:]


def abelian_invariants(relation_matrix, n_generators: int) -> tuple:
    """``(free rank, torsion)`` of the abelian group with the given relation rows."""
    diag = smith_diagonal(relation_matrix) if len(relation_matrix) else []
    return n_generators - len(diag), [d for d in diag if d > 1]
