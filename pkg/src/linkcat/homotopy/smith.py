"""Smith normal form over the integers, in exact (arbitrary precision) arithmetic.

The matrix is held sparsely as ``{row: {col: value}}``.  Unit pivots are
eliminated first, choosing the unit whose row and column are shortest; the
small remainder without unit entries goes through the textbook dense
reduction.  Boundary matrices of nerves are almost entirely 0/±1, so the
sparse phase usually does nearly all the work.
"""

from __future__ import annotations

from math import gcd

import numpy as np
import scipy.sparse as sp

from .. import kernels


def _to_rows(M) -> tuple[dict[int, dict[int, int]], int, int]:
    if sp.issparse(M):
        coo = sp.coo_matrix(M)
        rows: dict[int, dict[int, int]] = {}
        for r, c, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
            if v:
                row = rows.setdefault(r, {})
                row[c] = row.get(c, 0) + int(v)
        for r in list(rows):
            rows[r] = {c: v for c, v in rows[r].items() if v}
            if not rows[r]:
                del rows[r]
        return rows, coo.shape[0], coo.shape[1]
    A = M if isinstance(M, np.ndarray) else np.array(M, dtype=object)
    if A.ndim != 2:
        A = A.reshape(len(M), -1)
    rows = {}
    for r in range(A.shape[0]):
        nz = {c: int(A[r, c]) for c in np.flatnonzero(A[r]).tolist()}
        if nz:
            rows[r] = nz
    return rows, A.shape[0], A.shape[1]


def _dense_invariants(rows: dict[int, dict[int, int]]) -> list[int]:
    """Textbook Smith reduction of what is left after unit elimination."""
    if not rows:
        return []
    col_ids = sorted({c for row in rows.values() for c in row})
    cpos = {c: k for k, c in enumerate(col_ids)}
    A = [[0] * len(col_ids) for _ in rows]
    for i, row in enumerate(rows.values()):
        for c, v in row.items():
            A[i][cpos[c]] = v
    m, n = len(A), len(col_ids)
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            changed = False
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _normalize(diag: list[int]) -> list[int]:
    """Turn any diagonal into the divisibility chain of invariant factors."""
    ones = sum(1 for x in diag if abs(x) == 1)
    d = sorted(abs(x) for x in diag if abs(x) > 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    ones += sum(1 for x in d if x == 1)
    return [1] * ones + [x for x in d if x > 1]


def smith_normal_form(M) -> tuple[tuple[int, ...], int]:
    """Invariant factors ``d_1 | d_2 | ...`` (nonzero only) and the rank of ``M``.

    Accepts a nested list, a numpy array or a scipy sparse matrix of integers.
    """
    if sp.issparse(M) and M.shape[1] > M.shape[0]:
        # same invariants; pivot ordering behaves far better on tall matrices
        M = M.T
    rows, _, _ = _to_rows(M)
    units = kernels.eliminate_units(rows)
    rest = _dense_invariants(rows)
    inv = _normalize([1] * units + rest)
    return tuple(inv), len(inv)
