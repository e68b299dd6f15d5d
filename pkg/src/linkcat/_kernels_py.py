"""Pure numpy implementations of the hot loops.

These are the reference versions; ``_kernels.pyx`` mirrors each function
with explicit C loops.  Signatures and return values must stay identical.

Morphisms are integers ``0..M-1`` with ``src``/``tgt`` arrays.  Composites
live in a flat table with one block per middle object ``j``: rows are the
morphisms out of ``j``, columns the morphisms into ``j``.  ``layout`` is the
tuple ``(out_ptr, out_ids, in_ptr, in_ids, offset, pos_out, pos_in)`` and the
composite ``b o a`` (``a`` first) sits at
``offset[j] + pos_out[b] * n_in[j] + pos_in[a]`` with ``j = src[b] = tgt[a]``.
``lookup[i, j, g]`` is the morphism of ``hom(i, j)`` containing group
element ``g``, or -1.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def compose_table(mul, rep, src, tgt, lookup, later_first, layout):
    """Composition of morphism classes by multiplying representatives."""
    out_ptr, out_ids, in_ptr, in_ids, offset = layout[:5]
    flat = np.full(int(offset[-1]), -1, dtype=np.int32)
    for j in range(len(out_ptr) - 1):
        B = out_ids[out_ptr[j]:out_ptr[j + 1]]
        A = in_ids[in_ptr[j]:in_ptr[j + 1]]
        if not len(A) or not len(B):
            continue
        if later_first:
            x = mul[rep[B][:, None], rep[A][None, :]]
        else:
            x = mul[rep[A][None, :], rep[B][:, None]]
        flat[offset[j]:offset[j + 1]] = lookup[src[A][None, :], tgt[B][:, None], x].ravel()
    return flat


def _block(flat, layout, j):
    out_ptr, _, in_ptr, _, offset = layout[:5]
    n_in = in_ptr[j + 1] - in_ptr[j]
    n_out = out_ptr[j + 1] - out_ptr[j]
    return flat[offset[j]:offset[j + 1]].reshape(n_out, n_in)


def well_defined_violations(mul, mem_ptr, mem, src, tgt, lookup, flat, layout, later_first, limit):
    """Composable pairs whose member-level products leave the composite class."""
    out_ptr, out_ids, in_ptr, in_ids = layout[:4]
    found = []
    for j in range(len(out_ptr) - 1):
        block = _block(flat, layout, j)
        for x, a in enumerate(in_ids[in_ptr[j]:in_ptr[j + 1]]):
            xs = mem[mem_ptr[a]:mem_ptr[a + 1]]
            for y, b in enumerate(out_ids[out_ptr[j]:out_ptr[j + 1]]):
                ys = mem[mem_ptr[b]:mem_ptr[b + 1]]
                if later_first:
                    prod = mul[ys[:, None], xs[None, :]]
                else:
                    prod = mul[xs[None, :], ys[:, None]]
                cls = lookup[src[a], tgt[b], prod]
                for yi, xi in np.argwhere(cls != block[y, x]):
                    found.append((int(b), int(a), int(ys[yi]), int(xs[xi])))
                    if len(found) >= limit:
                        return found
    return found


def assoc_violations(flat, src, tgt, layout, limit):
    """Composable triples ``(h, g, f)`` with ``h(gf) != (hg)f``."""
    out_ptr, out_ids, in_ptr, in_ids, offset, pos_out, pos_in = layout
    n_in = np.diff(in_ptr)
    found = []
    chunk = 256
    for j in range(len(out_ptr) - 1):
        F = in_ids[in_ptr[j]:in_ptr[j + 1]]
        if not len(F):
            continue
        for g in out_ids[out_ptr[j]:out_ptr[j + 1]]:
            k = tgt[g]
            H = out_ids[out_ptr[k]:out_ptr[k + 1]]
            gf = flat[offset[j] + pos_out[g] * n_in[j] + pos_in[F]]
            for s in range(0, len(H), chunk):
                Hs = H[s:s + chunk]
                hg = flat[offset[k] + pos_out[Hs] * n_in[k] + pos_in[g]]
                ok_f = gf >= 0
                ok_h = hg >= 0
                # h o (g o f): block of k, row h, column gf
                left = flat[offset[k] + pos_out[Hs][:, None] * n_in[k]
                            + pos_in[np.maximum(gf, 0)][None, :]]
                # (h o g) o f: block of j, row hg, column f
                right = flat[offset[j] + pos_out[np.maximum(hg, 0)][:, None] * n_in[j]
                             + pos_in[F][None, :]]
                bad = (left != right) | ~ok_f[None, :] | ~ok_h[:, None]
                for hi, fi in np.argwhere(bad):
                    found.append((int(Hs[hi]), int(g), int(F[fi])))
                    if len(found) >= limit:
                        return found
    return found


def rank_mod_p(A, p):
    """Rank of an integer matrix over F_p by Gaussian elimination."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if not nz.size:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        below = np.flatnonzero(A[r + 1:, c]) + r + 1
        if below.size:
            A[below] = (A[below] - A[below, c][:, None] * A[r][None, :]) % p
        r += 1
    return r


def eliminate_units(rows: dict[int, dict[int, int]]) -> int:
    """Clear unit pivots in place; returns how many were removed."""
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    count = 0
    progress = True
    while progress and rows:
        progress = False
        # cheapest pivots first: (row length - 1) * (column length - 1) fill-in
        cost = {}
        for r, row in rows.items():
            units = [len(cols[c]) for c, v in row.items() if v == 1 or v == -1]
            if units:
                cost[r] = (len(row) - 1) * (min(units) - 1)
        for r in sorted(cost, key=cost.__getitem__):
            row = rows.get(r)
            if row is None:
                continue
            units = [c for c, v in row.items() if v == 1 or v == -1]
            if not units:
                continue
            c = min(units, key=lambda c: len(cols[c]))
            v = row[c]
            for r2 in list(cols[c]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = row2[c] * v  # v = ±1 so v^-1 = v
                for c2, x in row.items():
                    y = row2.get(c2, 0) - f * x
                    if y:
                        if c2 not in row2:
                            cols[c2].add(r2)
                        row2[c2] = y
                    elif c2 in row2:
                        del row2[c2]
                        cols[c2].discard(r2)
                if not row2:
                    del rows[r2]
            for c2 in row:
                cols[c2].discard(r)
            del rows[r]
            del cols[c]
            count += 1
            progress = True
    return count
