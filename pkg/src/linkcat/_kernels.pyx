# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``.

Same signatures, same results, same violation order; only the loops move
to C.
"""

import numpy as np
cimport numpy as cnp

BACKEND = "cython"

ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def compose_table(mul, rep, src, tgt, lookup, bint later_first, layout):
    cdef i32[:, ::1] mv = np.ascontiguousarray(mul, dtype=np.int32)
    cdef i64[::1] rv = _i64(rep), sv = _i64(src), tv = _i64(tgt)
    cdef i32[:, :, ::1] lv = np.ascontiguousarray(lookup, dtype=np.int32)
    cdef i64[::1] op = _i64(layout[0]), oi = _i64(layout[1])
    cdef i64[::1] ip = _i64(layout[2]), ii = _i64(layout[3]), off = _i64(layout[4])
    cdef Py_ssize_t n_obj = op.shape[0] - 1
    flat = np.full(int(off[n_obj]), -1, dtype=np.int32)
    cdef i32[::1] fv = flat
    cdef Py_ssize_t j, x, y, a, b, n_in
    cdef i32 prod
    for j in range(n_obj):
        n_in = ip[j + 1] - ip[j]
        for y in range(op[j + 1] - op[j]):
            b = oi[op[j] + y]
            for x in range(n_in):
                a = ii[ip[j] + x]
                if later_first:
                    prod = mv[rv[b], rv[a]]
                else:
                    prod = mv[rv[a], rv[b]]
                fv[off[j] + y * n_in + x] = lv[sv[a], tv[b], prod]
    return flat


def well_defined_violations(mul, mem_ptr, mem, src, tgt, lookup, flat, layout,
                            bint later_first, Py_ssize_t limit):
    cdef i32[:, ::1] mv = np.ascontiguousarray(mul, dtype=np.int32)
    cdef i64[::1] mp = _i64(mem_ptr), me = _i64(mem), sv = _i64(src), tv = _i64(tgt)
    cdef i32[:, :, ::1] lv = np.ascontiguousarray(lookup, dtype=np.int32)
    cdef i32[::1] fv = np.ascontiguousarray(flat, dtype=np.int32)
    cdef i64[::1] op = _i64(layout[0]), oi = _i64(layout[1])
    cdef i64[::1] ip = _i64(layout[2]), ii = _i64(layout[3]), off = _i64(layout[4])
    cdef Py_ssize_t n_obj = op.shape[0] - 1
    cdef Py_ssize_t j, x, y, a, b, u, v, n_in
    cdef i64 gx, gy
    cdef i32 prod, want
    found = []
    for j in range(n_obj):
        n_in = ip[j + 1] - ip[j]
        for x in range(n_in):
            a = ii[ip[j] + x]
            for y in range(op[j + 1] - op[j]):
                b = oi[op[j] + y]
                want = fv[off[j] + y * n_in + x]
                for v in range(mp[b], mp[b + 1]):
                    gy = me[v]
                    for u in range(mp[a], mp[a + 1]):
                        gx = me[u]
                        if later_first:
                            prod = mv[gy, gx]
                        else:
                            prod = mv[gx, gy]
                        if lv[sv[a], tv[b], prod] != want:
                            found.append((int(b), int(a), int(gy), int(gx)))
                            if len(found) >= limit:
                                return found
    return found


def assoc_violations(flat, src, tgt, layout, Py_ssize_t limit):
    cdef i32[::1] fv = np.ascontiguousarray(flat, dtype=np.int32)
    cdef i64[::1] tv = _i64(tgt)
    cdef i64[::1] op = _i64(layout[0]), oi = _i64(layout[1])
    cdef i64[::1] ip = _i64(layout[2]), ii = _i64(layout[3]), off = _i64(layout[4])
    cdef i64[::1] po = _i64(layout[5]), pi = _i64(layout[6])
    cdef Py_ssize_t n_obj = op.shape[0] - 1
    cdef Py_ssize_t j, k, x, y, z, f, g, h, nj, nk
    cdef i32 gf, hg
    found = []
    for j in range(n_obj):
        nj = ip[j + 1] - ip[j]
        if nj == 0:
            continue
        for y in range(op[j], op[j + 1]):
            g = oi[y]
            k = tv[g]
            nk = ip[k + 1] - ip[k]
            for z in range(op[k], op[k + 1]):
                h = oi[z]
                hg = fv[off[k] + po[h] * nk + pi[g]]
                for x in range(ip[j], ip[j + 1]):
                    f = ii[x]
                    gf = fv[off[j] + po[g] * nj + pi[f]]
                    if (gf < 0 or hg < 0
                            or fv[off[k] + po[h] * nk + pi[gf]] != fv[off[j] + po[hg] * nj + pi[f]]):
                        found.append((int(h), int(g), int(f)))
                        if len(found) >= limit:
                            return found
    return found


def rank_mod_p(A, i64 p):
    cdef i64[:, ::1] a = np.array(A, dtype=np.int64) % p
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, k, piv
    cdef i64 t, f, inv
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(cols):
                t = a[r, k]
                a[r, k] = a[piv, k]
                a[piv, k] = t
        inv = pow(int(a[r, c]), -1, int(p))
        for k in range(c, cols):
            a[r, k] = a[r, k] * inv % p
        for i in range(r + 1, rows):
            f = a[i, c]
            if f != 0:
                for k in range(c, cols):
                    a[i, k] = (a[i, k] - f * a[r, k]) % p
                    if a[i, k] < 0:
                        a[i, k] += p
        r += 1
    return r


def eliminate_units(dict rows):
    """Unit-pivot elimination on ``{row: {col: value}}``; see the numpy module.

    Values stay Python ints so nothing can overflow; the gain is in the loop
    and container overhead.
    """
    cdef dict cols = {}
    cdef dict row, row2, cost
    cdef set colset
    cdef Py_ssize_t count = 0, best, k
    cdef object r, r2, c, c2, v, x, y, f
    cdef bint progress = True
    for r, row in rows.items():
        for c in row:
            colset = cols.get(c)
            if colset is None:
                colset = set()
                cols[c] = colset
            colset.add(r)
    while progress and rows:
        progress = False
        cost = {}
        for r, row in rows.items():
            best = -1
            for c, v in row.items():
                if v == 1 or v == -1:
                    k = len(<set>cols[c])
                    if best < 0 or k < best:
                        best = k
            if best >= 0:
                cost[r] = (len(row) - 1) * (best - 1)
        for r in sorted(cost, key=cost.__getitem__):
            row = rows.get(r)
            if row is None:
                continue
            c = None
            best = -1
            for c2, v in row.items():
                if v == 1 or v == -1:
                    k = len(<set>cols[c2])
                    if best < 0 or k < best:
                        best = k
                        c = c2
            if c is None:
                continue
            v = row[c]
            for r2 in list(<set>cols[c]):
                if r2 == r:
                    continue
                row2 = <dict>rows[r2]
                f = row2[c] * v
                for c2, x in row.items():
                    y = row2.get(c2, 0) - f * x
                    if y:
                        if c2 not in row2:
                            (<set>cols[c2]).add(r2)
                        row2[c2] = y
                    elif c2 in row2:
                        del row2[c2]
                        (<set>cols[c2]).discard(r2)
                if not row2:
                    del rows[r2]
            for c2 in row:
                (<set>cols[c2]).discard(r)
            del rows[r]
            del cols[c]
            count += 1
            progress = True
    return count
