"""Brute-force reference computations, written without the package internals.

Slow and obvious on purpose: sets of tuples, nested lists and sympy's
Smith form stand in for the Cayley tables, sparse eliminations and layouts
under test.
"""

from itertools import product

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf


def closure(gens, mul, identity):
    """Naive closure: multiply everything by everything until nothing new appears."""
    elems = {identity} | set(gens)
    while True:
        new = {mul(a, b) for a in elems for b in elems} - elems
        if not new:
            return elems
        elems |= new


def perm_mul(a, b):
    return tuple(a[x] for x in b)


def mat_mul(p):
    def mul(a, b):
        n = len(a)
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n))
                     for i in range(n))
    return mul


def mat_identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def invariants(rows):
    """Nonzero Smith invariants of an integer matrix, via sympy."""
    if not rows or not rows[0]:
        return []
    D = sympy_snf(Matrix(rows), domain=ZZ)
    return [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]


def homology_from_boundaries(sizes, boundaries):
    """``boundaries[k]`` maps degree k to k-1 as a nested list (k >= 1)."""
    out = []
    for k in range(len(sizes) - 1):
        rk = len(invariants(boundaries[k])) if k > 0 else 0
        inv = invariants(boundaries[k + 1])
        out.append((sizes[k] - rk - len(inv), [t for t in inv if t > 1]))
    return out


def bar_homology(elements, mul, identity, top, rho=None, dim=1):
    """Group homology from the normalized bar complex through degree ``top``.

    ``rho(g)`` is a ``dim x dim`` integer matrix (trivial action if None).
    Face 0 of ``[g1|...|gk]`` acts by ``rho(g1)``.
    """
    nonid = sorted(g for g in elements if g != identity)
    rho = rho or (lambda g: [[int(i == j) for j in range(dim)] for i in range(dim)])
    chains = [list(product(nonid, repeat=k)) for k in range(top + 2)]
    index = [{c: i for i, c in enumerate(ch)} for ch in chains]
    boundaries = [None]
    for k in range(1, top + 2):
        B = [[0] * (dim * len(chains[k])) for _ in range(dim * len(chains[k - 1]))]

        def add(face, col, sign, mat):
            if face is None:
                return
            r = index[k - 1][face]
            for a in range(dim):
                for b in range(dim):
                    B[r * dim + a][col * dim + b] += sign * mat[a][b]

        eye = [[int(i == j) for j in range(dim)] for i in range(dim)]
        for c, ch in enumerate(chains[k]):
            add(ch[1:], c, 1, rho(ch[0]))
            for i in range(1, k):
                g = mul(ch[i], ch[i - 1])
                add(None if g == identity else ch[:i - 1] + (g,) + ch[i + 1:], c, (-1) ** i, eye)
            add(ch[:-1], c, (-1) ** k, eye)
        boundaries.append(B)
    sizes = [dim * len(ch) for ch in chains]
    return homology_from_boundaries(sizes, boundaries)


def cyclic_group_homology(n, k):
    """``H_k(Z/n; Z)`` as (rank, torsion)."""
    if k == 0:
        return (1, [])
    return (0, [n] if k % 2 and n > 1 else [])


def subgroups(elements, mul, identity):
    """Every subgroup, by joining cyclic subgroups until stable."""
    cyc = set()
    for g in elements:
        cyc.add(frozenset(closure([g], mul, identity)))
    found = set(cyc)
    frontier = set(cyc)
    while frontier:
        new = set()
        for H in frontier:
            for K in cyc:
                J = frozenset(closure(list(H | K), mul, identity))
                if J not in found:
                    new.add(J)
        found |= new
        frontier = new
    return found


def inverse(g, elements, mul, identity):
    return next(h for h in elements if mul(g, h) == identity)


def is_normal(H, K, elements, mul, identity):
    """H normal in K."""
    return all(mul(mul(k, h), inverse(k, elements, mul, identity)) in H for k in K for h in H)


def is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def largest_normal_p_subgroup(K, all_subgroups, elements, mul, identity, p):
    cands = [H for H in all_subgroups if H <= K and is_p_power(len(H), p)
             and is_normal(H, K, elements, mul, identity)]
    return max(cands, key=len)


def normalizer(H, elements, mul, identity):
    return frozenset(g for g in elements
                     if {mul(mul(g, h), inverse(g, elements, mul, identity)) for h in H} == set(H))


def radical_subgroups(elements, mul, identity, p):
    subs = subgroups(elements, mul, identity)
    out = []
    for U in subs:
        if not is_p_power(len(U), p):
            continue
        N = normalizer(U, elements, mul, identity)
        if largest_normal_p_subgroup(N, subs, elements, mul, identity, p) == U:
            out.append(U)
    return out
