"""Fully enumerated finite groups and the subgroup operations built on them.

Every group is stored as an explicit Cayley table over integer element
indices.  Index 0 is the identity, and indices are assigned breadth-first
from the identity, extending by the generators in the order given, so the
same generators always produce the same numbering.

Permutations are image tuples and compose right-to-left:
``(a * b)(x) = a(b(x))``.  Matrices act on column vectors, so the matrix
product ``a @ b`` is the same convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import CapExceeded, NotBijection, NotInvertible, NotNormal

DEFAULT_CAP = 20000


@dataclass(eq=False)
class FinGroup:
    """A finite group with an explicit multiplication table.

    ``mul[a, b]`` is the index of ``a * b``; ``inv[a]`` the index of ``a^-1``.
    ``elements[i]`` is the canonical form (permutation tuple, row-major
    matrix tuple, or coset representative for quotient groups).
    """

    elements: tuple
    mul: np.ndarray
    inv: np.ndarray
    generators: tuple[int, ...]
    kind: str = "abstract"
    degree: int = 0
    p: int | None = None
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {e: i for i, e in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FinGroup(kind={self.kind!r}, order={self.order}, degree={self.degree}, p={self.p})"

    def index_of(self, form) -> int:
        """Element index of a canonical form; raises ``KeyError`` if absent."""
        return self._index[form]

    def power(self, g: int, k: int) -> int:
        result = 0
        if k < 0:
            g, k = int(self.inv[g]), -k
        base = g
        while k:
            if k & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            k >>= 1
        return result

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.mul[x, g])
            k += 1
        return k

    def conj(self, g: int, x: int) -> int:
        """Index of ``g x g^-1``."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its sorted member indices in ``parent``."""

    parent: FinGroup
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g) -> bool:
        return bool(self.mask[g])

    def __iter__(self):
        return iter(self.members)

    def __le__(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.array].all())

    def __repr__(self) -> str:
        if len(self.members) <= 8:
            return f"Subgroup(order={self.order}, members={list(self.members)})"
        return f"Subgroup(order={self.order})"

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.array] = True
        return m

    def intersection(self, other: "Subgroup") -> "Subgroup":
        both = np.flatnonzero(self.mask & other.mask)
        return Subgroup(self.parent, tuple(int(x) for x in both))

    def is_normal_in(self, H: "Subgroup | None" = None) -> bool:
        G = self.parent
        ambient = G.generators if H is None else H.members
        for g in ambient:
            if not self.mask[G.mul[G.mul[g, self.array], G.inv[g]]].all():
                return False
        return True


def _from_mask(G: FinGroup, mask: np.ndarray) -> Subgroup:
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(mask)))


# ---------------------------------------------------------------- closure


def _closure(identity: Hashable, gens: Sequence[Hashable],
             product: Callable[[Hashable, Hashable], Hashable], cap: int):
    """Breadth-first closure of ``gens`` under left multiplication.

    Returns the element list, the generator indices and the full Cayley
    table.  Each new element ``s * x`` remembers ``(s, x)``; the row of
    ``s * x`` in the table is then the row of ``x`` pushed through the left
    action of ``s``.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    elements = [identity]
    index = {identity: 0}
    parent = [(-1, -1)]
    left = [[] for _ in gens]
    i = 0
    while i < len(elements):
        x = elements[i]
        for s, gen in enumerate(gens):
            y = product(gen, x)
            j = index.get(y)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise CapExceeded(f"group order exceeds cap {cap}")
                index[y] = j
                elements.append(y)
                parent.append((s, i))
            left[s].append(j)
        i += 1

    n = len(elements)
    dtype = np.int32
    left_arr = [np.asarray(t, dtype=dtype) for t in left]
    mul = np.empty((n, n), dtype=dtype)
    mul[0] = np.arange(n, dtype=dtype)
    for a in range(1, n):
        s, x = parent[a]
        mul[a] = left_arr[s][mul[x]]
    inv = np.argmax(mul == 0, axis=1).astype(dtype)
    gen_idx = tuple(index[g] for g in gens)
    return tuple(elements), mul, inv, gen_idx, index


def group_from_permutations(gens: Iterable[Sequence[int]], cap: int = DEFAULT_CAP,
                            degree: int | None = None) -> FinGroup:
    """Close a list of permutations (image arrays on ``0..n-1``)."""
    gens = [tuple(int(x) for x in g) for g in gens]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    for k, g in enumerate(gens):
        if len(g) != degree:
            raise NotBijection(f"generator {k} has length {len(g)}, expected {degree}")
        if sorted(g) != list(range(degree)):
            raise NotBijection(f"generator {k} is not a bijection on 0..{degree - 1}")
    identity = tuple(range(degree))

    def compose(a, b):
        return tuple(a[x] for x in b)

    elements, mul, inv, gen_idx, index = _closure(identity, gens, compose, cap)
    return FinGroup(elements, mul, inv, gen_idx, kind="perm", degree=degree, _index=index)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def det_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for r in range(c + 1, n):
            f = m[r][c] * inv % p
            if f:
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[c])]
    return det % p


def _matmul_mod(a: tuple, b: tuple, n: int, p: int) -> tuple:
    return tuple(
        sum(a[i * n + k] * b[k * n + j] for k in range(n)) % p
        for i in range(n)
        for j in range(n)
    )


def group_from_matrices(gens: Iterable[Sequence[Sequence[int]]], p: int,
                        cap: int = DEFAULT_CAP, n: int | None = None) -> FinGroup:
    """Close a list of invertible ``n x n`` matrices over the prime field F_p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    mats = [[[int(x) % p for x in row] for row in g] for g in gens]
    if n is None:
        if not mats:
            raise ValueError("matrix dimension required when there are no generators")
        n = len(mats[0])
    flat = []
    for k, m in enumerate(mats):
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError(f"generator {k} is not {n}x{n}")
        if det_mod_p(m, p) == 0:
            raise NotInvertible(f"generator {k} is singular mod {p}")
        flat.append(tuple(x for row in m for x in row))
    identity = tuple(int(i == j) for i in range(n) for j in range(n))
    elements, mul, inv, gen_idx, index = _closure(
        identity, flat, lambda a, b: _matmul_mod(a, b, n, p), cap)
    return FinGroup(elements, mul, inv, gen_idx, kind="matrix", degree=n, p=p, _index=index)


# -------------------------------------------------------------- subgroups


def subgroup_generate(G: FinGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``seed``."""
    seed = np.unique(np.asarray(list(seed), dtype=np.int64))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    if seed.size == 0:
        return G.trivial
    frontier = np.array([0])
    # right-multiplication closure; in a finite group the generated monoid is a group
    while frontier.size:
        reached = np.unique(G.mul[np.ix_(frontier, seed)])
        frontier = reached[~mask[reached]]
        mask[frontier] = True
    return _from_mask(G, mask)


def conjugate_subgroup(g: int, H: Subgroup) -> Subgroup:
    """The subgroup ``g H g^-1``."""
    G = H.parent
    image = G.mul[G.mul[g, H.array], G.inv[g]]
    return Subgroup(G, tuple(sorted(int(x) for x in image)))


def transporter(H: Subgroup, K: Subgroup, within: Subgroup | None = None) -> np.ndarray:
    """Sorted indices ``g`` (optionally restricted to ``within``) with ``g H g^-1 <= K``."""
    G = H.parent
    cand = np.arange(G.order) if within is None else within.array
    conj = G.mul[G.mul[np.ix_(cand, H.array)], G.inv[cand][:, None]]
    return cand[K.mask[conj].all(axis=1)]


def normalizer(H: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """``{g : g H g^-1 = H}``, inside ``within`` when given."""
    # for finite H, gHg^-1 <= H already forces equality
    found = transporter(H, H, within)
    return Subgroup(H.parent, tuple(int(x) for x in found))


def normal_closure(G: FinGroup, seeds: Iterable[Subgroup]) -> Subgroup:
    members = set()
    for S in seeds:
        if S.parent is not G:
            raise ValueError("seed subgroup belongs to a different group")
        members.update(S.members)
    N = subgroup_generate(G, members)
    gens = np.asarray(G.generators, dtype=np.int64)
    while True:
        conj = G.mul[G.mul[np.ix_(gens, N.array)], G.inv[gens][:, None]]
        if N.mask[conj].all():
            return N
        N = subgroup_generate(G, np.concatenate([N.array, conj.ravel()]))


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_p_group(H: Subgroup, p: int) -> bool:
    return p_part(H.order, p) == H.order


def sylow_p(H: Subgroup, p: int) -> Subgroup:
    """A Sylow p-subgroup of ``H``.

    Grows a p-subgroup ``P`` one step at a time: while ``P`` is not Sylow,
    ``p`` divides ``[N_H(P) : P]``, so some ``x`` in ``N_H(P) - P`` has
    ``x^p`` in ``P`` and ``<P, x>`` has order ``p |P|``.
    """
    G = H.parent
    target = p_part(H.order, p)
    P = G.trivial
    while P.order < target:
        N = normalizer(P, within=H)
        for x in N.members:
            if x in P:
                continue
            if G.power(x, p) in P:
                P = subgroup_generate(G, P.members + (x,))
                break
        else:  # pragma: no cover - excluded by the counting argument
            raise RuntimeError("Sylow growth stalled")
    return P


def o_p(H: Subgroup, p: int) -> Subgroup:
    """Largest normal p-subgroup of ``H``: the intersection of the H-conjugates of a Sylow."""
    G = H.parent
    S = sylow_p(H, p)
    conj = G.mul[G.mul[np.ix_(H.array, S.array)], G.inv[H.array][:, None]]
    counts = np.zeros(G.order, dtype=np.int64)
    for row in conj:
        counts[row] += 1
    result = Subgroup(G, tuple(int(x) for x in np.flatnonzero(counts == H.order)))
    assert result.is_normal_in(H)
    return result


def quotient_group(G: FinGroup, N: Subgroup) -> tuple[FinGroup, np.ndarray]:
    """The group ``G/N`` and the projection as an array of coset indices."""
    if not N.is_normal_in():
        raise NotNormal("subgroup is not normal")
    # label each element by the smallest index in its coset gN
    label = G.mul[:, N.array].min(axis=1)
    gens = [int(label[g]) for g in G.generators]

    def product(a, b):
        return int(label[G.mul[a, b]])

    elements, mul, inv, gen_idx, index = _closure(0, gens, product, G.order + 1)
    proj = np.array([index[int(x)] for x in label], dtype=np.int32)
    Q = FinGroup(elements, mul, inv, gen_idx, kind="quotient", _index=index)
    return Q, proj
