"""Normalized chain complexes of nerves, with constant or functor coefficients.

A k-chain is a string ``(m_1, ..., m_k)`` of composable non-identity
morphisms, ``m_1`` applied first; 0-chains are the objects.  Chains are listed
in lexicographic order of morphism ids.  Face ``d_0`` drops ``m_1``, face
``d_k`` drops ``m_k``, and an inner face composes two neighbours; an inner
face whose composite is an identity is degenerate and contributes nothing.

To report homology through degree ``d`` the complex is built through degree
``d + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import ChainCap, DegreeOutOfRange, NotFunctorial
from ..quotcat import QuotCategory
from .. import kernels
from .smith import smith_normal_form

DEFAULT_MAX_CHAINS = 2_000_000


@dataclass(frozen=True)
class HomologyResult:
    """One homology group: ``Z^rank`` plus cyclic torsion ``Z/t`` for each ``t``."""

    degree: int
    rank: int
    torsion: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"degree": self.degree, "rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = ["Z"] * min(self.rank, 1)
        if self.rank > 1:
            parts = [f"Z^{self.rank}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


@dataclass(eq=False)
class ChainComplex:
    """Chains ``bases[k]`` (objects for k = 0, else an (N_k, k) id array) and
    sparse boundary matrices ``boundary[k]: C_k -> C_{k-1}``.

    ``modulus`` is None over Z, else a prime p.
    """

    category: QuotCategory
    d: int
    bases: list
    boundary: list
    modulus: int | None = None
    _smith: dict = field(default_factory=dict, repr=False)

    def size(self, k: int) -> int:
        return self.boundary[k].shape[1]

    def sizes(self) -> list[int]:
        return [self.size(k) for k in range(len(self.boundary))]

    def boundary_squares_vanish(self) -> bool:
        for k in range(2, len(self.boundary)):
            prod = self.boundary[k - 1] @ self.boundary[k]
            if prod.count_nonzero():
                return False
        return True

    def smith(self, k: int) -> tuple[tuple[int, ...], int]:
        """Invariant factors and rank of ``boundary[k]`` (cached)."""
        if k not in self._smith:
            B = self.boundary[k]
            if B.shape[0] == 0 or B.shape[1] == 0 or B.nnz == 0:
                self._smith[k] = ((), 0)
            elif self.modulus is None:
                self._smith[k] = smith_normal_form(B)
            else:
                r = kernels.rank_mod_p(B.toarray(), self.modulus)
                self._smith[k] = ((1,) * r, r)
        return self._smith[k]


def enumerate_chains(C: QuotCategory, top: int, max_chains: int = DEFAULT_MAX_CHAINS) -> list:
    """Non-degenerate chains of every length ``1..top``, lexicographically sorted."""
    nonid = C.non_identity
    order = np.argsort(C.src[nonid], kind="stable")
    by_src = nonid[order]
    ptr = np.searchsorted(C.src[by_src], np.arange(C.n_objects + 1))
    counts = np.diff(ptr)
    chains = [np.arange(C.n_objects), nonid.reshape(-1, 1)]
    for k in range(2, top + 1):
        prev = chains[-1]
        if not len(prev):
            chains.append(np.empty((0, k), dtype=np.int64))
            continue
        last_tgt = C.tgt[prev[:, -1]]
        reps = counts[last_tgt]
        total = int(reps.sum())
        if total > max_chains:
            raise ChainCap(f"{total} chains of length {k} exceed the cap {max_chains}")
        rows = np.repeat(np.arange(len(prev)), reps)
        starts = np.repeat(ptr[last_tgt], reps)
        within = np.arange(total) - np.repeat(np.cumsum(reps) - reps, reps)
        nxt = np.concatenate([prev[rows], by_src[starts + within][:, None]], axis=1)
        chains.append(nxt)
    return chains


class _Index:
    """Row lookup for a sorted chain array (integer codes when they fit)."""

    def __init__(self, chains: np.ndarray, M: int):
        self.k = chains.shape[1]
        self.base = max(M, 1)
        if self.base ** max(self.k, 1) < 2 ** 62:
            self.codes = self._encode(chains)
            self.table = None
        else:
            self.codes = None
            self.table = {tuple(r): i for i, r in enumerate(chains.tolist())}

    def _encode(self, chains):
        code = np.zeros(len(chains), dtype=np.int64)
        for c in range(chains.shape[1]):
            code = code * self.base + chains[:, c]
        return code

    def find(self, faces: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return np.array([self.table[tuple(r)] for r in faces.tolist()], dtype=np.int64)
        codes = self._encode(faces)
        pos = np.searchsorted(self.codes, codes)
        assert (self.codes[np.minimum(pos, len(self.codes) - 1)] == codes).all()
        return pos


def _faces(C: QuotCategory, chains: list, k: int):
    """Yield ``(face_rows, chain_cols, sign, via)`` for every face of every k-chain.

    ``via`` is the morphism pushing coefficients along (``m_1`` for face 0),
    or None when coefficients stay put.
    """
    X = chains[k]
    cols = np.arange(len(X))
    if k == 1:
        yield C.tgt[X[:, 0]], cols, 1, X[:, 0]
        yield C.src[X[:, 0]], cols, -1, None
        return
    index = _Index(chains[k - 1], C.n_morphisms)
    yield index.find(X[:, 1:]), cols, 1, X[:, 0]
    for j in range(1, k):
        comp = C.composite(X[:, j], X[:, j - 1])
        keep = ~np.isin(comp, C.identity)
        face = np.concatenate([X[keep, :j - 1], comp[keep, None], X[keep, j + 1:]], axis=1)
        yield index.find(face), cols[keep], (-1) ** j, None
    yield index.find(X[:, :-1]), cols, (-1) ** k, None


def nerve_chain_complex(C: QuotCategory, d: int, max_chains: int = DEFAULT_MAX_CHAINS) -> ChainComplex:
    """Normalized nerve complex through degree ``d + 1``."""
    if d < 0:
        raise DegreeOutOfRange("d must be non-negative")
    chains = enumerate_chains(C, d + 1, max_chains)
    boundary = [sp.csr_matrix((0, C.n_objects), dtype=np.int64)]
    for k in range(1, d + 2):
        rows, cols, vals = [], [], []
        for r, c, sign, _ in _faces(C, chains, k):
            rows.append(r)
            cols.append(c)
            vals.append(np.full(len(r), sign, dtype=np.int64))
        shape = (len(chains[k - 1]), len(chains[k]))
        B = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=shape).tocsr()
        B.eliminate_zeros()
        boundary.append(B)
    return ChainComplex(C, d, chains, boundary)


def homology(K: ChainComplex, k: int) -> HomologyResult:
    """``H_k = ker boundary_k / im boundary_{k+1}``; torsion from the Smith form of boundary_{k+1}."""
    if k < 0 or k > K.d:
        raise DegreeOutOfRange(f"degree {k} outside 0..{K.d} for this truncation")
    _, rank_k = K.smith(k)
    inv, rank_next = K.smith(k + 1)
    free = K.size(k) - rank_k - rank_next
    torsion = tuple(t for t in inv if t > 1) if K.modulus is None else ()
    return HomologyResult(k, free, torsion)


def homology_all(K: ChainComplex) -> list[HomologyResult]:
    return [homology(K, k) for k in range(K.d + 1)]


# ------------------------------------------------------ functor coefficients


@dataclass(eq=False)
class CoefficientFunctor:
    """A covariant functor to free Z-modules (``modulus=None``) or F_p-spaces.

    ``matrices[m]`` has shape ``(dims[tgt m], dims[src m])``.
    """

    category: QuotCategory
    dims: tuple[int, ...]
    matrices: list
    modulus: int | None = None

    def reduce(self, A):
        A = np.asarray(A, dtype=object)
        return A % self.modulus if self.modulus else A

    def verify(self) -> None:
        C = self.category
        for m in range(C.n_morphisms):
            A = np.asarray(self.matrices[m])
            if A.shape != (self.dims[C.tgt[m]], self.dims[C.src[m]]):
                raise NotFunctorial(f"matrix of morphism {m} has shape {A.shape}")
        for i, m in enumerate(C.identity):
            if not np.array_equal(self.reduce(self.matrices[m]), self.reduce(np.eye(self.dims[i], dtype=np.int64))):
                raise NotFunctorial(f"identity of object {i} is not sent to the identity")
        for j, B, A, block in C.blocks():
            for y, b in enumerate(B):
                for x, a in enumerate(A):
                    lhs = self.reduce(np.asarray(self.matrices[block[y, x]], dtype=object))
                    rhs = self.reduce(np.asarray(self.matrices[b], dtype=object)
                                      @ np.asarray(self.matrices[a], dtype=object))
                    if not np.array_equal(lhs, rhs):
                        raise NotFunctorial(f"F({b} o {a}) != F({b}) F({a})")


def constant_functor(C: QuotCategory, modulus: int | None = None) -> CoefficientFunctor:
    one = np.ones((1, 1), dtype=np.int64)
    return CoefficientFunctor(C, (1,) * C.n_objects, [one] * C.n_morphisms, modulus)


def zero_functor(C: QuotCategory) -> CoefficientFunctor:
    return CoefficientFunctor(C, (0,) * C.n_objects,
                              [np.zeros((0, 0), dtype=np.int64)] * C.n_morphisms)


def representation_functor(C: QuotCategory, action, dim: int,
                           modulus: int | None = None) -> CoefficientFunctor:
    """Functor on a one-object group category: morphism ``m`` acts by ``action(rep_m)``."""
    if C.n_objects != 1:
        raise ValueError("representation functors need a one-object category")
    mats = [np.asarray(action(int(C.rep[m])), dtype=np.int64) for m in range(C.n_morphisms)]
    return CoefficientFunctor(C, (dim,), mats, modulus)


def functor_chain_complex(C: QuotCategory, F: CoefficientFunctor, d: int,
                          max_chains: int = DEFAULT_MAX_CHAINS) -> ChainComplex:
    """Chains ``sum over i_0 -> ... -> i_k`` of ``F(i_0)``; face 0 pushes along ``F(m_1)``."""
    F.verify()
    chains = enumerate_chains(C, d + 1, max_chains)
    dims = np.asarray(F.dims, dtype=np.int64)

    def offsets(k):
        start = C.src[chains[k][:, 0]] if k else chains[0]
        sizes = dims[start]
        return np.concatenate([[0], np.cumsum(sizes)]), sizes

    scalar = None
    if dims.max(initial=0) <= 1:
        scalar = np.array([int(np.asarray(A).reshape(-1)[0]) if np.size(A) else 0
                           for A in F.matrices], dtype=np.int64)
    boundary = [sp.csr_matrix((0, int(dims.sum())), dtype=np.int64)]
    for k in range(1, d + 2):
        col_off, col_sizes = offsets(k)
        row_off, row_sizes = offsets(k - 1)
        rows, cols, vals = [], [], []
        for face_rows, chain_cols, sign, via in _faces(C, chains, k):
            if scalar is not None:
                # every F(i) has rank 0 or 1: one entry per face, no block loop
                keep = (col_sizes[chain_cols] > 0) & (row_sizes[face_rows] > 0)
                rows.append(row_off[face_rows[keep]])
                cols.append(col_off[chain_cols[keep]])
                vals.append(sign * (scalar[via[keep]] if via is not None
                                    else np.ones(int(keep.sum()), dtype=np.int64)))
                continue
            for r, c, t in zip(face_rows.tolist(), chain_cols.tolist(),
                               (via.tolist() if via is not None else [None] * len(face_rows))):
                n_src = int(col_sizes[c])
                if t is None:
                    block = np.eye(n_src, dtype=np.int64)
                else:
                    block = np.asarray(F.matrices[t], dtype=np.int64)
                rr, cc = np.nonzero(block)
                rows.append(row_off[r] + rr)
                cols.append(col_off[c] + cc)
                vals.append(sign * block[rr, cc])
        shape = (int(row_off[-1]), int(col_off[-1]))
        if rows:
            B = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                              shape=shape).tocsr()
        else:
            B = sp.csr_matrix(shape, dtype=np.int64)
        if F.modulus:
            B.data %= F.modulus
        B.eliminate_zeros()
        boundary.append(B)
    return ChainComplex(C, d, chains, boundary, modulus=F.modulus)


def functor_homology(C: QuotCategory, F: CoefficientFunctor, d: int,
                     max_chains: int = DEFAULT_MAX_CHAINS) -> list[HomologyResult]:
    """Homology of ``C`` with coefficients in ``F`` in degrees ``0..d``."""
    return homology_all(functor_chain_complex(C, F, d, max_chains))
