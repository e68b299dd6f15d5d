"""Flag posets of GL_n(F_p), their parabolic and unipotent subgroups, and the
comparison between the category built from flags and the orbit category on
p-radical subgroups.

Subspaces of F_p^n are stored as tuples of basis rows in reduced row echelon
form, so equal subspaces are equal tuples.  Flags are chains of proper
nonzero subspaces, ordered by reverse inclusion: a finer flag sits lower,
matching inclusion of the corresponding parabolic subgroups.  The empty flag
is the top element and its stabilizer is the whole group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotRadical, ScaleGuard
from .finitegroup import (FinGroup, Subgroup, group_from_matrices, normalizer, o_p,
                          subgroup_generate, transporter)
from .gposet import GPoset, conjugation_gposet
from .quotcat import (CatFunctor, QuotCategory, assemble, build_category, check_functor,
                      functor_is_isomorphism, opposite_category, quotient_functor)

SUPPORTED_PRIMES = (2, 3, 5)
MAX_DIM = 4
MAX_GROUP_ORDER = 5000
MAX_RADICAL_SCAN = 200

Subspace = tuple  # tuple of RREF rows, each a tuple of ints mod p


# ----------------------------------------------------------- linear algebra


def rref(rows: Sequence[Sequence[int]], p: int) -> Subspace:
    """Reduced row echelon form over F_p, zero rows dropped."""
    m = [[x % p for x in r] for r in rows]
    out = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    out = [tuple(row) for row in m[:r]]
    return tuple(out)


def contains(V: Subspace, U: Subspace, p: int) -> bool:
    """Whether the span of ``U`` lies in the span of ``V``."""
    return len(rref(list(V) + list(U), p)) == len(V)


def in_span(w: Sequence[int], V: Subspace, p: int) -> bool:
    w = [x % p for x in w]
    for row in V:
        c = next(k for k, x in enumerate(row) if x)
        if w[c]:
            f = w[c]
            w = [(a - f * b) % p for a, b in zip(w, row)]
    return not any(w)


def _apply(g: tuple, v: Sequence[int], n: int, p: int) -> tuple:
    return tuple(sum(g[i * n + k] * v[k] for k in range(n)) % p for i in range(n))


def apply_to_subspace(g: tuple, V: Subspace, n: int, p: int) -> Subspace:
    return rref([_apply(g, v, n, p) for v in V], p)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _guard(n: int, p: int) -> None:
    if n < 1 or n > MAX_DIM or p not in SUPPORTED_PRIMES:
        raise ScaleGuard(f"(n, p) = ({n}, {p}) outside n <= {MAX_DIM}, p in {SUPPORTED_PRIMES}")


def enumerate_subspaces(n: int, p: int, proper: bool = True) -> list[Subspace]:
    """All (proper nonzero, by default) subspaces of F_p^n, by dimension then RREF."""
    _guard(n, p)
    dims = range(1, n) if proper else range(0, n + 1)
    found = []
    for k in dims:
        for pivots in itertools.combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = 1
                for (r, c), x in zip(free, values):
                    rows[r][c] = x
                found.append(tuple(tuple(r) for r in rows))
    return found


def primitive_root(p: int) -> int:
    for z in range(1, p):
        if len({pow(z, k, p) for k in range(1, p)}) == p - 1:
            return z
    raise ValueError(p)


def gl_generators(n: int, p: int) -> list[list[list[int]]]:
    """A diagonal generator, a transvection, a transposition and an n-cycle."""
    def ident():
        return [[int(i == j) for j in range(n)] for i in range(n)]

    diag = ident()
    diag[0][0] = primitive_root(p)
    gens = [diag]
    if n >= 2:
        t = ident()
        t[0][1] = 1
        swap = ident()
        swap[0], swap[1] = swap[1], swap[0]
        cycle = [[int(i == (j + 1) % n) for j in range(n)] for i in range(n)]
        gens += [t, swap]
        if n > 2:
            gens.append(cycle)
    return gens


def gl_order(n: int, p: int) -> int:
    out = 1
    for k in range(n):
        out *= p ** n - p ** k
    return out


def gl_group(n: int, p: int, max_order: int = MAX_GROUP_ORDER) -> FinGroup:
    _guard(n, p)
    if gl_order(n, p) > max_order:
        raise ScaleGuard(f"|GL_{n}(F_{p})| = {gl_order(n, p)} exceeds {max_order}")
    return group_from_matrices(gl_generators(n, p), p, n=n)


# ------------------------------------------------------------------- flags


@dataclass(frozen=True)
class Flag:
    """A strictly increasing chain of proper nonzero subspaces."""

    chain: tuple[Subspace, ...] = ()

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(V) for V in self.chain)

    def __len__(self) -> int:
        return len(self.chain)

    def to_json(self) -> list:
        return [[list(r) for r in V] for V in self.chain]

    def __repr__(self) -> str:
        return f"Flag(dims={self.dims})"


def enumerate_flags(n: int, p: int) -> list[Flag]:
    """All flags, longest first, the empty flag last."""
    subs = enumerate_subspaces(n, p)
    below = {U: [V for V in subs if len(V) > len(U) and contains(V, U, p)] for U in subs}
    chains: list[tuple] = [()]
    stack = [(U,) for U in subs]
    while stack:
        c = stack.pop()
        chains.append(c)
        stack.extend(c + (V,) for V in below[c[-1]])
    pos = {U: k for k, U in enumerate(subs)}
    chains.sort(key=lambda c: (-len(c), [pos[U] for U in c]))
    return [Flag(c) for c in chains]


def _flag_image(g: tuple, F: Flag, n: int, p: int) -> Flag:
    return Flag(tuple(apply_to_subspace(g, V, n, p) for V in F.chain))


def stab_parabolic(F: Flag, G: FinGroup) -> Subgroup:
    """Elements of ``G`` (a GL_n(F_p) from ``gl_group``) fixing every step of ``F``."""
    n, p = G.degree, G.p
    keep = [g for g in range(G.order)
            if all(apply_to_subspace(G.elements[g], V, n, p) == V for V in F.chain)]
    return Subgroup(G, tuple(keep))


def acts_trivially_on_graded(g: tuple, F: Flag, n: int, p: int) -> bool:
    steps = ((),) + F.chain + (rref([[int(i == j) for j in range(n)] for i in range(n)], p),)
    for lower, upper in zip(steps, steps[1:]):
        for v in upper:
            w = _apply(g, v, n, p)
            if not in_span([a - b for a, b in zip(w, v)], lower, p):
                return False
    return True


def graded_link(F: Flag, G: FinGroup, stab: Subgroup | None = None) -> Subgroup:
    """Stabilizer elements inducing the identity on every graded piece of ``F``."""
    n, p = G.degree, G.p
    stab = stab_parabolic(F, G) if stab is None else stab
    keep = [g for g in stab.members if acts_trivially_on_graded(G.elements[g], F, n, p)]
    return Subgroup(G, tuple(keep))


def flag_gposet(n: int, p: int, links: str = "graded", max_order: int = MAX_GROUP_ORDER) -> GPoset:
    """The flags of F_p^n under GL_n(F_p).

    ``links="graded"`` attaches the elements acting trivially on the
    associated graded; ``links="trivial"`` attaches the trivial subgroup.
    """
    G = gl_group(n, p, max_order)
    flags = enumerate_flags(n, p)
    subs = enumerate_subspaces(n, p)
    s_index = {U: k for k, U in enumerate(subs)}
    sub_act = np.array([[s_index[apply_to_subspace(G.elements[g], U, n, p)] for U in subs]
                        for g in range(G.order)], dtype=np.int64).reshape(G.order, len(subs))
    f_index = {tuple(s_index[U] for U in F.chain): k for k, F in enumerate(flags)}
    coded = [tuple(s_index[U] for U in F.chain) for F in flags]
    act = np.empty((G.order, len(flags)), dtype=np.int64)
    for g in range(G.order):
        row = sub_act[g]
        for k, c in enumerate(coded):
            act[g, k] = f_index[tuple(int(row[s]) for s in c)]
    sets = [set(c) for c in coded]
    leq = np.array([[a >= b for b in sets] for a in sets], dtype=bool)
    stabs = [Subgroup(G, tuple(int(g) for g in np.flatnonzero(act[:, k] == k)))
             for k in range(len(flags))]
    if links == "graded":
        link_list = [graded_link(F, G, stab) for F, stab in zip(flags, stabs)]
    elif links == "trivial":
        link_list = [G.trivial] * len(flags)
    else:
        raise ValueError(f"unknown link choice {links!r}")
    P = GPoset(G, tuple(flags), leq, act, tuple(link_list))
    P.__dict__["stabilizers"] = tuple(stabs)
    return P


def verify_link_is_op(F: Flag, G: FinGroup, p: int) -> bool:
    """The graded link of ``F`` equals the largest normal p-subgroup of its stabilizer."""
    stab = stab_parabolic(F, G)
    return graded_link(F, G, stab) == o_p(stab, p)


def verify_normalizer_is_parabolic(F: Flag, G: FinGroup, p: int) -> bool:
    stab = stab_parabolic(F, G)
    return normalizer(graded_link(F, G, stab)) == stab


# ------------------------------------------------------------- radicals


def p_radical_test(U: Subgroup, G: FinGroup | None = None, p: int = 2) -> bool:
    """``O_p(N_G(U)) = U``."""
    return o_p(normalizer(U), p) == U


def p_subgroups(G: FinGroup, p: int) -> list[Subgroup]:
    """Every p-subgroup of ``G``, by order then members.

    Each p-subgroup is reached from a smaller one by adjoining an element of
    its normalizer whose p-th power falls inside it.
    """
    seen = {G.trivial.members: G.trivial}
    frontier = [G.trivial]
    while frontier:
        nxt = []
        for S in frontier:
            for x in normalizer(S).members:
                if x in S or G.power(x, p) not in S:
                    continue
                T = subgroup_generate(G, S.members + (x,))
                if T.members not in seen:
                    seen[T.members] = T
                    nxt.append(T)
        frontier = nxt
    return sorted(seen.values(), key=lambda H: (H.order, H.members))


def exhaustive_radical_enumeration(G: FinGroup, p: int, max_order: int = MAX_RADICAL_SCAN) -> list[Subgroup]:
    """All p-radical subgroups, by brute force over p-subgroups."""
    if G.order > max_order:
        raise ScaleGuard(f"radical scan limited to |G| <= {max_order}, got {G.order}")
    return [U for U in p_subgroups(G, p) if p_radical_test(U, G, p)]


def radicals_match_links(radicals: Sequence[Subgroup], P: GPoset) -> bool:
    return {U.members for U in radicals} == {L.members for L in P.links}


# ------------------------------------------------------- orbit categories


def orbit_category(G: FinGroup, R: Sequence[Subgroup], p: int | None = None) -> QuotCategory:
    """Orbits ``G/H`` for ``H`` in ``R`` and their G-maps.

    ``hom(G/H, G/K) = {g : g^-1 H g <= K} / K``: a map sends the identity
    coset to ``gK``.  Composing ``[g]: G/H -> G/K`` with ``[g']: G/K -> G/L``
    gives ``[g g']``.  When ``p`` is given every member must be p-radical.
    """
    R = list(R)
    if p is not None:
        for k, U in enumerate(R):
            if not p_radical_test(U, G, p):
                raise NotRadical(f"member {k} (order {U.order}) is not {p}-radical")
    n = len(R)
    allowed = np.zeros((n, n, G.order), dtype=bool)
    label = np.empty((n, n, G.order), dtype=np.int64)
    for b, K in enumerate(R):
        label[:, b, :] = G.mul[:, K.array].min(axis=1)[None, :]
        for a, H in enumerate(R):
            allowed[a, b, G.inv[transporter(H, K)]] = True
    return assemble([U.members for U in R], G, allowed, label, later_first=False)


def transport_category(G: FinGroup, R: Sequence[Subgroup]) -> QuotCategory:
    """Subgroups in ``R`` with ``hom(U, V) = {g : g U g^-1 <= V}``."""
    C = build_category(conjugation_gposet(G, R))
    C.objects = tuple(U.members for U in R)
    return C


@dataclass
class BorelTitsReport:
    ok: bool = True
    objects: dict = field(default_factory=dict)
    transporter_equality: bool = True
    normalizers_are_parabolic: bool = True
    phi_functor: bool = False
    phi_isomorphism: bool = False
    psi_functor: bool = False
    psi_isomorphism: bool = False
    square_commutes: bool = False
    failures: list = field(default_factory=list)

    def fail(self, what: str) -> None:
        self.ok = False
        self.failures.append(what)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "isomorphism": self.phi_isomorphism,
            "objects": self.objects,
            "transporter_equality": self.transporter_equality,
            "normalizers_are_parabolic": self.normalizers_are_parabolic,
            "phi_functor": self.phi_functor,
            "psi_functor": self.psi_functor,
            "psi_isomorphism": self.psi_isomorphism,
            "square_commutes": self.square_commutes,
            "failures": self.failures,
        }


@dataclass
class BorelTits:
    phi: CatFunctor | None
    psi: CatFunctor | None
    report: BorelTitsReport


def borel_tits_functors(Crbs: QuotCategory, O: QuotCategory, p: int,
                        Cbs: QuotCategory | None = None) -> BorelTits:
    """Build and check ``Phi: C^RBS -> O^op`` and ``Psi: C^BS -> T^op``.

    ``Crbs`` must come from ``build_category`` on a G-poset with graded links
    and ``O`` from ``orbit_category`` on those links.  Checks the transporter equality
    ``{g : O_p(Q)^g <= O_p(P)} = {g : g.P <= Q}`` for every pair, that each
    link's normalizer is the stabilizer, functoriality and bijectivity of
    both functors, and commutativity of the square through the transport
    category.  Failures are collected, not raised.
    """
    rep = BorelTitsReport()
    P = Crbs.datum
    if P is None:
        raise ValueError("C^RBS must carry its G-poset")
    G = P.group
    n = len(P.items)
    where = {obj: k for k, obj in enumerate(O.objects)}
    rep.objects = {"crbs": n, "orbit": O.n_objects}
    missing = [i for i in range(n) if P.links[i].members not in where]
    if missing or len(set(L.members for L in P.links)) != O.n_objects:
        rep.fail(f"links do not match orbit objects one-to-one (first unmatched item {missing[:1]})")
        return BorelTits(None, None, rep)
    obj = np.array([where[L.members] for L in P.links], dtype=np.int64)

    for i in range(n):
        if normalizer(P.links[i]) != P.stabilizers[i]:
            rep.normalizers_are_parabolic = False
            rep.fail(f"N_G(link) != stabilizer at item {i}")
            break

    for i in range(n):
        for j in range(n):
            lhs = np.zeros(G.order, dtype=bool)
            lhs[G.inv[transporter(P.links[j], P.links[i])]] = True
            rhs = P.leq[P.act[:, i], j]
            if not np.array_equal(lhs, rhs):
                rep.transporter_equality = False
                g = int(np.flatnonzero(lhs != rhs)[0])
                rep.fail(f"transporter equality fails for pair ({i},{j}) at element {g}")
                break
        if not rep.transporter_equality:
            break

    Oop = opposite_category(O)
    mor = np.empty(Crbs.n_morphisms, dtype=np.int64)
    for m in range(Crbs.n_morphisms):
        i, j = int(Crbs.src[m]), int(Crbs.tgt[m])
        cls = Oop.lookup[obj[i], obj[j], list(Crbs.members[m])]
        mor[m] = cls[0]
        if (cls < 0).any() or Oop.members[cls[0]] != Crbs.members[m]:
            rep.fail(f"Phi sends class {m} to a different class")
            return BorelTits(None, None, rep)
    phi = CatFunctor(Crbs, Oop, obj, mor, "phi")
    frep = check_functor(phi)
    rep.phi_functor = frep.ok
    if not frep.ok:
        rep.fail(f"Phi is not a functor: {frep.violations[0]}")
    rep.phi_isomorphism, witness = functor_is_isomorphism(phi)
    if not rep.phi_isomorphism:
        rep.fail(f"Phi is not an isomorphism: {witness}")

    if Cbs is None:
        Cbs = build_category(P.with_trivial_links())
    q = quotient_functor(Cbs, Crbs)
    R = [G.trivial] * O.n_objects
    for i in range(n):
        R[obj[i]] = P.links[i]
    T = transport_category(G, R)
    Top = opposite_category(T)
    inv_rep = G.inv[Cbs.rep]
    psi_mor = Top.lookup[obj[Cbs.src], obj[Cbs.tgt], inv_rep].astype(np.int64)
    psi = CatFunctor(Cbs, Top, obj, psi_mor, "psi")
    prep = check_functor(psi) if (psi_mor >= 0).all() else None
    rep.psi_functor = prep is not None and prep.ok
    if not rep.psi_functor:
        rep.fail("Psi is not a functor")
    else:
        rep.psi_isomorphism, witness = functor_is_isomorphism(psi)
        if not rep.psi_isomorphism:
            rep.fail(f"Psi is not an isomorphism: {witness}")

    # canonical T^op -> O^op: g |-> [g^-1]
    can = Oop.lookup[Top.src, Top.tgt, G.inv[T.rep]]
    if rep.psi_functor:
        upper = phi.mor_map[q.mor_map]
        lower = can[psi.mor_map]
        rep.square_commutes = bool(np.array_equal(upper, lower))
        if not rep.square_commutes:
            rep.fail(f"square fails at C^BS morphism {int(np.flatnonzero(upper != lower)[0])}")
    return BorelTits(phi, psi, rep)


def distinct_links(P: GPoset) -> list[Subgroup]:
    """Link subgroups without repeats, in order of first appearance."""
    seen: dict[tuple, Subgroup] = {}
    for L in P.links:
        seen.setdefault(L.members, L)
    return list(seen.values())


def borel_tits_for_gl(n: int, p: int, max_order: int = MAX_GROUP_ORDER) -> BorelTits:
    """Run every Borel-Tits check on the flag G-poset of ``GL_n(F_p)``."""
    P = flag_gposet(n, p, "graded", max_order)
    Crbs = build_category(P)
    O = orbit_category(P.group, distinct_links(P), p)
    return borel_tits_functors(Crbs, O, p)
