"""Edge-path presentations of the fundamental group of a nerve, and the
comparison ``pi_1 = G/E`` for categories built from a G-poset with links.

Words are lists of signed 1-based generator indices: ``k`` is generator
``k - 1`` and ``-k`` its inverse.  A relator ``[g, f, -c]`` reads "g then f
then c inverse" as a product, matching composites ``g o f = c``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import DisconnectedBasepoint
from ..finitegroup import Subgroup, normal_closure, quotient_group, subgroup_generate
from ..gposet import GPoset
from ..quotcat import QuotCategory
from .nerve import HomologyResult
from .smith import smith_normal_form

DEFAULT_COSET_BOUND = 10_000


def free_reduce(word) -> list[int]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def cyclic_reduce(word) -> list[int]:
    w = free_reduce(word)
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def _canonical_relator(word) -> tuple[int, ...]:
    """Cyclic reduction, then a fixed choice among the rotations of the word and its inverse."""
    w = cyclic_reduce(word)
    if not w:
        return ()
    inv = [-x for x in reversed(w)]
    rotations = [tuple(v[i:] + v[:i]) for v in (w, inv) for i in range(len(v))]
    # prefer fewer inverse letters, so x^2 prints as [1, 1] rather than [-1, -1]
    return min(rotations, key=lambda r: (len(r), sum(x < 0 for x in r), r))


@dataclass
class Presentation:
    generators: list
    relators: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.generators)
        for r in self.relators:
            for x in r:
                if not x or abs(x) > n:
                    raise ValueError(f"relator letter {x} is not a declared generator")

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def to_json(self) -> dict:
        return {"generators": [_plain(g) for g in self.generators],
                "relators": [list(map(int, r)) for r in self.relators]}

    def simplify(self) -> "Presentation":
        """Tietze cleanup: generators set equal to 1 or to another generator
        (by relators of length one or two) are substituted away, trivial and
        repeated relators dropped."""
        gens = list(self.generators)
        # value[k] = 0 (trivial) or a signed index of the representative
        value = list(range(1, len(gens) + 1))

        def resolve(x):
            k = abs(x)
            sign = 1 if x > 0 else -1
            while value[k - 1] != k and value[k - 1] != -k:
                v = value[k - 1]
                if v == 0:
                    return 0
                sign *= 1 if v > 0 else -1
                k = abs(v)
            return sign * k

        rels = [list(r) for r in self.relators]
        changed = True
        while changed:
            changed = False
            new = set()
            for r in rels:
                w = cyclic_reduce([y for y in (resolve(x) for x in r) if y])
                if len(w) == 1:
                    value[abs(w[0]) - 1] = 0
                    changed = True
                elif len(w) == 2 and abs(w[0]) != abs(w[1]):
                    # w[0] w[1] = 1: the larger generator becomes the inverse of the other
                    a, b = sorted(w, key=abs)
                    value[abs(b) - 1] = -a if b > 0 else a
                    changed = True
                elif w:
                    new.add(_canonical_relator(w))
            rels = [list(r) for r in sorted(new, key=lambda r: (len(r), r))]
        keep = [k for k in range(1, len(gens) + 1) if value[k - 1] == k]
        renum = {k: i + 1 for i, k in enumerate(keep)}
        out = [[renum[abs(x)] * (1 if x > 0 else -1) for x in r] for r in rels]
        return Presentation([gens[k - 1] for k in keep], out)


def _plain(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, tuple):
        return [_plain(y) for y in x]
    return x


# ------------------------------------------------------------- edge paths


@dataclass(frozen=True)
class SpanningTree:
    """BFS tree of the undirected morphism graph.

    ``edges[v] = (m, forward)``: object ``v`` was reached through morphism
    ``m``, from its source when ``forward`` is true, else from its target.
    """

    basepoint: int
    order: tuple[int, ...]
    edges: dict


def _incident(C: QuotCategory) -> list[list[int]]:
    inc: list[list[int]] = [[] for _ in range(C.n_objects)]
    for m in C.non_identity.tolist():
        inc[int(C.src[m])].append(m)
        if C.tgt[m] != C.src[m]:
            inc[int(C.tgt[m])].append(m)
    return inc


def spanning_tree(C: QuotCategory, basepoint: int) -> SpanningTree:
    if not 0 <= basepoint < C.n_objects:
        raise DisconnectedBasepoint(f"basepoint {basepoint} is not an object")
    inc = _incident(C)
    seen = {basepoint}
    order = [basepoint]
    edges = {}
    queue = deque([basepoint])
    while queue:
        u = queue.popleft()
        for m in inc[u]:  # ascending morphism id: the canonical tie-break
            s, t = int(C.src[m]), int(C.tgt[m])
            v, forward = (t, True) if s == u else (s, False)
            if v not in seen:
                seen.add(v)
                order.append(v)
                edges[v] = (m, forward)
                queue.append(v)
    return SpanningTree(basepoint, tuple(order), edges)


def pi1_presentation(C: QuotCategory, basepoint: int = 0) -> Presentation:
    """Edge-path presentation of ``pi_1(|C|, basepoint)``.

    Generators are the non-identity morphisms of the basepoint's component
    in id order; relators kill the tree edges, then record ``g o f = c`` for
    every composable non-identity pair.
    """
    tree = spanning_tree(C, basepoint)
    comp = np.zeros(C.n_objects, dtype=bool)
    comp[list(tree.order)] = True
    gens = [m for m in C.non_identity.tolist() if comp[C.src[m]]]
    letter = {m: k + 1 for k, m in enumerate(gens)}
    relators = [[letter[m]] for m, _ in sorted(tree.edges.values())]
    ids = set(C.identity.tolist())
    for j, B, A, block in C.blocks():
        if not comp[j]:
            continue
        for y, g in enumerate(B.tolist()):
            if g in ids:
                continue
            for x, f in enumerate(A.tolist()):
                if f in ids:
                    continue
                c = int(block[y, x])
                rel = [letter[g], letter[f]]
                if c not in ids:
                    rel.append(-letter[c])
                relators.append(rel)
    return Presentation(gens, relators)


# -------------------------------------------------------- coset enumeration


@dataclass
class EnumerationResult:
    order: int | None
    cosets_defined: int
    bound: int

    @property
    def inconclusive(self) -> bool:
        return self.order is None

    def to_json(self) -> dict:
        return {"order": self.order, "inconclusive": self.inconclusive,
                "cosets_defined": self.cosets_defined, "bound": self.bound}


class _BoundHit(Exception):
    pass


def coset_enumeration(pres: Presentation, bound: int = DEFAULT_COSET_BOUND) -> EnumerationResult:
    """Order of the presented group by HLT Todd-Coxeter over the trivial subgroup.

    Returns an inconclusive result once ``bound`` cosets have been defined.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    ncols = 2 * pres.n_generators
    col = lambda x: 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1  # noqa: E731
    rels = [[col(x) for x in cyclic_reduce(r)] for r in pres.relators]
    rels = [r for r in rels if r]
    table: list[list[int]] = [[-1] * ncols]
    parent = [0]

    def find(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c, x):
        if len(table) >= bound:
            raise _BoundHit
        d = len(table)
        table.append([-1] * ncols)
        parent.append(d)
        table[c][x] = d
        table[d][x ^ 1] = c

    def coincidence(a, b):
        queue = []

        def merge(u, v):
            u, v = find(u), find(v)
            if u != v:
                u, v = min(u, v), max(u, v)
                parent[v] = u
                queue.append(v)

        merge(a, b)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(ncols):
                f = table[e][x]
                if f < 0:
                    continue
                table[f][x ^ 1] = -1
                e1, f1 = find(e), find(f)
                if table[e1][x] >= 0:
                    merge(f1, table[e1][x])
                elif table[f1][x ^ 1] >= 0:
                    merge(e1, table[f1][x ^ 1])
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1

    def scan_and_fill(a, word):
        n = len(word)
        while True:
            f, i = a, 0
            b, j = a, n - 1
            while i <= j and table[f][word[i]] >= 0:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != a:
                    coincidence(f, a)
                return
            while j >= i and table[b][word[j] ^ 1] >= 0:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    try:
        a = 0
        while a < len(table):
            for w in rels:
                if find(a) != a:
                    break
                scan_and_fill(a, w)
            if find(a) == a:
                for x in range(ncols):
                    if table[a][x] < 0:
                        define(a, x)
            a += 1
    except _BoundHit:
        return EnumerationResult(None, len(table), bound)
    live = sum(1 for c in range(len(table)) if find(c) == c)
    return EnumerationResult(live, len(table), bound)


def abelianization(pres: Presentation) -> HomologyResult:
    """``H_1`` of the presented group from the exponent-sum matrix."""
    n = pres.n_generators
    rows, cols, vals = [], [], []
    for i, r in enumerate(pres.relators):
        for x in r:
            rows.append(i)
            cols.append(abs(x) - 1)
            vals.append(1 if x > 0 else -1)
    inv, rank = ((), 0)
    if rows and n:
        # duplicate entries are summed on conversion: exponent sums
        M = sp.coo_matrix((vals, (rows, cols)), shape=(len(pres.relators), n), dtype=np.int64).tocsr()
        M.eliminate_zeros()
        if M.nnz:
            inv, rank = smith_normal_form(M)
    return HomologyResult(1, n - rank, tuple(t for t in inv if t > 1))


# ------------------------------------------------------------ pi_1 vs G/E


def e_subgroup(P: GPoset) -> Subgroup:
    """Normal closure of all link subgroups."""
    return normal_closure(P.group, P.links)


@dataclass
class Pi1Report:
    passed: bool
    quotient_order: int
    pi1_order: int | None
    relators_checked: int
    failing_relator: list[int] | None
    surjective: bool
    enumeration: EnumerationResult
    generator_images: list[int]

    @property
    def status(self) -> str:
        if self.passed:
            return "PASS"
        return "INCONCLUSIVE" if self.enumeration.inconclusive and self.failing_relator is None \
            and self.surjective else "FAIL"

    def to_json(self) -> dict:
        return {"status": self.status, "order": self.pi1_order,
                "quotient_order": self.quotient_order,
                "relators_checked": self.relators_checked,
                "failing_relator": self.failing_relator,
                "surjective": self.surjective,
                "enumeration": self.enumeration.to_json()}


def pi1_vs_quotient(C: QuotCategory, P: GPoset, basepoint: int = 0,
                    bound: int = DEFAULT_COSET_BOUND) -> Pi1Report:
    """Check ``pi_1(|C|) = G/E`` through an explicit homomorphism on the
    edge-path presentation: every relator is evaluated in ``G/E``, the images
    must generate, and coset enumeration must give the same order."""
    tree = spanning_tree(C, basepoint)
    if len(tree.order) != C.n_objects:
        raise DisconnectedBasepoint("the basepoint component misses some objects; restrict first")
    E = e_subgroup(P)
    Q, proj = quotient_group(P.group, E)
    rep = C.rep
    pot = {basepoint: 0}
    for v in tree.order[1:]:
        m, forward = tree.edges[v]
        g = int(proj[rep[m]])
        if forward:
            pot[v] = int(Q.mul[g, pot[int(C.src[m])]])
        else:
            pot[v] = int(Q.mul[Q.inv[g], pot[int(C.tgt[m])]])
    pres = pi1_presentation(C, basepoint)
    images = []
    for m in pres.generators:
        u, v = int(C.src[m]), int(C.tgt[m])
        images.append(int(Q.mul[Q.mul[Q.inv[pot[v]], int(proj[rep[m]])], pot[u]]))
    failing = None
    for r in pres.relators:
        x = 0
        for letter in r:
            y = images[abs(letter) - 1]
            x = int(Q.mul[x, y if letter > 0 else Q.inv[y]])
        if x != 0:
            failing = list(r)
            break
    surjective = subgroup_generate(Q, images).order == Q.order
    enum = coset_enumeration(pres.simplify(), bound)
    passed = failing is None and surjective and enum.order == Q.order
    return Pi1Report(passed, Q.order, enum.order, len(pres.relators), failing, surjective,
                     enum, images)
