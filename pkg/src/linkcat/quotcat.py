"""Finite categories whose hom-sets are quotients of subsets of a group.

For a G-poset with link subgroups, ``build_category`` produces the category
with ``hom(i, j) = {g : g.i <= j} / G_i^l`` (right cosets ``g G_i^l``), and
composes classes by multiplying representatives.  The class of ``g`` in
``hom(i, j)`` followed by the class of ``h`` in ``hom(j, k)`` is the class of
``h g`` in ``hom(i, k)``.

Morphisms are numbered globally in the order (source, target, representative),
where the representative of a class is its smallest member index.  Every
category keeps its classes extensionally so that well-definedness of
composition is checked, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Sequence

import numpy as np

from . import kernels
from .errors import EmptySelection, IncompatibleInputs, ValidationFailed
from .finitegroup import FinGroup
from .gposet import GPoset, validate

VIOLATION_LIMIT = 100


@dataclass(eq=False)
class QuotCategory:
    """A finite category given by explicit morphism classes and composition.

    ``table`` holds composites block by block (see ``Layout``); use
    ``composite(b, a)`` for ``b o a`` with ``a`` applied first.
    ``lookup[i, j, g]`` locates group element ``g`` in ``hom(i, j)``; it is
    ``None`` for categories loaded without their group.  ``later_first``
    records whether composites multiply the later representative on the
    left (``h g``) or on the right (``g h``).
    """

    objects: tuple
    src: np.ndarray
    tgt: np.ndarray
    members: tuple[tuple[int, ...], ...]
    identity: np.ndarray
    table: np.ndarray
    group: FinGroup | None = None
    lookup: np.ndarray | None = None
    later_first: bool = True
    datum: GPoset | None = field(default=None, repr=False)

    def __repr__(self) -> str:
        return f"QuotCategory(objects={len(self.objects)}, morphisms={self.n_morphisms})"

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.src)

    @cached_property
    def rep(self) -> np.ndarray:
        return np.array([m[0] for m in self.members], dtype=np.int64)

    @cached_property
    def hom(self) -> dict[tuple[int, int], tuple[int, ...]]:
        out: dict[tuple[int, int], list[int]] = {}
        for m, (i, j) in enumerate(zip(self.src.tolist(), self.tgt.tolist())):
            out.setdefault((i, j), []).append(m)
        return {k: tuple(v) for k, v in out.items()}

    def hom_set(self, i: int, j: int) -> tuple[int, ...]:
        return self.hom.get((i, j), ())

    def hom_sizes(self) -> np.ndarray:
        sizes = np.zeros((self.n_objects, self.n_objects), dtype=np.int64)
        np.add.at(sizes, (self.src, self.tgt), 1)
        return sizes

    @cached_property
    def layout(self) -> "Layout":
        return make_layout(self.src, self.tgt, self.n_objects)

    def composite(self, b, a) -> np.ndarray:
        """Vectorized ``b o a``; -1 wherever ``tgt[a] != src[b]``."""
        b, a = np.broadcast_arrays(np.asarray(b, dtype=np.int64), np.asarray(a, dtype=np.int64))
        L = self.layout
        j = self.src[b]
        ok = self.tgt[a] == j
        idx = L.offset[j] + L.pos_out[b] * L.n_in[j] + L.pos_in[a]
        return np.where(ok, self.table[np.where(ok, idx, 0)], -1)

    def compose(self, b: int, a: int) -> int:
        c = int(self.composite(b, a))
        if c < 0:
            raise ValueError(f"morphisms {b} and {a} are not composable")
        return c

    def blocks(self):
        """Yield ``(j, B, A, block)`` with ``block[y, x] = B[y] o A[x]``."""
        L = self.layout
        for j in range(self.n_objects):
            B, A = L.out_of(j), L.into(j)
            yield j, B, A, self.table[L.offset[j]:L.offset[j + 1]].reshape(len(B), len(A))

    def is_identity(self, m: int) -> bool:
        return int(self.identity[self.src[m]]) == m

    @cached_property
    def non_identity(self) -> np.ndarray:
        mask = np.ones(self.n_morphisms, dtype=bool)
        mask[self.identity] = False
        return np.flatnonzero(mask)

    def class_of(self, i: int, j: int, g: int) -> int:
        """Morphism of ``hom(i, j)`` containing group element ``g`` (-1 if none)."""
        if self.lookup is None:
            raise ValueError("category has no group data")
        return int(self.lookup[i, j, g])

    @cached_property
    def _mem_csr(self):
        sizes = np.array([len(m) for m in self.members], dtype=np.int64)
        ptr = np.concatenate([[0], np.cumsum(sizes)])
        flat = np.array([g for m in self.members for g in m], dtype=np.int64)
        return ptr, flat


@dataclass(eq=False)
class Layout:
    """Block layout of a composition table.

    Morphisms out of / into object ``j`` are ``out_ids[out_ptr[j]:out_ptr[j+1]]``
    and ``in_ids[in_ptr[j]:in_ptr[j+1]]`` in increasing id order; ``pos_out``
    and ``pos_in`` give each morphism's position in those lists.
    """

    out_ptr: np.ndarray
    out_ids: np.ndarray
    in_ptr: np.ndarray
    in_ids: np.ndarray
    offset: np.ndarray
    pos_out: np.ndarray
    pos_in: np.ndarray

    @property
    def n_in(self) -> np.ndarray:
        return np.diff(self.in_ptr)

    def out_of(self, j: int) -> np.ndarray:
        return self.out_ids[self.out_ptr[j]:self.out_ptr[j + 1]]

    def into(self, j: int) -> np.ndarray:
        return self.in_ids[self.in_ptr[j]:self.in_ptr[j + 1]]

    def astuple(self) -> tuple:
        return (self.out_ptr, self.out_ids, self.in_ptr, self.in_ids, self.offset,
                self.pos_out, self.pos_in)


def _csr(keys: np.ndarray, n: int):
    ids = np.argsort(keys, kind="stable").astype(np.int64)
    ptr = np.searchsorted(keys[ids], np.arange(n + 1)).astype(np.int64)
    pos = np.empty(len(keys), dtype=np.int64)
    pos[ids] = np.arange(len(keys)) - ptr[keys[ids]]
    return ptr, ids, pos


def make_layout(src: np.ndarray, tgt: np.ndarray, n_obj: int) -> Layout:
    out_ptr, out_ids, pos_out = _csr(np.asarray(src, dtype=np.int64), n_obj)
    in_ptr, in_ids, pos_in = _csr(np.asarray(tgt, dtype=np.int64), n_obj)
    sizes = np.diff(out_ptr) * np.diff(in_ptr)
    offset = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    return Layout(out_ptr, out_ids, in_ptr, in_ids, offset, pos_out, pos_in)


def _table_from(layout: Layout, n_obj: int, composite) -> np.ndarray:
    """Fill a flat table from a vectorized ``composite(B[:, None], A[None, :])``."""
    flat = np.full(int(layout.offset[-1]), -1, dtype=np.int32)
    for j in range(n_obj):
        B, A = layout.out_of(j), layout.into(j)
        if len(A) and len(B):
            flat[layout.offset[j]:layout.offset[j + 1]] = composite(B[:, None], A[None, :]).ravel()
    return flat


@dataclass(eq=False)
class CatFunctor:
    source: QuotCategory
    target: QuotCategory
    obj_map: np.ndarray
    mor_map: np.ndarray
    name: str = ""

    def __call__(self, m: int) -> int:
        return int(self.mor_map[m])


@dataclass
class CategoryReport:
    ok: bool = True
    violations: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)

    def add(self, **v):
        self.ok = False
        if len(self.violations) < VIOLATION_LIMIT:
            self.violations.append(v)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "checked": self.checked}


# ---------------------------------------------------------------- assembly


def assemble(objects: Sequence[Hashable], G: FinGroup, allowed: np.ndarray,
             label: np.ndarray, later_first: bool, datum: GPoset | None = None,
             verify: bool = True) -> QuotCategory:
    """Assemble a category from per-pair allowed sets and coset labels.

    ``allowed[i, j]`` is a boolean mask over ``G`` (the elements admitted
    into ``hom(i, j)``) and ``label[i, j, g]`` names the class of ``g``.
    Classes become morphisms; composites come from the representatives.
    """
    n = len(objects)
    lookup = np.full((n, n, G.order), -1, dtype=np.int32)
    src, tgt, members = [], [], []
    for i in range(n):
        for j in range(n):
            elems = np.flatnonzero(allowed[i, j])
            if not elems.size:
                continue
            labs = label[i, j, elems]
            for lab in np.unique(labs):
                cls = elems[labs == lab]
                lookup[i, j, cls] = len(members)
                members.append(tuple(int(g) for g in cls))
                src.append(i)
                tgt.append(j)
    src_a = np.asarray(src, dtype=np.int64)
    tgt_a = np.asarray(tgt, dtype=np.int64)
    identity = lookup[np.arange(n), np.arange(n), 0].astype(np.int64)
    if (identity < 0).any():
        raise ValidationFailed("some object has no identity morphism")
    rep = np.array([m[0] for m in members], dtype=np.int64)
    layout = make_layout(src_a, tgt_a, n)
    table = kernels.compose_table(G.mul, rep, src_a, tgt_a, lookup, later_first, layout.astuple())
    C = QuotCategory(tuple(objects), src_a, tgt_a, tuple(members), identity, table,
                     group=G, lookup=lookup, later_first=later_first, datum=datum)
    C.__dict__["layout"] = layout
    if verify:
        rep_ = check_category_axioms(C)
        if not rep_.ok:
            raise ValidationFailed("category axioms fail", rep_)
    return C


def build_category(P: GPoset, verify: bool = True) -> QuotCategory:
    """The category of a G-poset with link subgroups.

    Raises ``ValidationFailed`` (carrying the report) when the datum does
    not satisfy the action, order and link conditions.
    """
    report = validate(P)
    if not report.ok:
        raise ValidationFailed("G-poset validation failed", report)
    G = P.group
    n = len(P.items)
    # allowed[i, j, g] <=> g.i <= j
    allowed = np.transpose(P.leq[P.act], (1, 2, 0))
    label = np.empty((n, n, G.order), dtype=np.int64)
    for i in range(n):
        # right cosets g G_i^l, named by their smallest element
        label[i, :, :] = G.mul[:, P.links[i].array].min(axis=1)[None, :]
    return assemble(P.items, G, allowed, label, later_first=True, datum=P, verify=verify)


# ------------------------------------------------------------------ checks


def check_category_axioms(C: QuotCategory) -> CategoryReport:
    """Units, associativity over every composable triple, and well-definedness."""
    rep = CategoryReport()
    src, tgt, ids = C.src, C.tgt, C.identity
    M, n = C.n_morphisms, C.n_objects
    if (src[ids] != np.arange(n)).any() or (tgt[ids] != np.arange(n)).any():
        rep.add(kind="identity-endpoints")
        return rep
    everything = np.arange(M)
    for m in np.flatnonzero(C.composite(ids[tgt], everything) != everything):
        rep.add(kind="left-unit", morphism=int(m))
    for m in np.flatnonzero(C.composite(everything, ids[src]) != everything):
        rep.add(kind="right-unit", morphism=int(m))
    for j, B, A, block in C.blocks():
        if (block < 0).any() or (block >= M).any():
            y, x = np.argwhere((block < 0) | (block >= M))[0]
            rep.add(kind="composability", pair=[int(B[y]), int(A[x])])
            continue
        wrong = (src[block] != src[A][None, :]) | (tgt[block] != tgt[B][:, None])
        for y, x in np.argwhere(wrong):
            rep.add(kind="composite-endpoints", pair=[int(B[y]), int(A[x])])
    if not rep.ok:
        return rep

    L = C.layout
    n_out = np.diff(L.out_ptr)
    rep.checked["triples"] = int(np.sum(L.n_in[src] * n_out[tgt]))
    for h, g, f in kernels.assoc_violations(C.table, src, tgt, L.astuple(), VIOLATION_LIMIT):
        rep.add(kind="associativity", triple=[h, g, f])

    if C.group is not None and C.lookup is not None:
        ptr, flat = C._mem_csr
        sizes = np.diff(ptr)
        rep.checked["member_products"] = int(sum(
            int(sizes[L.into(j)].sum()) * int(sizes[L.out_of(j)].sum()) for j in range(n)))
        for b, a, y, x in kernels.well_defined_violations(
                C.group.mul, ptr, flat, src, tgt, C.lookup, C.table, L.astuple(),
                C.later_first, VIOLATION_LIMIT):
            rep.add(kind="well-definedness", pair=[b, a], members=[y, x])
    return rep


def check_functor(F: CatFunctor) -> CategoryReport:
    """Endpoints, identities and composition are preserved, exhaustively."""
    rep = CategoryReport()
    S, T = F.source, F.target
    om, mm = np.asarray(F.obj_map), np.asarray(F.mor_map)
    bad_ends = (T.src[mm] != om[S.src]) | (T.tgt[mm] != om[S.tgt])
    for m in np.flatnonzero(bad_ends):
        rep.add(kind="endpoints", morphism=int(m))
    for i in np.flatnonzero(mm[S.identity] != T.identity[om]):
        rep.add(kind="identity", object=int(i))
    if not rep.ok:
        return rep
    pairs = 0
    for j, B, A, block in S.blocks():
        lhs = mm[block]
        rhs = T.composite(mm[B][:, None], mm[A][None, :])
        for y, x in np.argwhere(lhs != rhs):
            rep.add(kind="composition", pair=[int(B[y]), int(A[x])])
        pairs += block.size
    rep.checked["pairs"] = pairs
    return rep


def functor_is_isomorphism(F: CatFunctor) -> tuple[bool, str]:
    """Bijective on objects and on every hom-set; otherwise a witness string."""
    S, T = F.source, F.target
    om = np.asarray(F.obj_map)
    if len(set(om.tolist())) != len(om) or len(om) != T.n_objects:
        return False, f"objects: {S.n_objects} -> {len(set(om.tolist()))} of {T.n_objects}"
    for (i, j), ms in sorted(S.hom.items()):
        image = {int(F.mor_map[m]) for m in ms}
        target = T.hom_set(int(om[i]), int(om[j]))
        if len(image) != len(ms) or len(target) != len(ms):
            return False, (f"hom({i},{j}): {len(ms)} morphisms -> {len(image)} images "
                           f"in a hom-set of size {len(target)}")
    for (i, j), ms in T.hom.items():
        pre_i, pre_j = np.flatnonzero(om == i), np.flatnonzero(om == j)
        if not S.hom_set(int(pre_i[0]), int(pre_j[0])) and ms:
            return False, f"target hom({i},{j}) of size {len(ms)} is not hit"
    return True, "bijective on objects and on every hom-set"


def identity_functor(C: QuotCategory) -> CatFunctor:
    return CatFunctor(C, C, np.arange(C.n_objects), np.arange(C.n_morphisms), "identity")


# ---------------------------------------------------------------- functors


def quotient_functor(Cbs: QuotCategory, Crbs: QuotCategory) -> CatFunctor:
    """Identity on objects; a group element goes to its coset class."""
    if Cbs.objects != Crbs.objects:
        raise IncompatibleInputs("object sets differ")
    if Crbs.lookup is None or Cbs.group is not Crbs.group:
        raise IncompatibleInputs("both categories must carry the same group")
    mor = np.empty(Cbs.n_morphisms, dtype=np.int64)
    for m in range(Cbs.n_morphisms):
        cls = Crbs.lookup[Cbs.src[m], Cbs.tgt[m], Cbs.members[m]]
        if (cls < 0).any() or (cls != cls[0]).any():
            raise IncompatibleInputs(f"morphism {m} does not map into a single class")
        mor[m] = cls[0]
    F = CatFunctor(Cbs, Crbs, np.arange(Cbs.n_objects), mor, "quotient")
    rep = check_functor(F)
    if not rep.ok:
        raise IncompatibleInputs(f"quotient map is not a functor: {rep.violations[:3]}")
    return F


def is_full(F: CatFunctor) -> bool:
    S, T = F.source, F.target
    om = np.asarray(F.obj_map)
    for i in range(S.n_objects):
        for j in range(S.n_objects):
            hit = {int(F.mor_map[m]) for m in S.hom_set(i, j)}
            if hit != set(T.hom_set(int(om[i]), int(om[j]))):
                return False
    return True


# ------------------------------------------------------------ constructions


def full_subcategory(C: QuotCategory, J: Sequence[int]) -> QuotCategory:
    """Full subcategory on the object indices ``J`` (kept in the order given)."""
    J = [int(j) for j in J]
    if not J:
        raise EmptySelection("empty object selection")
    pos = np.full(C.n_objects, -1, dtype=np.int64)
    pos[J] = np.arange(len(J))
    keep = np.flatnonzero((pos[C.src] >= 0) & (pos[C.tgt] >= 0))
    # reorder morphisms by (new source, new target, representative)
    keep = keep[np.lexsort((C.rep[keep], pos[C.tgt[keep]], pos[C.src[keep]]))]
    new_id = np.full(C.n_morphisms, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep))
    src, tgt = pos[C.src[keep]], pos[C.tgt[keep]]
    layout = make_layout(src, tgt, len(J))
    table = _table_from(layout, len(J), lambda B, A: new_id[C.composite(keep[B], keep[A])])
    lookup = None
    if C.lookup is not None:
        raw = C.lookup[np.ix_(J, J)]
        lookup = np.where(raw >= 0, new_id[np.maximum(raw, 0)], -1).astype(np.int32)
    return QuotCategory(
        tuple(C.objects[j] for j in J), src, tgt, tuple(C.members[m] for m in keep),
        new_id[C.identity[J]], table, group=C.group, lookup=lookup, later_first=C.later_first)


def opposite_category(C: QuotCategory) -> QuotCategory:
    """Reverse every morphism; morphism numbering is kept."""
    lookup = None if C.lookup is None else np.ascontiguousarray(np.transpose(C.lookup, (1, 0, 2)))
    src, tgt = C.tgt.copy(), C.src.copy()
    layout = make_layout(src, tgt, C.n_objects)
    table = _table_from(layout, C.n_objects, lambda B, A: C.composite(A, B))
    return QuotCategory(C.objects, src, tgt, C.members, C.identity.copy(), table,
                        group=C.group, lookup=lookup, later_first=not C.later_first)


def poset_category(leq: np.ndarray, objects: Sequence[Hashable] | None = None) -> QuotCategory:
    """A finite poset as a category (trivial group, one morphism per relation)."""
    from .finitegroup import group_from_permutations
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    G = group_from_permutations([], degree=1)
    P = GPoset(G, tuple(range(n)) if objects is None else tuple(objects), leq,
               np.arange(n)[None, :], tuple([G.trivial] * n))
    return build_category(P)


def group_category(G: FinGroup) -> QuotCategory:
    """The one-object category whose endomorphisms are the elements of ``G``."""
    P = GPoset(G, ("*",), np.ones((1, 1), dtype=bool), np.zeros((G.order, 1), dtype=np.int64),
               (G.trivial,))
    return build_category(P)


# ------------------------------------------------------------ serialization


def category_to_json(C: QuotCategory) -> dict:
    """Canonical dump: objects, hom classes, composition triples ``[b, a, b o a]``."""
    homs = []
    for (i, j), ms in sorted(C.hom.items()):
        homs.append({
            "source": i,
            "target": j,
            "classes": [{"id": int(m), "rep": int(C.members[m][0]), "members": list(C.members[m])}
                        for m in ms],
        })
    triples = []
    for j, B, A, block in C.blocks():
        bb, aa = np.meshgrid(B, A, indexing="ij")
        triples.extend(np.stack([bb.ravel(), aa.ravel(), block.ravel()], axis=1).tolist())
    return {
        "format": 1,
        "objects": [_jsonable(o) for o in C.objects],
        "later_first": bool(C.later_first),
        "identities": C.identity.tolist(),
        "hom_sizes": C.hom_sizes().tolist(),
        "homs": homs,
        "composition": triples,
    }


def category_from_json(data: dict, group: FinGroup | None = None) -> QuotCategory:
    """Rebuild a category from ``category_to_json`` output.

    Without ``group`` the result has no lookup table, so well-definedness
    cannot be rechecked; units and associativity still can.
    """
    if data.get("format") != 1:
        raise ValueError("unsupported category format")
    M = sum(len(h["classes"]) for h in data["homs"])
    src = np.empty(M, dtype=np.int64)
    tgt = np.empty(M, dtype=np.int64)
    members: list = [None] * M
    for h in data["homs"]:
        for c in h["classes"]:
            src[c["id"]], tgt[c["id"]] = h["source"], h["target"]
            members[c["id"]] = tuple(c["members"])
    L = make_layout(src, tgt, len(data["objects"]))
    table = np.full(int(L.offset[-1]), -1, dtype=np.int32)
    if data["composition"]:
        t = np.asarray(data["composition"], dtype=np.int64)
        b, a = t[:, 0], t[:, 1]
        if (src[b] != tgt[a]).any():
            raise ValueError("composition entry for a non-composable pair")
        j = src[b]
        table[L.offset[j] + L.pos_out[b] * L.n_in[j] + L.pos_in[a]] = t[:, 2]
    objects = tuple(_from_jsonable(o) for o in data["objects"])
    lookup = None
    if group is not None:
        lookup = np.full((len(objects), len(objects), group.order), -1, dtype=np.int32)
        for m in range(M):
            lookup[src[m], tgt[m], list(members[m])] = m
    return QuotCategory(objects, src, tgt, tuple(members), np.asarray(data["identities"], dtype=np.int64),
                        table, group=group, lookup=lookup, later_first=bool(data["later_first"]))


def _jsonable(o):
    if hasattr(o, "to_json"):
        return o.to_json()
    if isinstance(o, tuple):
        return [_jsonable(x) for x in o]
    if isinstance(o, np.integer):
        return int(o)
    return o


def _from_jsonable(o):
    if isinstance(o, list):
        return tuple(_from_jsonable(x) for x in o)
    return o
