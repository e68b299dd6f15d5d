"""Finite posets with a group action and a link subgroup at every element.

The action is stored as a full table ``act[g, i]`` (index of ``g.i``) and the
order as a dense boolean matrix ``leq[i, j]`` meaning ``i <= j``.  Both must be
given explicitly: nothing is closed up or inferred, everything is checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Sequence

import numpy as np

from .errors import LinkNotInStabilizer, NotAPartialOrder
from .finitegroup import FinGroup, Subgroup, conjugate_subgroup


@dataclass
class ValidationReport:
    ok: bool = True
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def fail(self, **violation):
        self.ok = False
        self.violations.append(violation)

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.ok and other.ok, self.violations + other.violations,
                                self.notes + other.notes)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "notes": self.notes}


@dataclass(eq=False)
class GPoset:
    group: FinGroup
    items: tuple
    leq: np.ndarray
    act: np.ndarray
    links: tuple[Subgroup, ...]

    def __post_init__(self):
        self.leq = np.asarray(self.leq, dtype=bool)
        self.act = np.asarray(self.act, dtype=np.int64)
        m = len(self.items)
        if self.leq.shape != (m, m):
            raise ValueError(f"leq must be {m}x{m}, got {self.leq.shape}")
        if self.act.shape != (self.group.order, m):
            raise ValueError(f"action table must be {self.group.order}x{m}, got {self.act.shape}")
        if len(self.links) != m:
            raise ValueError("need exactly one link subgroup per item")
        if self.act.size and (self.act.min() < 0 or self.act.max() >= m):
            raise ValueError("action table entry out of range")

    def __len__(self) -> int:
        return len(self.items)

    def __repr__(self) -> str:
        return f"GPoset(items={len(self.items)}, group_order={self.group.order})"

    def index(self, item: Hashable) -> int:
        return self.items.index(item)

    @cached_property
    def stabilizers(self) -> tuple[Subgroup, ...]:
        return tuple(
            Subgroup(self.group, tuple(int(g) for g in np.flatnonzero(self.act[:, i] == i)))
            for i in range(len(self.items)))

    def with_links(self, links: Sequence[Subgroup]) -> "GPoset":
        return GPoset(self.group, self.items, self.leq, self.act, tuple(links))

    def with_trivial_links(self) -> "GPoset":
        return self.with_links([self.group.trivial] * len(self.items))


def validate_action(P: GPoset) -> ValidationReport:
    """Check the partial order, the action axioms and order preservation."""
    rep = ValidationReport()
    G, leq, act = P.group, P.leq, P.act
    m = len(P.items)

    for i in np.flatnonzero(~np.diag(leq)):
        rep.fail(kind="reflexivity", item=int(i))
    for i, j in zip(*np.nonzero(leq & leq.T)):
        if i < j:
            rep.fail(kind="antisymmetry", items=[int(i), int(j)])
    li = leq.astype(np.int64)
    closure = (li @ li) > 0
    for i, j in zip(*np.nonzero(closure & ~leq)):
        k = int(np.flatnonzero(leq[i] & leq[:, j])[0])
        rep.fail(kind="transitivity", items=[int(i), k, int(j)])

    for i in np.flatnonzero(act[0] != np.arange(m)):
        rep.fail(kind="identity", item=int(i), image=int(act[0, i]))
    for g in range(G.order):
        # act[g*h, i] must equal act[g, act[h, i]] for every h and i
        bad = act[G.mul[g]] != act[g][act]
        for h, i in zip(*np.nonzero(bad)):
            rep.fail(kind="action", g=g, h=int(h), item=int(i))
    for g in range(G.order):
        img = act[g]
        moved = leq & ~leq[np.ix_(img, img)]
        for i, j in zip(*np.nonzero(moved)):
            rep.fail(kind="order", g=g, items=[int(i), int(j)])
        for i in np.flatnonzero((img != np.arange(m)) & leq[img, np.arange(m)]):
            rep.fail(kind="strict-descent", g=g, item=int(i), image=int(img[i]))
    return rep


def validate_links(P: GPoset) -> ValidationReport:
    """Check link containment in stabilizers, monotonicity and conjugation equivariance."""
    rep = ValidationReport()
    G, act, links = P.group, P.act, P.links
    m = len(P.items)
    for i in range(m):
        if links[i].parent is not G:
            rep.fail(kind="link-parent", item=i)
            return rep
    stabs = P.stabilizers
    for i in range(m):
        if not links[i] <= stabs[i]:
            rep.fail(kind="link-in-stabilizer", item=i)
        elif not links[i].is_normal_in(stabs[i]):
            rep.notes.append(f"link at item {i} is not normal in its stabilizer")
    for i, j in zip(*np.nonzero(P.leq)):
        if not links[j] <= links[i]:
            rep.fail(kind="monotonicity", items=[int(i), int(j)])
    for g in range(G.order):
        for i in range(m):
            if conjugate_subgroup(g, links[i]) != links[int(act[g, i])]:
                rep.fail(kind="conjugation", g=g, item=i)
    return rep


def validate(P: GPoset) -> ValidationReport:
    rep = validate_action(P)
    if rep.ok:
        rep = rep.merge(validate_links(P))
    return rep


@dataclass
class OrbitPoset:
    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray
    leq: np.ndarray


def orbit_poset(P: GPoset) -> OrbitPoset:
    """The quotient poset of G-orbits, ``[i] <= [j]`` iff ``i <= g.j`` for some g."""
    m = len(P.items)
    class_of = np.full(m, -1, dtype=np.int64)
    classes = []
    for i in range(m):
        if class_of[i] < 0:
            orbit = np.unique(P.act[:, i])
            class_of[orbit] = len(classes)
            classes.append(tuple(int(x) for x in orbit))
    k = len(classes)
    member = np.zeros((k, m), dtype=np.int64)
    member[class_of, np.arange(m)] = 1
    leq = (member @ P.leq.astype(np.int64) @ member.T) > 0
    off = leq & leq.T & ~np.eye(k, dtype=bool)
    if off.any():
        a, b = (int(x) for x in np.argwhere(off)[0])
        raise NotAPartialOrder(f"orbit classes {a} and {b} are mutually below each other")
    return OrbitPoset(tuple(classes), class_of, leq)


def stabilizer(P: GPoset, i: int) -> Subgroup:
    S = P.stabilizers[i]
    if not P.links[i] <= S:
        raise LinkNotInStabilizer(f"link at item {i} is not contained in its stabilizer")
    return S


def conjugation_gposet(G: FinGroup, collection: Sequence[Subgroup],
                       links: Sequence[Subgroup] | None = None) -> GPoset:
    """Subgroups ordered by inclusion with ``G`` acting by conjugation.

    With trivial links (the default) this is the datum of a transport category.
    The collection must be closed under conjugation.
    """
    collection = list(collection)
    where = {H.members: k for k, H in enumerate(collection)}
    m = len(collection)
    act = np.empty((G.order, m), dtype=np.int64)
    for g in range(G.order):
        for k, H in enumerate(collection):
            image = conjugate_subgroup(g, H)
            if image.members not in where:
                raise ValueError("collection is not closed under conjugation")
            act[g, k] = where[image.members]
    leq = np.array([[a <= b for b in collection] for a in collection], dtype=bool).reshape(m, m)
    if links is None:
        links = [G.trivial] * m
    return GPoset(G, tuple(range(m)), leq, act, tuple(links))
