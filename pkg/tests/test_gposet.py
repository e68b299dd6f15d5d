from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkcat.errors import LinkNotInStabilizer, NotAPartialOrder
from linkcat.finitegroup import conjugate_subgroup, group_from_permutations, subgroup_generate
from linkcat.gposet import (GPoset, orbit_poset, stabilizer, validate, validate_action,
                            validate_links)
from linkcat.lietype import flag_gposet


def kinds(rep):
    return {v["kind"] for v in rep.violations}


def corrupt_action(P):
    act = P.act.copy()
    act[1, [0, 1]] = act[1, [1, 0]]
    return GPoset(P.group, P.items, P.leq, act, P.links), (1, 0)


def corrupt_conjugacy(P):
    # a coarsest flag with a nontrivial link, so monotonicity stays intact
    i = max(k for k, L in enumerate(P.links) if L.order > 1)
    links = list(P.links)
    links[i] = P.group.trivial
    return P.with_links(links), i


def corrupt_monotonicity(P):
    top = len(P.items) - 1  # the empty flag, above everything
    links = list(P.links)
    links[top] = P.group.whole
    return P.with_links(links), top


def test_one_point_trivial_group():
    G = group_from_permutations([], degree=1)
    P = GPoset(G, ("*",), [[True]], [[0]], (G.trivial,))
    assert validate(P).ok
    assert stabilizer(P, 0).order == 1


@pytest.mark.parametrize("case", ["gl22", "gl32"])
def test_flag_posets_validate(case, request):
    P = request.getfixturevalue(case).P
    assert validate_action(P).ok
    rep = validate_links(P)
    assert rep.ok and rep.notes == []
    assert validate_links(P.with_trivial_links()).ok


@pytest.mark.parametrize("case", ["gl22", "gl32"])
def test_corrupted_action_named(case, request):
    P, (a, b) = corrupt_action(request.getfixturevalue(case).P)
    rep = validate_action(P)
    assert not rep.ok and "action" in kinds(rep)
    assert any(v["kind"] == "action" and v["item"] in (a, b) for v in rep.violations)


@pytest.mark.parametrize("case", ["gl22", "gl32"])
def test_corrupted_conjugacy_named(case, request):
    P, i = corrupt_conjugacy(request.getfixturevalue(case).P)
    rep = validate_links(P)
    assert kinds(rep) == {"conjugation"}
    assert any(v["item"] == i or P.act[v["g"], v["item"]] == i for v in rep.violations)


@pytest.mark.parametrize("case", ["gl22", "gl32"])
def test_corrupted_monotonicity_named(case, request):
    P, top = corrupt_monotonicity(request.getfixturevalue(case).P)
    rep = validate_links(P)
    assert kinds(rep) == {"monotonicity"}
    assert all(v["items"][1] == top for v in rep.violations)


def test_link_outside_stabilizer(gl22):
    P = gl22.P
    links = list(P.links)
    links[0] = P.group.whole
    bad = P.with_links(links)
    assert "link-in-stabilizer" in kinds(validate_links(bad))
    with pytest.raises(LinkNotInStabilizer):
        stabilizer(bad, 0)


def test_partial_order_violations():
    G = group_from_permutations([], degree=1)
    leq = np.array([[True, True], [True, True]])
    P = GPoset(G, ("a", "b"), leq, [[0, 1]], (G.trivial, G.trivial))
    assert "antisymmetry" in kinds(validate_action(P))
    leq = np.array([[True, True, False], [False, True, True], [False, False, True]])
    P = GPoset(G, ("a", "b", "c"), leq, [[0, 1, 2]], (G.trivial,) * 3)
    assert "transitivity" in kinds(validate_action(P))


def test_order_not_preserved():
    G = group_from_permutations([(1, 0, 2)])
    leq = np.eye(3, dtype=bool)
    leq[0, 2] = True
    act = [[0, 1, 2], [1, 0, 2]]
    P = GPoset(G, ("a", "b", "c"), leq, act, (G.trivial,) * 3)
    assert "order" in kinds(validate_action(P))


def test_non_normal_link_noted_not_rejected():
    S3 = group_from_permutations([(1, 0, 2), (1, 2, 0)])
    T = subgroup_generate(S3, [1])
    # single point, link <(0 1)> inside the stabilizer S_3, not normal, not conjugation-stable
    P = GPoset(S3, ("*",), [[True]], np.zeros((6, 1), dtype=np.int64), (T,))
    rep = validate_links(P)
    assert any("not normal" in n for n in rep.notes)
    assert kinds(rep) == {"conjugation"}


def test_orbit_poset(gl22, gl32):
    O = orbit_poset(gl22.P)
    assert len(O.classes) == 2
    assert sorted(map(len, O.classes)) == [1, 3]
    lines = O.class_of[0]
    top = O.class_of[3]
    assert O.leq[lines, top] and not O.leq[top, lines]
    O3 = orbit_poset(gl32.P)
    assert len(O3.classes) == 4
    # orbit order follows coarsening of flag type
    sizes = {len(c): k for k, c in enumerate(O3.classes)}
    full, empty = sizes[21], sizes[1]
    assert O3.leq[full].all() and O3.leq[:, empty].all()


def test_orbit_poset_trivial_action():
    G = group_from_permutations([], degree=1)
    leq = np.array([[True, True], [False, True]])
    P = GPoset(G, ("a", "b"), leq, [[0, 1]], (G.trivial,) * 2)
    assert np.array_equal(orbit_poset(P).leq, leq)


def test_orbit_poset_guard():
    # 0 <= 1 and 1 ~ 0 under the swap: the orbit relation is not antisymmetric
    G = group_from_permutations([(1, 0, 2)])
    leq = np.eye(3, dtype=bool)
    leq[0, 2] = True
    leq[2, 1] = True
    leq[0, 1] = True
    P = GPoset(G, ("a", "b", "c"), leq, [[0, 1, 2], [1, 0, 2]], (G.trivial,) * 3)
    with pytest.raises(NotAPartialOrder):
        orbit_poset(P)


def test_stabilizers(gl22):
    P = gl22.P
    assert stabilizer(P, 0).order == 2
    assert stabilizer(P, 3).order == 6


def test_orbit_map_monotone(gl32):
    P = gl32.P
    O = orbit_poset(P)
    i, j = np.nonzero(P.leq)
    assert O.leq[O.class_of[i], O.class_of[j]].all()


@given(st.integers(min_value=0, max_value=167), st.integers(min_value=0, max_value=20))
def test_stabilizer_conjugation(g, i):
    P = _gl32()
    i = i % len(P.items)
    gi = int(P.act[g, i])
    assert stabilizer(P, gi) == conjugate_subgroup(g, stabilizer(P, i))


@lru_cache(maxsize=None)
def _gl32():
    return flag_gposet(3, 2)


@given(st.integers(min_value=0, max_value=167), st.integers(min_value=0, max_value=48))
def test_link_classes_have_link_size(g, i):
    P = _gl32()
    i = i % len(P.items)
    G, L = P.group, P.links[i]
    coset = {int(G.mul[g, h]) for h in L.members}
    # right L-multiplication of any member of gL stays inside gL
    for x in coset:
        assert {int(G.mul[x, h]) for h in L.members} == coset
    assert len(coset) == L.order
