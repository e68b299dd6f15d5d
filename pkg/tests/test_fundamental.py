import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkcat.errors import DisconnectedBasepoint
from linkcat.finitegroup import group_from_permutations
from linkcat.gposet import GPoset
from linkcat.homotopy.fundamental import (Presentation, abelianization, coset_enumeration,
                                          cyclic_reduce, e_subgroup, free_reduce,
                                          pi1_presentation, pi1_vs_quotient, spanning_tree)
from linkcat.homotopy.nerve import homology, nerve_chain_complex
from linkcat.quotcat import group_category, poset_category

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12)


def circle():
    leq = np.eye(4, dtype=bool)
    leq[0, 2] = leq[0, 3] = leq[1, 2] = leq[1, 3] = True
    return poset_category(leq)


# ------------------------------------------------------------------- words


@given(words)
def test_free_reduce(w):
    r = free_reduce(w)
    assert all(a != -b for a, b in zip(r, r[1:]))
    assert free_reduce(r) == r
    # reducing w followed by its inverse gives the empty word
    assert free_reduce(w + [-x for x in reversed(w)]) == []


@given(words)
def test_cyclic_reduce(w):
    r = cyclic_reduce(w)
    assert not r or r[0] != -r[-1] or len(r) == 1
    assert cyclic_reduce(r) == r


def test_presentation_rejects_unknown_letters():
    with pytest.raises(ValueError):
        Presentation(["x"], [[2]])
    with pytest.raises(ValueError):
        Presentation(["x"], [[0]])


def test_simplify_examples():
    p = Presentation(["a", "b", "c"], [[1], [2, -3], [3, 3, 2]]).simplify()
    assert p.n_generators == 1
    assert coset_enumeration(p).order == 3
    assert Presentation(["a"], [[1, -1]]).simplify().relators == []


# ------------------------------------------------------- coset enumeration


@pytest.mark.parametrize("gens,rels,order", [
    (["x"], [[1, 1]], 2),
    (["a", "b"], [[1, 1], [2, 2, 2], [1, 2, 1, 2]], 6),
    (["x", "y"], [[1], [2]], 1),
    (["a", "b"], [[1, 1, 1, 1], [2, 2], [1, 2, 1, 2]], 8),
    (["a", "b"], [[1, 1, 1], [2, 2, 2], [1, 2, 1, 2]], 12),   # A_4 as the (2,3,3) triangle group
    ([], [], 1),
])
def test_coset_enumeration(gens, rels, order):
    res = coset_enumeration(Presentation(gens, rels))
    assert res.order == order and not res.inconclusive


def test_coset_enumeration_bound():
    res = coset_enumeration(Presentation(["x"], []), bound=10)
    assert res.inconclusive and res.order is None
    assert res.to_json()["inconclusive"] is True
    with pytest.raises(ValueError):
        coset_enumeration(Presentation(["x"], []), bound=0)


@given(st.integers(1, 30))
def test_cyclic_orders(n):
    assert coset_enumeration(Presentation(["x"], [[1] * n])).order == n


@given(st.integers(2, 12))
def test_dihedral_orders(n):
    pres = Presentation(["r", "s"], [[1] * n, [2, 2], [1, 2, 1, 2]])
    assert coset_enumeration(pres).order == 2 * n


# ---------------------------------------------------------- presentations


def test_interval_presentation():
    C = poset_category(np.array([[1, 1], [0, 1]], dtype=bool))
    pres = pi1_presentation(C)
    assert pres.n_generators == 1 and pres.relators == [[1]]
    assert pres.simplify().n_generators == 0


def test_group_category_z2():
    C = group_category(group_from_permutations([(1, 0)]))
    pres = pi1_presentation(C)
    assert pres.n_generators == 1 and pres.relators == [[1, 1]]
    assert coset_enumeration(pres).order == 2


def test_group_category_presents_the_group():
    G = group_from_permutations([(1, 0, 2), (1, 2, 0)])
    pres = pi1_presentation(group_category(G))
    assert coset_enumeration(pres).order == 6
    assert coset_enumeration(pres.simplify()).order == 6


def test_circle_is_infinite():
    pres = pi1_presentation(circle()).simplify()
    assert pres.n_generators == 1 and pres.relators == []
    assert coset_enumeration(pres, bound=50).inconclusive
    assert abelianization(pres).rank == 1


def test_spanning_tree(gl22):
    T = spanning_tree(gl22.rbs, 0)
    assert T.order[0] == 0 and sorted(T.order) == [0, 1, 2, 3]
    assert len(T.edges) == 3
    for v, (m, forward) in T.edges.items():
        end = gl22.rbs.tgt[m] if forward else gl22.rbs.src[m]
        assert end == v
    with pytest.raises(DisconnectedBasepoint):
        spanning_tree(gl22.rbs, 4)


def test_disconnected_component_presentation():
    C = poset_category(np.eye(2, dtype=bool))
    assert pi1_presentation(C).n_generators == 0
    P = _discrete_gposet()
    with pytest.raises(DisconnectedBasepoint):
        pi1_vs_quotient(C, P)


def _discrete_gposet():
    G = group_from_permutations([], degree=1)
    return GPoset(G, (0, 1), np.eye(2, dtype=bool), [[0, 1]], (G.trivial, G.trivial))


@pytest.mark.parametrize("case,kind", [("gl22", "rbs"), ("gl22", "bs"), ("gl23", "rbs")])
def test_hurewicz(case, kind, request):
    c = request.getfixturevalue(case)
    C = getattr(c, kind)
    h1 = homology(nerve_chain_complex(C, 1), 1)
    assert abelianization(pi1_presentation(C).simplify()) == h1
    assert abelianization(pi1_presentation(C)) == h1


# --------------------------------------------------------------- G / E


def test_e_subgroup_orders(gl22, gl23):
    assert e_subgroup(gl22.P).order == 6
    assert e_subgroup(gl23.P).order == 24
    assert e_subgroup(gl22.Pbs).order == 1


@pytest.mark.parametrize("case,kind,order", [
    ("gl22", "rbs", 1), ("gl23", "rbs", 2), ("gl22", "bs", 6),
])
def test_pi1_vs_quotient(case, kind, order, request):
    c = request.getfixturevalue(case)
    P = c.P if kind == "rbs" else c.Pbs
    rep = pi1_vs_quotient(getattr(c, kind), P)
    assert rep.status == "PASS"
    assert rep.pi1_order == rep.quotient_order == order
    assert rep.surjective and rep.failing_relator is None
    js = rep.to_json()
    assert js["order"] == order and js["status"] == "PASS"


def test_pi1_vs_quotient_other_basepoint(gl23):
    rep = pi1_vs_quotient(gl23.rbs, gl23.P, basepoint=len(gl23.P.items) - 1)
    assert rep.status == "PASS" and rep.pi1_order == 2


def test_mismatched_links_fail(gl22):
    """The transport category has pi_1 = S_3, but the linked quotient G/E is trivial."""
    rep = pi1_vs_quotient(gl22.bs, gl22.P)
    assert rep.status == "FAIL"
    assert rep.pi1_order == 6 and rep.quotient_order == 1


def test_gl23_abelianization_is_z2(gl23):
    h = abelianization(pi1_presentation(gl23.rbs))
    assert h.rank == 0 and h.torsion == (2,)


@pytest.mark.parametrize("pres,rank,torsion", [
    (Presentation(["x"], [[1, 1]]), 0, (2,)),
    (Presentation(["x", "y"], []), 2, ()),
    (Presentation(["a", "b"], [[1, 1], [2, 2, 2], [1, 2, 1, 2]]), 0, (2,)),
])
def test_abelianization_examples(pres, rank, torsion):
    h = abelianization(pres)
    assert (h.rank, h.torsion) == (rank, torsion)


def test_gl32_simply_connected(gl32):
    rep = pi1_vs_quotient(gl32.rbs, gl32.P)
    assert rep.status == "PASS" and rep.pi1_order == rep.quotient_order == 1
    assert rep.relators_checked > 300_000
