import numpy as np
import pytest

import oracles
from linkcat.errors import NotRadical, ScaleGuard
from linkcat.finitegroup import subgroup_generate
from linkcat.lietype import (Flag, borel_tits_for_gl, distinct_links, enumerate_flags,
                             enumerate_subspaces, exhaustive_radical_enumeration,
                             gaussian_binomial, graded_link, orbit_category,
                             p_radical_test, radicals_match_links, rref, stab_parabolic,
                             verify_link_is_op, verify_normalizer_is_parabolic)
from linkcat.quotcat import check_category_axioms


@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (4, 2)])
def test_subspace_counts(n, p):
    subs = enumerate_subspaces(n, p)
    for k in range(1, n):
        assert sum(1 for V in subs if len(V) == k) == gaussian_binomial(n, k, p)
    assert len(set(subs)) == len(subs)
    assert all(rref(V, p) == V for V in subs)


def test_small_subspace_examples():
    assert len(enumerate_subspaces(2, 2)) == 3
    subs = enumerate_subspaces(3, 2)
    assert [len(V) for V in subs].count(1) == 7 and [len(V) for V in subs].count(2) == 7
    assert enumerate_subspaces(1, 3) == []


def test_scale_guard():
    with pytest.raises(ScaleGuard):
        enumerate_subspaces(5, 2)
    with pytest.raises(ScaleGuard):
        enumerate_subspaces(2, 7)


def test_flag_counts(gl22, gl32):
    assert len(gl22.P.items) == 4 and gl22.P.items[-1] == Flag()
    assert gl22.P.leq[:, 3].all()
    flags = gl32.P.items
    assert len(flags) == 36
    assert sorted(f.dims for f in flags).count((1, 2)) == 21
    assert gl32.P.links[-1].order == 1


def test_stab_parabolic(gl22, gl32):
    G = gl22.G
    assert stab_parabolic(Flag(), G) == G.whole
    F = Flag((((1, 0),),))
    B = stab_parabolic(F, G)
    assert {G.elements[g] for g in B.members} == {(1, 0, 0, 1), (1, 1, 0, 1)}
    G3 = gl32.G
    full = Flag((((1, 0, 0),), ((1, 0, 0), (0, 1, 0))))
    assert stab_parabolic(full, G3).order == 168 // 21


def test_graded_link(gl22, gl32):
    G = gl22.G
    F = Flag((((1, 0),),))
    assert graded_link(F, G).order == 2
    assert graded_link(Flag(), G).order == 1
    G3 = gl32.G
    full = Flag((((1, 0, 0),), ((1, 0, 0), (0, 1, 0))))
    U = graded_link(full, G3)
    # oracle: upper unitriangular matrices over F_2
    uni = {(1, a, b, 0, 1, c, 0, 0, 1) for a in (0, 1) for b in (0, 1) for c in (0, 1)}
    assert {G3.elements[g] for g in U.members} == uni


@pytest.mark.parametrize("case", ["gl22", "gl23", "gl32"])
def test_orbit_stabilizer_and_equivariance(case, request):
    P = request.getfixturevalue(case).P
    G = P.group
    for i in range(len(P.items)):
        assert len(np.unique(P.act[:, i])) * P.stabilizers[i].order == G.order
    for g in range(0, G.order, max(1, G.order // 12)):
        for i in range(len(P.items)):
            j = int(P.act[g, i])
            conj = G.mul[G.mul[g, P.links[i].array], G.inv[g]]
            assert sorted(conj.tolist()) == list(P.links[j].members)


@pytest.mark.parametrize("case", ["gl22", "gl23", "gl32"])
def test_link_is_op_and_normalizer_is_parabolic(case, request):
    c = request.getfixturevalue(case)
    for F in c.P.items:
        assert verify_link_is_op(F, c.G, c.p)
        assert verify_normalizer_is_parabolic(F, c.G, c.p)


def test_p_radical_test(gl22):
    G = gl22.G
    assert p_radical_test(G.trivial, G, 2)
    U = subgroup_generate(G, [G.index_of((1, 1, 0, 1))])
    assert p_radical_test(U, G, 2)
    C3 = next(subgroup_generate(G, [g]) for g in range(G.order) if G.element_order(g) == 3)
    assert not p_radical_test(C3, G, 2)


def test_radical_scan_gl22(gl22):
    G = gl22.G
    R2 = exhaustive_radical_enumeration(G, 2)
    assert sorted(U.order for U in R2) == [1, 2, 2, 2]
    assert radicals_match_links(R2, gl22.P)
    R3 = exhaustive_radical_enumeration(G, 3)
    assert [U.order for U in R3] == [3]
    # brute-force oracle on the matrices themselves
    mul = oracles.mat_mul(2)
    els = [(e[:2], e[2:]) for e in G.elements]
    ident = ((1, 0), (0, 1))
    for p, got in ((2, R2), (3, R3)):
        want = oracles.radical_subgroups(els, mul, ident, p)
        assert {frozenset(els[g] for g in U.members) for U in got} == set(want)


@pytest.mark.slow
def test_radical_scan_gl32(gl32):
    R = exhaustive_radical_enumeration(gl32.G, 2)
    assert len(R) == 36
    assert radicals_match_links(R, gl32.P)


def test_radical_scan_guard(gl23):
    with pytest.raises(ScaleGuard):
        exhaustive_radical_enumeration(gl23.G, 3, max_order=20)


def test_orbit_category_small(gl22):
    G = gl22.G
    assert orbit_category(G, [G.trivial]).hom_sizes().tolist() == [[6]]
    R = distinct_links(gl22.P)
    O = orbit_category(G, R, 2)
    e = next(k for k, U in enumerate(R) if U.order == 1)
    u = next(k for k, U in enumerate(R) if U.order == 2)
    assert O.hom_sizes()[e, u] == 3
    assert O.hom_sizes()[u, e] == 0
    assert check_category_axioms(O).ok


def test_orbit_category_rejects_non_radical(gl22):
    G = gl22.G
    C3 = next(subgroup_generate(G, [g]) for g in range(G.order) if G.element_order(g) == 3)
    with pytest.raises(NotRadical):
        orbit_category(G, [C3], 2)


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3)])
def test_borel_tits_small(n, p):
    bt = borel_tits_for_gl(n, p)
    rep = bt.report
    assert rep.ok, rep.failures
    assert rep.phi_isomorphism and rep.psi_isomorphism and rep.square_commutes
    assert rep.objects["crbs"] == rep.objects["orbit"] == len(enumerate_flags(n, p))
    assert rep.to_json()["isomorphism"] is True


def test_phi_preserves_identities_and_composition():
    bt = borel_tits_for_gl(2, 3)
    phi = bt.phi
    C, D = phi.source, phi.target
    assert all(phi(C.identity[i]) == D.identity[phi.obj_map[i]] for i in range(C.n_objects))
    for j, B, A, block in C.blocks():
        for y, b in enumerate(B):
            for x, a in enumerate(A):
                assert phi(block[y, x]) == D.compose(phi(b), phi(a))


@pytest.mark.slow
def test_borel_tits_gl32():
    rep = borel_tits_for_gl(3, 2).report
    assert rep.ok, rep.failures
    assert rep.objects == {"crbs": 36, "orbit": 36}
