"""Acceptance criteria 1-7, each timed against its limit.

Every test builds its inputs from scratch so the timings are honest, and
prints a single ``criterion N: PASS|FAIL`` line (repeated in the terminal
summary).
"""

import time

import numpy as np

import oracles
from linkcat.finitegroup import group_from_permutations
from linkcat.gposet import validate_action, validate_links
from linkcat.homotopy.fundamental import abelianization, pi1_presentation, pi1_vs_quotient
from linkcat.homotopy.nerve import (constant_functor, functor_homology, homology, homology_all,
                                    nerve_chain_complex, representation_functor)
from linkcat.lietype import (borel_tits_for_gl, exhaustive_radical_enumeration, flag_gposet,
                             radicals_match_links, verify_link_is_op,
                             verify_normalizer_is_parabolic)
from linkcat.quotcat import (build_category, check_category_axioms, check_functor,
                             group_category, is_full, poset_category, quotient_functor)

GL22_RBS = [[1, 1, 1, 3], [1, 1, 1, 3], [1, 1, 1, 3], [0, 0, 0, 6]]


def pairs(H):
    return [(h.rank, list(h.torsion)) for h in H]


def kinds(rep):
    return {v["kind"] for v in rep.violations}


def small_categories():
    """Test categories small enough for chains through degree 3."""
    P22, P23 = flag_gposet(2, 2), flag_gposet(2, 3)
    leq = np.eye(4, dtype=bool)
    leq[0, 2] = leq[0, 3] = leq[1, 2] = leq[1, 3] = True
    return {
        "GL2(F2) C^RBS": build_category(P22),
        "GL2(F2) C^BS": build_category(P22.with_trivial_links()),
        "GL2(F3) C^RBS": build_category(P23),
        "Z/2": group_category(group_from_permutations([(1, 0)])),
        "S3": group_category(group_from_permutations([(1, 0, 2), (1, 2, 0)])),
        "circle poset": poset_category(leq),
    }


def bar_s3(top, rho=None, dim=1):
    G = group_from_permutations([(1, 0, 2), (1, 2, 0)])
    return oracles.bar_homology(range(6), lambda a, b: int(G.mul[a, b]), 0, top, rho, dim)


# --------------------------------------------------------------------------


def test_criterion_1_flag_poset_validation(criterion):
    with criterion(1, "flag G-posets validate; three corruptions caught and named", 5):
        for n in (2, 3):
            P = flag_gposet(n, 2)
            assert validate_action(P).ok
            rep = validate_links(P)
            assert rep.ok and not rep.notes

            act = P.act.copy()
            act[1, [0, 1]] = act[1, [1, 0]]
            bad = type(P)(P.group, P.items, P.leq, act, P.links)
            assert "action" in kinds(validate_action(bad))

            links = list(P.links)
            i = max(k for k, L in enumerate(links) if L.order > 1)
            links[i] = P.group.trivial
            assert kinds(validate_links(P.with_links(links))) == {"conjugation"}

            links = list(P.links)
            links[-1] = P.group.whole
            assert kinds(validate_links(P.with_links(links))) == {"monotonicity"}


def test_criterion_2_category_structure(criterion):
    with criterion(2, "C^RBS hom sizes and axioms; C^BS transporter counts; quotient full", 5):
        P = flag_gposet(2, 2)
        rbs = build_category(P)
        assert rbs.hom_sizes().tolist() == GL22_RBS
        assert check_category_axioms(rbs).ok
        Pbs = P.with_trivial_links()
        bs = build_category(Pbs)
        assert check_category_axioms(bs).ok
        G, m = P.group, len(P.items)
        undivided = [[sum(bool(P.leq[P.act[g, i], j]) for g in range(G.order))
                      for j in range(m)] for i in range(m)]
        assert bs.hom_sizes().tolist() == undivided
        q = quotient_functor(bs, rbs)
        assert check_functor(q).ok and is_full(q)
        assert q.obj_map.tolist() == list(range(m))


def test_criterion_3_borel_tits(criterion):
    with criterion(3, "Phi is an isomorphism onto O^op; transporter equality; radicals", 300):
        for n, p in ((2, 2), (2, 3), (3, 2)):
            bt = borel_tits_for_gl(n, p)
            rep = bt.report
            assert rep.ok, rep.failures
            assert rep.phi_isomorphism and rep.psi_isomorphism and rep.square_commutes
            assert rep.transporter_equality and rep.normalizers_are_parabolic
            P = flag_gposet(n, p)
            for F in P.items:
                assert verify_normalizer_is_parabolic(F, P.group, p)
        P = flag_gposet(2, 2)
        R = exhaustive_radical_enumeration(P.group, 2)
        assert len(R) == 4 and radicals_match_links(R, P)


def test_criterion_4_pi1_vs_quotient(criterion):
    with criterion(4, "pi_1 = G/E for GL2(F2), GL2(F3) with links and GL2(F2) without", 180):
        for n, p, links, order in ((2, 2, "graded", 1), (2, 3, "graded", 2),
                                   (2, 2, "trivial", 6)):
            start = time.perf_counter()
            P = flag_gposet(n, p, links)
            rep = pi1_vs_quotient(build_category(P), P, bound=10_000)
            assert rep.status == "PASS", rep.to_json()
            assert rep.pi1_order == rep.quotient_order == order
            assert not rep.enumeration.inconclusive
            assert time.perf_counter() - start < 60


def test_criterion_5_homology(criterion):
    with criterion(5, "C^BS of GL2(F2) matches bar homology of S3; C^RBS is acyclic", 120):
        P = flag_gposet(2, 2)
        H_bs = homology_all(nerve_chain_complex(build_category(P.with_trivial_links()), 2))
        assert pairs(H_bs) == [(1, []), (0, [2]), (0, [])] == bar_s3(2)
        H_rbs = homology_all(nerve_chain_complex(build_category(P), 2))
        assert pairs(H_rbs)[:2] == [(1, []), (0, [])]


def test_criterion_6_functor_homology(criterion):
    with criterion(6, "constant coefficients agree with the nerve; sign module on Z/2", 60):
        for name, C in small_categories().items():
            nerve = homology_all(nerve_chain_complex(C, 2))
            assert functor_homology(C, constant_functor(C), 2) == nerve, name
        G = group_from_permutations([(1, 0)])
        C = group_category(G)
        sign = lambda g: [[-1 if g else 1]]  # noqa: E731
        got = functor_homology(C, representation_functor(C, sign, 1), 2)
        want = oracles.bar_homology(range(2), lambda a, b: int(G.mul[a, b]), 0, 2, rho=sign)
        assert pairs(got) == want == [(0, [2]), (0, []), (0, [2])]


def test_criterion_7_cross_checks(criterion):
    with criterion(7, "Hurewicz in degree 1, boundary squared zero, link equality", 120):
        cats = small_categories()
        cats["GL3(F2) C^RBS"] = build_category(flag_gposet(3, 2))
        for name, C in cats.items():
            d = 1 if name.startswith("GL3") else 2
            K = nerve_chain_complex(C, d)
            assert K.boundary_squares_vanish(), name
            assert abelianization(pi1_presentation(C)) == homology(K, 1), name
        for n, p in ((2, 2), (2, 3), (3, 2)):
            P = flag_gposet(n, p)
            assert all(verify_link_is_op(F, P.group, p) for F in P.items)
