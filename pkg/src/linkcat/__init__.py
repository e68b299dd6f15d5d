"""Categories of group actions on posets with link subgroups, and their invariants."""

from .finitegroup import (FinGroup, Subgroup, group_from_matrices, group_from_permutations,
                          normal_closure, quotient_group, subgroup_generate)
from .gposet import GPoset, validate, validate_action, validate_links
from .quotcat import (QuotCategory, build_category, check_category_axioms, opposite_category,
                      quotient_functor)
from .lietype import borel_tits_for_gl, flag_gposet, gl_group, orbit_category
from .homotopy.nerve import functor_homology, homology, homology_all, nerve_chain_complex
from .homotopy.fundamental import coset_enumeration, e_subgroup, pi1_presentation, pi1_vs_quotient
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "FinGroup", "Subgroup", "group_from_matrices", "group_from_permutations",
    "normal_closure", "quotient_group", "subgroup_generate",
    "GPoset", "validate", "validate_action", "validate_links",
    "QuotCategory", "build_category", "check_category_axioms", "opposite_category",
    "quotient_functor", "borel_tits_for_gl", "flag_gposet", "gl_group", "orbit_category",
    "functor_homology", "homology", "homology_all", "nerve_chain_complex",
    "coset_enumeration", "e_subgroup", "pi1_presentation", "pi1_vs_quotient",
    "BACKEND", "__version__",
]
