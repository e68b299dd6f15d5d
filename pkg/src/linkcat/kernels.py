"""Kernel dispatch: the compiled extension when it was built, numpy otherwise.

Set ``LINKCAT_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("LINKCAT_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
compose_table = _impl.compose_table
well_defined_violations = _impl.well_defined_violations
assoc_violations = _impl.assoc_violations
rank_mod_p = _impl.rank_mod_p
eliminate_units = _impl.eliminate_units
