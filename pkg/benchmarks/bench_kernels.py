"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--case 3,2 --case 2,3]

Prints one row per (case, kernel) with the best time of each backend and the
speedup.  Both backends are asserted to agree before anything is timed.
"""

import argparse
import time

import numpy as np

from linkcat import _kernels_py as pure
from linkcat.homotopy.nerve import nerve_chain_complex
from linkcat.homotopy.smith import _to_rows
from linkcat.lietype import flag_gposet
from linkcat.quotcat import VIOLATION_LIMIT, build_category

try:
    from linkcat import _kernels as fast
except ImportError:  # pragma: no cover
    fast = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def kernels_for(C):
    L = C.layout.astuple()
    ptr, flat = C._mem_csr
    G = C.group
    return {
        "compose_table": lambda m: m.compose_table(G.mul, C.rep, C.src, C.tgt, C.lookup,
                                                   C.later_first, L),
        "assoc_violations": lambda m: m.assoc_violations(C.table, C.src, C.tgt, L,
                                                         VIOLATION_LIMIT),
        "well_defined_violations": lambda m: m.well_defined_violations(
            G.mul, ptr, flat, C.src, C.tgt, C.lookup, C.table, L, C.later_first,
            VIOLATION_LIMIT),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--case", action="append", help="n,p[,trivial]")
    args = ap.parse_args()
    if fast is None:
        raise SystemExit("compiled extension not built; run `pip install -e .` first")
    cases = args.case or ["2,3", "2,3,trivial", "3,2"]
    print(f"{'case':<18}{'kernel':<26}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for case in cases:
        parts = case.split(",")
        n, p = int(parts[0]), int(parts[1])
        links = parts[2] if len(parts) > 2 else "graded"
        C = build_category(flag_gposet(n, p, links), verify=False)
        label = f"GL{n}(F{p}) {links}"
        for name, call in kernels_for(C).items():
            tp, a = best_of(lambda: call(pure), args.repeat)
            tc, b = best_of(lambda: call(fast), args.repeat)
            assert np.array_equal(np.asarray(a), np.asarray(b)), name
            print(f"{label:<18}{name:<26}{tp:>10.4f}{tc:>10.4f}{tp / tc:>8.1f}x")
        rng = np.random.default_rng(0)
        A = rng.integers(-3, 4, size=(300, 400))
        tp, a = best_of(lambda: pure.rank_mod_p(A, p), args.repeat)
        tc, b = best_of(lambda: fast.rank_mod_p(A.astype(np.int64), p), args.repeat)
        assert a == b
        print(f"{label:<18}{'rank_mod_p 300x400':<26}{tp:>10.4f}{tc:>10.4f}{tp / tc:>8.1f}x")
        if C.n_morphisms <= 500:
            B = nerve_chain_complex(C, 1).boundary[2].T
            tp, a = best_of(lambda: pure.eliminate_units(_to_rows(B)[0]), args.repeat)
            tc, b = best_of(lambda: fast.eliminate_units(_to_rows(B)[0]), args.repeat)
            assert a == b
            name = f"eliminate_units {B.shape[0]}x{B.shape[1]}"
            print(f"{label:<18}{name:<26}{tp:>10.4f}{tc:>10.4f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
