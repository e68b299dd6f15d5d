"""Batch front end.

    linkcat <pipeline> [--spec JSON | --in FILE] [--out FILE]
                       [--max-order N] [--max-chains N]

A job is a JSON object naming a pipeline and an input source: a generated
family (``{"family": "GL", "n": 2, "p": 3}``), explicit ``group`` and
optional ``poset`` descriptors, or a ``category`` dump.  Exit status is 0 on
success, 1 when a mathematical check fails, 2 on bad input or a scale cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .errors import LinkcatError, NotFunctorial, NotRadical, ValidationFailed
from .gposet import GPoset, validate
from .homotopy.fundamental import (DEFAULT_COSET_BOUND, abelianization, coset_enumeration,
                                   pi1_presentation, pi1_vs_quotient)
from .homotopy.nerve import (DEFAULT_MAX_CHAINS, CoefficientFunctor, constant_functor,
                             functor_chain_complex, homology_all, nerve_chain_complex,
                             zero_functor)
from .lietype import (MAX_GROUP_ORDER, MAX_RADICAL_SCAN, borel_tits_functors, distinct_links,
                      exhaustive_radical_enumeration, flag_gposet, orbit_category,
                      radicals_match_links)
from .quotcat import (QuotCategory, build_category, category_from_json, category_to_json,
                      check_category_axioms, opposite_category)

PIPELINES = ("validate", "build-cat", "borel-tits", "pi1", "homology",
             "functor-homology", "radicals", "flagposet")

JOB_SCHEMA = {
    "type": "object",
    "required": ["pipeline"],
    "properties": {
        "format": {"const": 1},
        "pipeline": {"enum": list(PIPELINES)},
        "family": {"const": "GL"},
        "n": {"type": "integer", "minimum": 1},
        "p": {"type": "integer", "minimum": 2},
        "group": {"type": "object"},
        "poset": {"type": "object"},
        "category": {"type": "object"},
        "links": {"enum": ["given", "graded", "trivial"]},
        "d": {"type": "integer", "minimum": 0},
        "basepoint": {"type": "integer", "minimum": 0},
        "bound": {"type": "integer", "minimum": 1},
        "max_order": {"type": "integer", "minimum": 1},
        "max_chains": {"type": "integer", "minimum": 1},
        "opposite": {"type": "boolean"},
        "coefficients": {
            "type": "object",
            "required": ["type"],
            "properties": {
                "type": {"enum": ["constant", "zero", "representation"]},
                "modulus": {"type": ["integer", "null"], "minimum": 2},
                "dim": {"type": "integer", "minimum": 0},
                "generators": {"type": "array",
                               "items": {"type": "array",
                                         "items": {"type": "array", "items": {"type": "integer"}}}},
            },
            "additionalProperties": False,
        },
    },
    "dependentRequired": {"family": ["n", "p"], "poset": ["group"]},
    "additionalProperties": False,
}


class MathFailure(Exception):
    """A check ran to completion and failed; carries the report."""

    def __init__(self, report: dict):
        self.report = report
        super().__init__("check failed")


class ScaleFailure(Exception):
    def __init__(self, report: dict):
        self.report = report
        super().__init__("scale limit reached")


@dataclass
class Source:
    P: GPoset | None
    C: QuotCategory | None
    p: int | None


def _source(job: dict, need_category: bool = True) -> Source:
    max_order = job.get("max_order", MAX_GROUP_ORDER)
    links = job.get("links", "given")
    if "family" in job:
        P = flag_gposet(job["n"], job["p"], "trivial" if links == "trivial" else "graded", max_order)
        p = job["p"]
    elif "group" in job:
        G = io.group_from_descriptor(job["group"], cap=max(max_order, 1) + 1, prefix=("group",))
        if G.order > max_order:
            raise LinkcatError(f"group order {G.order} exceeds --max-order {max_order}")
        P = (io.gposet_from_descriptor(G, job["poset"], prefix=("poset",)) if "poset" in job
             else io.one_point_gposet(G))
        if links == "trivial":
            P = P.with_trivial_links()
        p = job.get("p", G.p)
    elif "category" in job:
        C = category_from_json(job["category"])
        if job.get("opposite"):
            C = opposite_category(C)
        return Source(None, C, job.get("p"))
    else:
        io._fail((), "job needs one of 'family', 'group' or 'category'")
    if not need_category:
        return Source(P, None, p)
    C = build_category(P)
    if job.get("opposite"):
        C = opposite_category(C)
    return Source(P, C, p)


def _need_poset(src: Source, what: str) -> GPoset:
    if src.P is None:
        io._fail((), f"{what} needs a group-based input, not a category dump")
    return src.P


def dump_category(job: dict) -> dict:
    """Canonical category JSON for the job's input."""
    return category_to_json(_source(job).C)


# ----------------------------------------------------------------- pipelines


def _validate(job):
    P = _need_poset(_source(job, need_category=False), "validate")
    rep = validate(P)
    out = rep.to_json()
    if not rep.ok:
        raise MathFailure(out)
    return out


def _build_cat(job):
    src = _source(job)
    axioms = check_category_axioms(src.C)
    out = {"category": category_to_json(src.C), "axioms": axioms.to_json()}
    if not axioms.ok:
        raise MathFailure(out)
    return out


def _borel_tits(job):
    job = dict(job, links="given")
    src = _source(job)
    if src.p is None:
        io._fail((), "borel-tits needs 'p'")
    try:
        O = orbit_category(src.P.group, distinct_links(src.P), src.p)
    except NotRadical as e:
        raise MathFailure({"ok": False, "isomorphism": False, "failures": [str(e)]}) from None
    rep = borel_tits_functors(src.C, O, src.p).report.to_json()
    if not rep["ok"]:
        raise MathFailure(rep)
    return rep


def _pi1(job):
    src = _source(job)
    base = job.get("basepoint", src.C.n_objects - 1)
    bound = job.get("bound", DEFAULT_COSET_BOUND)
    pres = pi1_presentation(src.C, base)
    small = pres.simplify()
    if src.P is None or job.get("opposite"):
        enum = coset_enumeration(small, bound)
        out = {"status": "PASS" if not enum.inconclusive else "INCONCLUSIVE",
               "order": enum.order, "enumeration": enum.to_json()}
    else:
        out = pi1_vs_quotient(src.C, src.P, base, bound).to_json()
    out.update(basepoint=base, abelianization=abelianization(pres).to_json(),
               presentation=small.to_json())
    if out["status"] == "INCONCLUSIVE":
        raise ScaleFailure(out)
    if out["status"] != "PASS":
        raise MathFailure(out)
    return out


def _homology(job):
    src = _source(job)
    d = job.get("d", 2)
    K = nerve_chain_complex(src.C, d, job.get("max_chains", DEFAULT_MAX_CHAINS))
    ok = K.boundary_squares_vanish()
    out = {"d": d, "chain_counts": K.sizes(), "boundary_squared_zero": ok,
           "homology": [h.to_json() for h in homology_all(K)]}
    if not ok:
        raise MathFailure(out)
    return out


def _representation(C: QuotCategory, coeffs: dict) -> CoefficientFunctor:
    """Generator matrices extended to every element along the Cayley BFS."""
    G = C.group
    mats = coeffs.get("generators", [])
    dim = coeffs.get("dim", len(mats[0]) if mats else 0)
    if C.n_objects != 1 or G is None:
        io._fail(("coefficients",), "representations need a group input without a poset")
    if len(mats) != len(G.generators):
        io._fail(("coefficients", "generators"), f"need {len(G.generators)} matrices, got {len(mats)}")
    for k, m in enumerate(mats):
        if len(m) != dim or any(len(r) != dim for r in m):
            io._fail(("coefficients", "generators", k), f"expected a {dim}x{dim} matrix")
    mod = coeffs.get("modulus")
    rho = {0: np.eye(dim, dtype=object)}
    queue = [0]
    for g in queue:
        for s, m in zip(G.generators, mats):
            x = int(G.mul[s, g])
            if x not in rho:
                prod = np.asarray(m, dtype=object) @ rho[g]
                rho[x] = prod % mod if mod else prod
                queue.append(x)
    return CoefficientFunctor(C, (dim,), [rho[int(C.rep[m])] for m in range(C.n_morphisms)], mod)


def _functor_homology(job):
    src = _source(job)
    d = job.get("d", 2)
    coeffs = job.get("coefficients", {"type": "constant"})
    kind = coeffs["type"]
    if kind == "constant":
        F = constant_functor(src.C, coeffs.get("modulus"))
    elif kind == "zero":
        F = zero_functor(src.C)
    else:
        F = _representation(src.C, coeffs)
    K = functor_chain_complex(src.C, F, d, job.get("max_chains", DEFAULT_MAX_CHAINS))
    return {"d": d, "coefficients": kind, "modulus": F.modulus, "chain_counts": K.sizes(),
            "homology": [h.to_json() for h in homology_all(K)]}


def _radicals(job):
    src = _source(job, need_category=False)
    P = _need_poset(src, "radicals")
    if src.p is None:
        io._fail((), "radicals needs 'p'")
    R = exhaustive_radical_enumeration(P.group, src.p, job.get("max_order", MAX_RADICAL_SCAN))
    out = {"p": src.p, "group_order": P.group.order, "count": len(R),
           "radicals": [{"order": U.order, "members": list(U.members)} for U in R]}
    if "family" in job or "poset" in job:
        out["matches_links"] = radicals_match_links(R, P)
        if not out["matches_links"]:
            raise MathFailure(out)
    return out


def _flagposet(job):
    if "family" not in job:
        io._fail((), "flagposet needs 'family', 'n' and 'p'")
    P = _source(job, need_category=False).P
    return {"group": io.group_to_descriptor(P.group), "poset": io.gposet_to_descriptor(P),
            "items": len(P.items)}


RUNNERS = {
    "validate": _validate, "build-cat": _build_cat, "borel-tits": _borel_tits,
    "pi1": _pi1, "homology": _homology, "functor-homology": _functor_homology,
    "radicals": _radicals, "flagposet": _flagposet,
}


def run(job: dict) -> tuple[int, dict]:
    """Run one job; returns ``(exit status, report)``."""
    name = job.get("pipeline") if isinstance(job, dict) else None
    head = {"format": 1, "pipeline": name}
    try:
        io.check_schema(job, JOB_SCHEMA)
        body = RUNNERS[name](job)
        return 0, {**head, "status": body.pop("status", "PASS"), **body}
    except MathFailure as e:
        return 1, {**head, "status": e.report.pop("status", "FAIL"), **e.report}
    except ScaleFailure as e:
        return 2, {**head, **e.report}
    except io.SchemaError as e:
        return 2, {**head, "status": "ERROR",
                   "error": {"type": "SchemaError", "message": str(e), "errors": e.errors}}
    except ValidationFailed as e:
        err = {"type": "ValidationFailed", "message": str(e)}
        if e.report is not None:
            err["report"] = e.report.to_json()
        return 2, {**head, "status": "ERROR", "error": err}
    except (LinkcatError, NotFunctorial, ValueError) as e:
        return 2, {**head, "status": "ERROR",
                   "error": {"type": type(e).__name__, "message": str(e)}}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linkcat", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="pipeline", required=True)
    for name in PIPELINES + ("run",):
        sp = sub.add_parser(name, help="pipeline named in the job" if name == "run" else None)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--spec", help="inline JSON job")
        src.add_argument("--in", dest="infile", help="JSON job file ('-' for stdin)")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--max-order", type=int, help=f"group order cap (default {MAX_GROUP_ORDER})")
        sp.add_argument("--max-chains", type=int,
                        help=f"chain count cap (default {DEFAULT_MAX_CHAINS})")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.spec is not None:
            job = json.loads(args.spec)
        elif args.infile == "-":
            job = json.load(sys.stdin)
        else:
            with open(args.infile) as fh:
                job = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        status, report = 2, {"format": 1, "status": "ERROR",
                             "error": {"type": type(e).__name__, "message": str(e)}}
    else:
        if isinstance(job, dict):
            if args.pipeline != "run":
                job["pipeline"] = args.pipeline
            if args.max_order is not None:
                job["max_order"] = args.max_order
            if args.max_chains is not None:
                job["max_chains"] = args.max_chains
        status, report = run(job)
    text = io.dumps(report)
    if status == 2 or args.out is None:
        (sys.stderr if status == 2 else sys.stdout).write(text)
    else:
        io.write_atomic(args.out, text)
    return status


if __name__ == "__main__":
    sys.exit(main())
