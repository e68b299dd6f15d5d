"""JSON descriptors for groups and G-posets, with schema checking.

Schema problems are reported as ``SchemaError`` carrying a list of
``{"pointer": ..., "message": ...}`` entries, pointers in RFC 6901 form.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np
from jsonschema import Draft202012Validator

from .errors import LinkcatError
from .finitegroup import (DEFAULT_CAP, FinGroup, det_mod_p, group_from_matrices,
                          group_from_permutations, is_prime, subgroup_generate)
from .gposet import GPoset


class SchemaError(LinkcatError):
    def __init__(self, errors: list[dict]):
        self.errors = errors
        first = errors[0]
        super().__init__(f"{first['pointer'] or '/'}: {first['message']}")


_int = {"type": "integer"}
_nonneg = {"type": "integer", "minimum": 0}

GROUP_SCHEMA = {
    "type": "object",
    "required": ["type", "generators"],
    "properties": {
        "type": {"enum": ["perm", "matrix"]},
        "degree": {"type": "integer", "minimum": 0},
        "p": {"type": "integer", "minimum": 2},
        "generators": {
            "type": "array",
            "items": {"type": "array", "items": {"anyOf": [_int, {"type": "array", "items": _int}]}},
        },
    },
    "additionalProperties": False,
}

POSET_SCHEMA = {
    "type": "object",
    "required": ["items", "leq", "action"],
    "properties": {
        "items": {"type": "array"},
        "leq": {"type": "array", "items": {"type": "array", "items": _nonneg,
                                           "minItems": 2, "maxItems": 2}},
        "action": {"type": "array", "items": {"type": "array", "items": _nonneg}},
        "links": {"type": "object",
                  "patternProperties": {"^[0-9]+$": {"type": "array", "items": _nonneg}},
                  "additionalProperties": False},
    },
    "additionalProperties": False,
}


def pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _deepest(e):
    """For anyOf/oneOf failures, the branch error that got furthest into the data."""
    while e.context:
        e = max(e.context, key=lambda c: len(c.absolute_path))
    return e


def check_schema(instance, schema, prefix=()) -> None:
    found = (_deepest(e) for e in Draft202012Validator(schema).iter_errors(instance))
    errors = sorted(found,
                    key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        raise SchemaError([{"pointer": pointer(list(prefix) + list(e.absolute_path)),
                            "message": e.message} for e in errors])


def _fail(path, message):
    raise SchemaError([{"pointer": pointer(path), "message": message}])


# ------------------------------------------------------------------- groups


def _matrix_rows(gen, k, n, prefix):
    """Nested ``n x n`` or flat row-major ``n^2`` generator -> rows."""
    where = list(prefix) + ["generators", k]
    if all(isinstance(x, list) for x in gen):
        if len(gen) != n:
            _fail(where, f"expected {n} rows, got {len(gen)}")
        for r, row in enumerate(gen):
            if len(row) != n:
                _fail(where + [r], f"expected {n} entries, got {len(row)}")
        return [list(row) for row in gen]
    if any(isinstance(x, list) for x in gen):
        bad = next(c for c, x in enumerate(gen) if isinstance(x, list) != isinstance(gen[0], list))
        _fail(where + [bad], "mixes nested rows and flat entries")
    if len(gen) != n * n:
        _fail(where, f"flat matrix needs {n * n} entries, got {len(gen)}")
    return [gen[r * n:(r + 1) * n] for r in range(n)]


def group_from_descriptor(d: dict, cap: int = DEFAULT_CAP, prefix=()) -> FinGroup:
    check_schema(d, GROUP_SCHEMA, prefix)
    gens = d["generators"]
    if d["type"] == "perm":
        degree = d.get("degree", len(gens[0]) if gens else 0)
        for k, g in enumerate(gens):
            if any(isinstance(x, list) for x in g):
                _fail(list(prefix) + ["generators", k], "permutations are flat image arrays")
            if sorted(g) != list(range(degree)):
                _fail(list(prefix) + ["generators", k], f"not a permutation of 0..{degree - 1}")
        return group_from_permutations(gens, cap=cap, degree=degree)
    if "p" not in d:
        _fail(prefix, "matrix groups need 'p'")
    p = d["p"]
    if not is_prime(p):
        _fail(list(prefix) + ["p"], f"{p} is not prime")
    if "degree" in d:
        n = d["degree"]
    elif gens and isinstance(gens[0][0], list):
        n = len(gens[0])
    elif gens:
        n = int(round(len(gens[0]) ** 0.5))
    else:
        _fail(prefix, "matrix groups without generators need 'degree'")
    rows = [_matrix_rows(g, k, n, prefix) for k, g in enumerate(gens)]
    for k, m in enumerate(rows):
        if det_mod_p(m, p) == 0:
            _fail(list(prefix) + ["generators", k], f"matrix is singular mod {p}")
    return group_from_matrices(rows, p, cap=cap, n=n)


def group_to_descriptor(G: FinGroup) -> dict:
    if G.kind == "perm":
        return {"type": "perm", "degree": G.degree,
                "generators": [list(G.elements[g]) for g in G.generators]}
    if G.kind == "matrix":
        n = G.degree
        return {"type": "matrix", "degree": n, "p": G.p,
                "generators": [[list(G.elements[g][r * n:(r + 1) * n]) for r in range(n)]
                               for g in G.generators]}
    raise ValueError(f"no descriptor for groups of kind {G.kind!r}")


# ------------------------------------------------------------------ posets


def _item(x):
    return tuple(_item(y) for y in x) if isinstance(x, list) else x


def gposet_from_descriptor(G: FinGroup, d: dict, prefix=()) -> GPoset:
    check_schema(d, POSET_SCHEMA, prefix)
    m = len(d["items"])
    items = tuple(_item(x) for x in d["items"])
    leq = np.eye(m, dtype=bool)
    for k, (i, j) in enumerate(d["leq"]):
        if i >= m or j >= m:
            _fail(list(prefix) + ["leq", k], f"item index out of range 0..{m - 1}")
        leq[i, j] = True
    act = d["action"]
    if len(act) != G.order:
        _fail(list(prefix) + ["action"], f"need one row per group element ({G.order}), got {len(act)}")
    for g, row in enumerate(act):
        if len(row) != m:
            _fail(list(prefix) + ["action", g], f"expected {m} entries, got {len(row)}")
        bad = [k for k, x in enumerate(row) if x >= m]
        if bad:
            _fail(list(prefix) + ["action", g, bad[0]], f"item index out of range 0..{m - 1}")
    links = [G.trivial] * m
    for key, gens in d.get("links", {}).items():
        i = int(key)
        if i >= m:
            _fail(list(prefix) + ["links", key], f"item index out of range 0..{m - 1}")
        bad = [k for k, x in enumerate(gens) if x >= G.order]
        if bad:
            _fail(list(prefix) + ["links", key, bad[0]], f"element index out of range 0..{G.order - 1}")
        links[i] = subgroup_generate(G, gens)
    return GPoset(G, items, leq, np.asarray(act, dtype=np.int64), tuple(links))


def gposet_to_descriptor(P: GPoset) -> dict:
    def plain(x):
        if hasattr(x, "to_json"):
            return x.to_json()
        if isinstance(x, tuple):
            return [plain(y) for y in x]
        return int(x) if isinstance(x, np.integer) else x

    return {
        "items": [plain(x) for x in P.items],
        "leq": np.argwhere(P.leq).tolist(),
        "action": P.act.tolist(),
        "links": {str(i): list(L.members) for i, L in enumerate(P.links) if L.order > 1},
    }


def one_point_gposet(G: FinGroup) -> GPoset:
    """The single-item G-poset with trivial link; its category is G itself."""
    return GPoset(G, ("*",), np.ones((1, 1), dtype=bool),
                  np.zeros((G.order, 1), dtype=np.int64), (G.trivial,))


# -------------------------------------------------------------------- output


def dumps(obj) -> str:
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".linkcat-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
