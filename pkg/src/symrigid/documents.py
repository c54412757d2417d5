"""JSON documents for groups, graphs, gain graphs, frameworks and reports.

Every document carries ``kind`` and ``version``.  Group actions are stored
as one permutation per generator, keyed by the generator's 1-based
position, so element numbering never leaks into files.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import SymRigidError
from .frameworks import (
    EuclideanFramework,
    PointHyperplaneFramework,
    SphericalFramework,
    Symmetry,
    validate_symmetric,
)
from .groups import SymmetryGroup, from_generators, make_schoenflies, schoenflies_generators
from .symgraph import GainGraph, SymmetricGraph, make_gain_graph, make_symmetric_graph

VERSION = 1
KINDS = ("group", "graph", "gaingraph", "framework", "report")


class DocumentError(SymRigidError, ValueError):
    """Schema violation; the message starts with a JSON path."""


def _fail(path: str, msg: str):
    raise DocumentError(f"{path}: {msg}")


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        _fail("$", "document must be a JSON object")
    return doc


def dumps(doc: dict, exact: bool = False) -> str:
    """Serialize; ``exact`` writes every float as a round-tripping decimal string."""
    return json.dumps(_stringify(doc) if exact else doc, indent=2, sort_keys=False)


def _stringify(obj):
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: v if k in ("kind", "space") else _stringify(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_stringify(v) for v in obj]
    return obj


def _num(x, path) -> float:
    if isinstance(x, bool):
        _fail(path, "expected a number")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(Fraction(x))
        except (ValueError, ZeroDivisionError):
            _fail(path, f"cannot read {x!r} as a number")
    _fail(path, "expected a number")


def _vec(x, path, length=None) -> list[float]:
    if not isinstance(x, list):
        _fail(path, "expected an array")
    if length is not None and len(x) != length:
        _fail(path, f"expected {length} entries, got {len(x)}")
    return [_num(v, f"{path}[{k}]") for k, v in enumerate(x)]


def _int(x, path) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        _fail(path, "expected an integer")
    return x


def _floats(a) -> list:
    return (np.asarray(a, dtype=float) + 0.0).tolist()


# ------------------------------------------------------------------ groups

def _catalog_form(G: SymmetryGroup):
    if G.name is None or G.dim not in (2, 3):
        return None
    label, n = G.name
    try:
        gens = schoenflies_generators(G.dim, label, n)
    except ValueError:
        return None
    if len(gens) != len(G.generators):
        return None
    for gid, M in zip(G.generators, gens):
        if np.abs(G.rep[gid] - M).max() > 1e-12:
            return None
    return {"label": label, "n": n, "dim": G.dim}


def group_to_json(G: SymmetryGroup) -> dict:
    form = _catalog_form(G)
    if form is not None:
        return form
    return {"dim": G.dim, "matrices": [_floats(G.rep[g]) for g in G.generators]}


def group_from_json(obj, path="$.group") -> SymmetryGroup:
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    try:
        if "label" in obj:
            dim = _int(obj.get("dim", 3), f"{path}.dim")
            n = _int(obj.get("n", 1), f"{path}.n")
            return make_schoenflies(dim, str(obj["label"]), n)
        if "matrices" in obj:
            mats = obj["matrices"]
            if not isinstance(mats, list) or not mats:
                _fail(f"{path}.matrices", "expected a nonempty array of matrices")
            arr = [np.array([_vec(row, f"{path}.matrices[{k}][{r}]") for r, row in enumerate(M)])
                   for k, M in enumerate(mats)]
            G = from_generators(arr)
            if "dim" in obj and _int(obj["dim"], f"{path}.dim") != G.dim:
                _fail(f"{path}.dim", "does not match the matrix size")
            return G
    except DocumentError:
        raise
    except (SymRigidError, ValueError) as exc:
        _fail(path, str(exc))
    _fail(path, "needs either label/n/dim or matrices")


def action_to_json(G: SymmetryGroup, action) -> dict:
    action = np.asarray(action)
    return {"generators": {str(k + 1): [int(v) for v in action[g]] for k, g in enumerate(G.generators)}}


def action_from_json(obj, G: SymmetryGroup, n: int, path="$.action") -> dict[int, list[int]]:
    if not isinstance(obj, dict) or not isinstance(obj.get("generators"), dict):
        _fail(path, "expected {generators: {position: permutation}}")
    out = {}
    for key, perm in obj["generators"].items():
        try:
            pos = int(key)
        except ValueError:
            _fail(f"{path}.generators", f"key {key!r} is not a generator position")
        if not 1 <= pos <= len(G.generators):
            _fail(f"{path}.generators.{key}", "no such generator")
        if not isinstance(perm, list) or sorted(perm) != list(range(n)):
            _fail(f"{path}.generators.{key}", f"expected a permutation of 0..{n - 1}")
        out[G.generators[pos - 1]] = [int(v) for v in perm]
    return out


def _symmetric_graph(n, edges, gobj, aobj) -> SymmetricGraph:
    G = group_from_json(gobj)
    perms = action_from_json(aobj, G, n)
    try:
        return make_symmetric_graph(n, edges, G, perms)
    except SymRigidError as exc:
        _fail("$.action", str(exc))


# ------------------------------------------------------------------ graphs

def _vertices(doc) -> int:
    v = doc.get("vertices")
    if isinstance(v, int) and not isinstance(v, bool):
        if v < 0:
            _fail("$.vertices", "must be nonnegative")
        return v
    if isinstance(v, list):
        if v != list(range(len(v))):
            _fail("$.vertices", "vertices must be listed as 0..n-1")
        return len(v)
    _fail("$.vertices", "expected a count or a list of vertex ids")


def _edges(doc, n) -> list[tuple[int, int]]:
    E = doc.get("edges", [])
    if not isinstance(E, list):
        _fail("$.edges", "expected an array")
    out = []
    for k, e in enumerate(E):
        if not (isinstance(e, list) and len(e) == 2):
            _fail(f"$.edges[{k}]", "expected a pair [i, j]")
        i, j = (_int(x, f"$.edges[{k}]") for x in e)
        if not (0 <= i < n and 0 <= j < n) or i == j:
            _fail(f"$.edges[{k}]", "endpoint out of range or loop")
        out.append((i, j))
    return out


def _graph_fields(n, edges, G=None, action=None) -> dict:
    doc = {"vertices": list(range(n)), "edges": [list(e) for e in edges]}
    if G is not None:
        doc["group"] = group_to_json(G)
        doc["action"] = action_to_json(G, action)
    return doc


# -------------------------------------------------------------- frameworks

def framework_to_json(fw) -> dict:
    doc: dict[str, Any] = {"kind": "framework", "version": VERSION, "space": fw.space, "d": fw.d}
    doc.update(_graph_fields(fw.n, fw.edges))
    if isinstance(fw, SphericalFramework):
        doc["X"] = sorted(fw.X)
    if isinstance(fw, PointHyperplaneFramework):
        doc["coords"] = {str(i): _floats(fw.p[i]) for i in fw.points}
        doc["lines"] = {str(j): {"a": _floats(fw.a[j]), "r": float(fw.r[j])} for j in sorted(fw.hyperplanes)}
    else:
        doc["coords"] = {str(i): _floats(fw.p[i]) for i in range(fw.n)}
    if fw.symmetry is not None:
        doc["group"] = group_to_json(fw.symmetry.group)
        doc["action"] = action_to_json(fw.symmetry.group, fw.symmetry.action)
    return doc


def framework_from_json(doc: dict):
    space = doc.get("space")
    if space not in ("euclidean", "spherical", "ph"):
        _fail("$.space", "expected euclidean, spherical or ph")
    d = _int(doc.get("d"), "$.d")
    n = _vertices(doc)
    edges = _edges(doc, n)
    coords = doc.get("coords", {})
    if not isinstance(coords, dict):
        _fail("$.coords", "expected an object keyed by vertex id")
    width = d + 1 if space == "spherical" else d
    lines = doc.get("lines", {}) if space == "ph" else {}
    if not isinstance(lines, dict):
        _fail("$.lines", "expected an object keyed by vertex id")
    p = np.zeros((n, width))
    a = np.zeros((n, d))
    r = np.zeros(n)
    seen = set()
    for key, x in coords.items():
        i = _key(key, n, "$.coords")
        p[i] = _vec(x, f"$.coords.{key}", width)
        seen.add(i)
    for key, obj in lines.items():
        j = _key(key, n, "$.lines")
        if j in seen:
            _fail(f"$.lines.{key}", "vertex is also a point")
        if not isinstance(obj, dict) or "a" not in obj:
            _fail(f"$.lines.{key}", "expected {a: [...], r: number}")
        aj = np.array(_vec(obj["a"], f"$.lines.{key}.a", d))
        nrm = np.linalg.norm(aj)
        if nrm == 0:
            _fail(f"$.lines.{key}.a", "normal must be nonzero")
        # already-unit normals are kept bit-for-bit so documents round-trip exactly
        scale = 1.0 if abs(nrm - 1.0) < 1e-12 else nrm
        a[j] = aj / scale
        r[j] = _num(obj.get("r", 0.0), f"$.lines.{key}.r") / scale
        seen.add(j)
    if seen != set(range(n)):
        _fail("$.coords", f"missing coordinates for vertices {sorted(set(range(n)) - seen)}")
    sym = None
    if "group" in doc:
        sg = _symmetric_graph(n, edges, doc["group"], doc.get("action"))
        sym = Symmetry(sg.group, sg.action)
    try:
        if space == "euclidean":
            fw = EuclideanFramework(n, edges, p, sym)
        elif space == "spherical":
            X = doc.get("X")
            fw = SphericalFramework(n, edges, p, None if X is None else [_int(x, "$.X") for x in X], sym)
        else:
            fw = PointHyperplaneFramework(n, edges, d, frozenset(int(k) for k in lines), p, a, r, sym)
    except (SymRigidError, ValueError) as exc:
        _fail("$.coords", str(exc))
    if sym is not None and not validate_symmetric(fw):
        _fail("$.coords", "coordinates are not symmetric under the declared action")
    return fw


def _key(key, n, path) -> int:
    try:
        i = int(key)
    except ValueError:
        _fail(path, f"key {key!r} is not a vertex id")
    if not 0 <= i < n:
        _fail(f"{path}.{key}", "vertex out of range")
    return i


# ----------------------------------------------------------- dispatching

def to_document(obj) -> dict:
    if isinstance(obj, SymmetryGroup):
        return {"kind": "group", "version": VERSION, "group": group_to_json(obj)}
    if isinstance(obj, SymmetricGraph):
        doc = {"kind": "graph", "version": VERSION}
        doc.update(_graph_fields(obj.n, obj.edges, obj.group, obj.action))
        return doc
    if isinstance(obj, GainGraph):
        return {"kind": "gaingraph", "version": VERSION, "vertices": obj.n,
                "edges": [[int(i), int(j), int(g)] for i, j, g in obj.edges],
                "group": group_to_json(obj.group)}
    if isinstance(obj, (EuclideanFramework, SphericalFramework, PointHyperplaneFramework)):
        return framework_to_json(obj)
    if isinstance(obj, dict) and obj.get("kind") == "report":
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_document(doc: dict):
    if not isinstance(doc, dict):
        _fail("$", "document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        _fail("$.kind", f"expected one of {', '.join(KINDS)}")
    if doc.get("version") != VERSION:
        _fail("$.version", f"unsupported version {doc.get('version')!r}")
    if kind == "group":
        return group_from_json(doc.get("group"))
    if kind == "graph":
        n = _vertices(doc)
        edges = _edges(doc, n)
        if "group" not in doc:
            return make_symmetric_graph(n, edges)
        return _symmetric_graph(n, edges, doc["group"], doc.get("action"))
    if kind == "gaingraph":
        n = _vertices(doc)
        G = group_from_json(doc.get("group"))
        E = doc.get("edges", [])
        if not isinstance(E, list):
            _fail("$.edges", "expected an array")
        edges = []
        for k, e in enumerate(E):
            if not (isinstance(e, list) and len(e) == 3):
                _fail(f"$.edges[{k}]", "expected [tail, head, gain]")
            i, j, g = (_int(x, f"$.edges[{k}]") for x in e)
            if not (0 <= i < n and 0 <= j < n and 0 <= g < G.order):
                _fail(f"$.edges[{k}]", "vertex or gain out of range")
            edges.append((i, j, g))
        try:
            return make_gain_graph(n, edges, G)
        except (SymRigidError, ValueError) as exc:
            _fail("$.edges", str(exc))
    if kind == "framework":
        return framework_from_json(doc)
    return doc


def read(path) -> Any:
    with open(path) as fh:
        return from_document(loads(fh.read()))


def write(obj, path, exact: bool = False) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(to_document(obj), exact) + "\n")
