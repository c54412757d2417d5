"""Command line: analyze, transfer, gain, sample, verify.

Exit codes: 0 ok, 2 bad input, 3 check or verify failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import corpus, documents, numerics, verify
from .documents import DocumentError
from .errors import SymRigidError
from .forced import combinatorial_verdict, forced_rigidity, orbit_matrix
from .frameworks import (
    EuclideanFramework,
    PointHyperplaneFramework,
    SphericalFramework,
    analyze,
    sample_regular,
    sample_symmetric,
)
from .groups import index2_subgroups
from .symgraph import (
    GainGraph,
    SymmetricGraph,
    has_spanning_gain_tight,
    is_gain_sparse,
    quotient_gain_graph,
    symmetric_graph_from_action,
)
from .transfer import (
    axis_rotation,
    double_cover,
    pair_with_fixed,
    pairing_transform,
    partial_inversion,
    project_ph_to_sphere,
    project_sphere_to_ph,
    rotate,
    rotate_off_equator,
)

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 2, 3


class CheckFailed(Exception):
    pass


def _policy(args):
    tol = getattr(args, "tol", None)
    if getattr(args, "exact", False):
        return numerics.TolerancePolicy(relative_tol=tol or numerics.default_policy().relative_tol, mode="exact")
    return None if tol is None else numerics.TolerancePolicy(relative_tol=tol)


def _read(path):
    if path == "-":
        return documents.from_document(documents.loads(sys.stdin.read()))
    with open(path) as fh:
        return documents.from_document(documents.loads(fh.read()))


def _emit(doc: dict, args) -> None:
    text = documents.dumps(doc, getattr(args, "exact_out", False))
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",")]


def _is_framework(obj) -> bool:
    return isinstance(obj, (EuclideanFramework, SphericalFramework, PointHyperplaneFramework))


def _symmetric_graph(fw):
    s = fw.symmetry
    return symmetric_graph_from_action(fw.n, fw.edges, s.group, s.action)


# ----------------------------------------------------------------- analyze

def analysis_report(fw, tol=None, details: bool = False) -> dict:
    rep = analyze(fw, tol, details=details)
    out = {"kind": "report", "version": documents.VERSION, "space": fw.space, "d": fw.d,
           "vertices": fw.n, "edges": len(fw.edges), "rigidity": rep.as_dict()}
    if fw.symmetry is not None:
        out["forced"] = forced_rigidity(fw, tol=tol).as_dict()
        hyper = sorted(fw.hyperplanes) if isinstance(fw, PointHyperplaneFramework) else ()
        X = sorted(fw.X) if isinstance(fw, SphericalFramework) else ()
        out["combinatorial"] = combinatorial_verdict(_symmetric_graph(fw), fw.space, fw.d,
                                                     hyperplanes=hyper, X=X).as_dict()
    return out


def cmd_analyze(args) -> int:
    fw = _read(args.input)
    if not _is_framework(fw):
        raise DocumentError("$.kind: analyze needs a framework document")
    _emit(analysis_report(fw, _policy(args), args.details), args)
    return EXIT_OK


# ---------------------------------------------------------------- transfer

def _excess(fw, tol):
    r = analyze(fw, tol)
    return r.nullity - r.trivial_dim


def _forced_excess(fw, tol):
    f = forced_rigidity(fw, tol=tol)
    return f.forced_nullity - f.trivial_symmetric_dim


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise CheckFailed(msg)


def _pick_subgroup(G, choice: str):
    if choice == "trivial":
        if G.order != 2:
            raise SymRigidError("the trivial subgroup has index 2 only in a group of order 2")
        return G.subgroup({0})
    subs = index2_subgroups(G)
    if not subs:
        raise SymRigidError("no index-2 subgroup")
    if choice == "auto":
        return subs[0]
    if choice.startswith("index:"):
        k = int(choice.split(":", 1)[1])
        if not 0 <= k < len(subs):
            raise SymRigidError(f"index-2 subgroup {k} out of range (0..{len(subs) - 1})")
        return subs[k]
    return G.subgroup(set(_int_list(choice)) | {0})


def _rotation(args, dim):
    if args.matrix:
        return np.array(json.loads(args.matrix), dtype=float)
    if args.axis:
        if dim != 3:
            raise SymRigidError("--axis rotations need 3 coordinates; pass --matrix instead")
        return axis_rotation(_floats(args.axis), args.angle)
    raise SymRigidError("rotate needs --matrix or --axis/--angle")


def run_transfer(fw, args):
    """Apply ``args.op`` and, with ``args.check``, assert its preservation contract."""
    tol = _policy(args)
    op = args.op
    if op == "invert":
        _need(fw, SphericalFramework, op)
        out = partial_inversion(fw, _int_list(args.subset))
        if args.check:
            _require(analyze(fw, tol).rank == analyze(out, tol).rank, "inversion changed the rank")
    elif op == "to-sphere":
        _need(fw, (PointHyperplaneFramework, EuclideanFramework), op)
        out = project_ph_to_sphere(fw)
        if args.check:
            _check_excess(fw, out, tol)
    elif op == "to-ph":
        _need(fw, SphericalFramework, op)
        out = project_sphere_to_ph(fw)
        if args.check:
            _check_excess(fw, out, tol)
    elif op == "pair":
        _need(fw, SphericalFramework, op)
        if fw.symmetry is None:
            raise SymRigidError("pair needs a framework with a group attached")
        h = _pick_subgroup(fw.symmetry.group, args.subgroup)
        out, _ = pairing_transform(fw, h)
        if args.check:
            _require(analyze(fw, tol).rank == analyze(out, tol).rank, "pairing changed the rank")
            _require(orbit_matrix(fw).rank(tol) == orbit_matrix(out).rank(tol), "pairing changed the orbit rank")
    elif op == "double-cover":
        _need(fw, SphericalFramework, op)
        if fw.symmetry is None:
            raise SymRigidError("double-cover needs a framework with a group attached")
        out, _ = double_cover(fw)
        if args.check:
            a, b = forced_rigidity(fw, tol=tol), forced_rigidity(out, tol=tol)
            _require(a.is_forced_rigid == b.is_forced_rigid, "double cover changed the forced verdict")
            _require(not analyze(out, tol).is_inf_rigid, "double cover is infinitesimally rigid")
    elif op == "rotate":
        if args.off_equator:
            _need(fw, SphericalFramework, op)
            out = rotate_off_equator(fw, _floats(args.off_equator), seed=args.seed)
        else:
            dim = fw.d + 1 if isinstance(fw, SphericalFramework) else fw.d
            out = rotate(fw, _rotation(args, dim))
        if args.check:
            _require(analyze(fw, tol).rank == analyze(out, tol).rank, "rotation changed the rank")
    elif op == "pair-fixed":
        _need(fw, (EuclideanFramework, PointHyperplaneFramework), op)
        out = pair_with_fixed(fw)
        if args.check:
            _check_excess(fw, out, tol)
            _require(analyze(fw, tol).is_isostatic == analyze(out, tol).is_isostatic,
                     "isostatic verdict changed")
    else:  # argparse restricts choices
        raise SymRigidError(f"unknown op {op}")
    return out


def _need(fw, types, op):
    if not isinstance(fw, types):
        raise SymRigidError(f"--op {op} does not accept a {fw.space} framework")


def _check_excess(a, b, tol):
    _require(_excess(a, tol) == _excess(b, tol), "nullity minus trivial dimension changed")
    if a.symmetry is not None and b.symmetry is not None:
        _require(_forced_excess(a, tol) == _forced_excess(b, tol), "forced symmetric excess changed")


def cmd_transfer(args) -> int:
    fw = _read(args.input)
    if not _is_framework(fw):
        raise DocumentError("$.kind: transfer needs a framework document")
    try:
        out = run_transfer(fw, args)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    _emit(documents.to_document(out), args)
    return EXIT_OK


# -------------------------------------------------------------------- gain

def gain_report(gg: GainGraph, k: int, l: int, m: int, find_tight: bool = False) -> dict:
    verdict = is_gain_sparse(gg, k, l, m)
    tight = verdict.sparse and len(gg.edges) == k * gg.n - m
    out = {"k": k, "l": l, "m": m, "sparse": verdict.sparse, "tight": tight,
           "violation": None if verdict.violation is None else list(verdict.violation)}
    if find_tight:
        w = has_spanning_gain_tight(gg, k, l, m)
        out["witness"] = None if w is None else list(w)
    return {"kind": "report", "version": documents.VERSION, "gain": out}


def cmd_gain(args) -> int:
    obj = _read(args.input)
    if isinstance(obj, SymmetricGraph):
        obj = quotient_gain_graph(obj)
    if not isinstance(obj, GainGraph):
        raise DocumentError("$.kind: gain needs a gaingraph or graph document")
    _emit(gain_report(obj, args.k, args.l, args.m, args.find_tight), args)
    return EXIT_OK


# ------------------------------------------------------------------ sample

def cmd_sample(args) -> int:
    if args.input:
        sg = _read(args.input)
        if not isinstance(sg, SymmetricGraph):
            raise DocumentError("$.kind: sample needs a graph document")
        kw = {"X": _int_list(args.X), "seed": args.seed, "hyperplanes": _int_list(args.hyperplanes)}
        sampler = sample_regular if args.regular else sample_symmetric
        fw = sampler(sg, args.space, args.d, **kw)
    else:
        if args.space == "spherical":
            fw = corpus.random_spherical(args.d, args.n, args.seed, args.prob)
        elif args.space == "ph":
            fw = corpus.random_ph(args.d, args.n, args.lines, args.seed, args.prob)
        else:
            ph = corpus.random_ph(args.d, args.n, 0, args.seed, args.prob)
            fw = EuclideanFramework(ph.n, ph.edges, ph.p)
    _emit(documents.to_document(fw), args)
    return EXIT_OK


# ------------------------------------------------------------------ verify

def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    tol = None if args.tol is None else numerics.TolerancePolicy(relative_tol=args.tol)
    results = [verify.run_suite(n, args.trials, args.seed, tol, args.jobs) for n in names]
    for r in results:
        print(r.line())
        for f in r.failures[:args.show]:
            print(f"  {f}")
    if args.output:
        with open(args.output, "w") as fh:
            json.dump({"kind": "report", "version": documents.VERSION, "seed": args.seed,
                       "suites": [r.as_dict() for r in results]}, fh, indent=2)
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symrigid", description="Symmetric rigidity analysis and transfers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--tol", type=float, default=None, help="relative rank tolerance")
        if output:
            p.add_argument("-o", "--output", help="write the document here instead of stdout")
            p.add_argument("--exact-out", action="store_true", help="write numbers as decimal strings")

    p = sub.add_parser("analyze", help="rigidity report for a framework document")
    p.add_argument("input", help="framework document, or - for stdin")
    p.add_argument("--exact", action="store_true", help="rational rank decisions")
    p.add_argument("--details", action="store_true", help="list redundant edges")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("transfer", help="apply a geometric transfer")
    p.add_argument("input")
    p.add_argument("--op", required=True,
                   choices=["invert", "to-sphere", "to-ph", "pair", "double-cover", "rotate", "pair-fixed"])
    p.add_argument("--subset", default="", help="invert: comma-separated vertices")
    p.add_argument("--subgroup", default="auto",
                   help="pair: trivial, auto, index:K, or comma-separated element ids")
    p.add_argument("--axis", help="rotate: axis x,y,z")
    p.add_argument("--angle", type=float, default=0.0, help="rotate: angle in radians")
    p.add_argument("--matrix", help="rotate: orthogonal matrix as JSON")
    p.add_argument("--off-equator", help="rotate: axis x,y,z; pick an angle clearing the equator")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", action="store_true", help="assert the preservation contract (exit 3 on failure)")
    p.add_argument("--exact", action="store_true")
    common(p)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("gain", help="(k,l,m)-gain-sparsity of a gain graph")
    p.add_argument("input", help="gaingraph document (a graph document is quotiented)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--find-tight", action="store_true", help="search for a spanning tight subset")
    common(p)
    p.set_defaults(func=cmd_gain)

    p = sub.add_parser("sample", help="sample a framework")
    p.add_argument("input", nargs="?", help="graph document; omit for a random framework")
    p.add_argument("--space", choices=["euclidean", "spherical", "ph"], default="euclidean")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--X", default="", help="equator vertices (spherical)")
    p.add_argument("--hyperplanes", default="", help="hyperplane vertices (ph)")
    p.add_argument("--regular", action="store_true", help="keep the best of several samples")
    p.add_argument("--n", type=int, default=5, help="random: number of points")
    p.add_argument("--lines", type=int, default=0, help="random ph: number of hyperplanes")
    p.add_argument("--prob", type=float, default=0.6, help="random: edge probability")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suite", default="all", choices=list(verify.SUITES) + ["all"])
    p.add_argument("--trials", type=int, default=None, help="trials per suite (suite default if omitted)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    p.add_argument("--show", type=int, default=5, help="failures to print per suite")
    p.add_argument("-o", "--output", help="write a JSON summary here")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SymRigidError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
