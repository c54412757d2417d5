"""Property suites that cross-check numeric verdicts against each other and
against the combinatorial characterisations.

Each suite runs independent trials seeded by ``(seed, trial)`` and
aggregates results in trial order, so output does not depend on ``jobs``.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import corpus, numerics
from .errors import SpanDeficient
from .forced import combinatorial_verdict, forced_rigidity, orbit_matrix
from .frameworks import (
    EuclideanFramework,
    SphericalFramework,
    Symmetry,
    analyze,
    basic_spherical_matrix,
    cone_spherical_matrix,
    epsilon_transform,
    is_spanning,
    rigidity_matrix,
    sample_regular,
    trivial_motions,
)
from .groups import (
    involution_group,
    involution_pairings,
    make_schoenflies,
    sphere_pairings,
)
from .symgraph import (
    has_spanning_gain_tight,
    is_gain_tight,
    lift,
    quotient_gain_graph,
    symmetric_graph_from_action,
)
from .transfer import (
    double_cover,
    pairing_transform,
    partial_inversion,
    project_ph_to_sphere,
    project_sphere_to_ph,
)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{self.name}: {self.passed}/{self.passed + self.failed} {status} ({self.seconds:.2f}s)"

    def as_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "failed": self.failed,
                "ok": self.ok, "seconds": round(self.seconds, 3), "failures": self.failures[:20]}


def _run(name, trial, items, jobs: int = 1) -> SuiteResult:
    """Apply ``trial`` to every item; a trial returns ``None`` or a failure message."""
    t0 = time.perf_counter()
    items = list(items)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_guard(trial), items))
    else:
        outcomes = [_guard(trial)(x) for x in items]
    res = SuiteResult(name)
    for k, msg in enumerate(outcomes):
        if msg is None:
            res.passed += 1
        else:
            res.failed += 1
            res.failures.append(f"trial {k}: {msg}")
    res.seconds = time.perf_counter() - t0
    return res


def _guard(fn):
    def wrapped(x):
        try:
            return fn(x)
        except Exception as exc:  # a crash is a failed trial, not a crashed suite
            return f"{type(exc).__name__}: {exc}"
    return wrapped


def _rng(seed, k):
    return np.random.default_rng([int(seed), int(k)])


def _excess(fw, tol=None) -> int:
    r = analyze(fw, tol)
    return r.nullity - r.trivial_dim


def _forced_excess(fw, tol=None) -> int:
    f = forced_rigidity(fw, tol=tol)
    return f.forced_nullity - f.trivial_symmetric_dim


# ---------------------------------------------------------------- suites

SPHERE_GROUPS = {
    2: [("Cs", 1), ("Cn", 2), ("Cn", 3), ("Cnv", 2), ("Cnh", 2), ("Dn", 2), ("S2n", 2)],
}


def _sphere_group(rng, d):
    if d == 2:
        label, n = SPHERE_GROUPS[2][int(rng.integers(0, len(SPHERE_GROUPS[2])))]
        return make_schoenflies(3, label, n)
    k = int(rng.integers(1, d + 1))
    axes = sorted(int(a) for a in rng.choice(np.arange(1, d + 2), size=k, replace=False))
    return involution_group(d + 1, axes)


def suite_inversion(trials=100, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Partial inversion keeps the spherical rank, plain and orbit-closed."""
    def trial(k):
        rng = _rng(seed, k)
        d = 2 + k % 2
        if k % 4 < 2:
            fw = corpus.random_spherical(d, int(rng.integers(2, 9)), rng)
            I = [v for v in range(fw.n) if rng.random() < 0.5]
        else:
            G = _sphere_group(rng, d)
            n0 = max(1, min(8 // G.order, 3))
            fw = corpus.random_symmetric_spherical(G, int(rng.integers(1, n0 + 1)), rng)
            orbits = fw.symmetry.orbits()
            I = [v for o in orbits if rng.random() < 0.5 for v in o]
        r0 = numerics.rank(rigidity_matrix(fw), tol)
        r1 = numerics.rank(rigidity_matrix(partial_inversion(fw, I)), tol)
        return None if r0 == r1 else f"rank {r0} -> {r1} (d={d}, I={I})"
    return _run("inversion", trial, range(trials), jobs)


def suite_transfer(trials=100, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Point-hyperplane -> sphere -> point-hyperplane keeps nullity minus trivial."""
    def trial(k):
        rng = _rng(seed, k)
        d = 2 + k % 2
        fw = corpus.random_ph(d, int(rng.integers(1, 7)), int(rng.integers(0, 4)), rng)
        sph = project_ph_to_sphere(fw)
        back = project_sphere_to_ph(sph)
        vals = [_excess(x, tol) for x in (fw, sph, back)]
        if len(set(vals)) != 1:
            return f"excess {vals}"
        if is_spanning(fw, tol) and analyze(fw, tol).trivial_dim != comb(d + 1, 2):
            return "spanning framework with wrong trivial dimension"
        again = project_ph_to_sphere(back)
        if np.abs(again.p - sph.p).max() > 1e-9 and not _same_up_to_equator_sign(again, sph):
            return "round trip changed the spherical image"
        return None
    return _run("transfer", trial, range(trials), jobs)


def _same_up_to_equator_sign(a, b) -> bool:
    for i in range(a.n):
        if np.abs(a.p[i] - b.p[i]).max() < 1e-9:
            continue
        if i in a.X and np.abs(a.p[i] + b.p[i]).max() < 1e-9:
            continue
        return False
    return True


FREE_GROUPS = [("Cs", 1), ("Cn", 2), ("Cn", 3), ("Cn", 4)]


def suite_forced_transfer(trials=100, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Forced symmetric excess agrees between a framework and its spherical image."""
    def trial(k):
        rng = _rng(seed, k)
        d = 2 + k % 2
        label, n = FREE_GROUPS[(k // 2) % len(FREE_GROUPS)]
        G = make_schoenflies(d, label, n)
        fw = corpus.random_symmetric_ph(G, int(rng.integers(1, 3)), int(rng.integers(0, 2)), rng)
        sph = project_ph_to_sphere(fw)
        back = project_sphere_to_ph(sph)
        vals = [_forced_excess(x, tol) for x in (fw, sph, back)]
        return None if len(set(vals)) == 1 else f"{G.label()} d={d}: forced excess {vals}"
    return _run("forced-transfer", trial, range(trials), jobs)


ORBIT_SPHERE = [("Cs", 1), ("Cn", 2), ("Cn", 3), ("Cn", 4), ("Cnv", 2), ("Cnv", 3), ("Cnh", 2),
                ("S2n", 2), ("Dn", 2), ("Dn", 3), ("Dnd", 2), ("Td", 1)]
ORBIT_PLANE = [(2, "Cs", 1), (2, "Cn", 2), (2, "Cn", 3), (2, "Cn", 4), (2, "Cnv", 2), (2, "Cnv", 3),
               (3, "Cs", 1), (3, "Cn", 2), (3, "Cn", 3), (3, "Cnv", 2)]


def suite_orbit(trials=100, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Orbit-matrix nullity equals the symmetric-subspace nullity (sphere and PH)."""
    def trial(k):
        rng = _rng(seed, k)
        label, n = ORBIT_SPHERE[k % len(ORBIT_SPHERE)]
        G = make_schoenflies(3, label, n)
        sph = corpus.random_symmetric_spherical(G, int(rng.integers(1, 4)), rng)
        a, b = orbit_matrix(sph).nullity, forced_rigidity(sph, tol=tol).forced_nullity
        if a != b:
            return f"sphere {G.label()}: orbit {a} vs oracle {b}"
        dim, label, n = ORBIT_PLANE[k % len(ORBIT_PLANE)]
        G = make_schoenflies(dim, label, n)
        ph = corpus.random_symmetric_ph(G, int(rng.integers(1, 3)), int(rng.integers(0, 3)), rng)
        a, b = orbit_matrix(ph).nullity, forced_rigidity(ph, tol=tol).forced_nullity
        if a != b:
            return f"point-hyperplane {G.label()} in R^{dim}: orbit {a} vs oracle {b}"
        return None
    return _run("orbit", trial, range(trials), jobs)


def pairing_list():
    """The sphere pairings plus every involution pairing on the 3-sphere."""
    return sphere_pairings() + involution_pairings(4)


def suite_pairing(trials=20, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Sign-twist pairings keep full rank and orbit rank; twisted groups match the catalog."""
    pairs = pairing_list()
    items = [(pi, t) for pi in range(len(pairs)) for t in range(trials)]

    def trial(item):
        pi, t = item
        P = pairs[pi]
        rng = _rng(seed, pi * 1000 + t)
        n0 = int(rng.integers(1, 3 if P.left.order <= 8 else 2) + (1 if P.left.order <= 2 else 0))
        fw = corpus.random_symmetric_spherical(P.left, n0, rng)
        out, twisted = pairing_transform(fw, P.subgroup)
        if P.right is not None and not twisted.conjugate(P.conj).same_matrices(P.right):
            return f"{P.tag}: twisted group differs from the catalog"
        r = [numerics.rank(rigidity_matrix(x), tol) for x in (fw, out)]
        o = [orbit_matrix(x).rank(tol) for x in (fw, out)]
        if r[0] != r[1] or o[0] != o[1]:
            return f"{P.tag}: ranks {r}, orbit ranks {o}"
        back, _ = pairing_transform(out, P.subgroup)
        if np.abs(back.p - fw.p).max() > 1e-12:
            return f"{P.tag}: pairing twice is not the identity"
        return None
    return _run("pairing", trial, items, jobs)


def suite_combinatorial(trials=None, seed=0, tol=None, jobs=1, max_vertices: int = 4) -> SuiteResult:
    """Every connected Z2-gain graph up to switching: numeric vs gain-tight predictions.

    ``trials`` caps the number of graphs checked (all by default).
    """
    G = make_schoenflies(2, "Cn", 2)
    graphs = corpus.z2_gain_graphs(max_vertices, G)
    if trials is not None:
        graphs = graphs[:trials]

    def trial(item):
        k, gg = item
        sg = lift(gg)
        fw = sample_regular(sg, "euclidean", 2, seed=int(seed) * 100003 + k, tries=3, tol=tol)
        w1 = has_spanning_gain_tight(gg, 2, 3, 1)
        w2 = has_spanning_gain_tight(gg, 2, 3, 2)
        forced = forced_rigidity(fw, tol=tol).is_forced_rigid
        rigid = analyze(fw, tol).is_inf_rigid
        if forced != (w1 is not None) or rigid != (w1 is not None and w2 is not None):
            return f"edges {gg.edges}: forced {forced}, rigid {rigid}, witnesses {w1}, {w2}"
        return None
    return _run("combinatorial", trial, enumerate(graphs), jobs)


def suite_isostatic(trials=None, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Fixed-count isostatic classification on the curated catalog."""
    entries = corpus.isostatic_catalog()

    def trial(item):
        k, e = item
        fw = sample_regular(e.graph, "euclidean", 2, seed=int(seed) * 1009 + k, tol=tol)
        numeric = analyze(fw, tol).is_isostatic
        v = combinatorial_verdict(e.graph, "euclidean", 2)
        if v.predicted_isostatic != e.predicted_isostatic:
            return f"{e.name}: verdict {v.predicted_isostatic} vs catalog predicate {e.predicted_isostatic}"
        if numeric != e.predicted_isostatic:
            return f"{e.name}: numeric {numeric} vs predicted {e.predicted_isostatic}"
        return None
    return _run("isostatic", trial, enumerate(entries), jobs)


def _graph_of(fw):
    return symmetric_graph_from_action(fw.n, fw.edges, fw.symmetry.group, fw.symmetry.action)


def suite_point_line(trials=30, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Two-line mirror instances and half-turn instances with fixed lines."""
    mirror = corpus.mirror_two_line_instances(trials, seed=_rng(seed, 1))
    half = corpus.half_turn_fixed_line_instances(trials, seed=_rng(seed, 2))
    items = [("mirror", k, fw) for k, fw in enumerate(mirror)] + [("half-turn", k, fw) for k, fw in enumerate(half)]

    def trial(item):
        kind, k, fw0 = item
        sg = _graph_of(fw0)
        fw = sample_regular(sg, "ph", 2, hyperplanes=fw0.hyperplanes, seed=int(seed) * 7919 + k, tol=tol)
        v = combinatorial_verdict(sg, "ph", 2, hyperplanes=fw.hyperplanes)
        if not v.applicable:
            return f"{kind} {k}: no applicable prediction"
        if kind == "mirror":
            f = forced_rigidity(fw, tol=tol).is_forced_rigid
            r = analyze(fw, tol).is_inf_rigid
            if f != v.predicted_forced_rigid or r != v.predicted_inf_rigid:
                return f"mirror {k}: numeric ({f}, {r}) vs predicted ({v.predicted_forced_rigid}, {v.predicted_inf_rigid})"
        else:
            iso = analyze(fw, tol).is_isostatic
            if iso != v.predicted_isostatic:
                return f"half-turn {k}: numeric {iso} vs predicted {v.predicted_isostatic}"
        return None
    return _run("point-line", trial, items, jobs)


def suite_doublecover(trials=50, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Double covers keep the forced verdict and lose full rigidity."""
    rows = corpus.double_cover_rows(6)
    items = [(ri, t) for ri in range(len(rows)) for t in range(trials)]

    def trial(item):
        ri, t = item
        row = rows[ri]
        rng = _rng(seed, ri * 1000 + t)
        lo = -(-3 // row.group.order)
        for _ in range(50):
            fw = corpus.random_symmetric_spherical(row.group, int(rng.integers(lo, lo + 2)), rng)
            sg = _graph_of(fw)
            if is_spanning(fw, tol) and _connected(sg):
                break
        else:
            return f"{row.tag}: no spanning connected sample"
        cover, G2 = double_cover(fw)
        if not G2.conjugate(row.conj).same_matrices(row.cover):
            return f"{row.tag}: cover group differs from the catalog"
        f0, f1 = forced_rigidity(fw, tol=tol), forced_rigidity(cover, tol=tol)
        if f0.is_forced_rigid != f1.is_forced_rigid:
            return f"{row.tag}: forced {f0.is_forced_rigid} -> {f1.is_forced_rigid}"
        if analyze(cover, tol).is_inf_rigid:
            return f"{row.tag}: double cover reported rigid"
        return None
    return _run("doublecover", trial, items, jobs)


def _connected(sg) -> bool:
    return corpus._connected(sg.n, sg.edges)


def suite_epsilon(trials=100, seed=0, tol=None, jobs=1) -> SuiteResult:
    """Sign patterns on all graphs with at most 4 vertices, then basic vs cone form."""
    graphs = []
    for n in range(1, 5):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            graphs.append((n, [pairs[b] for b in range(len(pairs)) if mask >> b & 1]))
    items = [("signs", k, g) for k, g in enumerate(graphs)] + [("forms", k, None) for k in range(trials)]

    def trial(item):
        kind, k, g = item
        rng = _rng(seed, k if kind == "signs" else 100000 + k)
        if kind == "signs":
            n, edges = g
            p = rng.standard_normal((n, 3))
            p /= np.linalg.norm(p, axis=1, keepdims=True)
            fw = SphericalFramework(n, edges, p)
            M = basic_spherical_matrix(fw)
            r = numerics.rank(M, tol)
            for eps in itertools.product((1.0, -1.0), repeat=n):
                T = epsilon_transform(M, eps, fw.edges, 3)
                flipped = basic_spherical_matrix(SphericalFramework(n, edges, p * np.array(eps)[:, None]))
                if np.abs(T - flipped).max() > 1e-12:
                    return f"graph {edges}: signed matrix differs from the matrix of the flipped framework"
                if numerics.rank(T, tol) != r:
                    return f"graph {edges}: rank changed for signs {eps}"
            return None
        d = 2 + k % 2
        fw = corpus.random_spherical(d, int(rng.integers(2, 9)), rng)
        a = numerics.rank(basic_spherical_matrix(fw), tol)
        b = numerics.rank(cone_spherical_matrix(fw), tol)
        return None if a == b else f"basic rank {a} vs cone rank {b}"
    return _run("epsilon", trial, items, jobs)


# ------------------------------------------------------------- fixture

FIXTURE_EXPECTED = {
    "rank": 5, "nullity": 3, "trivial_dim": 3, "is_inf_rigid": True, "is_isostatic": True,
    "is_forced_rigid": True, "quotient_tight_231": True,
}


def fixture_values_exact() -> dict:
    """K4 minus an edge with half-turn symmetry, by rational elimination only."""
    fw = corpus.k4e_fixture()
    exact = numerics.TolerancePolicy(mode="exact")
    R = rigidity_matrix(fw)
    r = numerics.rank(R, exact)
    T = trivial_motions(fw)
    t = numerics.rank(T, exact)
    # symmetric velocities: u_{g v} = rep(g) u_v on each orbit representative
    G, act = fw.symmetry.group, fw.symmetry.action
    cols = []
    for rep_v in sorted({int(min(act[:, v])) for v in range(fw.n)}):
        for c in range(2):
            u = np.zeros(2 * fw.n)
            for g in range(G.order):
                w = int(act[g, rep_v])
                u[2 * w:2 * w + 2] = G.rep[g][:, c]
            cols.append(u)
    B = np.array(cols).T
    forced_nullity = B.shape[1] - numerics.rank(R @ B, exact)
    triv_sym = t + numerics.rank(B, exact) - numerics.rank(np.hstack([T, B]), exact)
    nullity = R.shape[1] - r
    iso = nullity == t and r == len(fw.edges)
    sg = symmetric_graph_from_action(fw.n, fw.edges, G, act)
    return {
        "rank": r, "nullity": nullity, "trivial_dim": t, "is_inf_rigid": nullity == t,
        "is_isostatic": iso, "is_forced_rigid": forced_nullity == triv_sym,
        "quotient_tight_231": is_gain_tight(quotient_gain_graph(sg), 2, 3, 1),
    }


def fixture_values_float() -> dict:
    fw = corpus.k4e_fixture()
    rep = analyze(fw)
    sg = symmetric_graph_from_action(fw.n, fw.edges, fw.symmetry.group, fw.symmetry.action)
    return {
        "rank": rep.rank, "nullity": rep.nullity, "trivial_dim": rep.trivial_dim,
        "is_inf_rigid": rep.is_inf_rigid, "is_isostatic": rep.is_isostatic,
        "is_forced_rigid": forced_rigidity(fw).is_forced_rigid,
        "quotient_tight_231": is_gain_tight(quotient_gain_graph(sg), 2, 3, 1),
    }


def suite_fixture(trials=None, seed=0, tol=None, jobs=1) -> SuiteResult:
    def trial(which):
        got = fixture_values_exact() if which == "exact" else fixture_values_float()
        bad = {k: v for k, v in got.items() if FIXTURE_EXPECTED[k] != v}
        return None if not bad else f"{which}: {bad}"
    return _run("fixture", trial, ["exact", "float"], jobs)


SUITES = {
    "inversion": suite_inversion,
    "transfer": suite_transfer,
    "forced-transfer": suite_forced_transfer,
    "orbit": suite_orbit,
    "pairing": suite_pairing,
    "combinatorial": suite_combinatorial,
    "isostatic": suite_isostatic,
    "point-line": suite_point_line,
    "doublecover": suite_doublecover,
    "epsilon": suite_epsilon,
    "fixture": suite_fixture,
}


def run_suite(name: str, trials=None, seed=0, tol=None, jobs=1) -> SuiteResult:
    fn = SUITES[name]
    if trials is None:
        return fn(seed=seed, tol=tol, jobs=jobs)
    return fn(trials=trials, seed=seed, tol=tol, jobs=jobs)
