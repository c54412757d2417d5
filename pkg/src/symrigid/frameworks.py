"""Bar-joint, spherical and point-hyperplane frameworks and their rigidity.

Column layout is vertex-major, coordinate-minor.  Point-hyperplane
frameworks put all points (``d`` columns each) before all hyperplanes
(``d + 1`` columns each: the normal velocity, then the offset velocity).
Edge rows always come first; normalization rows follow.

Point-hyperplane trivial motions
--------------------------------
A rigid motion ``x -> x + eps (S x + t)`` with ``S`` skew moves the
hyperplane ``<a, x> + r = 0`` to ``<a + eps S a, y> - eps <a, t> + r = 0``
to first order, so the hyperplane velocity is ``(S a, -<a, t>)``.
"""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Union

import numpy as np

from . import numerics
from .errors import (
    EquatorMismatch,
    NotSymmetric,
    SpanDeficient,
    UnrealizableFixedVertex,
)
from .groups import SymmetryGroup, subgroup_characters
from .symgraph import SymmetricGraph, _norm_edges, symmetric_graph_from_action

SYM_TOL = 1e-9
EQUATOR_TOL = 1e-9
UNIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Symmetry:
    """A group with an action on the vertex set (``action[g, v]``)."""

    group: SymmetryGroup
    action: np.ndarray

    @classmethod
    def of(cls, sg: SymmetricGraph) -> "Symmetry":
        return cls(sg.group, sg.action)

    @property
    def free(self) -> bool:
        n = self.action.shape[1]
        return not (self.action[1:] == np.arange(n)).any()

    def orbits(self) -> list[list[int]]:
        seen, out = set(), []
        for v in range(self.action.shape[1]):
            if v not in seen:
                orb = sorted(set(int(x) for x in self.action[:, v]))
                seen.update(orb)
                out.append(orb)
        return out

    def is_orbit_closed(self, subset) -> bool:
        s = {int(v) for v in subset}
        return all(int(w) in s for v in s for w in self.action[:, v])


@dataclass(frozen=True, eq=False)
class EuclideanFramework:
    n: int
    edges: tuple
    p: np.ndarray
    symmetry: Symmetry | None = None

    space = "euclidean"

    def __post_init__(self):
        object.__setattr__(self, "edges", _norm_edges(self.edges))
        p = np.asarray(self.p, dtype=float).reshape(self.n, -1)
        if not np.all(np.isfinite(p)):
            raise ValueError("coordinates must be finite")
        object.__setattr__(self, "p", p)

    @property
    def d(self) -> int:
        return self.p.shape[1]

    @property
    def widths(self) -> list[int]:
        return [self.d] * self.n

    @property
    def offsets(self) -> list[int]:
        return [self.d * i for i in range(self.n)]


@dataclass(frozen=True, eq=False)
class SphericalFramework:
    """Unit vectors in ``R^{d+1}``; ``X`` is the set of equator vertices."""

    n: int
    edges: tuple
    p: np.ndarray
    X: frozenset | None = None
    symmetry: Symmetry | None = None

    space = "spherical"

    def __post_init__(self):
        object.__setattr__(self, "edges", _norm_edges(self.edges))
        p = np.asarray(self.p, dtype=float).reshape(self.n, -1)
        if not np.all(np.isfinite(p)):
            raise ValueError("coordinates must be finite")
        if self.n and np.abs(np.linalg.norm(p, axis=1) - 1.0).max() > UNIT_TOL:
            raise ValueError("spherical coordinates must be unit vectors")
        object.__setattr__(self, "p", p)
        on_eq = frozenset(int(i) for i in np.flatnonzero(np.abs(p[:, -1]) < EQUATOR_TOL)) if self.n else frozenset()
        if self.X is None:
            object.__setattr__(self, "X", on_eq)
        else:
            X = frozenset(int(i) for i in self.X)
            if X != on_eq:
                raise EquatorMismatch(f"X={sorted(X)} but equator vertices are {sorted(on_eq)}")
            object.__setattr__(self, "X", X)

    @property
    def d(self) -> int:
        return self.p.shape[1] - 1

    @property
    def widths(self) -> list[int]:
        return [self.d + 1] * self.n

    @property
    def offsets(self) -> list[int]:
        return [(self.d + 1) * i for i in range(self.n)]


@dataclass(frozen=True, eq=False)
class PointHyperplaneFramework:
    """Points ``p_i`` for ``i`` not in ``hyperplanes``; ``(a_j, r_j)`` otherwise.

    Rows of ``p`` belonging to hyperplanes and rows of ``a``/``r`` belonging
    to points are ignored (kept at zero).
    """

    n: int
    edges: tuple
    d: int
    hyperplanes: frozenset
    p: np.ndarray
    a: np.ndarray
    r: np.ndarray
    symmetry: Symmetry | None = None

    space = "ph"

    def __post_init__(self):
        object.__setattr__(self, "edges", _norm_edges(self.edges))
        H = frozenset(int(j) for j in self.hyperplanes)
        if not all(0 <= j < self.n for j in H):
            raise ValueError("hyperplane index out of range")
        object.__setattr__(self, "hyperplanes", H)
        p = np.zeros((self.n, self.d))
        a = np.zeros((self.n, self.d))
        r = np.zeros(self.n)
        src_p = np.asarray(self.p, dtype=float).reshape(self.n, self.d)
        src_a = np.asarray(self.a, dtype=float).reshape(self.n, self.d)
        src_r = np.asarray(self.r, dtype=float).reshape(self.n)
        pts = self.points
        hyp = sorted(H)
        p[pts] = src_p[pts]
        a[hyp] = src_a[hyp]
        r[hyp] = src_r[hyp]
        for arr in (p, a, r):
            if not np.all(np.isfinite(arr)):
                raise ValueError("coordinates must be finite")
        if hyp and np.abs(np.linalg.norm(a[hyp], axis=1) - 1.0).max() > 1e-9:
            raise ValueError("hyperplane normals must be unit vectors")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "r", r)

    @property
    def points(self) -> list[int]:
        return [i for i in range(self.n) if i not in self.hyperplanes]

    @property
    def widths(self) -> list[int]:
        return [self.d + 1 if i in self.hyperplanes else self.d for i in range(self.n)]

    @property
    def offsets(self) -> list[int]:
        off = [0] * self.n
        c = 0
        for i in self.points:
            off[i] = c
            c += self.d
        for j in sorted(self.hyperplanes):
            off[j] = c
            c += self.d + 1
        return off

    def edge_kind(self, e) -> str:
        i, j = e
        return {0: "PP", 1: "PH", 2: "HH"}[(i in self.hyperplanes) + (j in self.hyperplanes)]


Framework = Union[EuclideanFramework, SphericalFramework, PointHyperplaneFramework]


def make_ph(n, edges, d, points: dict, lines: dict, symmetry=None) -> PointHyperplaneFramework:
    """Build a point-hyperplane framework, normalizing each ``(a, r)``."""
    p = np.zeros((n, d))
    a = np.zeros((n, d))
    r = np.zeros(n)
    for i, x in points.items():
        p[int(i)] = x
    for j, (aj, rj) in lines.items():
        aj = np.asarray(aj, dtype=float)
        nrm = np.linalg.norm(aj)
        if nrm == 0:
            raise ValueError("hyperplane normal must be nonzero")
        a[int(j)] = aj / nrm
        r[int(j)] = float(rj) / nrm
    if set(map(int, points)) | set(map(int, lines)) != set(range(n)) or set(map(int, points)) & set(map(int, lines)):
        raise ValueError("every vertex must be exactly one of point or hyperplane")
    return PointHyperplaneFramework(n, edges, d, frozenset(int(j) for j in lines), p, a, r, symmetry)


def with_symmetry(fw: Framework, group: SymmetryGroup, action) -> Framework:
    """Attach a symmetry after validating it."""
    sym = Symmetry(group, np.asarray(action, dtype=int))
    if not validate_symmetric(fw, group, sym.action):
        raise NotSymmetric("framework is not symmetric under the given group and action")
    return dataclasses.replace(fw, symmetry=sym)


def _resolve(fw, group, action) -> Symmetry:
    if group is None:
        if fw.symmetry is None:
            raise NotSymmetric("no symmetry attached")
        return fw.symmetry
    if action is None:
        raise ValueError("action required with an explicit group")
    return Symmetry(group, np.asarray(action, dtype=int))


# ---------------------------------------------------------------- matrices

def rigidity_matrix_euclidean(fw: EuclideanFramework) -> np.ndarray:
    d = fw.d
    M = np.zeros((len(fw.edges), d * fw.n))
    for k, (i, j) in enumerate(fw.edges):
        diff = fw.p[i] - fw.p[j]
        M[k, d * i:d * i + d] = diff
        M[k, d * j:d * j + d] = -diff
    return M


def rigidity_matrix_spherical(fw: SphericalFramework) -> np.ndarray:
    """Coefficients of ``<p_i, u_j> + <p_j, u_i> = 0`` and ``<p_i, u_i> = 0``."""
    w = fw.d + 1
    E = len(fw.edges)
    M = np.zeros((E + fw.n, w * fw.n))
    for k, (i, j) in enumerate(fw.edges):
        M[k, w * i:w * i + w] = fw.p[j]
        M[k, w * j:w * j + w] = fw.p[i]
    for i in range(fw.n):
        M[E + i, w * i:w * i + w] = fw.p[i]
    return M


def basic_spherical_matrix(fw: SphericalFramework) -> np.ndarray:
    """Edge rows carry the opposite endpoint, vertex rows the vertex itself."""
    return rigidity_matrix_spherical(fw)


def cone_spherical_matrix(fw: SphericalFramework) -> np.ndarray:
    """Difference form: edge rows ``p_i - p_j`` / ``p_j - p_i``, same vertex rows.

    Row-equivalent to the basic matrix (add the two vertex rows, subtract
    the basic edge row).
    """
    w = fw.d + 1
    E = len(fw.edges)
    M = np.zeros((E + fw.n, w * fw.n))
    for k, (i, j) in enumerate(fw.edges):
        diff = fw.p[i] - fw.p[j]
        M[k, w * i:w * i + w] = diff
        M[k, w * j:w * j + w] = -diff
    for i in range(fw.n):
        M[E + i, w * i:w * i + w] = fw.p[i]
    return M


def epsilon_transform(M: np.ndarray, eps, edges, width: int) -> np.ndarray:
    """Signed version of a basic spherical matrix.

    Edge row ``{i, j}`` is multiplied by ``eps_i * eps_j`` and the column
    block of vertex ``i`` by ``eps_i``.  Applied to the basic matrix of
    ``p`` this yields the basic matrix of ``eps * p``.
    """
    eps = np.asarray(eps, dtype=float)
    if not np.all(np.abs(eps) == 1):
        raise ValueError("signs must be +1 or -1")
    edges = list(edges)
    row = np.ones(M.shape[0])
    for k, (i, j) in enumerate(edges):
        row[k] = eps[i] * eps[j]
    col = np.repeat(eps, width)
    return (row[:, None] * np.asarray(M, dtype=float)) * col[None, :]


def rigidity_matrix_ph(fw: PointHyperplaneFramework) -> np.ndarray:
    d = fw.d
    off = fw.offsets
    H = fw.hyperplanes
    E = len(fw.edges)
    ncols = d * (fw.n - len(H)) + (d + 1) * len(H)
    M = np.zeros((E + len(H), ncols))
    for k, (i, j) in enumerate(fw.edges):
        hi, hj = i in H, j in H
        if not hi and not hj:
            diff = fw.p[i] - fw.p[j]
            M[k, off[i]:off[i] + d] = diff
            M[k, off[j]:off[j] + d] = -diff
        elif hi and hj:
            M[k, off[i]:off[i] + d] = fw.a[j]
            M[k, off[j]:off[j] + d] = fw.a[i]
        else:
            pt, hp = (j, i) if hi else (i, j)
            M[k, off[pt]:off[pt] + d] = fw.a[hp]
            M[k, off[hp]:off[hp] + d] = fw.p[pt]
            M[k, off[hp] + d] = 1.0
    for s, j in enumerate(sorted(H)):
        M[E + s, off[j]:off[j] + d] = fw.a[j]
    return M


def rigidity_matrix(fw: Framework) -> np.ndarray:
    if isinstance(fw, EuclideanFramework):
        return rigidity_matrix_euclidean(fw)
    if isinstance(fw, SphericalFramework):
        return rigidity_matrix_spherical(fw)
    if isinstance(fw, PointHyperplaneFramework):
        return rigidity_matrix_ph(fw)
    raise TypeError(f"not a framework: {type(fw).__name__}")


def normalization_rows(fw: Framework) -> int:
    if isinstance(fw, SphericalFramework):
        return fw.n
    if isinstance(fw, PointHyperplaneFramework):
        return len(fw.hyperplanes)
    return 0


# ---------------------------------------------------------- trivial motions

def _skew_basis(m: int) -> list[np.ndarray]:
    out = []
    for a, b in itertools.combinations(range(m), 2):
        S = np.zeros((m, m))
        S[a, b], S[b, a] = -1.0, 1.0
        out.append(S)
    return out


def expected_trivial_dim(fw: Framework) -> int:
    return comb(fw.d + 1, 2)


def trivial_motions(fw: Framework) -> np.ndarray:
    """Raw (non-orthonormal) trivial motion vectors as columns."""
    cols = []
    off = fw.offsets
    N = sum(fw.widths)
    if isinstance(fw, EuclideanFramework):
        d = fw.d
        for k in range(d):
            u = np.zeros(N)
            u[k::d] = 1.0
            cols.append(u)
        for S in _skew_basis(d):
            cols.append((fw.p @ S.T).ravel())
    elif isinstance(fw, SphericalFramework):
        for S in _skew_basis(fw.d + 1):
            cols.append((fw.p @ S.T).ravel())
    else:
        d = fw.d
        motions = [(S, np.zeros(d)) for S in _skew_basis(d)]
        motions += [(np.zeros((d, d)), np.eye(d)[k]) for k in range(d)]
        for S, t in motions:
            u = np.zeros(N)
            for i in fw.points:
                u[off[i]:off[i] + d] = S @ fw.p[i] + t
            for j in fw.hyperplanes:
                u[off[j]:off[j] + d] = S @ fw.a[j]
                u[off[j] + d] = -fw.a[j] @ t
            cols.append(u)
    if not cols:
        return np.zeros((N, 0))
    return np.array(cols).T


def complete_graph(fw: Framework) -> Framework:
    return dataclasses.replace(fw, edges=tuple(itertools.combinations(range(fw.n), 2)), symmetry=None)


def trivial_motion_basis(fw: Framework, strict: bool = False, tol=None) -> np.ndarray:
    """Orthonormal basis of the trivial motions.

    When the configuration does not span, the trivial motions have fewer
    than ``C(d+1, 2)`` dimensions; the kernel of the complete-graph matrix
    is returned instead (or :class:`SpanDeficient` is raised if ``strict``).
    """
    Q = numerics.column_basis(trivial_motions(fw), tol)
    if Q.shape[1] == expected_trivial_dim(fw):
        return Q
    K = numerics.kernel_basis(rigidity_matrix(complete_graph(fw)), tol)
    if strict:
        raise SpanDeficient(
            f"trivial motions span {Q.shape[1]} < {expected_trivial_dim(fw)} dimensions", K)
    return K


def is_spanning(fw: Framework, tol=None) -> bool:
    return numerics.rank(trivial_motions(fw), tol) == expected_trivial_dim(fw)


# ----------------------------------------------------------------- analysis

@dataclass
class RigidityReport:
    rank: int
    nullity: int
    trivial_dim: int
    is_inf_rigid: bool
    is_isostatic: bool
    span_deficient: bool = False
    redundant_edges: list | None = None
    degenerate_edges: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def redundant_edges(fw: Framework, tol=None) -> list:
    """Edges whose removal does not lower the rank."""
    M = rigidity_matrix(fw)
    r = numerics.rank(M, tol)
    out = []
    for k, e in enumerate(fw.edges):
        if numerics.rank(np.delete(M, k, axis=0), tol) == r:
            out.append(list(e))
    return out


def analyze(fw: Framework, tol=None, details: bool = False) -> RigidityReport:
    """Rank, nullity and rigidity verdicts.

    Isostatic means rigid with independent edge rows modulo the
    normalization rows, which is the same as every single-edge deletion
    dropping the rank.
    """
    M = rigidity_matrix(fw)
    r = numerics.rank(M, tol)
    nullity = M.shape[1] - r
    spanning = is_spanning(fw, tol)
    triv = trivial_motion_basis(fw, tol=tol).shape[1]
    rigid = nullity == triv
    E = len(fw.edges)
    norm_rank = numerics.rank(M[E:], tol)
    iso = rigid and r == E + norm_rank
    degenerate = [list(e) for k, e in enumerate(fw.edges) if not np.any(M[k])]
    return RigidityReport(
        rank=r,
        nullity=nullity,
        trivial_dim=triv,
        is_inf_rigid=rigid,
        is_isostatic=iso,
        span_deficient=not spanning,
        redundant_edges=redundant_edges(fw, tol) if details else None,
        degenerate_edges=degenerate,
    )


# ----------------------------------------------------------------- symmetry

def _ambient_dim(fw: Framework) -> int:
    return fw.d + 1 if isinstance(fw, SphericalFramework) else fw.d


def hyperplane_signs(fw: PointHyperplaneFramework, group=None, action=None) -> np.ndarray:
    """``s[g, j]`` with ``s * (rep a_j, r_j) == (a_gj, r_gj)``; 1 for points.

    Raises :class:`NotSymmetric` when neither sign works.
    """
    sym = _resolve(fw, group, action)
    G, act = sym.group, sym.action
    s = np.ones((G.order, fw.n))
    for g in range(G.order):
        R = G.rep[g]
        for j in fw.hyperplanes:
            t = act[g, j]
            img = np.append(R @ fw.a[j], fw.r[j])
            tgt = np.append(fw.a[t], fw.r[t])
            if np.abs(img - tgt).max() < SYM_TOL:
                continue
            if np.abs(img + tgt).max() < SYM_TOL:
                s[g, j] = -1.0
                continue
            raise NotSymmetric(f"hyperplane {j} is not mapped to hyperplane {t} by element {g}")
    return s


def validate_symmetric(fw: Framework, group=None, action=None) -> bool:
    """True iff coordinates satisfy the orbit conditions within 1e-9."""
    try:
        sym = _resolve(fw, group, action)
    except NotSymmetric:
        return False
    G, act = sym.group, np.asarray(sym.action)
    if G.dim != _ambient_dim(fw) or act.shape != (G.order, fw.n):
        return False
    try:
        symmetric_graph_from_action(fw.n, fw.edges, G, act)
    except Exception:
        return False
    if isinstance(fw, PointHyperplaneFramework):
        if any(act[g, i] in fw.hyperplanes for g in range(G.order) for i in fw.points):
            return False
        pts = fw.points
        for g in range(G.order):
            img = fw.p[pts] @ G.rep[g].T
            if np.abs(img - fw.p[act[g, pts]]).max(initial=0.0) >= SYM_TOL:
                return False
        try:
            hyperplane_signs(fw, G, act)
        except NotSymmetric:
            return False
        return True
    for g in range(G.order):
        img = fw.p @ G.rep[g].T
        if np.abs(img - fw.p[act[g]]).max(initial=0.0) >= SYM_TOL:
            return False
    return True


def normalize_signs(fw: PointHyperplaneFramework) -> PointHyperplaneFramework:
    """Flip ``(a, r)`` within each hyperplane orbit so images carry sign +1.

    Hyperplanes whose stabilizer reverses the normal keep their sign.
    """
    if fw.symmetry is None:
        return fw
    G, act = fw.symmetry.group, fw.symmetry.action
    a, r = fw.a.copy(), fw.r.copy()
    done = set()
    for j0 in sorted(fw.hyperplanes):
        if j0 in done:
            continue
        for g in range(G.order):
            t = int(act[g, j0])
            if t in done or t == j0:
                continue
            want = G.rep[g] @ fw.a[j0]
            if np.abs(a[t] + want).max() < SYM_TOL:
                a[t], r[t] = -a[t], -r[t]
            done.add(t)
        done.add(j0)
    return dataclasses.replace(fw, a=a, r=r)


def symmetry_blocks(fw: Framework, group=None, action=None) -> list[list[np.ndarray]]:
    """Per element, per vertex, the map from ``u_i`` to ``u_{g i}``."""
    sym = _resolve(fw, group, action)
    G = sym.group
    if isinstance(fw, PointHyperplaneFramework):
        s = hyperplane_signs(fw, G, sym.action)
        out = []
        for g in range(G.order):
            aug = np.eye(fw.d + 1)
            aug[:fw.d, :fw.d] = G.rep[g]
            out.append([s[g, i] * aug if i in fw.hyperplanes else G.rep[g] for i in range(fw.n)])
        return out
    return [[G.rep[g]] * fw.n for g in range(G.order)]


def symmetric_basis(fw: Framework, group=None, action=None, tol=None) -> np.ndarray:
    """Orthonormal basis of the symmetric velocity space (no validation)."""
    sym = _resolve(fw, group, action)
    P = numerics.symmetrize_projector(sym.action, symmetry_blocks(fw, sym.group, sym.action), fw.offsets)
    return numerics.projector_image(P, tol)


# ----------------------------------------------------------------- sampling

def _fixed_subspace(G: SymmetryGroup, stab, extra_rows=None, chi=None) -> np.ndarray:
    rows = []
    for h in stab:
        c = 1.0 if chi is None else chi[h]
        rows.append(G.rep[h] - c * np.eye(G.dim))
    if extra_rows is not None:
        rows.append(np.atleast_2d(extra_rows))
    return numerics.kernel_basis(np.vstack(rows))


def _orbit_elements(act, r):
    """For each vertex in the orbit of ``r``, the smallest element mapping ``r`` to it."""
    first = {}
    for g in range(act.shape[0]):
        first.setdefault(int(act[g, r]), g)
    return first


def sample_symmetric(sg: SymmetricGraph, space: str, d: int, X=(), seed=0,
                     hyperplanes=None) -> Framework:
    """Random symmetric realization of ``sg``.

    Orbit representatives are drawn from a Gaussian restricted to the fixed
    subspace of their stabilizer and the orbit is completed by the group.
    For ``space="spherical"`` the group acts on ``R^{d+1}`` and vertices of
    ``X`` are placed on the equator.  For ``space="ph"`` the vertices in
    ``hyperplanes`` (or ``X``) become hyperplanes.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    G, act = sg.group, sg.action
    sym = Symmetry(G, act)
    X = frozenset(int(v) for v in X)
    if space == "ph" and hyperplanes is None:
        hyperplanes = X
    hyperplanes = frozenset(int(v) for v in (hyperplanes or ()))
    marked = X if space == "spherical" else hyperplanes
    if not sym.is_orbit_closed(marked):
        raise ValueError("marked vertex set must be a union of orbits")
    amb = d + 1 if space == "spherical" else d
    if G.dim != amb:
        raise ValueError(f"group acts on R^{G.dim}, framework needs R^{amb}")
    if space == "spherical" and X:
        e = np.zeros(amb)
        e[-1] = 1.0
        if np.abs(G.rep @ e - e).max() > SYM_TOL:
            raise ValueError("equator vertices need a group fixing the last axis")

    coords = np.zeros((sg.n, amb))
    normals = np.zeros((sg.n, amb))
    offs = np.zeros(sg.n)
    for orb in sym.orbits():
        r = orb[0]
        stab = [g for g in range(G.order) if act[g, r] == r]
        first = _orbit_elements(act, r)
        if space == "ph" and r in hyperplanes:
            best = None
            for chi in subgroup_characters(G, stab):
                W = _fixed_subspace(G, stab, chi=chi)
                if best is None or W.shape[1] > best[1].shape[1]:
                    best = (chi, W)
            chi, W = best
            if W.shape[1] == 0:
                raise UnrealizableFixedVertex(f"no normal compatible with the stabilizer of {r}")
            a = W @ rng.standard_normal(W.shape[1])
            a /= np.linalg.norm(a)
            off = rng.standard_normal() if all(v == 1 for v in chi.values()) else 0.0
            for v, g in first.items():
                normals[v] = G.rep[g] @ a
                offs[v] = off
            continue
        if space == "spherical":
            extra = None
            if r in X:
                extra = np.eye(amb)[-1]
            W = _fixed_subspace(G, stab, extra)
            if W.shape[1] == 0:
                raise UnrealizableFixedVertex(f"vertex {r} has no admissible position on the sphere")
            for _ in range(100):
                x = W @ rng.standard_normal(W.shape[1])
                x /= np.linalg.norm(x)
                if r in X or abs(x[-1]) > 1e-3:
                    break
            else:
                raise UnrealizableFixedVertex(f"vertex {r} is forced onto the equator")
            if r in X:
                x[-1] = 0.0
                x /= np.linalg.norm(x)
        else:
            W = _fixed_subspace(G, stab)
            x = W @ rng.standard_normal(W.shape[1]) if W.shape[1] else np.zeros(amb)
        for v, g in first.items():
            coords[v] = G.rep[g] @ x
    if space == "euclidean":
        fw = EuclideanFramework(sg.n, sg.edges, coords, sym)
    elif space == "spherical":
        coords /= np.linalg.norm(coords, axis=1, keepdims=True)
        fw = SphericalFramework(sg.n, sg.edges, coords, X, sym)
    elif space == "ph":
        fw = PointHyperplaneFramework(sg.n, sg.edges, d, hyperplanes, coords, normals, offs, sym)
    else:
        raise ValueError(f"unknown space {space!r}")
    if not validate_symmetric(fw):
        raise NotSymmetric("sampled framework failed validation")
    return fw


def sample_regular(sg: SymmetricGraph, space: str, d: int, X=(), seed=0, tries: int = 3,
                   hyperplanes=None, tol=None) -> Framework:
    """Keep the best of ``tries`` samples, ranked by (full rank, symmetric rank)."""
    best, best_key = None, None
    for t in range(tries):
        fw = sample_symmetric(sg, space, d, X, np.random.default_rng([int(seed), t]), hyperplanes)
        M = rigidity_matrix(fw)
        key = (numerics.rank(M, tol), numerics.rank(M @ symmetric_basis(fw), tol))
        if best_key is None or key > best_key:
            best, best_key = fw, key
    return best
