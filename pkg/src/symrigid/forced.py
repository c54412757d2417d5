"""Forced symmetric rigidity: symmetric subspaces, orbit matrices, predictions.

The symmetric-subspace restriction ``R @ B`` is the reference computation
and works for any action.  Orbit matrices are an independent construction
for free actions, built on the quotient gain graph.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import numerics
from .errors import ActionNotFree, NotSymmetric
from .frameworks import (
    EuclideanFramework,
    Framework,
    PointHyperplaneFramework,
    SphericalFramework,
    Symmetry,
    _resolve,
    normalize_signs,
    rigidity_matrix,
    symmetric_basis,
    trivial_motion_basis,
    validate_symmetric,
)
from .groups import SymmetryGroup
from .symgraph import (
    SymmetricGraph,
    fixed_counts,
    has_spanning_gain_tight,
    is_kl_tight,
    quotient,
    symmetric_graph_from_action,
)


def symmetric_velocity_basis(fw: Framework, group=None, action=None, tol=None) -> np.ndarray:
    """Orthonormal basis of velocities with ``rep(g) u_i = u_{g i}``."""
    sym = _resolve(fw, group, action)
    if not validate_symmetric(fw, sym.group, sym.action):
        raise NotSymmetric("framework is not symmetric under the given action")
    return symmetric_basis(fw, sym.group, sym.action, tol)


@dataclass
class ForcedReport:
    symmetric_dim: int
    forced_nullity: int
    trivial_symmetric_dim: int
    is_forced_rigid: bool

    def as_dict(self) -> dict:
        return asdict(self)


def forced_rigidity(fw: Framework, group=None, action=None, tol=None) -> ForcedReport:
    B = symmetric_velocity_basis(fw, group, action, tol)
    R = rigidity_matrix(fw)
    nullity = B.shape[1] - numerics.rank(R @ B, tol)
    triv = numerics.intersect(trivial_motion_basis(fw, tol=tol), B, tol).shape[1]
    return ForcedReport(B.shape[1], nullity, triv, nullity == triv)


# ------------------------------------------------------------ orbit matrices

@dataclass
class OrbitMatrix:
    matrix: np.ndarray
    row_labels: list
    col_labels: list
    representatives: tuple

    @property
    def nullity(self) -> int:
        return self.matrix.shape[1] - numerics.rank(self.matrix)

    def rank(self, tol=None) -> int:
        return numerics.rank(self.matrix, tol)


def _free_quotient(fw, group, action):
    sym = _resolve(fw, group, action)
    if not sym.free:
        raise ActionNotFree("orbit matrices need a free action")
    if not validate_symmetric(fw, sym.group, sym.action):
        raise NotSymmetric("framework is not symmetric under the given action")
    sg = symmetric_graph_from_action(fw.n, fw.edges, sym.group, sym.action)
    return sym, quotient(sg)


def orbit_matrix_spherical(fw: SphericalFramework, group=None, action=None) -> OrbitMatrix:
    """Quotient matrix whose kernel is the symmetric motion space.

    Gain edge ``(i, j; g)`` gives ``rep(g) p_j`` in block ``i`` and
    ``rep(g)^T p_i`` in block ``j``; a loop puts ``(rep(g) + rep(g)^T) p_i``
    in block ``i``.  One normalization row ``p_i`` per representative.
    """
    sym, q = _free_quotient(fw, group, action)
    G = sym.group
    gg = q.gain_graph
    reps = q.representatives
    w = fw.d + 1
    P = fw.p
    M = np.zeros((len(gg.edges) + gg.n, w * gg.n))
    rows = []
    for k, (i, j, g) in enumerate(gg.edges):
        T = G.rep[g]
        pi, pj = P[reps[i]], P[reps[j]]
        M[k, w * i:w * i + w] += T @ pj
        M[k, w * j:w * j + w] += T.T @ pi
        rows.append(("edge", i, j, g))
    for i in range(gg.n):
        M[len(gg.edges) + i, w * i:w * i + w] = P[reps[i]]
        rows.append(("vertex", i))
    cols = [(i, c) for i in range(gg.n) for c in range(w)]
    return OrbitMatrix(M, rows, cols, reps)


def orbit_matrix_ph(fw: PointHyperplaneFramework, group=None, action=None) -> OrbitMatrix:
    """Point-hyperplane orbit matrix; hyperplane signs are normalized first."""
    sym = _resolve(fw, group, action)
    fw = normalize_signs(PointHyperplaneFramework(
        fw.n, fw.edges, fw.d, fw.hyperplanes, fw.p, fw.a, fw.r, sym))
    sym, q = _free_quotient(fw, None, None)
    G = sym.group
    gg = q.gain_graph
    reps = q.representatives
    d = fw.d
    is_h = [reps[i] in fw.hyperplanes for i in range(gg.n)]
    order = [i for i in range(gg.n) if not is_h[i]] + [i for i in range(gg.n) if is_h[i]]
    off, c = {}, 0
    for i in order:
        off[i] = c
        c += d + 1 if is_h[i] else d
    nh = sum(is_h)
    M = np.zeros((len(gg.edges) + nh, c))
    rows = []
    for k, (i, j, g) in enumerate(gg.edges):
        T = G.rep[g]
        if not is_h[i] and not is_h[j]:
            # <p_i - T p_j, u_i - T u_j>
            diff = fw.p[reps[i]] - T @ fw.p[reps[j]]
            M[k, off[i]:off[i] + d] += diff
            M[k, off[j]:off[j] + d] -= T.T @ diff
        elif is_h[i] and is_h[j]:
            # <a_i, T adot_j> + <adot_i, T a_j>
            M[k, off[i]:off[i] + d] += T @ fw.a[reps[j]]
            M[k, off[j]:off[j] + d] += T.T @ fw.a[reps[i]]
        else:
            # point x, hyperplane y with the edge read as {x, S y}
            if is_h[i]:
                x, y, S = j, i, G.rep[G.inv[g]]
            else:
                x, y, S = i, j, T
            M[k, off[x]:off[x] + d] += S @ fw.a[reps[y]]
            M[k, off[y]:off[y] + d] += S.T @ fw.p[reps[x]]
            M[k, off[y] + d] += 1.0
        rows.append(("edge", i, j, g))
    s = len(gg.edges)
    for i in order:
        if is_h[i]:
            M[s, off[i]:off[i] + d] = fw.a[reps[i]]
            rows.append(("hyperplane", i))
            s += 1
    cols = []
    for i in order:
        cols += [(i, t) for t in range(d + 1 if is_h[i] else d)]
    return OrbitMatrix(M, rows, cols, reps)


def orbit_matrix(fw: Framework, group=None, action=None) -> OrbitMatrix:
    if isinstance(fw, SphericalFramework):
        return orbit_matrix_spherical(fw, group, action)
    if isinstance(fw, PointHyperplaneFramework):
        return orbit_matrix_ph(fw, group, action)
    raise TypeError("orbit matrices exist for spherical and point-hyperplane frameworks")


# ---------------------------------------------------- combinatorial verdicts

TAG_FORCED = "forced-cyclic-plane"
TAG_INCIDENTAL = "incidental-z2-plane"
TAG_PH_MIRROR = "point-line-mirror-two-lines"
TAG_ISOSTATIC = "isostatic-cyclic-plane"
TAG_PH_HALF_TURN = "point-line-half-turn-fixed-lines"
TAG_SPHERE = "sphere-transfer"


@dataclass
class CombinatorialVerdict:
    predicted_forced_rigid: bool | None = None
    predicted_inf_rigid: bool | None = None
    predicted_isostatic: bool | None = None
    tags: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return bool(self.tags)

    def as_dict(self) -> dict:
        out = asdict(self)
        if not self.applicable:
            out["note"] = "no applicable theorem"
        return out


def _plane_family(G: SymmetryGroup, space: str, d: int, X) -> str | None:
    """Family name when the group is a planar catalog group in a usable form."""
    if G.name is None or d != 2:
        return None
    label, n = G.name
    if space in ("euclidean", "ph") and G.dim != 2:
        return None
    if space == "spherical":
        if G.dim != 3 or X:
            return None
        # the 3D catalog Cs and Cn coincide with the augmented planar groups
    if label == "Cs":
        return "Cs"
    if label == "Cn" and n >= 2:
        return f"C{n}"
    return None


def combinatorial_verdict(sg: SymmetricGraph, space: str = "euclidean", d: int = 2,
                          hyperplanes=(), X=()) -> CombinatorialVerdict:
    """Predictions licensed by the gain-count and fixed-count characterisations.

    Covered cases (all in the plane, or on the 2-sphere with no equator
    vertices, which transfers to the plane):

    * free cyclic or mirror symmetry: forced rigidity from a spanning
      (2,3,1)-gain-tight subgraph;
    * free order-2 symmetry (mirror or half-turn): infinitesimal rigidity
      from spanning (2,3,1)- and (2,3,2)-gain-tight subgraphs;
    * point-line frameworks with a mirror, two lines, free action: as above;
    * bar-joint, cyclic group generated by a mirror, half-turn or
      three-fold rotation: isostatic iff (2,3)-tight plus fixed counts;
    * point-line, half-turn fixing every line, free on points: isostatic
      iff (2,3)-tight and exactly one fixed edge.
    """
    v = CombinatorialVerdict()
    G = sg.group
    H = frozenset(int(j) for j in hyperplanes)
    fam = _plane_family(G, space, d, frozenset(X))
    if fam is None:
        return v
    counts = fixed_counts(sg)
    gamma = G.generators[0] if G.generators else None
    sphere = space == "spherical"

    if space in ("euclidean", "spherical") and not H:
        if sg.free_on_vertices:
            gg = quotient(sg).gain_graph
            w1 = has_spanning_gain_tight(gg, 2, 3, 1)
            v.predicted_forced_rigid = w1 is not None
            v.witnesses["gain_tight_231"] = list(w1) if w1 is not None else None
            v.tags["forced"] = TAG_FORCED + ("+" + TAG_SPHERE if sphere else "")
            if G.order == 2:
                w2 = has_spanning_gain_tight(gg, 2, 3, 2)
                v.predicted_inf_rigid = w1 is not None and w2 is not None
                v.witnesses["gain_tight_232"] = list(w2) if w2 is not None else None
                v.tags["inf_rigid"] = TAG_INCIDENTAL + ("+" + TAG_SPHERE if sphere else "")
        if space == "euclidean" and fam in ("Cs", "C2", "C3"):
            tight = is_kl_tight(sg.n, sg.edges, 2, 3)
            fv, fe = counts.for_element(gamma)
            if fam == "Cs":
                ok = fe == 1
            elif fam == "C2":
                ok = fv == 0 and fe == 1
            else:
                ok = fv == 0
            v.predicted_isostatic = tight and ok
            v.witnesses["tight_23"] = tight
            v.witnesses["fixed_vertices"] = fv
            v.witnesses["fixed_edges"] = fe
            v.tags["isostatic"] = TAG_ISOSTATIC
        return v

    if space != "ph":
        return v
    if fam == "Cs" and len(H) == 2 and sg.free_on_vertices:
        gg = quotient(sg).gain_graph
        w1 = has_spanning_gain_tight(gg, 2, 3, 1)
        w2 = has_spanning_gain_tight(gg, 2, 3, 2)
        v.predicted_forced_rigid = w1 is not None
        v.predicted_inf_rigid = w1 is not None and w2 is not None
        v.witnesses["gain_tight_231"] = list(w1) if w1 is not None else None
        v.witnesses["gain_tight_232"] = list(w2) if w2 is not None else None
        v.tags["forced"] = TAG_PH_MIRROR
        v.tags["inf_rigid"] = TAG_PH_MIRROR
    elif fam == "C2" and H:
        act = sg.action[gamma]
        lines_fixed = all(act[j] == j for j in H)
        points_free = all(act[i] != i for i in range(sg.n) if i not in H)
        if lines_fixed and points_free:
            tight = is_kl_tight(sg.n, sg.edges, 2, 3)
            fe = counts.edges[gamma]
            v.predicted_isostatic = tight and fe == 1
            v.witnesses["tight_23"] = tight
            v.witnesses["fixed_edges"] = fe
            v.tags["isostatic"] = TAG_PH_HALF_TURN
    return v
