"""Geometric transfers between spheres, planes and point-hyperplane frameworks.

All operators are pure: they return new frameworks and never mutate.
Symmetry is carried along when the input has one attached.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .errors import (
    EquatorMismatch,
    FixedVertexOffMirror,
    NotOrbitClosed,
    NotOrthogonal,
    NotSymmetric,
)
from .frameworks import (
    EQUATOR_TOL,
    EuclideanFramework,
    Framework,
    PointHyperplaneFramework,
    SphericalFramework,
    Symmetry,
    _resolve,
    hyperplane_signs,
    normalize_signs,
    validate_symmetric,
)
from .groups import (
    augment,
    deaugment,
    direct_product_with_inversion,
    is_augmented,
    make_schoenflies,
    pair_representation,
)
from .errors import ActionNotFree
from .symgraph import quotient, symmetric_graph_from_action

# x-axis to last axis, (x, y, z) -> (-z, y, x)
QUARTER_TURN = np.array([[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])


def _checked(fw):
    if fw.symmetry is not None and not validate_symmetric(fw):
        raise NotSymmetric("transfer produced a framework that is not symmetric")
    return fw


def partial_inversion(fw: SphericalFramework, I) -> SphericalFramework:
    """Negate the vertices in ``I``; ``I`` must be orbit-closed if symmetric."""
    I = sorted({int(i) for i in I})
    if fw.symmetry is not None and not fw.symmetry.is_orbit_closed(I):
        raise NotOrbitClosed("inversion set is not a union of vertex orbits")
    p = fw.p.copy()
    p[I] *= -1.0
    return _checked(dataclasses.replace(fw, p=p))


def project_ph_to_sphere(fw: PointHyperplaneFramework | EuclideanFramework) -> SphericalFramework:
    """Points go to ``(p, 1)/|(p, 1)|``, hyperplanes to ``(a, 0)``; offsets are dropped."""
    if isinstance(fw, EuclideanFramework):
        fw = PointHyperplaneFramework(fw.n, fw.edges, fw.d, frozenset(), fw.p,
                                      np.zeros_like(fw.p), np.zeros(fw.n), fw.symmetry)
    sym = None
    if fw.symmetry is not None:
        fw = normalize_signs(fw)
        if (hyperplane_signs(fw) < 0).any():
            raise NotSymmetric("a hyperplane stabilizer reverses its normal; no symmetric spherical image")
        sym = Symmetry(augment(fw.symmetry.group), fw.symmetry.action)
    q = np.zeros((fw.n, fw.d + 1))
    for i in fw.points:
        v = np.append(fw.p[i], 1.0)
        q[i] = v / np.linalg.norm(v)
    for j in fw.hyperplanes:
        q[j, :fw.d] = fw.a[j]
    return _checked(SphericalFramework(fw.n, fw.edges, q, fw.hyperplanes, sym))


def _canonical_sign(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(a) > 1e-12)
    return -a if nz.size and a[nz[0]] < 0 else a


def project_sphere_to_ph(fw: SphericalFramework) -> PointHyperplaneFramework:
    """Inverse of :func:`project_ph_to_sphere` after flipping the lower hemisphere."""
    d = fw.d
    on_eq = {i for i in range(fw.n) if abs(fw.p[i, -1]) < EQUATOR_TOL}
    if on_eq != set(fw.X):
        raise EquatorMismatch(f"equator vertices {sorted(on_eq)} differ from X={sorted(fw.X)}")
    sym = None
    if fw.symmetry is not None:
        if not is_augmented(fw.symmetry.group):
            raise ValueError("projection needs a group fixing the last axis")
        sym = Symmetry(deaugment(fw.symmetry.group), fw.symmetry.action)
    lower = [i for i in range(fw.n) if i not in on_eq and fw.p[i, -1] < 0]
    q = fw.p.copy()
    q[lower] *= -1.0
    p = np.zeros((fw.n, d))
    a = np.zeros((fw.n, d))
    for i in range(fw.n):
        if i in on_eq:
            v = q[i, :d]
            a[i] = _canonical_sign(v / np.linalg.norm(v))
        else:
            p[i] = q[i, :d] / q[i, d]
    out = PointHyperplaneFramework(fw.n, fw.edges, d, frozenset(on_eq), p, a, np.zeros(fw.n), sym)
    return _checked(out)


def _canonical_elements(sym: Symmetry):
    sg = symmetric_graph_from_action(sym.action.shape[1], (), sym.group, sym.action)
    return quotient(sg).element_of


def pairing_transform(fw: SphericalFramework, h: Subgroup, group=None, action=None):
    """Invert every ``g v`` with ``g`` outside ``h`` (``v`` a canonical representative).

    Returns ``(new framework, twisted group)``.
    """
    sym = _resolve(fw, group, action)
    if not sym.free:
        raise ActionNotFree("pairing needs a free action")
    if not validate_symmetric(fw, sym.group, sym.action):
        raise NotSymmetric("framework is not symmetric under the given action")
    twisted = pair_representation(sym.group, h)
    elem = _canonical_elements(sym)
    flip = [v for v in range(fw.n) if int(elem[v]) not in h.members]
    p = fw.p.copy()
    p[flip] *= -1.0
    new_sym = Symmetry(twisted, sym.action)
    out = dataclasses.replace(fw, p=p, symmetry=new_sym)
    if not validate_symmetric(out):
        raise NotSymmetric("paired framework failed validation")
    return out, twisted


def double_cover(fw: SphericalFramework, group=None, action=None):
    """Union with the antipodal copy; vertex ``v + n`` is ``-p_v``.

    Returns ``(new framework, group extended by -I)``.
    """
    sym = _resolve(fw, group, action)
    G = direct_product_with_inversion(sym.group)
    n, N = fw.n, sym.group.order
    act = np.empty((2 * N, 2 * n), dtype=int)
    for s in (0, 1):
        for g in range(N):
            base = sym.action[g]
            act[g + s * N, :n] = base + s * n
            act[g + s * N, n:] = base + (1 - s) * n
    edges = list(fw.edges) + [(i + n, j + n) for i, j in fw.edges]
    p = np.vstack([fw.p, -fw.p])
    X = set(fw.X) | {x + n for x in fw.X}
    out = SphericalFramework(2 * n, edges, p, X, Symmetry(G, act))
    return _checked(out), G


def _check_orthogonal(Q):
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or np.abs(Q.T @ Q - np.eye(len(Q))).max() >= 1e-12:
        raise NotOrthogonal("rotation matrix is not orthogonal")
    return Q


def rotate(fw: Framework, Q) -> Framework:
    """Apply ``Q`` to every coordinate and conjugate the attached group."""
    Q = _check_orthogonal(Q)
    sym = None
    if fw.symmetry is not None:
        sym = Symmetry(fw.symmetry.group.conjugate(Q), fw.symmetry.action)
    if isinstance(fw, SphericalFramework):
        if Q.shape[0] != fw.d + 1:
            raise ValueError("rotation dimension mismatch")
        return _checked(SphericalFramework(fw.n, fw.edges, fw.p @ Q.T, None, sym))
    if Q.shape[0] != fw.d:
        raise ValueError("rotation dimension mismatch")
    if isinstance(fw, EuclideanFramework):
        return _checked(EuclideanFramework(fw.n, fw.edges, fw.p @ Q.T, sym))
    return _checked(dataclasses.replace(fw, p=fw.p @ Q.T, a=fw.a @ Q.T, symmetry=sym))


def axis_rotation(axis, theta: float) -> np.ndarray:
    """Rotation of ``R^3`` about ``axis`` by ``theta``."""
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    K = np.array([[0, -u[2], u[1]], [u[2], 0, -u[0]], [-u[1], u[0], 0]])
    return np.eye(3) + np.sin(theta) * K + (1 - np.cos(theta)) * K @ K


def rotate_off_equator(fw: SphericalFramework, axis, seed=0, margin: float = 1e-6) -> SphericalFramework:
    """Rotate about ``axis`` by the smallest sampled angle clearing the equator."""
    if fw.d != 2:
        raise ValueError("equator-avoiding rotation is implemented on the 2-sphere")
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    for i in range(fw.n):
        if np.linalg.norm(np.cross(fw.p[i], u)) < 1e-9:
            raise EquatorMismatch(f"vertex {i} lies on the rotation axis")
    rng = np.random.default_rng(seed)
    for theta in np.sort(rng.uniform(0.0, np.pi, 256)):
        Q = axis_rotation(u, theta)
        if np.abs((fw.p @ Q.T)[:, -1]).min(initial=np.inf) >= margin:
            return rotate(fw, Q)
    raise EquatorMismatch("no sampled rotation clears the equator")


def _mirror_symmetry(fw):
    if fw.symmetry is None:
        raise NotSymmetric("a mirror symmetry must be attached")
    G = fw.symmetry.group
    if G.order != 2 or G.dim != 2 or np.abs(G.rep[1] - np.diag([-1.0, 1.0])).max() > 1e-12:
        raise NotSymmetric("expected the planar mirror group diag(-1, 1)")
    if not validate_symmetric(fw):
        raise NotSymmetric("framework is not mirror symmetric")
    return fw.symmetry


def pair_with_fixed(fw: EuclideanFramework | PointHyperplaneFramework) -> PointHyperplaneFramework:
    """Mirror-symmetric planar framework to a half-turn-symmetric point-line one.

    Lift to the sphere, negate the non-representative member of every
    two-element orbit, turn the mirror normal onto the last axis and project.
    Mirror-fixed vertices land on the equator: points on the mirror become
    lines through the origin, lines perpendicular to the mirror stay lines
    and a line along the mirror becomes a point at the origin.
    """
    sym = _mirror_symmetry(fw)
    act = sym.action[1]
    if isinstance(fw, EuclideanFramework):
        ph = PointHyperplaneFramework(fw.n, fw.edges, 2, frozenset(), fw.p,
                                      np.zeros_like(fw.p), np.zeros(fw.n), None)
    else:
        ph = dataclasses.replace(fw, symmetry=None)
    for v in range(fw.n):
        if act[v] == v and v not in ph.hyperplanes and abs(ph.p[v, 0]) > 1e-9:
            raise FixedVertexOffMirror(f"vertex {v} is fixed but not on the mirror")
    sph = project_ph_to_sphere(ph)
    q = sph.p.copy()
    for v in range(fw.n):
        if act[v] > v:
            q[act[v]] *= -1.0
    q = q @ QUARTER_TURN.T
    for v in range(fw.n):
        if act[v] != v and abs(q[v, -1]) < EQUATOR_TOL:
            raise EquatorMismatch(f"vertex {v} is not fixed but lies on the mirror")
    out = project_sphere_to_ph(SphericalFramework(fw.n, fw.edges, q))
    out = dataclasses.replace(out, symmetry=Symmetry(make_schoenflies(2, "Cn", 2), sym.action))
    if not validate_symmetric(out):
        raise NotSymmetric("half-turn image failed validation")
    return out
