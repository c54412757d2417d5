"""Finite orthogonal symmetry groups stored as explicit element tables.

Element 0 is always the identity.  Groups built from generator matrices
assign ids ``1..k`` to the ``k`` generators in the order given, which is
what the JSON documents rely on when they key permutations by generator.

Axis conventions
----------------
2D: mirror is the y-axis (``diag(-1, 1)``), rotations by ``2*pi/n``.
3D: principal axis z, ``Cs`` mirror is the plane ``x = 0``, the secondary
half-turn of ``Dn`` is the x-axis, horizontal mirrors are ``z = 0``.  The
vertical mirror of ``Dnd`` contains z and the direction at angle
``pi/(2n)`` from the x-axis, bisecting two adjacent half-turn axes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ContainsInversion, NotIndex2

MATCH_TOL = 1e-9
ORTHO_TOL = 1e-12
MAX_ORDER = 240

LABELS_2D = ("Cs", "Cn", "Cnv")
LABELS_3D = ("Cs", "Cn", "Ci", "Cnv", "Cnh", "S2n", "Dn", "Dnh", "Dnd", "Td", "O")


@dataclass(frozen=True, eq=False)
class SymmetryGroup:
    """A finite group together with an orthogonal representation.

    Attributes
    ----------
    mult : (order, order) int array, ``mult[g, h]`` is the id of ``g*h``.
    inv : (order,) int array of inverse ids.
    rep : (order, dim, dim) float array of representation matrices.
    generators : ids of a generating set.
    name : optional ``(label, n)`` Schoenflies tag.
    """

    mult: np.ndarray
    inv: np.ndarray
    rep: np.ndarray
    generators: tuple[int, ...]
    name: tuple[str, int] | None = None

    @property
    def order(self) -> int:
        return int(self.mult.shape[0])

    @property
    def dim(self) -> int:
        return int(self.rep.shape[1])

    def find(self, M, tol: float = MATCH_TOL) -> int | None:
        """Id of the element whose matrix equals ``M``, or ``None``."""
        diff = np.abs(self.rep - np.asarray(M, dtype=float)).max(axis=(1, 2))
        k = int(np.argmin(diff))
        return k if diff[k] < tol else None

    def contains_inversion(self) -> bool:
        return self.find(-np.eye(self.dim)) is not None

    def is_rotation(self, g: int) -> bool:
        return np.linalg.det(self.rep[g]) > 0

    def conjugate(self, Q) -> "SymmetryGroup":
        """Same abstract group with matrices ``Q rep Q^T``."""
        Q = np.asarray(Q, dtype=float)
        rep = np.einsum("ij,gjk,lk->gil", Q, self.rep, Q)
        return SymmetryGroup(self.mult, self.inv, rep, self.generators, self.name)

    def same_matrices(self, other: "SymmetryGroup", tol: float = MATCH_TOL) -> bool:
        """Whether both groups have the same set of matrices."""
        if self.order != other.order or self.dim != other.dim:
            return False
        return all(other.find(M, tol) is not None for M in self.rep)

    def subgroup(self, members) -> "Subgroup":
        return Subgroup(self, frozenset(int(m) for m in members))

    def generated_subgroup(self, ids) -> "Subgroup":
        members = {0}
        frontier = [0]
        ids = [int(i) for i in ids]
        while frontier:
            g = frontier.pop()
            for s in ids:
                h = int(self.mult[g, s])
                if h not in members:
                    members.add(h)
                    frontier.append(h)
        return self.subgroup(members)

    def element_order(self, g: int) -> int:
        k, h = 1, g
        while h != 0:
            h = int(self.mult[h, g])
            k += 1
        return k

    def label(self) -> str:
        if self.name is None:
            return f"group of order {self.order}"
        lab, n = self.name
        return schoenflies_string(lab, n)

    def check(self) -> None:
        """Exhaustive table and representation checks; raises on failure."""
        N = self.order
        m = self.mult
        if not (np.array_equal(m[0], np.arange(N)) and np.array_equal(m[:, 0], np.arange(N))):
            raise ValueError("identity is not element 0")
        for g in range(N):
            if m[g, self.inv[g]] != 0 or m[self.inv[g], g] != 0:
                raise ValueError("inverse table is wrong")
        for g in range(N):
            # (g h) k == g (h k) for all h, k
            if not np.array_equal(m[m[g]], m[g][m]):
                raise ValueError("multiplication is not associative")
        eye = np.eye(self.dim)
        for M in self.rep:
            if np.abs(M.T @ M - eye).max() >= ORTHO_TOL:
                raise ValueError("representation matrix is not orthogonal")
        prod = np.einsum("gij,hjk->ghik", self.rep, self.rep)
        if np.abs(prod - self.rep[m]).max() >= ORTHO_TOL:
            raise ValueError("representation is not a homomorphism")


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: SymmetryGroup
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        m = self.members
        if 0 not in m:
            raise ValueError("subgroup must contain the identity")
        for g in m:
            if int(self.parent.inv[g]) not in m:
                raise ValueError("subgroup not closed under inverses")
            for h in m:
                if int(self.parent.mult[g, h]) not in m:
                    raise ValueError("subgroup not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, g) -> bool:
        return int(g) in self.members


def from_generators(mats, name: tuple[str, int] | None = None) -> SymmetryGroup:
    """Close generator matrices into a group table.

    Generators get ids ``1..k`` in the given order; they must be distinct
    and different from the identity.
    """
    mats = [np.asarray(M, dtype=float) for M in mats]
    if not mats:
        raise ValueError("at least one generator (possibly the identity) required")
    dim = mats[0].shape[0]
    eye = np.eye(dim)
    for M in mats:
        if M.shape != (dim, dim):
            raise ValueError("generator shapes differ")
        if np.abs(M.T @ M - eye).max() >= 1e-9:
            raise ValueError("generator is not orthogonal")
    elements = [eye]
    gens: list[int] = []

    def lookup(M):
        arr = np.asarray(elements)
        diff = np.abs(arr - M).max(axis=(1, 2))
        k = int(np.argmin(diff))
        return k if diff[k] < MATCH_TOL else None

    for M in mats:
        k = lookup(M)
        if k is None:
            elements.append(M)
            gens.append(len(elements) - 1)
        elif k == 0 and len(mats) == 1:
            pass
        else:
            raise ValueError("generators must be distinct and non-identity")
    i = 0
    while i < len(elements):
        for s in gens:
            P = elements[i] @ elements[s]
            if lookup(P) is None:
                elements.append(P)
                if len(elements) > MAX_ORDER:
                    raise ValueError("generated group is too large or infinite")
        i += 1
    rep = np.asarray(elements)
    # snap tiny noise so tables stay exact under repeated products
    rep = np.where(np.abs(rep) < 1e-15, 0.0, rep)
    N = len(elements)
    prods = np.einsum("gij,hjk->ghik", rep, rep)
    mult = np.empty((N, N), dtype=int)
    for g in range(N):
        for h in range(N):
            diff = np.abs(rep - prods[g, h]).max(axis=(1, 2))
            k = int(np.argmin(diff))
            if diff[k] >= MATCH_TOL:
                raise ValueError("generated set is not closed")
            mult[g, h] = k
    inv = np.array([int(np.where(mult[g] == 0)[0][0]) for g in range(N)])
    return SymmetryGroup(mult, inv, rep, tuple(gens), name)


def trivial_group(dim: int) -> SymmetryGroup:
    return from_generators([np.eye(dim)], name=("Cn", 1))


def _rot2(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rot_z(theta: float) -> np.ndarray:
    M = np.eye(3)
    M[:2, :2] = _rot2(theta)
    return M


def mirror(normal) -> np.ndarray:
    """Reflection in the hyperplane with the given normal."""
    u = np.asarray(normal, dtype=float)
    u = u / np.linalg.norm(u)
    return np.eye(len(u)) - 2.0 * np.outer(u, u)


def half_turn(axis) -> np.ndarray:
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    return 2.0 * np.outer(u, u) - np.eye(len(u))


SIGMA_H = np.diag([1.0, 1.0, -1.0])
C3_DIAG = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def schoenflies_generators(dim: int, label: str, n: int = 1) -> list[np.ndarray]:
    """Generator matrices for a catalog group, in documented order."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if dim == 2:
        if label not in LABELS_2D:
            raise ValueError(f"label {label!r} is not a 2D group")
        rot = _rot2(2 * np.pi / n)
        ref = np.diag([-1.0, 1.0])
        if label == "Cs":
            return [ref]
        if label == "Cn":
            return [rot] if n > 1 else [np.eye(2)]
        return [rot, ref] if n > 1 else [ref]
    if dim != 3:
        raise ValueError("catalog groups exist in dimension 2 or 3")
    if label not in LABELS_3D:
        raise ValueError(f"unknown 3D label {label!r}")
    rot = rot_z(2 * np.pi / n)
    rots = [rot] if n > 1 else []
    c2x = half_turn([1.0, 0.0, 0.0])
    if label == "Cs":
        return [np.diag([-1.0, 1.0, 1.0])]
    if label == "Ci":
        return [-np.eye(3)]
    if label == "Cn":
        return rots or [np.eye(3)]
    if label == "Cnv":
        return rots + [np.diag([-1.0, 1.0, 1.0])]
    if label == "Cnh":
        return rots + [SIGMA_H]
    if label == "S2n":
        return [rot_z(np.pi / n) @ SIGMA_H]
    if label == "Dn":
        return rots + [c2x]
    if label == "Dnh":
        return rots + [c2x, SIGMA_H]
    if label == "Dnd":
        phi = np.pi / (2 * n)
        return rots + [c2x, mirror([-np.sin(phi), np.cos(phi), 0.0])]
    if label == "Td":
        return [rot_z(np.pi / 2) @ SIGMA_H, C3_DIAG]
    if label == "O":
        return [rot_z(np.pi / 2), C3_DIAG]
    raise AssertionError(label)


def make_schoenflies(dim: int, label: str, n: int = 1) -> SymmetryGroup:
    """Catalog group by Schoenflies family name (``"Cnv"``, ``"Td"``, ...)."""
    gens = schoenflies_generators(dim, label, n)
    tag_n = n if "n" in label else 1
    return from_generators(gens, name=(label, tag_n))


def schoenflies_string(label: str, n: int) -> str:
    if label == "S2n":
        return f"S{2 * n}"
    return label.replace("n", str(n)) if "n" in label else label


def parse_schoenflies(text: str) -> tuple[str, int]:
    """Split a concrete name like ``"D3h"`` or ``"S4"`` into family and n."""
    import re

    t = text.strip()
    if t in ("Cs", "Ci", "Td", "O"):
        return t, 1
    m = re.fullmatch(r"([CDS])(\d+)([vhd]?)", t)
    if not m:
        raise ValueError(f"cannot parse group name {text!r}")
    letter, num, suffix = m.group(1), int(m.group(2)), m.group(3)
    if letter == "S":
        if suffix or num % 2:
            raise ValueError(f"cannot parse group name {text!r}")
        return "S2n", num // 2
    return f"{letter}n{suffix}", num


def augment(g: SymmetryGroup) -> SymmetryGroup:
    """Append a trailing fixed coordinate: ``blockdiag(rep, 1)``."""
    N, d = g.order, g.dim
    rep = np.zeros((N, d + 1, d + 1))
    rep[:, :d, :d] = g.rep
    rep[:, d, d] = 1.0
    return SymmetryGroup(g.mult, g.inv, rep, g.generators, g.name)


def is_augmented(g: SymmetryGroup, tol: float = MATCH_TOL) -> bool:
    """True when every matrix fixes the last coordinate axis."""
    last = g.rep[:, -1, :]
    col = g.rep[:, :, -1]
    e = np.zeros(g.dim)
    e[-1] = 1.0
    return bool(np.abs(last - e).max() < tol and np.abs(col - e).max() < tol)


def deaugment(g: SymmetryGroup) -> SymmetryGroup:
    if not is_augmented(g):
        raise ValueError("group does not fix the last coordinate axis")
    return SymmetryGroup(g.mult, g.inv, g.rep[:, :-1, :-1].copy(), g.generators, g.name)


def _homomorphisms_to_z2(g: SymmetryGroup) -> list[np.ndarray]:
    """All homomorphisms to Z2, as 0/1 vectors over element ids."""
    gens = list(g.generators)
    homs = []
    for values in itertools.product((0, 1), repeat=len(gens)):
        phi = np.full(g.order, -1, dtype=int)
        phi[0] = 0
        frontier = [0]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for s, v in zip(gens, values):
                y = int(g.mult[x, s])
                val = (phi[x] + v) % 2
                if phi[y] < 0:
                    phi[y] = val
                    frontier.append(y)
                elif phi[y] != val:
                    ok = False
                    break
        if ok and (phi >= 0).all():
            homs.append(phi)
    return homs


def index2_subgroups(g: SymmetryGroup) -> list[Subgroup]:
    """Every subgroup of index exactly 2, as kernels of maps onto Z2."""
    out = []
    for phi in _homomorphisms_to_z2(g):
        if phi.any():
            out.append(g.subgroup(np.flatnonzero(phi == 0)))
    out.sort(key=lambda h: sorted(h.members))
    return out


def pair_representation(g: SymmetryGroup, h: Subgroup) -> SymmetryGroup:
    """Sign-twist: keep ``rep`` on ``h``, negate it off ``h``."""
    if h.parent is not g and h.parent.order != g.order:
        raise NotIndex2("subgroup belongs to a different group")
    if 2 * h.order != g.order:
        raise NotIndex2(f"subgroup has index {g.order / h.order:g}, not 2")
    if g.contains_inversion():
        raise ContainsInversion("groups containing -I admit no pairing")
    sign = np.array([1.0 if k in h.members else -1.0 for k in range(g.order)])
    rep = g.rep * sign[:, None, None]
    twisted = SymmetryGroup(g.mult, g.inv, rep, g.generators, None)
    flat = rep.reshape(g.order, -1)
    for a in range(g.order):
        if (np.abs(flat[a + 1:] - flat[a]).max(axis=1) < MATCH_TOL).any():
            raise ContainsInversion("twisted representation is not faithful")
    twisted.check()
    return twisted


def involution_group(d: int, axis_dims) -> SymmetryGroup:
    """Order-2 group generated by ``diag(+1 on axis_dims, -1 elsewhere)``.

    ``axis_dims`` uses 1-based coordinate indices.
    """
    axes = {int(a) for a in axis_dims}
    if not axes <= set(range(1, d + 1)):
        raise ValueError("axis index out of range")
    if len(axes) == d:
        raise ValueError("axis_dims covers every coordinate: identity, not an involution")
    D = np.diag([1.0 if k + 1 in axes else -1.0 for k in range(d)])
    return from_generators([D])


def direct_product_with_inversion(g: SymmetryGroup) -> SymmetryGroup:
    """Group generated by ``rep(g)`` and ``-I``; element ``k + s*|g|`` is ``(-1)^s rep(k)``."""
    if g.contains_inversion():
        raise ContainsInversion("group already contains -I")
    N = g.order
    mult = np.empty((2 * N, 2 * N), dtype=int)
    for s in (0, 1):
        for t in (0, 1):
            mult[s * N:(s + 1) * N, t * N:(t + 1) * N] = g.mult + ((s + t) % 2) * N
    inv = np.concatenate([g.inv, g.inv + N])
    rep = np.concatenate([g.rep, -g.rep])
    gens = tuple(g.generators) + (N,)
    gens = tuple(x for x in gens if x != 0)
    return SymmetryGroup(mult, inv, rep, gens, None)


@dataclass(frozen=True)
class Pairing:
    """A catalogued pair of groups exchanged by the sign-twist.

    ``Q @ twisted @ Q.T`` reproduces the catalog matrices of ``right``.
    """

    tag: str
    left: SymmetryGroup
    subgroup: Subgroup
    right: SymmetryGroup | None
    conj: np.ndarray


def _mirror_normal_at(g: SymmetryGroup, phi: float) -> int:
    k = g.find(mirror([np.cos(phi), np.sin(phi), 0.0]))
    assert k is not None
    return k


def sphere_pairings(max_n: int = 6, max_dihedral: int = 4) -> list[Pairing]:
    """The catalogued pairings of point groups acting on the 2-sphere.

    ``max_n`` bounds the cyclic and ``Cnv~Dn`` families, ``max_dihedral``
    bounds ``n`` in the ``C2nv~Dnh`` / ``C2nv~Dnd`` families.
    """
    out: list[Pairing] = []
    eye = np.eye(3)
    swap_xz = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])

    c2 = make_schoenflies(3, "Cn", 2)
    out.append(Pairing("C2~Cs", c2, c2.subgroup({0}), make_schoenflies(3, "Cs"), swap_xz))
    for n in range(1, max_n + 1):
        left = make_schoenflies(3, "Cn", 2 * n)
        h = left.generated_subgroup([left.mult[1, 1]])
        if n % 2:
            right = make_schoenflies(3, "Cnh", n)
            out.append(Pairing(f"C{2 * n}~C{n}h", left, h, right, eye))
        else:
            right = make_schoenflies(3, "S2n", n)
            out.append(Pairing(f"C{2 * n}~S{2 * n}", left, h, right, eye))
    for n in range(2, max_n + 1):
        left = make_schoenflies(3, "Cnv", n)
        h = left.generated_subgroup([1])
        out.append(Pairing(f"C{n}v~D{n}", left, h, make_schoenflies(3, "Dn", n), eye))
    for n in range(1, max_dihedral + 1):
        left = make_schoenflies(3, "Cnv", 2 * n)
        h = left.generated_subgroup([left.mult[1, 1], _mirror_normal_at(left, np.pi / (2 * n))])
        if n % 2:
            right = make_schoenflies(3, "Dnh", n)
            out.append(Pairing(f"C{2 * n}v~D{n}h", left, h, right, eye))
        else:
            right = make_schoenflies(3, "Dnd", n)
            out.append(Pairing(f"C{2 * n}v~D{n}d", left, h, right, eye))
    td = make_schoenflies(3, "Td")
    rot = td.subgroup([k for k in range(td.order) if td.is_rotation(k)])
    out.append(Pairing("Td~O", td, rot, make_schoenflies(3, "O"), eye))
    return out


def involution_pairings(dim: int = 4) -> list[Pairing]:
    """Pairs of coordinate involutions with complementary fixed axes."""
    out = []
    for k in range(1, dim):
        for axes in itertools.combinations(range(1, dim + 1), k):
            g = involution_group(dim, axes)
            comp = sorted(set(range(1, dim + 1)) - set(axes))
            right = involution_group(dim, comp)
            out.append(Pairing(f"inv{list(axes)}~inv{comp}", g, g.subgroup({0}), right, np.eye(dim)))
    return out


def subgroup_characters(g: SymmetryGroup, members) -> list[dict[int, int]]:
    """Homomorphisms from the subgroup ``members`` to ``{+1, -1}``.

    The trivial character comes first.
    """
    members = sorted(int(m) for m in members)
    gens: list[int] = []
    span = {0}
    for x in members:
        if x not in span:
            gens.append(x)
            span = set(g.generated_subgroup(gens).members)
    out = []
    for values in itertools.product((1, -1), repeat=len(gens)):
        chi = {0: 1}
        frontier = [0]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for s, v in zip(gens, values):
                y = int(g.mult[x, s])
                val = chi[x] * v
                if y not in chi:
                    chi[y] = val
                    frontier.append(y)
                elif chi[y] != val:
                    ok = False
                    break
        if ok:
            out.append(chi)
    return out
