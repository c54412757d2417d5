"""Instance generators for tests, the verify harness and the CLI.

Everything is seeded; the curated lists are found by deterministic search
so they can be regenerated rather than maintained by hand.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .frameworks import (
    EuclideanFramework,
    PointHyperplaneFramework,
    SphericalFramework,
    Symmetry,
    make_ph,
    sample_symmetric,
    with_symmetry,
)
from .groups import SymmetryGroup, make_schoenflies
from .symgraph import (
    GainGraph,
    SymmetricGraph,
    fixed_counts,
    is_kl_tight,
    lift,
    make_gain_graph,
    make_symmetric_graph,
)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


# ------------------------------------------------------------ gain graphs

def _edge_key(G: SymmetryGroup, i, j, g):
    if i == j:
        return (i, i, min(g, int(G.inv[g])))
    if i < j:
        return (i, j, g)
    return (j, i, int(G.inv[g]))


def random_gain_graph(G: SymmetryGroup, n0: int, m: int, seed=0, loops: bool = True,
                      allowed=None) -> GainGraph:
    """Connected gain graph with ``m`` edges whose lift is a simple graph.

    A random spanning tree comes first, so ``m >= n0 - 1`` is required;
    ``m`` is capped at the number of distinct edge orbits.
    ``allowed(i, j)`` can veto vertex pairs (used to keep line-line edges out).
    """
    rng = _rng(seed)
    if m < n0 - 1:
        raise ValueError("too few edges for a connected quotient")
    allowed = allowed or (lambda i, j: True)
    loop_classes = len({min(g, int(G.inv[g])) for g in range(1, G.order)}) if loops else 0
    m = min(m, n0 * loop_classes + n0 * (n0 - 1) // 2 * G.order)
    keys: dict = {}
    order = rng.permutation(n0)
    for t in range(1, n0):
        for _ in range(100):
            j = int(order[rng.integers(0, t)])
            if allowed(int(order[t]), j):
                break
        else:
            raise ValueError("cannot connect the quotient under the pair restriction")
        g = int(rng.integers(0, G.order))
        keys[_edge_key(G, int(order[t]), j, g)] = None
    tries = 0
    while len(keys) < m:
        tries += 1
        if tries > 50 * (m + 1):
            raise ValueError("could not place the requested number of edges")
        i, j = (int(x) for x in rng.integers(0, n0, size=2))
        if not allowed(i, j):
            continue
        if i == j:
            if not loops or G.order == 1:
                continue
            g = int(rng.integers(1, G.order))
        else:
            g = int(rng.integers(0, G.order))
        keys.setdefault(_edge_key(G, i, j, g), None)
    return make_gain_graph(n0, list(keys), G)


def lifted_vertices(gg: GainGraph, i: int) -> list[int]:
    """Vertices of the lift lying over quotient vertex ``i``."""
    N = gg.group.order
    return list(range(i * N, (i + 1) * N))


def random_free_symmetric_graph(G: SymmetryGroup, n0: int, m: int, seed=0, **kw) -> SymmetricGraph:
    return lift(random_gain_graph(G, n0, m, seed, **kw))


def z2_gain_graphs(max_vertices: int = 4, group: SymmetryGroup | None = None):
    """All connected Z2-gain graphs with ``|E0| <= 2|V0|``, one per switching class.

    Vertices are labeled; each pair carries no edge, one edge of either
    gain, or both gains, and each vertex at most one loop (gain 1), so every
    lift is simple.  Switching classes are reduced to the representative
    with the lexicographically least gain vector.
    """
    G = group if group is not None else make_schoenflies(2, "Cn", 2)
    if G.order != 2:
        raise ValueError("expected a group of order 2")
    out = []
    for n in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        seen = set()
        for mult in itertools.product(range(4), repeat=len(pairs)):
            ne = sum((c > 0) + (c == 3) for c in mult)
            if ne > 2 * n or not _connected(n, [p for p, c in zip(pairs, mult) if c]):
                continue
            for loops in itertools.product((0, 1), repeat=n):
                if ne + sum(loops) > 2 * n:
                    continue
                best = None
                for s in itertools.product((0, 1), repeat=n):
                    key = tuple(1 + ((c - 1) ^ s[i] ^ s[j]) if c in (1, 2) else c
                                for (i, j), c in zip(pairs, mult))
                    if best is None or key < best:
                        best = key
                if (best, loops) in seen:
                    continue
                seen.add((best, loops))
                edges = []
                for (i, j), c in zip(pairs, best):
                    if c in (1, 3):
                        edges.append((i, j, 0))
                    if c in (2, 3):
                        edges.append((i, j, 1))
                edges += [(i, i, 1) for i in range(n) if loops[i]]
                out.append(make_gain_graph(n, edges, G))
    return out


def _connected(n, edges) -> bool:
    adj = {i: set() for i in range(n)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, stack = {0}, [0]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == n


# ------------------------------------------------------ plain frameworks

def random_edges(n: int, prob: float, rng) -> list:
    return [e for e in itertools.combinations(range(n), 2) if rng.random() < prob]


def random_spherical(d: int, n: int, seed=0, prob: float = 0.6) -> SphericalFramework:
    rng = _rng(seed)
    p = rng.standard_normal((n, d + 1))
    p /= np.linalg.norm(p, axis=1, keepdims=True)
    return SphericalFramework(n, random_edges(n, prob, rng), p)


def random_ph(d: int, n_points: int, n_hyperplanes: int, seed=0, prob: float = 0.6) -> PointHyperplaneFramework:
    """Random point-hyperplane framework; hyperplanes are the last vertices."""
    rng = _rng(seed)
    n = n_points + n_hyperplanes
    points = {i: rng.standard_normal(d) for i in range(n_points)}
    lines = {j: (rng.standard_normal(d), rng.standard_normal()) for j in range(n_points, n)}
    return make_ph(n, random_edges(n, prob, rng), d, points, lines)


def random_symmetric_ph(G: SymmetryGroup, n_point_orbits: int, n_hyperplane_orbits: int,
                        seed=0, extra_edges: int | None = None) -> PointHyperplaneFramework:
    """Free-action point-hyperplane framework in ``R^{G.dim}``.

    Quotient vertices ``0..n_hyperplane_orbits-1`` become hyperplanes.
    """
    rng = _rng(seed)
    n0 = n_point_orbits + n_hyperplane_orbits
    if extra_edges is None:
        extra_edges = int(rng.integers(0, n0 + 2))
    gg = random_gain_graph(G, n0, n0 - 1 + extra_edges, rng)
    sg = lift(gg)
    H = [v for i in range(n_hyperplane_orbits) for v in lifted_vertices(gg, i)]
    return sample_symmetric(sg, "ph", G.dim, hyperplanes=H, seed=rng)


def random_symmetric_spherical(G: SymmetryGroup, n0: int, seed=0, extra_edges: int | None = None) -> SphericalFramework:
    """Free-action framework on the sphere of dimension ``G.dim - 1``."""
    rng = _rng(seed)
    if extra_edges is None:
        extra_edges = int(rng.integers(0, n0 + 2))
    gg = random_gain_graph(G, n0, n0 - 1 + extra_edges, rng)
    return sample_symmetric(lift(gg), "spherical", G.dim - 1, seed=rng)


# ------------------------------------------------------ fixture instances

K4E_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3))
K4E_SWAP = (1, 0, 3, 2)


def k4e_graph(label: str = "Cn", n: int = 2) -> SymmetricGraph:
    """K4 minus the edge {2, 3}; the generator swaps 0<->1 and 2<->3."""
    return make_symmetric_graph(4, K4E_EDGES, make_schoenflies(2, label, n), {1: K4E_SWAP})


def k4e_fixture() -> EuclideanFramework:
    """Integer half-turn symmetric placement used for exact checks."""
    p = np.array([[2.0, 1.0], [-2.0, -1.0], [1.0, 3.0], [-1.0, -3.0]])
    sg = k4e_graph()
    return EuclideanFramework(4, K4E_EDGES, p, Symmetry.of(sg))


def mirror_two_line_example() -> PointHyperplaneFramework:
    """Mirror-symmetric point-line framework that is flexible yet rigid under symmetric motions.

    Quotient: points ``a, b`` and one line orbit ``L`` with gain edges
    ``(a,a;s), (b,b;s), (a,b;1), (a,L;1), (b,L;1)``.  Lifted vertex order
    is ``a, sa, b, sb, L, sL``.
    """
    G = make_schoenflies(2, "Cs")
    edges = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 4), (1, 5), (2, 4), (3, 5)]
    points = {0: [1.0, 0.3], 1: [-1.0, 0.3], 2: [0.45, 1.7], 3: [-0.45, 1.7]}
    lines = {4: ([0.6, 0.8], 0.35), 5: ([-0.6, 0.8], 0.35)}
    fw = make_ph(6, edges, 2, points, lines)
    return with_symmetry(fw, G, [list(range(6)), [1, 0, 3, 2, 5, 4]])


def grab_bucket_example() -> PointHyperplaneFramework:
    """Mirror-symmetric mechanism with two fixed points on the mirror and the mirror line itself.

    Vertices: ``a=0, b=1`` fixed points, ``l=2`` the line along the mirror,
    ``c, c'=3, 4`` and ``d, d'=5, 6`` swapped pairs.
    """
    G = make_schoenflies(2, "Cs")
    edges = [(0, 3), (0, 4), (3, 5), (4, 6), (1, 5), (1, 6), (0, 1), (0, 2), (1, 2)]
    points = {0: [0.0, 2.0], 1: [0.0, 0.0], 3: [1.0, 1.5], 4: [-1.0, 1.5],
              5: [1.2, -0.5], 6: [-1.2, -0.5]}
    lines = {2: ([1.0, 0.0], 0.0)}
    fw = make_ph(7, edges, 2, points, lines)
    return with_symmetry(fw, G, [list(range(7)), [0, 1, 2, 4, 3, 6, 5]])


def path_mirror_example() -> EuclideanFramework:
    """Path a-b-c with the mirror swapping a and c and fixing b on the mirror."""
    G = make_schoenflies(2, "Cs")
    p = np.array([[1.0, 0.5], [0.0, 1.5], [-1.0, 0.5]])
    return with_symmetry(EuclideanFramework(3, [(0, 1), (1, 2)], p), G, [[0, 1, 2], [2, 1, 0]])


# -------------------------------------------- fixed-count catalog (planar)

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    family: str
    graph: SymmetricGraph
    tight: bool
    fixed_vertices: int
    fixed_edges: int

    @property
    def predicted_isostatic(self) -> bool:
        fv, fe = self.fixed_vertices, self.fixed_edges
        cond = {"Cs": fe == 1, "C2": fv == 0 and fe == 1, "C3": fv == 0}[self.family]
        return self.tight and cond


_FAMILY = {"Cs": ("Cs", 1, 2), "C2": ("Cn", 2, 2), "C3": ("Cn", 3, 3)}


def _bucket(x: int) -> int:
    return min(x, 3)


@lru_cache(maxsize=None)
def _perms_of_order(n: int, order: int) -> tuple:
    out = []
    for perm in itertools.permutations(range(n)):
        k, cur = 1, perm
        while cur != tuple(range(n)) and k <= order:
            cur = tuple(perm[c] for c in cur)
            k += 1
        if k == order and perm != tuple(range(n)):
            out.append(perm)
    return tuple(out)


def _graph_automorphisms(n, edges, order):
    es = {frozenset(e) for e in edges}
    return [perm for perm in _perms_of_order(n, order)
            if all(frozenset((perm[i], perm[j])) in es for i, j in edges)]


@lru_cache(maxsize=None)
def isostatic_catalog(max_n: int = 6) -> tuple[CatalogEntry, ...]:
    """One graph per (family, tightness, fixed-count bucket) found by search.

    Graphs with ``2n-3`` or ``2n-2`` edges on up to ``max_n`` vertices are
    scanned in lexicographic order; half-turn and three-fold actions with
    more than one fixed vertex are skipped because those vertices would all
    sit at the centre.  Buckets cap counts at 3.
    """
    found: dict = {}
    for n in range(3, max_n + 1):
        all_pairs = list(itertools.combinations(range(n), 2))
        for m in (2 * n - 3, 2 * n - 2):
            if n >= 6 and m != 2 * n - 3:
                continue
            for edges in itertools.combinations(all_pairs, m):
                if not _connected(n, edges):
                    continue
                tight = None
                for fam, (label, k, order) in _FAMILY.items():
                    for perm in _graph_automorphisms(n, edges, order):
                        fv = sum(perm[i] == i for i in range(n))
                        if fam in ("C2", "C3") and fv > 1:
                            continue
                        fe = sum(1 for i, j in edges if {perm[i], perm[j]} == {i, j})
                        if tight is None:
                            tight = is_kl_tight(n, list(edges), 2, 3)
                        key = (fam, tight, _bucket(fv), _bucket(fe))
                        if key in found:
                            continue
                        sg = make_symmetric_graph(n, edges, make_schoenflies(2, label, k), {1: list(perm)})
                        name = f"{fam}-n{n}-{'tight' if tight else 'loose'}-V{fv}-E{fe}"
                        found[key] = CatalogEntry(name, fam, sg, tight, fv, fe)
    return tuple(found[k] for k in sorted(found, key=lambda t: (t[0], not t[1], t[2], t[3])))


# -------------------------------------------- point-line instance families

def mirror_two_line_instances(count: int = 25, seed=0) -> list[PointHyperplaneFramework]:
    """Free mirror-symmetric point-line frameworks with exactly two lines."""
    G = make_schoenflies(2, "Cs")
    rng = _rng(seed)
    out = []
    while len(out) < count:
        k = int(rng.integers(1, 4))
        n0 = k + 1
        m = int(rng.choice([2 * n0 - 2, 2 * n0 - 1, 2 * n0 - 1, 2 * n0]))
        gg = random_gain_graph(G, n0, m, rng)
        sg = lift(gg)
        out.append(sample_symmetric(sg, "ph", 2, hyperplanes=lifted_vertices(gg, 0), seed=rng))
    return out


def half_turn_fixed_line_graph(k: int, h: int, seed=0, surplus: int = 0) -> tuple[SymmetricGraph, list[int]]:
    """Half-turn symmetric graph with ``k`` swapped point pairs and ``h`` fixed lines.

    Points are ``2t, 2t+1``; lines are ``2k..2k+h-1``.  Edge orbits are added
    in random order until ``2n - 3 + surplus`` edges are reached.
    """
    rng = _rng(seed)
    n = 2 * k + h
    swap = list(range(n))
    for t in range(k):
        swap[2 * t], swap[2 * t + 1] = 2 * t + 1, 2 * t
    lines = list(range(2 * k, n))
    orbits = set()
    for e in itertools.combinations(range(n), 2):
        img = tuple(sorted((swap[e[0]], swap[e[1]])))
        orbits.add(tuple(sorted({e, img})))
    orbits = sorted(orbits)
    target = 2 * n - 3 + surplus
    chosen: list = []
    for idx in rng.permutation(len(orbits)):
        orb = orbits[idx]
        if len(chosen) + len(orb) <= target:
            chosen.extend(orb)
        if len(chosen) == target:
            break
    G = make_schoenflies(2, "Cn", 2)
    return make_symmetric_graph(n, chosen, G, {1: swap}), lines


def half_turn_fixed_line_instances(count: int = 25, seed=0) -> list[PointHyperplaneFramework]:
    """Half-turn symmetric point-line frameworks with every line fixed."""
    rng = _rng(seed)
    out = []
    while len(out) < count:
        k = int(rng.integers(1, 4))
        h = int(rng.integers(1, 3))
        surplus = int(rng.choice([-1, 0, 0, 0, 1]))
        sg, lines = half_turn_fixed_line_graph(k, h, rng, surplus)
        if not _connected(sg.n, sg.edges):
            continue
        out.append(sample_symmetric(sg, "ph", 2, hyperplanes=lines, seed=rng))
    return out


# ------------------------------------------------------- group catalogues

SWAP_XZ = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])


@dataclass(frozen=True)
class CoverRow:
    """Group without ``-I`` and the catalog group of its double cover.

    ``conj @ cover @ conj.T`` reproduces the catalog matrices.
    """

    tag: str
    group: SymmetryGroup
    cover: SymmetryGroup
    conj: np.ndarray


def double_cover_rows(max_order: int = 6) -> list[CoverRow]:
    rows = [
        ("C1->Ci", ("Cn", 1), ("Ci", 1), None),
        ("Cs->C2h", ("Cs", 1), ("Cnh", 2), SWAP_XZ),
        ("C3->S6", ("Cn", 3), ("S2n", 3), None),
        ("C2->C2h", ("Cn", 2), ("Cnh", 2), None),
        ("C4->C4h", ("Cn", 4), ("Cnh", 4), None),
        ("C6->C6h", ("Cn", 6), ("Cnh", 6), None),
        ("C3v->D3d", ("Cnv", 3), ("Dnd", 3), None),
        ("C2v->D2h", ("Cnv", 2), ("Dnh", 2), None),
        ("C3h->C6h", ("Cnh", 3), ("Cnh", 6), None),
        ("S4->C4h", ("S2n", 2), ("Cnh", 4), None),
        ("D3->D3d", ("Dn", 3), ("Dnd", 3), None),
        ("D2->D2h", ("Dn", 2), ("Dnh", 2), None),
    ]
    out = []
    for tag, (l1, n1), (l2, n2), Q in rows:
        g = make_schoenflies(3, l1, n1)
        if g.order <= max_order:
            out.append(CoverRow(tag, g, make_schoenflies(3, l2, n2), np.eye(3) if Q is None else Q))
    return out
