"""Symmetric graphs, quotient gain graphs, balance and gain-sparsity counts.

Conventions
-----------
* ``action[g, v]`` is the image of vertex ``v`` under group element ``g``;
  ``action[mult[g, h]] == action[g][action[h]]``.
* Quotient representatives are the smallest vertex index in each orbit and
  orbit ids are ordered by representative.
* A gain edge ``(i, j, a)`` stands for the edge orbit ``{g*i, g*a*j}``.
  Non-loop edges are oriented from the smaller orbit id to the larger.
  A loop keeps whichever of ``a``, ``a^-1`` has the smaller id.
* Balance potentials follow ``phi(head) = phi(tail) * gain``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ActionNotFree, ActionNotHomomorphism, NotAutomorphism
from .groups import SymmetryGroup, trivial_group

Edge = tuple[int, int]
GainEdge = tuple[int, int, int]


def _norm_edges(edges: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    out = set()
    for e in edges:
        i, j = int(e[0]), int(e[1])
        if i == j:
            raise ValueError(f"self-loop {i} not allowed in a simple graph")
        out.add((min(i, j), max(i, j)))
    return tuple(sorted(out))


@dataclass(frozen=True, eq=False)
class SymmetricGraph:
    n: int
    edges: tuple[Edge, ...]
    group: SymmetryGroup
    action: np.ndarray

    @property
    def free_on_vertices(self) -> bool:
        fixed = self.action[1:] == np.arange(self.n)
        return not fixed.any()

    def orbits(self) -> list[list[int]]:
        """Vertex orbits, each sorted, ordered by smallest member."""
        seen = set()
        out = []
        for v in range(self.n):
            if v in seen:
                continue
            orb = sorted(set(int(x) for x in self.action[:, v]))
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, v: int) -> list[int]:
        return [g for g in range(self.group.order) if self.action[g, v] == v]

    def is_orbit_closed(self, subset) -> bool:
        s = set(int(v) for v in subset)
        return all(int(self.action[g, v]) in s for v in s for g in range(self.group.order))


def _validate_action(n, edges, group, action):
    N = group.order
    if action.shape != (N, n):
        raise ActionNotHomomorphism("action must have one permutation per element")
    for g in range(N):
        if sorted(action[g]) != list(range(n)):
            raise ActionNotHomomorphism(f"element {g} does not act by a permutation")
    if not np.array_equal(action[0], np.arange(n)):
        raise ActionNotHomomorphism("identity must act trivially")
    for g in range(N):
        for h in range(N):
            if not np.array_equal(action[group.mult[g, h]], action[g][action[h]]):
                raise ActionNotHomomorphism("action is not a homomorphism")
    eset = set(edges)
    for g in range(N):
        for i, j in edges:
            a, b = action[g, i], action[g, j]
            if (min(a, b), max(a, b)) not in eset:
                raise NotAutomorphism(f"element {g} maps edge {(i, j)} to a non-edge")


def make_symmetric_graph(n: int, edges, group: SymmetryGroup | None = None,
                         generator_perms: dict[int, Sequence[int]] | None = None) -> SymmetricGraph:
    """Close generator permutations into a full action and validate it.

    ``generator_perms`` maps group element ids to vertex permutations; the
    listed elements must generate the group.
    """
    edges = _norm_edges(edges)
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge {(i, j)} out of range")
    if group is None:
        group = trivial_group(2)
    generator_perms = generator_perms or {}
    N = group.order
    action = np.full((N, n), -1, dtype=int)
    action[0] = np.arange(n)
    gens = {int(g): np.asarray(p, dtype=int) for g, p in generator_perms.items()}
    for g, p in gens.items():
        if p.shape != (n,) or sorted(p) != list(range(n)):
            raise ActionNotHomomorphism(f"generator {g} is not a permutation of the vertices")
    known = [0]
    i = 0
    while i < len(known):
        x = known[i]
        for s, ps in gens.items():
            y = int(group.mult[x, s])
            img = action[x][ps]
            if action[y, 0] < 0:
                action[y] = img
                known.append(y)
            elif not np.array_equal(action[y], img):
                raise ActionNotHomomorphism("generator permutations violate a group relation")
        i += 1
    if len(known) != N:
        raise ActionNotHomomorphism("listed generators do not generate the group")
    _validate_action(n, edges, group, action)
    return SymmetricGraph(n, edges, group, action)


def symmetric_graph_from_action(n: int, edges, group: SymmetryGroup, action) -> SymmetricGraph:
    edges = _norm_edges(edges)
    action = np.asarray(action, dtype=int)
    _validate_action(n, edges, group, action)
    return SymmetricGraph(n, edges, group, action)


@dataclass(frozen=True)
class FixedCounts:
    vertices: dict[int, int]
    edges: dict[int, int]

    def for_element(self, g: int) -> tuple[int, int]:
        return self.vertices[g], self.edges[g]


def fixed_counts(sg: SymmetricGraph) -> FixedCounts:
    """``|V_g|`` and ``|E_g|`` for every non-identity element ``g``."""
    fv, fe = {}, {}
    for g in range(1, sg.group.order):
        perm = sg.action[g]
        fv[g] = int(np.count_nonzero(perm == np.arange(sg.n)))
        cnt = 0
        for i, j in sg.edges:
            if (perm[i] == i and perm[j] == j) or (perm[i] == j and perm[j] == i):
                cnt += 1
        fe[g] = cnt
    return FixedCounts(fv, fe)


@dataclass(frozen=True, eq=False)
class GainGraph:
    n: int
    edges: tuple[GainEdge, ...]
    group: SymmetryGroup

    def __post_init__(self):
        for t, h, a in self.edges:
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise ValueError(f"gain edge {(t, h, a)} out of range")
            if not 0 <= a < self.group.order:
                raise ValueError(f"gain {a} is not a group element")
            if t == h and a == 0:
                raise ValueError("loops must have non-identity gain")


def make_gain_graph(n: int, edges, group: SymmetryGroup) -> GainGraph:
    return GainGraph(n, tuple((int(t), int(h), int(a)) for t, h, a in edges), group)


@dataclass(frozen=True)
class Quotient:
    """Quotient gain graph plus the relabeling ``v -> (orbit, element)``."""

    gain_graph: GainGraph
    orbit_of: np.ndarray
    element_of: np.ndarray
    representatives: tuple[int, ...]


def quotient(sg: SymmetricGraph) -> Quotient:
    if not sg.free_on_vertices:
        raise ActionNotFree("gains are only defined for free actions")
    G = sg.group
    orbits = sg.orbits()
    reps = tuple(o[0] for o in orbits)
    orbit_of = np.empty(sg.n, dtype=int)
    element_of = np.empty(sg.n, dtype=int)
    for k, r in enumerate(reps):
        for g in range(G.order):
            v = int(sg.action[g, r])
            orbit_of[v] = k
            element_of[v] = g
    seen = set()
    gedges = []
    for e in sg.edges:
        if e in seen:
            continue
        orb = set()
        for g in range(G.order):
            a, b = sg.action[g, e[0]], sg.action[g, e[1]]
            orb.add((min(a, b), max(a, b)))
        seen |= orb
        u, w = e
        if orbit_of[u] > orbit_of[w]:
            u, w = w, u
        i, j = int(orbit_of[u]), int(orbit_of[w])
        alpha = int(G.mult[G.inv[element_of[u]], element_of[w]])
        if i == j:
            alpha = min(alpha, int(G.inv[alpha]))
        gedges.append((i, j, alpha))
    gedges.sort()
    return Quotient(GainGraph(len(reps), tuple(gedges), G), orbit_of, element_of, reps)


def quotient_gain_graph(sg: SymmetricGraph) -> GainGraph:
    return quotient(sg).gain_graph


def lift(gg: GainGraph) -> SymmetricGraph:
    """Covering graph: vertex ``(i, g)`` has index ``i*|G| + g``."""
    G = gg.group
    N = G.order
    n = gg.n * N
    edges = set()
    for t, h, a in gg.edges:
        new = set()
        for g in range(N):
            u = t * N + g
            w = h * N + int(G.mult[g, a])
            new.add((min(u, w), max(u, w)))
        if new & edges:
            raise ValueError("gain edges with coinciding lifts; the lift is not simple")
        edges |= new
    action = np.empty((N, n), dtype=int)
    for g in range(N):
        for i in range(gg.n):
            action[g, i * N:(i + 1) * N] = i * N + G.mult[g]
    return SymmetricGraph(n, tuple(sorted(edges)), G, action)


def _potentials(gg: GainGraph, F: Sequence[int], order: Sequence[int] | None = None):
    G = gg.group
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for k in F:
        t, h, a = gg.edges[k]
        adj.setdefault(t, []).append((k, h, a))
        adj.setdefault(h, []).append((k, t, int(G.inv[a])))
    verts = list(adj) if order is None else [v for v in order if v in adj]
    phi: dict[int, int] = {}
    tree = set()
    for root in verts:
        if root in phi:
            continue
        phi[root] = 0
        stack = [root]
        while stack:
            x = stack.pop()
            for k, y, a in adj[x]:
                if y not in phi:
                    phi[y] = int(G.mult[phi[x], a])
                    tree.add(k)
                    stack.append(y)
    return phi, tree


def is_balanced(gg: GainGraph, F: Iterable[int] | None = None, order: Sequence[int] | None = None) -> bool:
    """True iff every closed walk in ``F`` has identity gain.

    ``order`` fixes the order in which roots are tried; any order gives the
    same verdict.
    """
    F = list(range(len(gg.edges))) if F is None else list(F)
    G = gg.group
    phi, tree = _potentials(gg, F, order)
    for k in F:
        if k in tree:
            continue
        t, h, a = gg.edges[k]
        if int(G.mult[G.mult[phi[t], a], G.inv[phi[h]]]) != 0:
            return False
    return True


def _check_params(k, l, m):
    if k < 1 or not (0 <= m <= l <= 2 * k - 1):
        raise ValueError(f"need k >= 1 and 0 <= m <= l <= 2k-1, got {(k, l, m)}")


@dataclass(frozen=True)
class SparsityVerdict:
    sparse: bool
    violation: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.sparse


def _support(gg: GainGraph, F) -> int:
    vs = set()
    for k in F:
        t, h, _ = gg.edges[k]
        vs.add(t)
        vs.add(h)
    return len(vs)


def _violates(gg, F, k, l, m) -> bool:
    if not F:
        return False
    cap = k * _support(gg, F)
    if len(F) > cap - m:
        return True
    return len(F) > cap - l and is_balanced(gg, F)


def _find_violation(gg: GainGraph, E: Sequence[int], k: int, l: int, m: int):
    """Some violating subset of ``E``, or ``None``.

    Only vertex supports are enumerated: on a support ``U`` the largest edge
    set is the induced one, and every balanced set sits inside the edges that
    agree with some potential ``U -> G`` (switching leaves balance intact).
    """
    G = gg.group
    by_support: dict[int, list[int]] = {}
    verts = sorted({gg.edges[e][0] for e in E} | {gg.edges[e][1] for e in E})
    pos = {v: s for s, v in enumerate(verts)}
    masks = {}
    for e in E:
        t, h, _ = gg.edges[e]
        masks[e] = (1 << pos[t]) | (1 << pos[h])
    for U in range(1, 1 << len(verts)):
        induced = [e for e in E if masks[e] & U == masks[e]]
        if not induced:
            continue
        size = bin(U).count("1")
        cap = k * size
        if len(induced) > cap - m and _support(gg, induced) == size:
            return induced
        if len(induced) <= cap - l:
            continue
        members = [verts[s] for s in range(len(verts)) if U >> s & 1]
        for tail in itertools.product(range(G.order), repeat=size - 1):
            phi = dict(zip(members, (0,) + tail))
            cons = [e for e in induced
                    if int(G.mult[phi[gg.edges[e][0]], gg.edges[e][2]]) == phi[gg.edges[e][1]]]
            if cons and len(cons) > cap - l and _support(gg, cons) == size:
                return cons
    return None


def _shrink(gg, F, k, l, m):
    F = list(F)
    changed = True
    while changed:
        changed = False
        for e in list(F):
            rest = [x for x in F if x != e]
            if _violates(gg, rest, k, l, m):
                F = rest
                changed = True
                break
    return tuple(sorted(F))


def is_gain_sparse(gg: GainGraph, k: int, l: int, m: int, F: Iterable[int] | None = None) -> SparsityVerdict:
    """Decide (k,l,m)-gain-sparsity of the edge subset ``F`` (default: all).

    On failure the verdict carries an inclusion-minimal violating subset.
    """
    _check_params(k, l, m)
    E = list(range(len(gg.edges))) if F is None else sorted(set(F))
    bad = _find_violation(gg, E, k, l, m)
    if bad is None:
        return SparsityVerdict(True)
    return SparsityVerdict(False, _shrink(gg, bad, k, l, m))


def is_gain_tight(gg: GainGraph, k: int, l: int, m: int, F: Iterable[int] | None = None) -> bool:
    E = list(range(len(gg.edges))) if F is None else sorted(set(F))
    return len(E) == k * gg.n - m and bool(is_gain_sparse(gg, k, l, m, E))


def has_spanning_gain_tight(gg: GainGraph, k: int, l: int, m: int) -> tuple[int, ...] | None:
    """Lexicographically least spanning (k,l,m)-gain-tight edge subset, or ``None``."""
    _check_params(k, l, m)
    target = k * gg.n - m
    E = len(gg.edges)
    if target < 0 or target > E:
        return None
    if target == 0:
        return ()
    chosen: list[int] = []
    for e in range(E):
        if len(chosen) == target:
            break
        if _find_violation(gg, chosen + [e], k, l, m) is None:
            chosen.append(e)
    if len(chosen) == target:
        return tuple(chosen)

    # greedy stalled; exhaustive lexicographic search
    def extend(prefix: list[int], start: int):
        if len(prefix) == target:
            return tuple(prefix)
        for e in range(start, E - (target - len(prefix)) + 1):
            cand = prefix + [e]
            if _find_violation(gg, cand, k, l, m) is None:
                found = extend(cand, e + 1)
                if found is not None:
                    return found
        return None

    return extend([], 0)


def pebble_game(n: int, edges: Sequence[Edge], k: int = 2, l: int = 3) -> tuple[bool, list[int]]:
    """(k, l) pebble game for multigraphs with ``0 <= l < 2k``.

    Returns ``(sparse, accepted)`` where ``accepted`` lists the indices of a
    maximal (k, l)-sparse subset built in edge order.
    """
    pebbles = [k] * n
    out: list[list[int]] = [[] for _ in range(n)]  # directed edges v -> w

    def search(root, blocked):
        # find a pebble reachable from root, avoiding blocked vertices; reverse the path
        parent = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            if x not in blocked and x != root and pebbles[x] > 0:
                pebbles[x] -= 1
                y = x
                while parent[y] is not None:
                    p = parent[y]
                    out[p].remove(y)
                    out[y].append(p)
                    y = p
                pebbles[root] += 1
                return True
            for y in out[x]:
                if y not in parent and y not in blocked:
                    parent[y] = x
                    stack.append(y)
        return False

    accepted = []
    for idx, (u, v) in enumerate(edges):
        if u == v:
            need = l + 1
            if k < need:
                continue
        while pebbles[u] + pebbles[v] < l + 1:
            if not (search(u, {v}) or search(v, {u})):
                break
        if pebbles[u] + pebbles[v] >= l + 1:
            if pebbles[u] > 0:
                pebbles[u] -= 1
                out[u].append(v)
            else:
                pebbles[v] -= 1
                out[v].append(u)
            accepted.append(idx)
    return len(accepted) == len(edges), accepted


def is_kl_tight(n: int, edges: Sequence[Edge], k: int = 2, l: int = 3) -> bool:
    """Plain (k, l)-tightness: sparse with ``|E| = k|V| - l``."""
    edges = list(edges)
    if len(edges) != k * n - l:
        return False
    return pebble_game(n, edges, k, l)[0]
