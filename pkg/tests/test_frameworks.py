from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symrigid import corpus
from symrigid.errors import EquatorMismatch, NotSymmetric, SpanDeficient
from symrigid.frameworks import (
    EuclideanFramework,
    PointHyperplaneFramework,
    SphericalFramework,
    Symmetry,
    analyze,
    epsilon_transform,
    hyperplane_signs,
    is_spanning,
    make_ph,
    normalize_signs,
    rigidity_matrix,
    sample_regular,
    sample_symmetric,
    trivial_motion_basis,
    trivial_motions,
    validate_symmetric,
    with_symmetry,
)
from symrigid.groups import make_schoenflies
from symrigid.numerics import rank
from symrigid.symgraph import lift, make_symmetric_graph

seeds = st.integers(0, 10**6)


def constraint_values(fw, x):
    """Independent constraint functions on a flat coordinate vector."""
    if isinstance(fw, EuclideanFramework):
        P = x.reshape(fw.n, fw.d)
        return np.array([np.sum((P[i] - P[j]) ** 2) / 2 for i, j in fw.edges])
    if isinstance(fw, SphericalFramework):
        P = x.reshape(fw.n, fw.d + 1)
        return np.array([P[i] @ P[j] for i, j in fw.edges] + [P[i] @ P[i] / 2 for i in range(fw.n)])
    d, off, H = fw.d, fw.offsets, fw.hyperplanes
    pt = {i: x[off[i]:off[i] + d] for i in fw.points}
    ln = {j: (x[off[j]:off[j] + d], x[off[j] + d]) for j in H}
    out = []
    for i, j in fw.edges:
        if i in H and j in H:
            out.append(ln[i][0] @ ln[j][0])
        elif i in H or j in H:
            p, (a, r) = (pt[j], ln[i]) if i in H else (pt[i], ln[j])
            out.append(a @ p + r)
        else:
            out.append(np.sum((pt[i] - pt[j]) ** 2) / 2)
    out += [ln[j][0] @ ln[j][0] / 2 for j in sorted(H)]
    return np.array(out)


def flat(fw):
    if isinstance(fw, PointHyperplaneFramework):
        x = np.zeros(sum(fw.widths))
        for i in fw.points:
            x[fw.offsets[i]:fw.offsets[i] + fw.d] = fw.p[i]
        for j in fw.hyperplanes:
            x[fw.offsets[j]:fw.offsets[j] + fw.d] = fw.a[j]
            x[fw.offsets[j] + fw.d] = fw.r[j]
        return x
    return fw.p.ravel().copy()


def jacobian(fw, h=1e-6):
    x = flat(fw)
    cols = []
    for k in range(len(x)):
        e = np.zeros_like(x)
        e[k] = h
        cols.append((constraint_values(fw, x + e) - constraint_values(fw, x - e)) / (2 * h))
    return np.array(cols).T


def random_framework(kind, seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 4))
    n = int(rng.integers(2, 7))
    if kind == "euclidean":
        ph = corpus.random_ph(d, n, 0, rng)
        return EuclideanFramework(ph.n, ph.edges, ph.p)
    if kind == "spherical":
        return corpus.random_spherical(d, n, rng)
    return corpus.random_ph(d, n, int(rng.integers(0, 3)), rng)


kinds = st.sampled_from(["euclidean", "spherical", "ph"])


@given(kinds, seeds)
def test_matrix_row_space_matches_finite_differences(kind, seed):
    fw = random_framework(kind, seed)
    R, J = rigidity_matrix(fw), jacobian(fw)
    assert R.shape == J.shape
    assert np.allclose(R, J, atol=1e-6)


@given(kinds, seeds)
def test_trivial_motions_are_motions(kind, seed):
    fw = random_framework(kind, seed)
    T = trivial_motions(fw)
    assert T.shape[1] == comb(fw.d + 1, 2)
    assert np.allclose(rigidity_matrix(fw) @ T, 0, atol=1e-9)


@given(kinds, seeds)
def test_nullity_bounds_and_rigidity(kind, seed):
    fw = random_framework(kind, seed)
    rep = analyze(fw)
    if is_spanning(fw):
        assert rep.trivial_dim == comb(fw.d + 1, 2)
        assert rep.nullity >= rep.trivial_dim
        assert rep.is_inf_rigid == (rep.nullity == rep.trivial_dim)
    if rep.is_isostatic:
        assert rep.is_inf_rigid


def test_triangle_and_square():
    k3 = EuclideanFramework(3, [(0, 1), (1, 2), (0, 2)], [[0, 0], [1, 0.1], [0.3, 1.2]])
    r = analyze(k3)
    assert r.is_inf_rigid and r.is_isostatic and r.rank == 3
    sq = EuclideanFramework(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [[0, 0], [1, 0], [1, 1], [0, 1]])
    r = analyze(sq)
    assert not r.is_inf_rigid and r.nullity == 4


def test_k4_has_every_edge_redundant():
    p = [[0, 0], [1, 0.2], [0.4, 1.1], [-0.5, 0.7]]
    fw = EuclideanFramework(4, [(i, j) for i in range(4) for j in range(i + 1, 4)], p)
    r = analyze(fw, details=True)
    assert r.is_inf_rigid and not r.is_isostatic and len(r.redundant_edges) == 6


def test_point_and_line():
    # one point on one line in the plane: 5 coordinates, 2 rows, 3 trivial motions
    fw = make_ph(2, [(0, 1)], 2, {0: [0.3, 0.7]}, {1: ([0.0, 2.0], 1.0)})
    assert np.allclose(fw.a[1], [0, 1]) and fw.r[1] == 0.5
    r = analyze(fw)
    assert r.rank == 2 and r.is_inf_rigid and r.is_isostatic
    assert fw.edge_kind((0, 1)) == "PH"


def test_collinear_points_are_span_deficient():
    # in the plane a line still carries all 3 trivial motions; in space the axial spin is lost
    assert is_spanning(EuclideanFramework(3, [(0, 1), (1, 2)], [[0, 0], [1, 0], [2, 0]]))
    fw = EuclideanFramework(3, [(0, 1), (1, 2)], [[0, 0, 0], [1, 0, 0], [2, 0, 0]])
    assert not is_spanning(fw)
    assert analyze(fw).span_deficient
    with pytest.raises(SpanDeficient):
        trivial_motion_basis(fw, strict=True)


def test_spherical_validation():
    with pytest.raises(ValueError):
        SphericalFramework(1, [], [[1.0, 1.0, 0.0]])
    with pytest.raises(EquatorMismatch):
        SphericalFramework(1, [], [[1.0, 0.0, 0.0]], X=[])
    fw = SphericalFramework(2, [(0, 1)], [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]])
    assert fw.X == {0}


def test_epsilon_transform_rejects_bad_signs():
    with pytest.raises(ValueError):
        epsilon_transform(np.eye(3), [1, 0.5, 1], [], 1)


def test_symmetry_validation():
    fw = corpus.k4e_fixture()
    assert validate_symmetric(fw)
    moved = EuclideanFramework(4, fw.edges, fw.p + [[0.1, 0], [0, 0], [0, 0], [0, 0]], fw.symmetry)
    assert not validate_symmetric(moved)
    with pytest.raises(NotSymmetric):
        with_symmetry(EuclideanFramework(4, fw.edges, moved.p), fw.symmetry.group, fw.symmetry.action)


def test_flipped_normal_sign():
    # a line through the origin perpendicular to the mirror keeps its set but flips its normal
    G = make_schoenflies(2, "Cs")
    fw = PointHyperplaneFramework(1, [], 2, {0}, np.zeros((1, 2)), [[1.0, 0.0]], [0.0],
                                  Symmetry(G, np.array([[0], [0]])))
    assert validate_symmetric(fw)
    assert hyperplane_signs(fw)[1, 0] == -1


def test_swapped_lines_must_be_mirror_images():
    G = make_schoenflies(2, "Cs")
    act = np.array([[0, 1], [1, 0]])
    # the mirror sends (0.6, 0.8; 0.5) to (-0.6, 0.8; 0.5), stored here with both signs flipped
    good = make_ph(2, [], 2, {}, {0: ([0.6, 0.8], 0.5), 1: ([0.6, -0.8], -0.5)})
    assert validate_symmetric(good, G, act)
    bad = make_ph(2, [], 2, {}, {0: ([0.6, 0.8], 0.5), 1: ([0.6, -0.8], 0.5)})
    assert not validate_symmetric(bad, G, act)


@given(seeds, st.sampled_from([("Cs", 1), ("Cn", 2), ("Cn", 3), ("Cnv", 2)]))
def test_sampled_frameworks_are_symmetric(seed, params):
    G = make_schoenflies(2, *params)
    sg = lift(corpus.random_gain_graph(G, 2, 3, seed))
    fw = sample_symmetric(sg, "euclidean", 2, seed=seed)
    assert validate_symmetric(fw)
    best = sample_regular(sg, "euclidean", 2, seed=seed)
    for t in range(3):
        one = sample_symmetric(sg, "euclidean", 2, seed=np.random.default_rng([seed, t]))
        assert rank(rigidity_matrix(best)) >= rank(rigidity_matrix(one))


def test_fixed_vertex_sits_at_centre():
    C3 = make_schoenflies(2, "Cn", 3)
    sg = make_symmetric_graph(4, [(0, 1), (0, 2), (0, 3)], C3, {1: [0, 2, 3, 1]})
    fw = sample_symmetric(sg, "euclidean", 2, seed=1)
    assert np.allclose(fw.p[0], 0)


def test_normalize_signs_makes_hyperplane_orbits_consistent():
    G = make_schoenflies(2, "Cn", 2)
    sym = Symmetry(G, np.array([[0, 1], [1, 0]]))
    fw = make_ph(2, [], 2, {}, {0: ([0.6, 0.8], 0.5), 1: ([0.6, 0.8], -0.5)}, sym)
    assert validate_symmetric(fw)
    nf = normalize_signs(fw)
    assert (hyperplane_signs(nf) == 1).all()
