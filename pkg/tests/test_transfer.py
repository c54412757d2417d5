import numpy as np
import pytest
from hypothesis import given, strategies as st

from symrigid import corpus
from symrigid.errors import (
    ContainsInversion,
    EquatorMismatch,
    NotOrbitClosed,
    NotOrthogonal,
    NotSymmetric,
)
from symrigid.forced import forced_rigidity, orbit_matrix
from symrigid.frameworks import (
    EuclideanFramework,
    PointHyperplaneFramework,
    SphericalFramework,
    Symmetry,
    analyze,
    rigidity_matrix,
    validate_symmetric,
)
from symrigid.groups import index2_subgroups, make_schoenflies
from symrigid.numerics import rank
from symrigid.transfer import (
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

seeds = st.integers(0, 10**6)


def excess(fw):
    r = analyze(fw)
    return r.nullity - r.trivial_dim


@given(seeds, st.integers(2, 3), st.integers(1, 8))
def test_partial_inversion_keeps_rank(seed, d, n):
    rng = np.random.default_rng(seed)
    fw = corpus.random_spherical(d, n, rng)
    I = [v for v in range(n) if rng.random() < 0.5]
    out = partial_inversion(fw, I)
    assert rank(rigidity_matrix(out)) == rank(rigidity_matrix(fw))
    assert np.allclose(partial_inversion(out, I).p, fw.p)


def test_inversion_must_be_orbit_closed():
    fw = corpus.random_symmetric_spherical(make_schoenflies(3, "Cn", 2), 2, 0)
    with pytest.raises(NotOrbitClosed):
        partial_inversion(fw, [0])
    orbit = [int(v) for v in fw.symmetry.action[:, 0]]
    assert validate_symmetric(partial_inversion(fw, orbit))


@given(seeds, st.integers(2, 3))
def test_projection_roundtrip(seed, d):
    rng = np.random.default_rng(seed)
    fw = corpus.random_ph(d, int(rng.integers(1, 6)), int(rng.integers(0, 3)), rng)
    sph = project_ph_to_sphere(fw)
    assert sph.X == fw.hyperplanes
    back = project_sphere_to_ph(sph)
    assert np.allclose(back.p[fw.points], fw.p[fw.points])
    for j in fw.hyperplanes:
        assert np.allclose(back.a[j], fw.a[j]) or np.allclose(back.a[j], -fw.a[j])
    assert excess(fw) == excess(sph) == excess(back)


def test_lower_hemisphere_is_flipped():
    fw = SphericalFramework(2, [(0, 1)], [[0.0, 0.6, -0.8], [0.0, 0.6, 0.8]])
    ph = project_sphere_to_ph(fw)
    # the lower point is negated as a whole before projecting
    assert np.allclose(ph.p[0], [0.0, -0.75]) and np.allclose(ph.p[1], [0.0, 0.75])


def test_flipped_normal_has_no_symmetric_sphere_image():
    G = make_schoenflies(2, "Cs")
    fw = PointHyperplaneFramework(2, [(0, 1)], 2, {0}, [[0, 0], [0.0, 1.0]], [[1.0, 0.0], [0, 0]], [0.0, 0.0],
                                  Symmetry(G, np.array([[0, 1], [0, 1]])))
    assert validate_symmetric(fw)
    with pytest.raises(NotSymmetric):
        project_ph_to_sphere(fw)


def test_symmetric_projection_carries_group():
    fw = corpus.mirror_two_line_example()
    sph = project_ph_to_sphere(fw)
    assert sph.symmetry.group.dim == 3 and validate_symmetric(sph)
    f0, f1 = forced_rigidity(fw), forced_rigidity(sph)
    assert f0.forced_nullity - f0.trivial_symmetric_dim == f1.forced_nullity - f1.trivial_symmetric_dim


@given(seeds)
def test_pairing_is_an_involution_and_keeps_ranks(seed):
    G = make_schoenflies(3, "Cnv", 2)
    fw = corpus.random_symmetric_spherical(G, 2, seed)
    for h in index2_subgroups(G):
        out, tw = pairing_transform(fw, h)
        assert validate_symmetric(out)
        assert rank(rigidity_matrix(out)) == rank(rigidity_matrix(fw))
        assert orbit_matrix(out).rank() == orbit_matrix(fw).rank()
        back, _ = pairing_transform(out, h)
        assert np.allclose(back.p, fw.p)


def test_pairing_rejects_inversion_groups():
    G = make_schoenflies(3, "Ci")
    fw = corpus.random_symmetric_spherical(G, 1, 0)
    with pytest.raises(ContainsInversion):
        pairing_transform(fw, G.subgroup({0}))


def test_double_cover_structure():
    G = make_schoenflies(3, "Cn", 3)
    fw = corpus.random_symmetric_spherical(G, 2, 4)
    out, H = double_cover(fw)
    assert H.order == 6 and out.n == 2 * fw.n
    assert np.allclose(out.p[fw.n:], -fw.p)
    assert validate_symmetric(out)
    assert not analyze(out).is_inf_rigid
    assert forced_rigidity(out).is_forced_rigid == forced_rigidity(fw).is_forced_rigid


@given(seeds)
def test_rotation_keeps_rank_and_conjugates(seed):
    fw = corpus.random_symmetric_spherical(make_schoenflies(3, "Cnv", 3), 1, seed)
    Q = axis_rotation([0.3, -0.2, 1.0], 0.7)
    out = rotate(fw, Q)
    assert validate_symmetric(out)
    assert rank(rigidity_matrix(out)) == rank(rigidity_matrix(fw))


def test_rotation_rejects_non_orthogonal():
    fw = corpus.random_spherical(2, 3, 0)
    with pytest.raises(NotOrthogonal):
        rotate(fw, np.diag([1.0, 1.0, 2.0]))


def test_rotate_off_equator():
    fw = SphericalFramework(2, [(0, 1)], [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]])
    out = rotate_off_equator(fw, [0.0, 1.0, 0.0], seed=1)
    assert not out.X
    assert rank(rigidity_matrix(out)) == rank(rigidity_matrix(fw))
    with pytest.raises(EquatorMismatch):
        rotate_off_equator(fw, [1.0, 0.0, 0.0])


def test_pair_with_fixed_grab_bucket():
    fw = corpus.grab_bucket_example()
    out = pair_with_fixed(fw)
    assert out.symmetry.group.order == 2 and validate_symmetric(out)
    assert excess(out) == excess(fw)
    f0, f1 = forced_rigidity(fw), forced_rigidity(out)
    assert f0.forced_nullity - f0.trivial_symmetric_dim == f1.forced_nullity - f1.trivial_symmetric_dim


def test_pair_with_fixed_path():
    fw = corpus.path_mirror_example()
    out = pair_with_fixed(fw)
    assert excess(out) == excess(fw)
    assert analyze(out).is_isostatic == analyze(fw).is_isostatic


def test_pair_with_fixed_errors():
    G = make_schoenflies(2, "Cs")
    off_mirror = EuclideanFramework(1, [], [[0.5, 1.0]], Symmetry(G, np.array([[0], [0]])))
    with pytest.raises(NotSymmetric):
        pair_with_fixed(off_mirror)
    # a swapped pair that collapses onto the mirror has no half-turn image
    collapsed = EuclideanFramework(2, [(0, 1)], [[0.0, 1.0], [0.0, 1.0]], Symmetry(G, np.array([[0, 1], [1, 0]])))
    with pytest.raises(EquatorMismatch):
        pair_with_fixed(collapsed)
    with pytest.raises(NotSymmetric):
        pair_with_fixed(corpus.k4e_fixture())
