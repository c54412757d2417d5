from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symrigid import numerics
from symrigid.numerics import TolerancePolicy

EXACT = TolerancePolicy(mode="exact")


def fraction_rank(rows) -> int:
    """Independent oracle: textbook elimination over Fractions."""
    A = [[Fraction(int(x)) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(A[0]) if A else 0
    while rank < len(A) and col < ncols:
        piv = next((i for i in range(rank, len(A)) if A[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(len(A)):
            if i != rank and A[i][col] != 0:
                f = A[i][col] / A[rank][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
        col += 1
    return rank


int_matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.integers(1, 4).flatmap(
            lambda k: st.tuples(
                st.lists(st.lists(st.integers(-3, 3), min_size=k, max_size=k), min_size=r, max_size=r),
                st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=k, max_size=k),
            ))))


def test_rank_of_identity_and_zero():
    assert numerics.rank(np.eye(4)) == 4
    assert numerics.rank(np.zeros((3, 5))) == 0
    assert numerics.rank(np.zeros((0, 3))) == 0


@given(int_matrices)
def test_float_and_exact_rank_agree_with_oracle(pair):
    B, C = (np.array(x, dtype=float) for x in pair)
    M = B @ C
    expected = fraction_rank(M.tolist())
    assert numerics.rank(M, EXACT) == expected
    assert numerics.rank(M) == expected


@given(int_matrices)
def test_kernel_basis_is_orthonormal_null_space(pair):
    B, C = (np.array(x, dtype=float) for x in pair)
    M = B @ C
    K = numerics.kernel_basis(M)
    assert K.shape[1] == M.shape[1] - numerics.rank(M)
    assert np.allclose(M @ K, 0, atol=1e-9)
    assert np.allclose(K.T @ K, np.eye(K.shape[1]), atol=1e-12)


@given(int_matrices, int_matrices)
def test_intersection_dimension(p1, p2):
    A = np.array(p1[0], dtype=float) @ np.array(p1[1], dtype=float)
    B = np.array(p2[0], dtype=float) @ np.array(p2[1], dtype=float)
    rows = min(A.shape[0], B.shape[0])
    A, B = A[:rows], B[:rows]
    inter = numerics.intersect(A, B)
    expected = fraction_rank(A.tolist()) + fraction_rank(B.tolist()) - fraction_rank(np.hstack([A, B]).tolist())
    assert inter.shape[1] == expected


def test_relative_tolerance_decides_near_singular():
    M = np.diag([1.0, 1e-11])
    assert numerics.rank(M) == 1
    assert numerics.rank(M, 1e-12) == 2


def test_env_var_overrides_default(monkeypatch):
    monkeypatch.setenv("SYMRIGID_TOL", "1e-3")
    assert numerics.default_policy().relative_tol == 1e-3
    assert numerics.rank(np.diag([1.0, 1e-4])) == 1


def test_policy_validation():
    with pytest.raises(ValueError):
        TolerancePolicy(relative_tol=0)
    with pytest.raises(ValueError):
        TolerancePolicy(mode="fuzzy")


def test_exact_mode_size_limit_and_finiteness():
    with pytest.raises(ValueError):
        numerics.rank(np.ones((61, 2)), EXACT)
    with pytest.raises(ValueError):
        numerics.rank(np.array([[np.nan, 1.0]]))


def test_symmetrize_projector_is_idempotent():
    # swap two planar vertices under a half-turn
    R = -np.eye(2)
    action = np.array([[0, 1], [1, 0]])
    blocks = [[np.eye(2), np.eye(2)], [R, R]]
    P = numerics.symmetrize_projector(action, blocks)
    assert np.allclose(P @ P, P)
    V = numerics.projector_image(P)
    assert V.shape[1] == 2
    # symmetric velocities satisfy u_1 = R u_0
    assert np.allclose(V[2:], R @ V[:2])
