"""Tolerance-governed dense linear algebra.

Every rank decision in the package goes through :func:`rank`, so the
cutoff policy lives in exactly one place.  The default relative cutoff is
``1e-9`` and can be overridden with the ``SYMRIGID_TOL`` environment
variable.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9
EXACT_MAX_SIZE = 60


@dataclass(frozen=True)
class TolerancePolicy:
    """Singular-value cutoff relative to the largest singular value.

    ``mode="exact"`` switches :func:`rank` to rational Gaussian elimination;
    float entries are converted exactly (as binary rationals).
    """

    relative_tol: float = DEFAULT_TOL
    mode: str = "float"

    def __post_init__(self):
        if not self.relative_tol > 0:
            raise ValueError("relative_tol must be positive")
        if self.mode not in ("float", "exact"):
            raise ValueError(f"unknown tolerance mode {self.mode!r}")


def default_policy() -> TolerancePolicy:
    env = os.environ.get("SYMRIGID_TOL")
    if env:
        return TolerancePolicy(relative_tol=float(env))
    return TolerancePolicy()


def as_policy(tol: TolerancePolicy | float | None) -> TolerancePolicy:
    if tol is None:
        return default_policy()
    if isinstance(tol, TolerancePolicy):
        return tol
    return TolerancePolicy(relative_tol=float(tol))


def _check_finite(M: np.ndarray) -> None:
    if M.size and not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")


def _exact_rank(M) -> int:
    rows = [[Fraction(x) for x in row] for row in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f / pr[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r


def rank(M, tol: TolerancePolicy | float | None = None) -> int:
    """Numerical rank of ``M``.

    Counts singular values above ``relative_tol * sigma_max``.  In exact mode
    the matrix (at most 60x60) is row reduced over the rationals.
    """
    policy = as_policy(tol)
    if policy.mode == "exact":
        arr = np.asarray(M, dtype=object)
        if arr.size == 0:
            return 0
        if max(arr.shape) > EXACT_MAX_SIZE:
            raise ValueError("exact rank limited to 60x60 matrices")
        return _exact_rank(arr.tolist())
    A = np.asarray(M, dtype=float)
    if A.size == 0:
        return 0
    _check_finite(A)
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > policy.relative_tol * s[0]))


def kernel_basis(M, tol: TolerancePolicy | float | None = None) -> np.ndarray:
    """Orthonormal basis (as columns) of the null space of ``M``."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a 2D matrix")
    n = A.shape[1]
    if A.shape[0] == 0 or n == 0:
        return np.eye(n)
    _check_finite(A)
    policy = as_policy(tol)
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    r = 0 if s[0] == 0.0 else int(np.count_nonzero(s > policy.relative_tol * s[0]))
    return vt[r:].T.copy()


def column_basis(A, tol: TolerancePolicy | float | None = None) -> np.ndarray:
    """Orthonormal basis of the column space of ``A``."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return np.zeros((A.shape[0], 0))
    _check_finite(A)
    policy = as_policy(tol)
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    r = 0 if s[0] == 0.0 else int(np.count_nonzero(s > policy.relative_tol * s[0]))
    return u[:, :r].copy()


def intersect(A, B, tol: TolerancePolicy | float | None = None) -> np.ndarray:
    """Orthonormal basis of ``span(A) ∩ span(B)``.

    Computed as the kernel of the stacked complement projectors
    ``[I - QA QA^T; I - QB QB^T]``, with an absolute cutoff.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape[0] != B.shape[0]:
        raise ValueError("intersect: row counts differ")
    n = A.shape[0]
    QA = column_basis(A, tol)
    QB = column_basis(B, tol)
    if QA.shape[1] == 0 or QB.shape[1] == 0:
        return np.zeros((n, 0))
    eye = np.eye(n)
    stacked = np.vstack([eye - QA @ QA.T, eye - QB @ QB.T])
    # projector singular values live on a fixed scale, so the cutoff is
    # absolute; a relative one would promote rounding noise to full rank
    _, s, vt = np.linalg.svd(stacked, full_matrices=True)
    r = int(np.count_nonzero(s > as_policy(tol).relative_tol))
    return vt[r:].T.copy()


def symmetrize_projector(
    action: np.ndarray,
    blocks: Sequence[Sequence[np.ndarray]],
    offsets: Sequence[int] | None = None,
) -> np.ndarray:
    """Average of the operators ``T_g`` over the group.

    ``action[g, i]`` is the image of vertex ``i`` under element ``g`` and
    ``blocks[g][i]`` maps the velocity of ``i`` to that of ``action[g, i]``.
    Vertex ``i`` owns columns ``offsets[i] : offsets[i] + width_i`` where the
    width is read off ``blocks[0][i]``; by default blocks are contiguous in
    vertex order.  The image of the returned projector is the space of
    velocities with ``blocks[g][i] @ u_i == u_{g i}`` for all ``g, i``.
    """
    action = np.asarray(action, dtype=int)
    order, n = action.shape
    if len(blocks) != order:
        raise ValueError("one block list per group element required")
    widths = [np.asarray(blocks[0][i]).shape[0] for i in range(n)]
    if offsets is None:
        offsets = np.concatenate([[0], np.cumsum(widths)[:-1]]).astype(int) if n else []
    N = int(sum(widths))
    P = np.zeros((N, N))
    for g in range(order):
        if len(blocks[g]) != n:
            raise ValueError("one block per vertex required")
        for i in range(n):
            j = action[g, i]
            blk = np.asarray(blocks[g][i], dtype=float)
            if blk.shape != (widths[j], widths[i]):
                raise ValueError("block shape does not match vertex widths")
            oi, oj = offsets[i], offsets[j]
            P[oj:oj + widths[j], oi:oi + widths[i]] += blk
    return P / order


def projector_image(P, tol: TolerancePolicy | float | None = None) -> np.ndarray:
    """Orthonormal basis of the image of a symmetric projector."""
    P = np.asarray(P, dtype=float)
    if P.size == 0:
        return np.zeros((P.shape[0], 0))
    w, v = np.linalg.eigh((P + P.T) / 2)
    return v[:, w > 0.5].copy()
