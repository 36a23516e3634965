"""Dense linear-algebra kernel.

Small-matrix primitives the doubling iterations are built from: a
Sherman-Morrison-Woodbury inverse, symmetric-positive-definite and
pivoted general solves, the Frobenius norm and an SVD-based numerical
rank.  Everything works on plain 2-D numpy arrays (real float64, or
complex128 where noted) and raises the package exceptions on failure
instead of letting numpy/scipy errors escape.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, NotSpdError, SingularMatrixError

EPS = float(np.finfo(np.float64).eps)

#: Relative pivot threshold below which a pivoted elimination is declared
#: singular.  The underlying theory only assumes nonsingularity, so a
#: concrete detection threshold has to be fixed somewhere; this is it.
SINGULARITY_RTOL = 1e-14


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a 2-D float64/complex128 array with finite entries.

    Scalars and 1-D arrays are promoted to 1 x 1 and n x 1 shapes so the
    scalar worked examples can be written without ceremony.
    """
    arr = np.atleast_2d(np.asarray(a))
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got {arr.ndim}-D")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128, copy=False)
    else:
        arr = arr.astype(np.float64, copy=False)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def frobenius_norm(m) -> float:
    """Frobenius norm: sqrt of the sum of squared entry magnitudes."""
    arr = np.atleast_2d(np.asarray(m))
    if arr.size == 0:
        return 0.0
    return float(np.linalg.norm(arr, "fro"))


def numerical_rank(m, rel_tol: float | None = None) -> int:
    """Number of singular values above ``rel_tol`` times the largest one.

    ``rel_tol`` defaults to ``eps * max(rows, cols)``, the conventional
    spectral threshold.  The zero matrix has rank 0.
    """
    arr = np.atleast_2d(np.asarray(m))
    if arr.size == 0:
        return 0
    if rel_tol is None:
        rel_tol = EPS * max(arr.shape)
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    sigma = np.linalg.svd(arr, compute_uv=False)
    smax = sigma[0]
    if smax == 0.0:
        return 0
    return int(np.count_nonzero(sigma > rel_tol * smax))


def solve_general(k, b) -> np.ndarray:
    """Solve ``K X = B`` for square K by pivoted LU elimination.

    Raises
    ------
    SingularMatrixError
        If any pivot falls below ``SINGULARITY_RTOL * ||K||_F``, which
        signals a violation of the standing nonsingularity assumptions
        of the doubling recursions.
    """
    kk = as_matrix(k, "K")
    bb = as_matrix(b, "B")
    if kk.shape[0] != kk.shape[1]:
        raise DimensionMismatchError(f"K must be square, got {kk.shape}")
    if bb.shape[0] != kk.shape[0]:
        raise DimensionMismatchError(
            f"K has {kk.shape[0]} rows but B has {bb.shape[0]}")
    if kk.shape[0] == 0:
        return np.zeros_like(bb)
    with warnings.catch_warnings():
        # Exactly-zero pivots are reported by the threshold check below.
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(kk, check_finite=False)
    pivot_floor = SINGULARITY_RTOL * frobenius_norm(kk)
    if np.min(np.abs(np.diag(lu))) <= pivot_floor:
        raise SingularMatrixError(
            f"pivot below {pivot_floor:.3e} in {kk.shape[0]}x{kk.shape[1]} solve")
    return scipy.linalg.lu_solve((lu, piv), bb, check_finite=False)


def solve_spd(k, b) -> np.ndarray:
    """Solve ``K X = B`` for symmetric (Hermitian) positive definite K.

    Uses a Cholesky factorization, so the result is deterministic for a
    fixed input.  Raises ``NotSpdError`` when a factorization pivot is
    not positive.
    """
    kk = as_matrix(k, "K")
    bb = as_matrix(b, "B")
    if kk.shape[0] != kk.shape[1]:
        raise DimensionMismatchError(f"K must be square, got {kk.shape}")
    if bb.shape[0] != kk.shape[0]:
        raise DimensionMismatchError(
            f"K has {kk.shape[0]} rows but B has {bb.shape[0]}")
    if kk.shape[0] == 0:
        return np.zeros_like(bb)
    try:
        c, low = scipy.linalg.cho_factor(kk, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NotSpdError(str(exc)) from exc
    return scipy.linalg.cho_solve((c, low), bb, check_finite=False)


@dataclass(frozen=True)
class SmwFactors:
    """Factors of a Woodbury-structured matrix ``M + U D V^T``.

    ``m`` is n x n and invertible, ``u`` is n x p, ``d`` is p x p and
    invertible, ``v`` is n x p.
    """

    m: np.ndarray
    u: np.ndarray
    d: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", as_matrix(self.m, "M"))
        object.__setattr__(self, "u", as_matrix(self.u, "U"))
        object.__setattr__(self, "d", as_matrix(self.d, "D"))
        object.__setattr__(self, "v", as_matrix(self.v, "V"))
        n = self.m.shape[0]
        if self.m.shape != (n, n):
            raise DimensionMismatchError(f"M must be square, got {self.m.shape}")
        if self.d.shape[0] != self.d.shape[1]:
            raise DimensionMismatchError(
                f"D must be square for the update formula, got {self.d.shape}")
        p = self.d.shape[0]
        if self.u.shape != (n, p) or self.v.shape != (n, p):
            raise DimensionMismatchError(
                f"U and V must be {n}x{p}, got {self.u.shape} and {self.v.shape}")


def smw_inverse(f: SmwFactors) -> np.ndarray:
    """Invert ``M + U D V^T`` by the Sherman-Morrison-Woodbury update.

    Computes ``M^-1 - M^-1 U (D^-1 + V^T M^-1 U)^-1 V^T M^-1``.  Both
    required inverses go through :func:`solve_general`, so a pivot
    failure in either surfaces as ``SingularMatrixError``.
    """
    n = f.m.shape[0]
    p = f.d.shape[0]
    m_inv = solve_general(f.m, np.eye(n, dtype=f.m.dtype))
    if p == 0:
        return m_inv
    d_inv = solve_general(f.d, np.eye(p, dtype=f.d.dtype))
    minv_u = m_inv @ f.u
    vt_minv = f.v.T @ m_inv
    core = d_inv + f.v.T @ minv_u
    return m_inv - minv_u @ solve_general(core, vt_minv)
