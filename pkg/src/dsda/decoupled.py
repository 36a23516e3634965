"""Decoupled doubling with growing block bases and small kernels.

Instead of iterating two to four coupled dense matrices, each doubling
step here only extends block bases (one propagator product per new
block) and rebuilds a small kernel matrix by an anti-diagonal block
recursion:

    Y_k = [[0, Y_{k-1}], [Y_{k-1}, mu * T_{k-1}]],   T_k = Uhat_k^T Vhat_k.

All iterates of the classical recursions are then available on demand:

    H_k = c * Vhat (I + sigma Y^T Y)^-1 Vhat^T
    G_k = c * Uhat (I + sigma Y Y^T)^-1 Uhat^T
    A_k = P^(2^k) - c * Uhat (I + sigma Y Y^T)^-1 Y Vhat^T

with family parameters (c, mu, sigma) = (1, 1, +1) for DARE,
(2g, 2g, +1) for CARE and (2a, -2a, -1) for the Bethe-Salpeter problem,
whose F_k carries an extra minus sign.  DARE is seeded with a zero
Y_0 so the same recursion covers all three.  The four-matrix family
keeps two kernels Y, Z and four bases (Uhat, Vhat, What, Qhat) with

    H_k = s * Uhat (I - Y Z)^-1 Qhat^T,   G_k = s * What (I - Z Y)^-1 Vhat^T,

where the shift sum s is 2g for plain doubling and alpha + beta for the
alternating-directional variant.

The closed-form statements for the one-kernel families are usually
quoted for k >= 2 with the first step written out separately; here the
k = 0 state is arranged so the same recursion covers every step (the
discrete-time family is seeded with a zero kernel, which makes the
first rebuilt kernel come out right).

The classical module computes identical matrices by the coupled dense
recursions; the test suite holds the two against each other.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg

from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    NotSpdError,
    RankDeficientFactorError,
    SingularMatrixError,
)
from .matkit import frobenius_norm, numerical_rank, solve_general
from .problems import BsepProblem, CareProblem, DareProblem, MareProblem

log = logging.getLogger(__name__)

#: Default cap on basis columns; the bases double every step and no
#: truncation is performed, so runaway growth must fail cleanly.
DEFAULT_COLUMN_BUDGET = 4096

#: Dense evaluation of A_k / E_k / F_k is for validation only.
DENSE_EVAL_MAX_DIM = 512


@dataclass(frozen=True)
class LowRankSolution:
    """Factored iterate ``scale * left @ kernel^-1 @ right.T``.

    The kernel is stored together with its factorization (Cholesky for
    the SPD kernels of the symmetric families, pivoted LU otherwise) so
    repeated evaluation does not refactor.
    """

    scale: float
    left: np.ndarray
    right: np.ndarray
    kernel: np.ndarray
    factor: tuple
    factor_kind: Literal["cholesky", "lu"]

    @property
    def basis_cols(self) -> int:
        return self.left.shape[1]

    def solve_kernel(self, rhs: np.ndarray) -> np.ndarray:
        if self.factor_kind == "cholesky":
            return scipy.linalg.cho_solve(self.factor, rhs, check_finite=False)
        return scipy.linalg.lu_solve(self.factor, rhs, check_finite=False)

    def dense(self) -> np.ndarray:
        """Materialize the iterate as a full matrix."""
        return self.scale * (self.left @ self.solve_kernel(self.right.T))


def _factor_spd(kern: np.ndarray) -> tuple:
    try:
        return scipy.linalg.cho_factor(kern, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        # Cannot happen in exact arithmetic for I + Y^T Y; reaching this
        # signals severe ill-conditioning of the untruncated kernel.
        raise NotSpdError(str(exc)) from exc


def _factor_general(kern: np.ndarray) -> tuple:
    if kern.shape[0] == 0:
        return (kern, np.zeros(0, dtype=np.int32))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(kern, check_finite=False)
    if np.min(np.abs(np.diag(lu))) <= 1e-14 * frobenius_norm(kern):
        raise SingularMatrixError(
            f"{kern.shape[0]}x{kern.shape[1]} kernel is numerically singular")
    return (lu, piv)


def _pow2k(m: np.ndarray, k: int) -> np.ndarray:
    """m raised to the power 2^k by repeated squaring."""
    out = m.copy()
    for _ in range(k):
        out = out @ out
    return out


# ---------------------------------------------------------------------------
# Symmetric-kernel families: DARE, CARE, BSEP
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DsdaSymState:
    """Growing bases, kernel and cached Gram block for one-kernel families.

    ``uhat`` is n x (2^k m), ``vhat`` n x (2^k l), ``y`` (2^k m) x (2^k l)
    and ``tcache`` holds ``uhat.T @ vhat``, extended incrementally.  For
    the Bethe-Salpeter family ``uhat`` is the entrywise conjugate of
    ``vhat`` and ``tcache`` therefore equals ``vhat^H vhat``.
    """

    family: Literal["dare", "care", "bsep"]
    uhat: np.ndarray
    vhat: np.ndarray
    y: np.ndarray
    tcache: np.ndarray
    propagator: np.ndarray
    scale: float
    multiplier: float
    sigma: int
    k: int = 0

    @property
    def basis_cols(self) -> int:
        return self.vhat.shape[1]


def dsda_sym_init(p: CareProblem | DareProblem | BsepProblem) -> DsdaSymState:
    """Width-one starting state for the one-kernel families."""
    if isinstance(p, DareProblem):
        u0 = p.b.copy()
        v0 = p.c.T.copy()
        # Zero seed: the generic recursion then reproduces
        # Y_1 = [[0, 0], [0, B^T C^T]] because T_0 = B^T C^T.
        y0 = np.zeros((u0.shape[1], v0.shape[1]))
        return DsdaSymState("dare", u0, v0, y0, u0.T @ v0, p.a.copy(),
                            scale=1.0, multiplier=1.0, sigma=+1, k=0)
    if isinstance(p, CareProblem):
        n = p.n
        gamma = p.gamma
        a_g = p.a - gamma * np.eye(n)
        u0 = solve_general(a_g, p.b)
        v0 = solve_general(a_g.T, p.c.T)
        y0 = p.b.T @ v0
        prop = np.eye(n) + 2.0 * gamma * solve_general(a_g, np.eye(n))
        return DsdaSymState("care", u0, v0, y0, u0.T @ v0, prop,
                            scale=2.0 * gamma, multiplier=2.0 * gamma,
                            sigma=+1, k=0)
    if isinstance(p, BsepProblem):
        n = p.n
        alpha = p.alpha
        s_a = alpha * np.eye(n) - p.a
        sa_inv = solve_general(s_a, np.eye(n, dtype=np.complex128))
        v0 = (sa_inv @ p.l_b).conj()        # (alpha I - conj(A))^-1 conj(L_B)
        y0 = p.l_b.T @ v0
        a_alpha = np.eye(n) - 2.0 * alpha * sa_inv
        prop = a_alpha.conj()               # V grows with conj(A_alpha)
        u0 = v0.conj()
        return DsdaSymState("bsep", u0, v0, y0, u0.T @ v0, prop,
                            scale=2.0 * alpha, multiplier=-2.0 * alpha,
                            sigma=-1, k=0)
    raise TypeError(f"unsupported problem type {type(p).__name__}")


def dsda_sym_step(s: DsdaSymState,
                  column_budget: int = DEFAULT_COLUMN_BUDGET) -> DsdaSymState:
    """Double the bases, extend the Gram cache, rebuild the kernel."""
    blocks = 2 ** s.k
    m = s.uhat.shape[1] // blocks
    l = s.vhat.shape[1] // blocks
    if 2 * blocks * max(m, l) > column_budget:
        raise BudgetExceededError(
            f"doubling to {2 * blocks * max(m, l)} columns exceeds the "
            f"budget of {column_budget}")
    y_new = np.block([[np.zeros_like(s.y), s.y],
                      [s.y, s.multiplier * s.tcache]])
    if s.family == "bsep":
        v_new = _extend_basis(s.vhat, s.propagator, blocks, l)
        u_new = v_new.conj()
    else:
        v_new = _extend_basis(s.vhat, s.propagator.T, blocks, l)
        u_new = _extend_basis(s.uhat, s.propagator, blocks, m)
    t_new = _extend_gram(s.tcache, s.uhat, s.vhat, u_new, v_new)
    return DsdaSymState(s.family, u_new, v_new, y_new, t_new, s.propagator,
                        s.scale, s.multiplier, s.sigma, s.k + 1)


def _extend_basis(basis: np.ndarray, prop: np.ndarray, blocks: int,
                  width: int) -> np.ndarray:
    """Append ``blocks`` new blocks, each the propagator times the last."""
    new = []
    last = basis[:, -width:]
    for _ in range(blocks):
        last = prop @ last
        new.append(last)
    return np.hstack([basis] + new)


def _extend_gram(t_old: np.ndarray, u_old: np.ndarray, v_old: np.ndarray,
                 u_full: np.ndarray, v_full: np.ndarray) -> np.ndarray:
    """Grow ``uhat.T @ vhat``, reusing the previous block verbatim."""
    wu = u_old.shape[1]
    wv = v_old.shape[1]
    u_add = u_full[:, wu:]
    v_add = v_full[:, wv:]
    return np.block([[t_old, u_old.T @ v_add],
                     [u_add.T @ v_old, u_add.T @ v_add]])


def _sym_kernel(s: DsdaSymState, side: str) -> np.ndarray:
    if side == "right":
        return np.eye(s.y.shape[1], dtype=s.y.dtype) + s.sigma * (s.y.T @ s.y)
    return np.eye(s.y.shape[0], dtype=s.y.dtype) + s.sigma * (s.y @ s.y.T)


def dsda_eval_H(s: DsdaSymState) -> LowRankSolution:
    """H_k = c * Vhat (I + Y^T Y)^-1 Vhat^T for the psd-kernel families."""
    if s.sigma != +1:
        raise DimensionMismatchError(
            "H evaluation applies to the DARE/CARE kernel; use bsep_eval_F")
    kern = _sym_kernel(s, "right")
    return LowRankSolution(s.scale, s.vhat, s.vhat, kern,
                           _factor_spd(kern), "cholesky")


def dsda_eval_G(s: DsdaSymState) -> LowRankSolution:
    """G_k = c * Uhat (I + Y Y^T)^-1 Uhat^T, mirror of :func:`dsda_eval_H`."""
    if s.sigma != +1:
        raise DimensionMismatchError(
            "G evaluation applies to the DARE/CARE kernel")
    kern = _sym_kernel(s, "left")
    return LowRankSolution(s.scale, s.uhat, s.uhat, kern,
                           _factor_spd(kern), "cholesky")


def bsep_eval_F(s: DsdaSymState) -> LowRankSolution:
    """F_k = -2 alpha Vhat (I - Y^T Y)^-1 Vhat^T (plain transposes)."""
    if s.family != "bsep":
        raise DimensionMismatchError("F evaluation applies to the BSEP family")
    kern = _sym_kernel(s, "right")
    return LowRankSolution(-s.scale, s.vhat, s.vhat, kern,
                           _factor_general(kern), "lu")


def dsda_eval_A(s: DsdaSymState) -> np.ndarray:
    """Dense A_k (E_k for the BSEP family), for validation at small sizes.

    ``A_k = P^(2^k) - c * Uhat (I + sigma Y Y^T)^-1 Y Vhat^T`` with the
    propagator power formed by repeated squaring.
    """
    n = s.propagator.shape[0]
    if n > DENSE_EVAL_MAX_DIM:
        raise BudgetExceededError(
            f"dense propagator-power evaluation is guarded to "
            f"n <= {DENSE_EVAL_MAX_DIM}, got n = {n}")
    base = s.propagator.conj() if s.family == "bsep" else s.propagator
    power = _pow2k(base, s.k)
    kern = _sym_kernel(s, "left")
    if s.sigma == +1:
        corr = scipy.linalg.cho_solve(_factor_spd(kern), s.y @ s.vhat.T,
                                      check_finite=False)
    else:
        corr = scipy.linalg.lu_solve(_factor_general(kern), s.y @ s.vhat.T,
                                     check_finite=False)
    return power - s.scale * (s.uhat @ corr)


def kernel_extreme_eigenvalues(s: DsdaSymState) -> tuple[float, float]:
    """Smallest and largest eigenvalue of the solution kernel.

    Conditioning diagnostic: without truncation the kernel degrades as k
    grows, and this is the number to watch.
    """
    kern = _sym_kernel(s, "right")
    if s.family == "bsep":
        w = np.linalg.eigvals(kern)
        mags = np.abs(w)
        return float(mags.min()), float(mags.max())
    w = np.linalg.eigvalsh(kern)
    return float(w[0]), float(w[-1])


# ---------------------------------------------------------------------------
# Bethe-Salpeter post-processing
# ---------------------------------------------------------------------------

def bsep_eigen_extract(f: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Stable eigenvalues from a converged F.

    Compresses the 2n x 2n problem to the n x n matrix
    ``[I, -F^H] M [I; -F] (I + F^H F)^-1`` built from the blocks A, B
    and returns its eigenvalues sorted by ascending real part.
    """
    f = np.atleast_2d(np.asarray(f, dtype=np.complex128))
    a = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    b = np.atleast_2d(np.asarray(b, dtype=np.complex128))
    n = a.shape[0]
    if f.shape != (n, n) or b.shape != (n, n):
        raise DimensionMismatchError("F, A, B must all be n x n")
    ham = np.block([[a, b], [-b.conj(), -a.conj()]])
    row = np.hstack([np.eye(n), -f.conj().T])
    col = np.vstack([np.eye(n), -f])
    core = row @ ham @ col
    gram = np.eye(n) + f.conj().T @ f
    compressed = solve_general(gram.T, core.T).T
    eigs = np.linalg.eigvals(compressed)
    order = np.lexsort((eigs.imag, eigs.real))
    return eigs[order]


def subspace_angle(w: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Principal-angle matrix between the graph subspaces tagged by W and Z.

    Evaluates ``arccos of the square root`` of

        (I + conj(Z) Z)^-1/2 (I - conj(Z) W) (I + conj(W) W)^-1
        (I - conj(W) Z) (I + conj(Z) Z)^-1/2,

    which is zero exactly when Z = -W; the doubling iterate F_k drives
    this to zero against W = X2 X1^-1.  Diagnostic only, intended for
    complex-symmetric arguments (the iterates are).
    """
    w = np.atleast_2d(np.asarray(w, dtype=np.complex128))
    z = np.atleast_2d(np.asarray(z, dtype=np.complex128))
    if w.shape != z.shape or w.shape[0] != w.shape[1]:
        raise DimensionMismatchError("W and Z must be square with equal shape")
    n = w.shape[0]
    gram_z = np.eye(n) + z.conj() @ z
    gram_w = np.eye(n) + w.conj() @ w
    vals, vecs = np.linalg.eigh((gram_z + gram_z.conj().T) / 2.0)
    if np.min(vals) <= 0.0:
        raise SingularMatrixError("I + conj(Z) Z is not positive definite")
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    mid = solve_general(gram_w, np.eye(n) - w.conj() @ z)
    cos2 = inv_sqrt @ (np.eye(n) - z.conj() @ w) @ mid @ inv_sqrt
    cos2 = (cos2 + cos2.conj().T) / 2.0
    lam, q = np.linalg.eigh(cos2)
    theta = np.arccos(np.sqrt(np.clip(lam, 0.0, 1.0)))
    out = (q * theta) @ q.conj().T
    out = (out + out.conj().T) / 2.0
    return out.real if np.max(np.abs(out.imag)) < 1e-14 else out


# ---------------------------------------------------------------------------
# Four-matrix family: MARE (plain and alternating-directional shifts)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DsdaMareState:
    """Four growing bases and the kernel pair (Y, Z) for the MARE family."""

    uhat: np.ndarray    # m x (2^k m1)
    vhat: np.ndarray    # m x (2^k n1)
    what: np.ndarray    # n x (2^k n1)
    qhat: np.ndarray    # n x (2^k m1)
    y: np.ndarray       # (2^k m1) x (2^k n1)
    z: np.ndarray       # (2^k n1) x (2^k m1)
    tcache: np.ndarray  # qhat.T @ what
    scache: np.ndarray  # vhat.T @ uhat
    prop_a: np.ndarray  # m x m
    prop_d: np.ndarray  # n x n
    shift_sum: float
    k: int = 0

    @property
    def basis_cols(self) -> int:
        return self.uhat.shape[1]


def _check_full_column_rank(mat: np.ndarray, name: str) -> None:
    if mat.shape[1] == 0:
        return
    if numerical_rank(mat, rel_tol=1e-12) < mat.shape[1]:
        raise RankDeficientFactorError(
            f"{name} must have full column rank {mat.shape[1]}")


def dsda_mare_init(p: MareProblem, mode: str = "sda") -> DsdaMareState:
    """Width-one starting state for the four-basis family.

    ``mode="sda"`` uses the single shift gamma twice; ``mode="adda"``
    uses alpha for the D side and beta for the A side.  Low-rank factors
    must have full column rank (an all-zero B or C is expressed with
    zero-width factors, which degrade every formula gracefully).
    """
    from .classical import resolve_mare_shifts

    alpha, beta = resolve_mare_shifts(p, mode)
    for name in ("b_l", "b_r", "c_l", "c_r"):
        _check_full_column_rank(getattr(p, name), name)
    m, n = p.m, p.n
    s = alpha + beta
    a_b = p.a + beta * np.eye(m)
    d_a = p.d + alpha * np.eye(n)
    u0 = solve_general(a_b, p.b_l)
    v0 = solve_general(a_b.T, p.c_r)
    w0 = solve_general(d_a, p.c_l)
    q0 = solve_general(d_a.T, p.b_r)
    y0 = p.b_r.T @ w0                    # B_r^T D_a^-1 C_l
    z0 = p.c_r.T @ u0                    # C_r^T A_b^-1 B_l
    prop_a = np.eye(m) - s * solve_general(a_b, np.eye(m))
    prop_d = np.eye(n) - s * solve_general(d_a, np.eye(n))
    return DsdaMareState(u0, v0, w0, q0, y0, z0,
                         tcache=q0.T @ w0, scache=v0.T @ u0,
                         prop_a=prop_a, prop_d=prop_d, shift_sum=s, k=0)


def dsda_mare_step(s: DsdaMareState,
                   column_budget: int = DEFAULT_COLUMN_BUDGET) -> DsdaMareState:
    """Double the four bases and rebuild both kernels."""
    blocks = 2 ** s.k
    m1 = s.uhat.shape[1] // blocks
    n1 = s.vhat.shape[1] // blocks
    if 2 * blocks * max(m1, n1) > column_budget:
        raise BudgetExceededError(
            f"doubling to {2 * blocks * max(m1, n1)} columns exceeds the "
            f"budget of {column_budget}")
    y_new = np.block([[np.zeros_like(s.y), s.y],
                      [s.y, -s.shift_sum * s.tcache]])
    z_new = np.block([[np.zeros_like(s.z), s.z],
                      [s.z, -s.shift_sum * s.scache]])
    u_new = _extend_basis(s.uhat, s.prop_a, blocks, m1)
    v_new = _extend_basis(s.vhat, s.prop_a.T, blocks, n1)
    w_new = _extend_basis(s.what, s.prop_d, blocks, n1)
    q_new = _extend_basis(s.qhat, s.prop_d.T, blocks, m1)
    t_new = _extend_gram(s.tcache, s.qhat, s.what, q_new, w_new)
    s_new = _extend_gram(s.scache, s.vhat, s.uhat, v_new, u_new)
    return DsdaMareState(u_new, v_new, w_new, q_new, y_new, z_new,
                         t_new, s_new, s.prop_a, s.prop_d, s.shift_sum,
                         s.k + 1)


def dsda_mare_eval(s: DsdaMareState, which: str):
    """Evaluate one of the four iterates.

    ``"H"`` and ``"G"`` return :class:`LowRankSolution`; ``"F"`` and
    ``"E"`` return dense matrices (validation-guarded like
    :func:`dsda_eval_A`).
    """
    wy = s.y.shape[0]
    wz = s.z.shape[0]
    if which == "H":
        kern = np.eye(wy) - s.y @ s.z
        return LowRankSolution(s.shift_sum, s.uhat, s.qhat, kern,
                               _factor_general(kern), "lu")
    if which == "G":
        kern = np.eye(wz) - s.z @ s.y
        return LowRankSolution(s.shift_sum, s.what, s.vhat, kern,
                               _factor_general(kern), "lu")
    if which in ("F", "E"):
        if max(s.prop_a.shape[0], s.prop_d.shape[0]) > DENSE_EVAL_MAX_DIM:
            raise BudgetExceededError(
                f"dense propagator-power evaluation is guarded to "
                f"n <= {DENSE_EVAL_MAX_DIM}")
        if which == "F":
            kern = np.eye(wy) - s.y @ s.z
            corr = scipy.linalg.lu_solve(_factor_general(kern),
                                         s.y @ s.vhat.T, check_finite=False)
            return _pow2k(s.prop_a, s.k) - s.shift_sum * (s.uhat @ corr)
        kern = np.eye(wz) - s.z @ s.y
        corr = scipy.linalg.lu_solve(_factor_general(kern),
                                     s.z @ s.qhat.T, check_finite=False)
        return _pow2k(s.prop_d, s.k) - s.shift_sum * (s.what @ corr)
    raise ValueError(f"which must be one of H, G, F, E; got {which!r}")
