"""Two-qubit entanglement from Bloch (polarization-vector) data.

Covers the spin-flipped state, the matrix ``M = rho rho~`` and its
concurrence bounds, and closed forms for realignment and negativity when
both single-qubit marginals are maximally mixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import YY, PartitionSpec, concurrence_wootters, negativity, realignment_norm, wootters_lambdas
from .qmat import DimensionError, NumericError, hermitian_eigenvalues
from .states import CorrelationDecomposition, DensityMatrix, as_density, bloch_assemble

CUT = PartitionSpec((0,), (1,))


@dataclass(frozen=True)
class MSpectrum:
    """Descending square roots of the eigenvalues of ``M``."""

    lambdas: np.ndarray

    @property
    def left_products(self) -> float:
        l = self.lambdas
        return float(l[0] * (l[1] + l[2] + l[3]))

    @property
    def right_products(self) -> float:
        l = self.lambdas
        return float(l[1] * l[2] + l[1] * l[3] + l[2] * l[3])

    @property
    def concurrence(self) -> float:
        l = self.lambdas
        return float(max(0.0, l[0] - l[1] - l[2] - l[3]))


def _two_qubit(rho) -> DensityMatrix:
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise DimensionError(f"expected a two-qubit state, got dims {rho.dims}")
    return rho


def spin_flip(rho) -> np.ndarray:
    """``(sy sy) rho* (sy sy)`` with conjugation in the computational basis."""
    m = _two_qubit(rho).matrix
    return YY @ m.conj() @ YY


def m_matrix(rho) -> tuple[np.ndarray, MSpectrum]:
    rho = _two_qubit(rho)
    m = rho.matrix @ spin_flip(rho)
    return m, MSpectrum(wootters_lambdas(rho))


@dataclass(frozen=True)
class ConcurrenceBounds:
    lower: float
    upper: float
    trace_m: float
    s2: float


def concurrence_bounds(rho) -> ConcurrenceBounds:
    """``Tr M -/+ 2 sqrt(S2(M))`` with ``S2 = ((Tr M)^2 - Tr M^2) / 2``.

    The bracket targets the squared concurrence; the lower value carries
    information only when it is positive.
    """
    m, _ = m_matrix(rho)
    tr = float(np.trace(m).real)
    s2 = 0.5 * (tr**2 - float(np.trace(m @ m).real))
    if s2 < -1e-9:
        raise NumericError(f"S2(M) = {s2:.3e} is negative")
    root = np.sqrt(max(s2, 0.0))
    return ConcurrenceBounds(tr - 2 * root, tr + 2 * root, tr, s2)


def bracket_check(rho) -> dict:
    """Where the squared and unsquared concurrence fall relative to the bounds."""
    b = concurrence_bounds(rho)
    c = concurrence_wootters(rho)
    tol = 1e-9
    return {
        "concurrence": c,
        "lower": b.lower,
        "upper": b.upper,
        "squared_lower_ok": b.lower - tol <= c * c,
        "squared_upper_ok": c * c <= b.upper + tol,
        "plain_lower_ok": b.lower - tol <= c,
        "plain_upper_ok": c <= b.upper + tol,
    }


def _rotation_svd(c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``c = O1 diag(d) O2^T`` with proper rotations O1, O2.

    Any reflection left over from the SVD is absorbed into the sign of the
    last diagonal value, so ``d[2]`` may be negative.
    """
    u, s, vt = np.linalg.svd(c)
    d = s.copy()
    if np.linalg.det(u) < 0:
        u[:, 2] *= -1
        d[2] *= -1
    if np.linalg.det(vt) < 0:
        vt[2, :] *= -1
        d[2] *= -1
    return u, d, vt.T


def diagonalize_correlation(d: CorrelationDecomposition) -> tuple[np.ndarray, dict]:
    """Diagonal correlation values reachable by local rotations, plus the rotations used."""
    o1, diag, o2 = _rotation_svd(d.c)
    return diag, {"rotation_a": o1.tolist(), "rotation_b": o2.tolist(), "sign_absorbed_in": 2}


def _require_mixed_marginals(d: CorrelationDecomposition) -> None:
    if not d.marginals_mixed:
        raise ValueError(
            f"closed forms need maximally mixed marginals (|n_A| = {np.linalg.norm(d.n_a):.3g}, "
            f"|n_B| = {np.linalg.norm(d.n_b):.3g})"
        )


def realignment_closed_form(d: CorrelationDecomposition) -> float:
    """``(1 + sum |c_aa|) / 2`` on the rotated-diagonal correlations.

    This equals the trace norm of the realigned matrix; the realignment
    measure is ``max((value - 1) / 2, 0)``.
    """
    _require_mixed_marginals(d)
    diag, _ = diagonalize_correlation(d)
    return float(0.5 * (1 + np.sum(np.abs(diag))))


def realignment_comparison(d: CorrelationDecomposition) -> dict:
    _require_mixed_marginals(d)
    closed = realignment_closed_form(d)
    rho = bloch_assemble(d)
    general = realignment_norm(DensityMatrix(rho, (2, 2)), CUT)
    return {
        "closed_form": closed,
        "trace_norm": general,
        "difference": closed - general,
        "measure": max((general - 1) / 2, 0.0),
    }


def negativity_expression(diag: np.ndarray) -> float:
    """Four-absolute-value expression on diagonal correlations.

    Uses ``c / 4`` so that ``1/4 + c33 + c11 - c22`` and friends are the
    eigenvalues of the Bell-diagonal state with those correlations.
    """
    c11, c22, c33 = np.asarray(diag, dtype=float) / 4
    return 0.5 * (
        abs(0.25 + c33 + c11 - c22)
        + abs(0.25 + c33 - c11 + c22)
        + abs(0.25 - c33 + c11 + c22)
        + abs(0.25 - c33 - c11 - c22)
    )


def negativity_comparison(d: CorrelationDecomposition) -> dict:
    """Canonical negativity next to the four-absolute-value expression."""
    _require_mixed_marginals(d)
    diag, rotations = diagonalize_correlation(d)
    canonical = negativity(DensityMatrix(bloch_assemble(d), (2, 2)), CUT)
    expr = float(negativity_expression(diag))
    # transposing qubit A flips the sign of sigma_y, i.e. of c22
    flipped = float(negativity_expression(diag * np.array([1, -1, 1])))
    return {
        "canonical": canonical,
        "expression": expr,
        "difference": expr - canonical,
        "expression_c22_flipped": flipped,
        "diagonal": diag.tolist(),
        **rotations,
    }


def negativity_closed_form(d: CorrelationDecomposition) -> float:
    """Negativity of a state with maximally mixed marginals (canonical value).

    See :func:`negativity_comparison` for the accompanying closed-form
    expression and its offset.
    """
    return negativity_comparison(d)["canonical"]


def assemble_checked(d: CorrelationDecomposition) -> tuple[np.ndarray, float]:
    """Assembled 4x4 operator and its minimum eigenvalue."""
    m = bloch_assemble(d)
    return m, float(hermitian_eigenvalues(m)[-1])
