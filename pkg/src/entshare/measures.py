"""Bipartite entanglement measures: concurrence, negativity and realignment."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmat import (
    DimensionError,
    NumericError,
    hermitian_eigenvalues,
    partial_transpose,
    permute_subsystems,
    realign,
    trace_norm,
)
from .states import SY, DensityMatrix, StateVector, as_density

YY = np.kron(SY, SY)
SQRT_CLIP = 1e-12


@dataclass(frozen=True)
class PartitionSpec:
    """Ordered bipartition ``left : right`` of subsystem indices."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left = tuple(int(i) for i in self.left)
        right = tuple(int(i) for i in self.right)
        if not left or not right:
            raise ValueError("both sides of a cut must be nonempty")
        if set(left) & set(right):
            raise ValueError(f"cut sides overlap: {left} vs {right}")
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("repeated subsystem index in cut")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def parse(cls, text: str) -> "PartitionSpec":
        """Parse ``"0:12"`` (single-digit indices) or ``"0:1,2"``."""
        try:
            lhs, rhs = text.split(":")
        except ValueError:
            raise ValueError(f"cut {text!r} must have the form LEFT:RIGHT") from None

        def side(s):
            s = s.strip()
            items = s.split(",") if "," in s else list(s)
            return tuple(int(x) for x in items if x.strip())

        try:
            return cls(side(lhs), side(rhs))
        except ValueError as exc:
            raise ValueError(f"bad cut {text!r}: {exc}") from None

    @classmethod
    def single(cls, focus: int, n: int) -> "PartitionSpec":
        return cls((focus,), tuple(i for i in range(n) if i != focus))

    def check(self, n: int) -> None:
        if sorted(self.left + self.right) != list(range(n)):
            raise ValueError(f"cut {self} does not cover subsystems 0..{n - 1} exactly once")

    def __str__(self):
        return ",".join(map(str, self.left)) + ":" + ",".join(map(str, self.right))


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_vectors: np.ndarray  # columns
    right_vectors: np.ndarray  # columns

    @property
    def lambdas(self) -> np.ndarray:
        return self.coefficients**2


def _two_qubit(rho) -> DensityMatrix:
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise DimensionError(f"expected a two-qubit state, got dims {rho.dims}")
    return rho


def wootters_lambdas(rho) -> np.ndarray:
    """Descending square roots of the spectrum of ``rho (sy sy) rho* (sy sy)``.

    Writing ``rho = X X^H`` with ``X = V sqrt(w)``, the spectrum of
    ``rho rho~`` equals that of the Hermitian ``T T^H`` with
    ``T = X^T (sy sy) X``, so the lambdas are the singular values of T.
    This avoids square roots of tiny eigenvalues on rank-deficient input.
    """
    m = _two_qubit(rho).matrix
    w, v = np.linalg.eigh(m)
    x = v * np.sqrt(np.clip(w, 0, None))
    return np.linalg.svd(x.T @ YY @ x, compute_uv=False)


def concurrence_wootters(rho) -> float:
    lam = wootters_lambdas(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _reduced_left(psi: StateVector, cut: PartitionSpec) -> np.ndarray:
    cut.check(psi.n)
    mat = np.asarray(psi.amplitudes).reshape(psi.dims)
    mat = mat.transpose(cut.left + cut.right)
    dl = int(np.prod([psi.dims[i] for i in cut.left]))
    return mat.reshape(dl, -1)


def concurrence_pure_cut(psi: StateVector, cut: PartitionSpec) -> float:
    """``2 sqrt(det rho_A)`` for a pure state with a single-qubit left block."""
    if len(cut.left) != 1 or psi.dims[cut.left[0]] != 2:
        raise ValueError("concurrence_pure_cut needs a single-qubit left block")
    # det(rho_A) = (s1 s2)^2 for the singular values of the 2 x d amplitude
    # matrix; taking them directly keeps full precision near product states
    s = np.linalg.svd(_reduced_left(psi, cut), compute_uv=False)
    return float(2 * s[0] * s[1])


def pure_concurrence(psi: StateVector, cut: PartitionSpec) -> float:
    """``sqrt(2 (1 - Tr rho_L^2))``; equals ``2 sqrt(det rho_A)`` for a qubit left block."""
    a = _reduced_left(psi, cut)
    rho_l = a @ a.conj().T
    purity = np.real(np.vdot(rho_l, rho_l))
    return float(np.sqrt(max(2 * (1 - purity), 0.0)))


def _cut_for(rho: DensityMatrix, cut: PartitionSpec) -> None:
    try:
        cut.check(rho.n)
    except ValueError as exc:
        raise DimensionError(str(exc)) from None


def negativity(state, cut: PartitionSpec) -> float:
    """``(||rho^{T_left}||_1 - 1) / 2``.

    Cross-checked against the magnitude of the negative partial-transpose
    eigenvalues; a disagreement above 1e-8 raises :class:`NumericError`.
    """
    rho = as_density(state)
    _cut_for(rho, cut)
    pt = partial_transpose(rho.matrix, rho.dims, cut.left)
    value = (trace_norm(pt) - 1) / 2
    eig = hermitian_eigenvalues(pt)
    neg_sum = -float(np.sum(eig[eig < 0]))
    if abs(value - neg_sum) > 1e-8:
        raise NumericError(f"negativity routes disagree: {value} vs {neg_sum}")
    return float(max(value, 0.0))


def negativity_spectral(state, cut: PartitionSpec) -> float:
    """Sum of |negative eigenvalues| of the partial transpose."""
    rho = as_density(state)
    _cut_for(rho, cut)
    eig = hermitian_eigenvalues(partial_transpose(rho.matrix, rho.dims, cut.left))
    return -float(np.sum(eig[eig < 0]))


def realignment_norm(state, cut: PartitionSpec) -> float:
    """Trace norm of the realigned matrix across ``cut``."""
    rho = as_density(state)
    _cut_for(rho, cut)
    order = list(cut.left) + list(cut.right)
    grouped = permute_subsystems(rho.matrix, rho.dims, order)
    da = int(np.prod([rho.dims[i] for i in cut.left]))
    blocks = (da, grouped.shape[0] // da)
    return trace_norm(realign(grouped, blocks))


def realignment_measure(state, cut: PartitionSpec) -> float:
    return float(max((realignment_norm(state, cut) - 1) / 2, 0.0))


def schmidt_2xd(psi: StateVector, cut: PartitionSpec) -> SchmidtDecomposition:
    if len(cut.left) != 1 or psi.dims[cut.left[0]] != 2:
        raise ValueError("schmidt_2xd needs a single-qubit left block")
    u, s, vh = np.linalg.svd(_reduced_left(psi, cut), full_matrices=False)
    return SchmidtDecomposition(s, u, vh.T)


def measure(state, cut: PartitionSpec, kind: str) -> float:
    """Dispatch by name: ``concurrence``, ``negativity`` or ``realignment``.

    Concurrence is available for two-qubit states (Wootters) and for pure
    states across a single-qubit cut.
    """
    if kind == "negativity":
        return negativity(state, cut)
    if kind == "realignment":
        return realignment_measure(state, cut)
    if kind == "concurrence":
        if isinstance(state, StateVector) and len(cut.left) == 1:
            return concurrence_pure_cut(state, cut)
        rho = as_density(state)
        if rho.dims == (2, 2):
            return concurrence_wootters(rho)
        raise ValueError("mixed-state concurrence is only defined here for two qubits")
    raise ValueError(f"unknown measure {kind!r}")


def clip_radicand(x: float, tol: float = SQRT_CLIP) -> float:
    if x < -tol:
        raise NumericError(f"negative radicand {x:.3e}")
    return max(x, 0.0)

