"""Pure and mixed multi-qubit states, named constructors and the two-qubit Bloch form."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qmat import (
    EIG_CLIP,
    HERMITIAN_TOL,
    DimensionError,
    as_matrix,
    check_dims,
    hermitian_eigenvalues,
    hermiticity_error,
    partial_trace,
)

NORM_TOL = 1e-10
TRACE_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)


class StateInvariantError(ValueError):
    """A state failed validation; ``invariant`` names the violated property."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(a)):
            raise StateInvariantError("finite", "amplitudes contain NaN or Inf")
        try:
            dims = check_dims(self.dims, a.size)
        except DimensionError as exc:
            raise StateInvariantError("dims", str(exc)) from exc
        norm = np.linalg.norm(a)
        if abs(norm - 1) > NORM_TOL:
            raise StateInvariantError("norm", f"state norm is {norm!r}, expected 1")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    def density(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(np.outer(a, a.conj()), self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    dims: tuple[int, ...]
    eigenvalues: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        try:
            m = as_matrix(self.matrix, square=True)
            dims = check_dims(self.dims, m.shape[0])
        except ValueError as exc:
            raise StateInvariantError("dims", str(exc)) from exc
        herr = hermiticity_error(m)
        if herr > HERMITIAN_TOL:
            raise StateInvariantError("hermitian", f"max |rho - rho^H| = {herr:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1) > TRACE_TOL:
            raise StateInvariantError("trace", f"trace is {tr!r}, expected 1")
        w = hermitian_eigenvalues(m)
        if w[-1] < -EIG_CLIP:
            raise StateInvariantError("positive", f"minimum eigenvalue {w[-1]:.3e}")
        m = m.copy()
        m.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "eigenvalues", w)

    @property
    def n(self) -> int:
        return len(self.dims)

    def reduce(self, keep) -> "DensityMatrix":
        keep = sorted(set(keep))
        return DensityMatrix(partial_trace(self.matrix, self.dims, keep), tuple(self.dims[i] for i in keep))


def as_density(state) -> DensityMatrix:
    """Coerce a StateVector, DensityMatrix or bare qubit array to a DensityMatrix."""
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, StateVector):
        return state.density()
    a = np.asarray(state, dtype=complex)
    if a.ndim == 1:
        return StateVector(a, qubit_dims(a.size)).density()
    return DensityMatrix(a, qubit_dims(a.shape[0]))


def qubit_dims(size: int) -> tuple[int, ...]:
    n = int(round(np.log2(size)))
    if n < 1 or 2**n != size:
        raise DimensionError(f"size {size} is not a power of two; pass explicit dims")
    return (2,) * n


def basis_state(bits: str) -> StateVector:
    """Computational basis state from a bit string such as ``"010"``."""
    a = np.zeros(2 ** len(bits), dtype=complex)
    a[int(bits, 2)] = 1
    return StateVector(a, (2,) * len(bits))


def product_state(*kets) -> StateVector:
    """Tensor product of single-system kets (each normalized here)."""
    a = np.ones(1, dtype=complex)
    dims = []
    for k in kets:
        k = np.asarray(k, dtype=complex).reshape(-1)
        a = np.kron(a, k / np.linalg.norm(k))
        dims.append(k.size)
    return StateVector(a, tuple(dims))


def tensor(*states: StateVector) -> StateVector:
    a = np.ones(1, dtype=complex)
    dims: tuple[int, ...] = ()
    for s in states:
        a = np.kron(a, s.amplitudes)
        dims += s.dims
    return StateVector(a, dims)


def ghz(n: int) -> StateVector:
    if n < 2:
        raise ValueError("GHZ state needs at least 2 qubits")
    a = np.zeros(2**n, dtype=complex)
    a[0] = a[-1] = 1 / np.sqrt(2)
    return StateVector(a, (2,) * n)


def w(n: int) -> StateVector:
    if n < 2:
        raise ValueError("W state needs at least 2 qubits")
    a = np.zeros(2**n, dtype=complex)
    a[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return StateVector(a, (2,) * n)


def bell() -> StateVector:
    """(|00> + |11>)/sqrt(2)."""
    return ghz(2)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of a campaign with base ``seed``.

    Counter scheme: PCG64 seeded from ``SeedSequence([seed, index])``, so each
    sample's stream is independent of evaluation order.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def haar_random_pure(n: int, seed) -> StateVector:
    """Haar-random n-qubit pure state: normalized i.i.d. complex Gaussian amplitudes.

    ``seed`` may be an integer or a ``numpy.random.Generator``.
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    rng = _rng(seed)
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector(z / np.linalg.norm(z), (2,) * n)


def random_mixed(n_keep: int, n_total: int, seed) -> DensityMatrix:
    """Reduced state of the first ``n_keep`` qubits of a Haar-random ``n_total``-qubit pure state."""
    if not 1 <= n_keep < n_total:
        raise ValueError("need 1 <= n_keep < n_total")
    return haar_random_pure(n_total, seed).density().reduce(range(n_keep))


def random_density(dim: int, rank: int, seed) -> DensityMatrix:
    """Random density matrix of the given rank from a normalized Ginibre product ``G G^H``."""
    rng = _rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real, qubit_dims(dim))


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with phase correction."""
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def ghz_w_mixture(p: float) -> DensityMatrix:
    """p |W><W| + (1 - p) |GHZ><GHZ| on three qubits."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    g, wv = ghz(3).amplitudes, w(3).amplitudes
    rho = p * np.outer(wv, wv.conj()) + (1 - p) * np.outer(g, g.conj())
    return DensityMatrix(rho, (2, 2, 2))


@dataclass(frozen=True)
class CorrelationDecomposition:
    """Two-qubit Bloch data: local polarization vectors and the correlation tensor.

    Components are unnormalized Pauli expectations, e.g.
    ``c[a, b] = Tr(rho sigma_a (x) sigma_b)`` with (x, y, z) ordering and
    rows indexing qubit A.
    """

    n_a: np.ndarray
    n_b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        for name, shape in (("n_a", (3,)), ("n_b", (3,)), ("c", (3, 3))):
            v = np.array(getattr(self, name), dtype=float)
            if v.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {v.shape}")
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} has non-finite entries")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        for name in ("n_a", "n_b"):
            norm = np.linalg.norm(getattr(self, name))
            if norm > 1 + 1e-9:
                raise ValueError(f"|{name}| = {norm:.6g} exceeds 1")

    @property
    def marginals_mixed(self) -> bool:
        return bool(np.linalg.norm(self.n_a) < 1e-9 and np.linalg.norm(self.n_b) < 1e-9)


def bloch_decompose(rho) -> CorrelationDecomposition:
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise DimensionError(f"bloch_decompose needs a two-qubit state, got dims {rho.dims}")
    m = rho.matrix
    n_a = [np.trace(m @ np.kron(s, I2)).real for s in PAULIS]
    n_b = [np.trace(m @ np.kron(I2, s)).real for s in PAULIS]
    c = [[np.trace(m @ np.kron(sa, sb)).real for sb in PAULIS] for sa in PAULIS]
    return CorrelationDecomposition(np.array(n_a), np.array(n_b), np.array(c))


def bloch_assemble(d: CorrelationDecomposition) -> np.ndarray:
    """The 4x4 operator with the given Bloch data; positivity is not checked."""
    m = np.eye(4, dtype=complex)
    for k, s in enumerate(PAULIS):
        m += d.n_a[k] * np.kron(s, I2) + d.n_b[k] * np.kron(I2, s)
        for l, t in enumerate(PAULIS):
            m += d.c[k, l] * np.kron(s, t)
    return m / 4
