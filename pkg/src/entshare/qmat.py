"""Dense complex linear algebra for composite quantum systems.

Matrices are plain ``numpy`` arrays. A composite system is annotated by a
tuple of subsystem dimensions; subsystem 0 is the most significant tensor
factor, matching ``numpy.kron`` and row-major reshaping.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
EIG_CLIP = 1e-10


class DimensionError(ValueError):
    """Matrix shape and subsystem dimensions do not agree."""


class NotHermitianError(ValueError):
    pass


class NumericError(ArithmeticError):
    """A decomposition failed to converge or produced inconsistent output."""


def as_matrix(m, *, square: bool = False) -> np.ndarray:
    """Return ``m`` as a 2-D complex array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != size:
        raise DimensionError(f"dims {dims} multiply to {int(np.prod(dims))}, matrix has size {size}")
    return dims


def _index_set(idx: Iterable[int], n: int, name: str) -> list[int]:
    out = sorted({int(i) for i in idx})
    if any(i < 0 or i >= n for i in out):
        raise DimensionError(f"{name} indices {out} out of range for {n} subsystems")
    return out


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not in ``keep``.

    The kept subsystems stay in their original relative order.
    """
    rho = as_matrix(rho, square=True)
    dims = check_dims(dims, rho.shape[0])
    n = len(dims)
    keep = _index_set(keep, n, "keep")
    if not keep:
        raise DimensionError("keep set must be nonempty")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # contract row/col axes of each traced subsystem, highest axis first
    for k, i in enumerate(reversed(traced)):
        m = n - k
        t = np.trace(t, axis1=i, axis2=i + m)
    d = int(np.prod([dims[i] for i in keep]))
    return t.reshape(d, d)


def partial_transpose(rho, dims: Sequence[int], part: Iterable[int]) -> np.ndarray:
    """Transpose the row/column indices of the subsystems in ``part``."""
    rho = as_matrix(rho, square=True)
    dims = check_dims(dims, rho.shape[0])
    n = len(dims)
    part = _index_set(part, n, "part")
    axes = list(range(2 * n))
    for i in part:
        axes[i], axes[n + i] = n + i, i
    return rho.reshape(dims + dims).transpose(axes).reshape(rho.shape)


def permute_subsystems(rho, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of an operator so that ``order[k]`` becomes factor k."""
    rho = as_matrix(rho, square=True)
    dims = check_dims(dims, rho.shape[0])
    n = len(dims)
    order = [int(i) for i in order]
    if sorted(order) != list(range(n)):
        raise DimensionError(f"order {order} is not a permutation of {n} subsystems")
    axes = order + [n + i for i in order]
    return rho.reshape(dims + dims).transpose(axes).reshape(rho.shape)


def realign(rho, dims: Sequence[int]) -> np.ndarray:
    """Realignment (reshuffling) over a two-block system ``dims = (dA, dB)``.

    Entry ``[(i, j), (k, l)]`` of the result is ``rho[(i, k), (j, l)]`` where
    i, j index block A and k, l index block B. Callers with more than two
    subsystems group them first (see :func:`group_bipartition`).
    """
    rho = as_matrix(rho, square=True)
    if len(dims) != 2:
        raise DimensionError("realign needs exactly two blocks; group the subsystems first")
    da, db = check_dims(dims, rho.shape[0])
    return rho.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db * db)


def group_bipartition(rho, dims: Sequence[int], left: Sequence[int]) -> tuple[np.ndarray, tuple[int, int]]:
    """Move the ``left`` subsystems to the front and return the two-block operator.

    Returns the permuted matrix and the block dimensions ``(dA, dB)``.
    """
    rho = as_matrix(rho, square=True)
    dims = check_dims(dims, rho.shape[0])
    n = len(dims)
    left = _index_set(left, n, "left")
    right = [i for i in range(n) if i not in left]
    if not left or not right:
        raise DimensionError("both blocks of a bipartition must be nonempty")
    da = int(np.prod([dims[i] for i in left]))
    return permute_subsystems(rho, dims, left + right), (da, rho.shape[0] // da)


def singular_values(m) -> np.ndarray:
    m = as_matrix(m)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD did not converge: {exc}") from exc


def trace_norm(m) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(m)))


def hermiticity_error(m) -> float:
    m = as_matrix(m, square=True)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order."""
    m = as_matrix(m, square=True)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |m - m^H| = {err:.3e})")
    try:
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver did not converge: {exc}") from exc
    return w[::-1]


def clip_small_negative(w: np.ndarray, tol: float = EIG_CLIP) -> np.ndarray:
    """Zero out eigenvalues in ``[-tol, 0)``; leave anything more negative alone."""
    w = np.array(w, dtype=float)
    w[(w < 0) & (w >= -tol)] = 0.0
    return w
