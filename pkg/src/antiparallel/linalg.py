"""
Small dense complex-matrix utilities.

Everything here works on plain ``numpy`` arrays. Matrices are at most 8x8 in
practice, so nothing is tuned for size.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatch, NotHermitian, NotSquare

HERMITIAN_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-8

ComplexMatrix = npt.NDArray[np.complex128]


def as_matrix(m) -> ComplexMatrix:
    """Coerce ``m`` to a 2-D complex array, rejecting NaN/Inf entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise NotSquare(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def _check_square(m: ComplexMatrix) -> None:
    rows, cols = m.shape
    if rows != cols:
        raise NotSquare(f"matrix is {rows}x{cols}")


def _check_hermitian(m: ComplexMatrix) -> None:
    _check_square(m)
    # reject, never symmetrize
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > HERMITIAN_TOL:
        raise NotHermitian(f"max |m - m^dagger| = {dev:.3e}")


def hermitian_eigenvalues(m) -> np.ndarray:
    """
    Eigenvalues of a Hermitian matrix, sorted ascending.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian to within 1e-12 entrywise.

    Returns
    -------
    np.ndarray
        Real eigenvalues in ascending order.

    Raises
    ------
    NotSquare
        If ``m`` is not square.
    NotHermitian
        If ``m`` deviates from its conjugate transpose by more than 1e-12.
    """
    m = as_matrix(m)
    _check_hermitian(m)
    return np.linalg.eigvalsh(m)


def numerical_rank(vectors: Sequence, tol: float = DEFAULT_RANK_TOL) -> int:
    """
    Number of singular values of the stacked vectors above ``tol * s_max``.

    The tolerance is relative so the result does not depend on the overall
    scale of the vectors. An empty list has rank 0.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if len(vectors) == 0:
        return 0
    rows = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    dims = {r.shape[0] for r in rows}
    if len(dims) != 1:
        raise DimensionMismatch(f"vectors have differing dimensions {sorted(dims)}")
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def is_psd(m, tol: float = 1e-9) -> bool:
    """True iff the smallest eigenvalue of Hermitian ``m`` is at least ``-tol``."""
    ev = hermitian_eigenvalues(m)
    return bool(ev.size == 0 or ev[0] >= -tol)


def is_unitary(m, tol: float = 1e-12) -> bool:
    """True iff ``max |m^dagger m - I| <= tol`` entrywise."""
    m = as_matrix(m)
    _check_square(m)
    err = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(err), initial=0.0) <= tol)
