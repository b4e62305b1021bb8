"""
Bloch vectors, gauge-fixed qubit states and great circles.

A qubit state is stored as a length-2 complex ``numpy`` array in a fixed
gauge: the first amplitude with modulus above ``GAUGE_EPS`` is real and
non-negative. Every phase-sensitive computation downstream is written to be
invariant under per-state phases, so the gauge never shows up in results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import EmptyInput, NotNormalized, NotUnit

GEOM_TOL = 1e-9
GAUGE_EPS = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class BlochVector:
    """Unit vector in R^3 labelling a pure qubit state."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = float(np.sqrt(self.x**2 + self.y**2 + self.z**2))
        if not np.isfinite(norm) or abs(norm - 1.0) > GEOM_TOL:
            raise NotUnit(f"|n| = {norm!r}, expected 1")

    @classmethod
    def from_array(cls, v, normalize: bool = False) -> "BlochVector":
        v = np.asarray(v, dtype=float).ravel()
        if v.shape != (3,):
            raise ValueError(f"expected 3 components, got {v.shape[0]}")
        if normalize:
            norm = np.linalg.norm(v)
            if norm == 0:
                raise NotUnit("cannot normalize the zero vector")
            v = v / norm
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "BlochVector":
        """Spherical chart: polar angle ``theta``, azimuth ``phi`` (radians)."""
        st = np.sin(theta)
        return cls(float(st * np.cos(phi)), float(st * np.sin(phi)), float(np.cos(theta)))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other: "BlochVector") -> float:
        return float(self.as_array() @ other.as_array())

    @property
    def angles(self) -> tuple[float, float]:
        """``(theta, phi)`` with ``phi`` set to 0 on the polar axis."""
        theta = float(np.arccos(np.clip(self.z, -1.0, 1.0)))
        if np.hypot(self.x, self.y) == 0.0:
            return theta, 0.0
        return theta, float(np.arctan2(self.y, self.x) % (2 * np.pi))


@dataclass(frozen=True)
class GreatCircle:
    """Great circle ``{n : n . normal = 0}``; the normal is kept canonical."""

    normal: BlochVector

    @classmethod
    def from_normal(cls, w) -> "GreatCircle":
        if isinstance(w, BlochVector):
            w = w.as_array()
        w = np.asarray(w, dtype=float)
        norm = np.linalg.norm(w)
        if norm == 0:
            raise NotUnit("circle normal must be nonzero")
        return cls(BlochVector.from_array(_canonical_sign(w / norm)))

    def contains(self, n: BlochVector, tol: float = GEOM_TOL) -> bool:
        return abs(n.dot(self.normal)) <= tol


@dataclass(frozen=True)
class NoFit:
    """No great circle passes through the vectors; ``residual`` = max |n.w|."""

    residual: float


def _canonical_sign(w: np.ndarray) -> np.ndarray:
    for c in w:
        if abs(c) > GAUGE_EPS:
            return w if c > 0 else -w
    return w


def _fix_gauge(psi: np.ndarray) -> np.ndarray:
    lead = psi[0] if abs(psi[0]) > GAUGE_EPS else psi[1]
    if lead != 0:
        psi = psi * (abs(lead) / lead)
    return psi


def qubit_from_bloch(n: BlochVector) -> np.ndarray:
    """
    Gauge-fixed state ``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``.

    Examples
    --------
    >>> qubit_from_bloch(BlochVector(0, 0, -1))
    array([0.+0.j, 1.+0.j])
    """
    if not isinstance(n, BlochVector):
        n = BlochVector.from_array(n)
    x, y, z = n.x, n.y, n.z
    r = np.hypot(x, y)
    # Split by hemisphere so neither amplitude is computed by cancellation.
    if z >= 0:
        a0 = np.sqrt((1 + z) / 2)
        a1 = complex(x, y) / np.sqrt(2 * (1 + z))
    else:
        mag1 = np.sqrt((1 - z) / 2)
        a0 = r / np.sqrt(2 * (1 - z))
        a1 = mag1 * (complex(x, y) / r) if r > 0 else complex(mag1)
    psi = np.array([a0, a1], dtype=complex)
    psi /= np.linalg.norm(psi)
    return _fix_gauge(psi)


def bloch_from_qubit(psi) -> BlochVector:
    """Bloch vector ``(2 Re a0* a1, 2 Im a0* a1, |a0|^2 - |a1|^2)``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape != (2,):
        raise ValueError(f"qubit state needs 2 amplitudes, got {psi.shape[0]}")
    norm = np.vdot(psi, psi).real
    if abs(norm - 1.0) > GEOM_TOL:
        raise NotNormalized(f"<psi|psi> = {norm!r}")
    c = np.conj(psi[0]) * psi[1]
    v = np.array([2 * c.real, 2 * c.imag, abs(psi[0]) ** 2 - abs(psi[1]) ** 2])
    return BlochVector.from_array(v / np.linalg.norm(v))


def antipode(n: BlochVector) -> BlochVector:
    return BlochVector(-n.x, -n.y, -n.z)


def _perpendicular(v: np.ndarray) -> np.ndarray:
    # cross with the coordinate axis least aligned with v
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(v)))] = 1.0
    w = np.cross(v, axis)
    return w / np.linalg.norm(w)


def great_circle_fit(
    vectors: Sequence[BlochVector], tol: float = GEOM_TOL
) -> Union[GreatCircle, NoFit]:
    """
    Find a great circle through all ``vectors``.

    The candidate normal is the right singular vector of the stacked
    ``(k, 3)`` matrix with the smallest singular value. For one vector, or
    two vectors spanning a plane, the normal comes from a cross product and
    always fits.

    Returns
    -------
    GreatCircle or NoFit
        ``NoFit`` carries ``max_i |n_i . w|`` for the best candidate ``w``.
    """
    if len(vectors) == 0:
        raise EmptyInput("great_circle_fit needs at least one vector")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.array([v.as_array() for v in vectors])
    if len(a) == 1:
        w = _perpendicular(a[0])
    elif len(a) == 2:
        w = np.cross(a[0], a[1])
        nw = np.linalg.norm(w)
        w = w / nw if nw > tol else _perpendicular(a[0])
    else:
        w = np.linalg.svd(a)[2][-1].real
    residual = float(np.max(np.abs(a @ w)))
    if residual > tol:
        return NoFit(residual)
    return GreatCircle.from_normal(w)


def pauli_dot(w: BlochVector) -> np.ndarray:
    """``w_x sigma_x + w_y sigma_y + w_z sigma_z`` for a unit vector ``w``."""
    if not isinstance(w, BlochVector):
        w = BlochVector.from_array(w)
    return w.x * SIGMA_X + w.y * SIGMA_Y + w.z * SIGMA_Z
