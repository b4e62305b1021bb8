"""
Exact flip machines for a fixed great circle.

The single-qubit flipper for the circle with unit normal ``w`` is ``w . sigma``,
a rotation by pi about ``w``: for every ``n`` with ``n . w = 0`` it sends
``|n>`` to ``|-n>`` up to a phase. The two-qubit machine ``I (x) (w . sigma)``
then takes ``|n, n>`` to ``|n, -n>`` on that circle. No ancilla is carried:
the ancilla output has to be input-independent up to a phase, so it adds
nothing to the two-qubit unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import GEOM_TOL, BlochVector, GreatCircle, pauli_dot
from .errors import NotMeridian
from .states import antiparallel, parallel, wrap_angle

I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True, eq=False)
class FlipMachine:
    circle: GreatCircle
    u2: np.ndarray
    u4: np.ndarray

    @classmethod
    def from_u2(cls, circle: GreatCircle, u2: np.ndarray) -> "FlipMachine":
        u2 = np.array(u2, dtype=complex)
        u4 = np.kron(I2, u2)
        u2.flags.writeable = False
        u4.flags.writeable = False
        return cls(circle, u2, u4)


def flipper_for_circle(circle: GreatCircle) -> FlipMachine:
    """Machine flipping every qubit on ``circle``: ``u2 = w . sigma``."""
    return FlipMachine.from_u2(circle, pauli_dot(circle.normal))


def parallel_to_antiparallel_machine(circle: GreatCircle) -> FlipMachine:
    return flipper_for_circle(circle)


def antiparallel_to_parallel_machine(circle: GreatCircle) -> FlipMachine:
    """Inverse machine; ``w . sigma`` is its own inverse, so ``u2`` is unchanged."""
    u2 = pauli_dot(circle.normal)
    return FlipMachine.from_u2(circle, u2.conj().T)


def machine_fidelity(m: FlipMachine, n: BlochVector) -> float:
    """
    ``|<n, -n| u4 |n, n>|``.

    Equals ``sqrt(1 - (n . w)^2)`` for the flipper of the circle with normal
    ``w``; it is 1 exactly on the circle.
    """
    amp = np.vdot(antiparallel(n), m.u4 @ parallel(n))
    return float(min(abs(amp), 1.0))


def reverse_fidelity(m: FlipMachine, n: BlochVector) -> float:
    """``|<n, n| u4 |n, -n>|``, the figure of merit for the inverse machine."""
    amp = np.vdot(parallel(n), m.u4 @ antiparallel(n))
    return float(min(abs(amp), 1.0))


@dataclass(frozen=True)
class BasisAction:
    """
    Phases of ``u4`` on ``|00>``, ``|11>`` and ``(|01> + |10>)/sqrt(2)``.

    ``u4|00> = e^{ia}|01>``, ``u4|11> = e^{ib}|10>`` and
    ``u4 (|01>+|10>)/sqrt(2) = e^{ic}(c1|00> + c2|11>)``. All angles lie in
    ``(-pi, pi]``. ``predicted_azimuth = (a - b + pi)/2 mod pi`` is the
    azimuth forced on every flipped parallel state; ``circle_azimuth`` is
    the azimuth of the meridian itself, mod pi.
    """

    a: float
    b: float
    c: float
    c1: complex
    c2: complex
    predicted_azimuth: float
    circle_azimuth: float
    leakage: float

    @property
    def norm_c(self) -> float:
        return abs(self.c1) ** 2 + abs(self.c2) ** 2

    @property
    def azimuth_error(self) -> float:
        d = (self.predicted_azimuth - self.circle_azimuth) % np.pi
        return float(min(d, np.pi - d))

    def phi_constraint_holds(self, tol: float = GEOM_TOL) -> bool:
        return self.azimuth_error <= tol


def _basis(index: int) -> np.ndarray:
    e = np.zeros(4, dtype=complex)
    e[index] = 1.0
    return e


def verify_basis_action(m: FlipMachine) -> BasisAction:
    """
    Read off the basis action of a meridian machine and check the azimuth law.

    Raises
    ------
    NotMeridian
        If the circle does not pass through the poles (``|w_z| > 1e-9``).
    """
    w = m.circle.normal
    if abs(w.z) > GEOM_TOL:
        raise NotMeridian(f"circle normal has z-component {w.z:.3e}")

    out00 = m.u4 @ _basis(0)
    out11 = m.u4 @ _basis(3)
    a = wrap_angle(np.angle(out00[1]))
    b = wrap_angle(np.angle(out11[2]))

    sym = m.u4 @ ((_basis(1) + _basis(2)) / np.sqrt(2))
    lead = sym[0] if abs(sym[0]) >= abs(sym[3]) else sym[3]
    c = wrap_angle(np.angle(lead))
    c1 = complex(sym[0] * np.exp(-1j * c))
    c2 = complex(sym[3] * np.exp(-1j * c))
    # weight that escapes span{|00>, |11>}, or that misses the target kets
    leakage = float(
        max(
            np.linalg.norm(sym[1:3]),
            abs(1 - abs(out00[1])),
            abs(1 - abs(out11[2])),
        )
    )

    predicted = ((a - b + np.pi) / 2) % np.pi
    circle_az = (np.arctan2(w.y, w.x) + np.pi / 2) % np.pi
    return BasisAction(a, b, c, c1, c2, float(predicted), float(circle_az), leakage)
