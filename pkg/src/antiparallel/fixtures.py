"""Built-in Bloch-vector sets."""

from __future__ import annotations

import numpy as np

from .bloch import BlochVector


def tetrahedron() -> list[BlochVector]:
    """Vertices of the regular tetrahedron with one vertex at the north pole."""
    s8, s2, s23 = np.sqrt(8) / 3, np.sqrt(2) / 3, np.sqrt(2 / 3)
    return [
        BlochVector(0.0, 0.0, 1.0),
        BlochVector(s8, 0.0, -1 / 3),
        BlochVector(-s2, s23, -1 / 3),
        BlochVector(-s2, -s23, -1 / 3),
    ]


def equator() -> list[BlochVector]:
    return [BlochVector(1.0, 0.0, 0.0), BlochVector(0.0, 1.0, 0.0), BlochVector(-1.0, 0.0, 0.0)]


def meridian_xz() -> list[BlochVector]:
    return [BlochVector.from_angles(t, 0.0) for t in (0.0, np.pi / 3, 2 * np.pi / 3)] + [
        BlochVector(0.0, 0.0, -1.0)
    ]


FIXTURES = {
    "tetrahedron": tetrahedron,
    "equator": equator,
    "meridian-xz": meridian_xz,
}
