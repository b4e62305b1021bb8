"""
Parallel / anti-parallel two-qubit product states and Gram-matrix tests.

Two-qubit states are length-4 complex arrays in the basis order
``|00>, |01>, |10>, |11>``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .bloch import BlochVector, antipode, qubit_from_bloch
from .errors import EmptyInput, LengthMismatch
from .linalg import DEFAULT_RANK_TOL, numerical_rank


def parallel(n: BlochVector) -> np.ndarray:
    """``|n, n>`` as a 4-vector."""
    q = qubit_from_bloch(n)
    return np.kron(q, q)


def antiparallel(n: BlochVector) -> np.ndarray:
    """``|n, -n>`` as a 4-vector."""
    return np.kron(qubit_from_bloch(n), qubit_from_bloch(antipode(n)))


def gram(states: Sequence) -> np.ndarray:
    """Gram matrix ``G[i, j] = <state_i | state_j>``."""
    if len(states) == 0:
        raise EmptyInput("gram needs at least one state")
    a = np.array([np.asarray(s, dtype=complex).ravel() for s in states])
    g = a.conj() @ a.T
    # exact Hermitian symmetry, so downstream NotHermitian checks never trip on rounding
    return (g + g.conj().T) / 2


def span_dimension(states: Sequence, tol: float = DEFAULT_RANK_TOL) -> int:
    if len(states) == 0:
        raise EmptyInput("span_dimension needs at least one state")
    return numerical_rank(states, tol)


@dataclass(frozen=True)
class Exact:
    """Phases ``theta`` with ``<in_i|in_j> = e^{i(theta_j - theta_i)} <out_i|out_j>``."""

    phases: tuple[float, ...]


@dataclass(frozen=True)
class Infeasible:
    """First violating pair ``(i, j)`` and the kind/size of the violation."""

    pair: tuple[int, int]
    kind: str  # "modulus" or "phase"
    residual: float


def wrap_angle(angle: float) -> float:
    """Map an angle into ``(-pi, pi]``."""
    a = float(np.angle(np.exp(1j * angle)))
    return np.pi if a == -np.pi else a


def exact_transformability(
    inputs: Sequence, outputs: Sequence, tol: float = 1e-9
) -> Union[Exact, Infeasible]:
    """
    Decide whether one unitary maps each ``inputs[i]`` to ``outputs[i]`` up to phase.

    Such a unitary exists iff the Gram matrices agree entrywise after a
    per-state phase relabelling. Moduli are compared first; phase
    differences are then propagated breadth-first along the non-orthogonal
    pairs and every remaining pair is checked for consistency. Pairs whose
    input overlap is at most ``tol`` carry no phase constraint.

    Returns
    -------
    Exact or Infeasible
        ``Exact.phases[0]`` is 0; each disconnected component starts at 0.
        ``Infeasible`` names the lexicographically first violating pair.
    """
    if len(inputs) != len(outputs):
        raise LengthMismatch(f"{len(inputs)} inputs vs {len(outputs)} outputs")
    if len(inputs) == 0:
        raise EmptyInput("need at least one state pair")
    g_in, g_out = gram(inputs), gram(outputs)
    k = len(inputs)

    mod_err = np.abs(np.abs(g_in) - np.abs(g_out))
    for i in range(k):
        for j in range(i + 1, k):
            if mod_err[i, j] > tol:
                return Infeasible((i, j), "modulus", float(mod_err[i, j]))

    phases = np.full(k, np.nan)
    for root in range(k):
        if not np.isnan(phases[root]):
            continue
        phases[root] = 0.0
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(k):
                if np.isnan(phases[j]) and abs(g_in[i, j]) > tol:
                    phases[j] = phases[i] + np.angle(g_in[i, j]) - np.angle(g_out[i, j])
                    queue.append(j)

    rel = np.exp(1j * (phases[None, :] - phases[:, None]))
    resid = np.abs(g_in - rel * g_out)
    for i in range(k):
        for j in range(i + 1, k):
            if resid[i, j] > tol:
                return Infeasible((i, j), "phase", float(resid[i, j]))
    return Exact(tuple(wrap_angle(p) for p in phases))
