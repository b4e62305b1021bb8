"""
Feasibility ladder for probabilistic exact state-set transformations.

A map ``|in_i> -> sqrt(gamma_i) e^{i delta_i} |out_i>`` (plus an orthogonal
failure branch) exists iff

    G_in - D^dagger G_out D  is positive semidefinite,
    D = diag(sqrt(gamma_i) e^{i delta_i}),

where ``G[i, j] = <i|j>``. With this ordering the phases play the same role
as the exact-transformation phases of :func:`~antiparallel.states.exact_transformability`,
so ``psd_feasible(G_in, G_out, 1, exact.phases)`` holds for exact pairs.

The ladder tried by :func:`max_uniform_gamma` is: exact unitary, then the
rank obstruction (a linear process cannot enlarge the span), then the
largest uniform success probability found by bisection over ``gamma`` with
an inner search over phases.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import minimize

from .bloch import GEOM_TOL, BlochVector, GreatCircle, NoFit, great_circle_fit
from .errors import (
    DuplicateVectors,
    EmptyInput,
    GammaOutOfRange,
    LengthMismatch,
    PriorMismatch,
    SizeMismatch,
)
from .linalg import DEFAULT_RANK_TOL, as_matrix, is_psd, numerical_rank
from .states import (
    Exact,
    Infeasible,
    antiparallel,
    exact_transformability,
    gram,
    parallel,
    span_dimension,
)

log = logging.getLogger(__name__)

GAMMA_WIDTH = 1e-6
PHASE_GRID = 32
PHASE_XTOL = 1e-4
LINE_POINTS = 4
MAX_SWEEPS = 5
SOFTMIN_MUS = (1e-3, 1e-6)
# below this smallest Gram eigenvalue the inputs count as linearly dependent
INVERTIBLE_EIG = 1e-10
# cap on coarse-grid size; only reached for k > 4
MAX_GRID_POINTS = PHASE_GRID**3


@dataclass(frozen=True)
class RankObstruction:
    rank_in: int
    rank_out: int


@dataclass(frozen=True)
class PsdInfeasible:
    """No positive uniform success probability passed the PSD test."""


@dataclass(frozen=True)
class Probabilistic:
    gamma: float
    phases: tuple[float, ...]
    certificate: float


@dataclass(frozen=True)
class Impossible:
    reason: Union[RankObstruction, PsdInfeasible]


FeasibilityResult = Union[Exact, Probabilistic, Impossible]


def _scaled_phase_matrix(g_out: np.ndarray, phases) -> np.ndarray:
    """``D^dagger G_out D`` for unit-modulus ``D``; batched over leading axes of ``phases``."""
    d = np.exp(1j * np.asarray(phases, dtype=float))
    return np.conj(d)[..., :, None] * g_out * d[..., None, :]


def psd_feasible(g_in, g_out, gammas, phases, tol: float = 1e-9) -> bool:
    """
    PSD test for success probabilities ``gammas`` with relative ``phases``.

    Returns True iff ``G_in - D^dagger G_out D >= -tol`` in the spectral sense,
    i.e. a unitary-plus-measurement achieving the given success
    probabilities exists.
    """
    g_in, g_out = as_matrix(g_in), as_matrix(g_out)
    k = g_in.shape[0]
    gammas = np.asarray(gammas, dtype=float).ravel()
    phases = np.asarray(phases, dtype=float).ravel()
    if g_out.shape != (k, k) or g_in.shape != (k, k):
        raise SizeMismatch(f"Gram shapes {g_in.shape} and {g_out.shape}")
    if gammas.size != k or phases.size != k:
        raise SizeMismatch(f"need {k} gammas and phases, got {gammas.size} and {phases.size}")
    if np.any(gammas < 0) or np.any(gammas > 1) or not np.all(np.isfinite(gammas)):
        raise GammaOutOfRange(f"gammas must lie in [0, 1], got {gammas}")
    amp = np.sqrt(gammas) * np.exp(1j * phases)
    diff = g_in - np.conj(amp)[:, None] * g_out * amp[None, :]
    return is_psd(diff, tol)


def rank_obstruction(
    inputs: Sequence, outputs: Sequence, tol: float = DEFAULT_RANK_TOL
) -> Optional[RankObstruction]:
    """Witness ``(rank_in, rank_out)`` if the outputs span more than the inputs."""
    if len(inputs) != len(outputs):
        raise LengthMismatch(f"{len(inputs)} inputs vs {len(outputs)} outputs")
    if len(inputs) == 0:
        raise EmptyInput("need at least one state pair")
    r_in = numerical_rank(inputs, tol)
    r_out = numerical_rank(outputs, tol)
    if r_out > r_in:
        return RankObstruction(r_in, r_out)
    return None


def softmin_and_grad(offset, scale, frame, g_out, free_phases, mu):
    """
    Soft minimum of the spectrum of ``offset - scale * B^dagger Z(delta) B``.

    ``Z(delta) = D^dagger G_out D`` with ``D = diag(e^{i delta})``, ``B`` is
    ``frame`` and ``delta = (0, *free_phases)``. Returns the soft minimum
    ``-mu log sum exp(-lambda_i / mu)``, which lies within ``mu log k`` below
    the smallest eigenvalue, and its gradient with respect to ``free_phases``.
    """
    k = g_out.shape[0]
    d = np.exp(1j * np.concatenate(([0.0], free_phases)))
    z = np.conj(d)[:, None] * g_out * d[None, :]
    lam, u = np.linalg.eigh(offset - scale * (frame.conj().T @ z @ frame))
    w = np.exp(-(lam - lam[0]) / mu)
    total = w.sum()
    soft = lam[0] - mu * np.log(total)
    w /= total
    # d lam_i / d delta_j = -scale v_i^dagger (dZ/d delta_j) v_i with v_i = B u_i,
    # (dZ/d delta_j)_ab = i Z_ab ([b == j] - [a == j])
    v = frame @ u
    zv = z @ v
    vz = np.conj(v).T @ z
    dlam = np.empty((k, lam.size))
    for j in range(k):
        dlam[j] = np.real(-scale * 1j * (vz[:, j] * v[j, :] - np.conj(v[j, :]) * zv[j, :]))
    return float(soft), (dlam @ w)[1:]


class _PhaseSearch:
    """
    Maximise ``lambda_min(offset - scale * B^dagger Z(delta) B)`` over phases.

    The first phase is pinned to 0. A fixed coarse grid is scored in one
    batched eigenvalue call. The best grid point is then refined by BFGS on
    a soft minimum of the spectrum (the maximum usually sits on a crossing
    of two eigenvalues, where the plain minimum has a kink), followed by
    coordinate descent and a joint pattern search, both on shrinking grids
    down to a spacing of 1e-4. If ``target`` is given the search stops as
    soon as it is reached.
    """

    def __init__(self, g_out, offset, scale=1.0, frame=None, target=None):
        self.g_out = g_out
        self.k = g_out.shape[0]
        self.offset = offset
        self.scale = scale
        self.frame = np.eye(self.k) if frame is None else frame
        self.target = np.inf if target is None else target
        free = self.k - 1
        per_axis = PHASE_GRID
        if free > 3:
            per_axis = max(4, int(MAX_GRID_POINTS ** (1.0 / free)))
        self.step = 2 * np.pi / per_axis
        axis = np.arange(per_axis) * self.step
        grid = np.array(list(itertools.product(axis, repeat=free))).reshape(-1, free)
        self.grid = np.hstack([np.zeros((grid.shape[0], 1)), grid])
        pattern = np.array(list(itertools.product(np.linspace(-1.0, 1.0, 9), repeat=free)))
        self.pattern = np.hstack([np.zeros((pattern.shape[0], 1)), pattern.reshape(-1, free)])

    def values(self, phases) -> np.ndarray:
        """Smallest eigenvalue for each row of ``phases`` (or a scalar for one row)."""
        z = _scaled_phase_matrix(self.g_out, phases)
        f = self.frame
        m = self.offset - self.scale * (f.conj().T @ z @ f)
        return np.linalg.eigvalsh(m)[..., 0]

    def _best_of(self, trial, phases, val):
        vals = self.values(trial)
        best = int(np.argmax(vals))
        if vals[best] > val:
            return trial[best].copy(), float(vals[best])
        return phases, val

    def _line_search(self, phases, val, j):
        half = self.step
        offsets = np.linspace(-1.0, 1.0, 2 * LINE_POINTS + 1)
        while half > PHASE_XTOL:
            trial = np.repeat(phases[None], offsets.size, axis=0)
            trial[:, j] = phases[j] + half * offsets
            phases, val = self._best_of(trial, phases, val)
            half /= LINE_POINTS
        return phases, val

    def _pattern_search(self, phases, val):
        half = self.step
        while half > PHASE_XTOL:
            phases, val = self._best_of(phases[None] + half * self.pattern, phases, val)
            half /= 2
        return phases, val

    def _smooth_ascent(self, phases, val):
        x = np.asarray(phases[1:], dtype=float)

        def neg(f, mu):
            soft, grad = softmin_and_grad(self.offset, self.scale, self.frame, self.g_out, f, mu)
            return -soft, -grad

        for mu in SOFTMIN_MUS:
            res = minimize(neg, x, args=(mu,), jac=True, method="BFGS",
                           options={"gtol": 1e-10, "maxiter": 200})
            x = res.x
            cand = np.concatenate(([0.0], x))
            cval = float(self.values(cand))
            if cval > val:
                phases, val = cand, cval
            if val >= self.target:
                break
            # lambda_min <= softmin + mu log k: sharper stages cannot reach the target
            if -res.fun + mu * np.log(self.k) < self.target:
                break
        return phases, val

    def run(self, start=None) -> tuple[np.ndarray, float]:
        if start is not None:
            start = np.asarray(start, dtype=float)
            val = float(self.values(start))
            if val >= self.target:
                return start, val
        vals = self.values(self.grid)
        best = int(np.argmax(vals))
        phases, val = self.grid[best].copy(), float(vals[best])
        if val >= self.target or self.k == 1:
            return phases, val
        phases, val = self._smooth_ascent(phases, val)
        for _ in range(MAX_SWEEPS):
            if val >= self.target:
                break
            before = val
            for j in range(1, self.k):
                phases, val = self._line_search(phases, val, j)
            phases, val = self._pattern_search(phases, val)
            if val - before < 1e-12:
                break
        return phases, val


def _check_pair_lists(inputs: Sequence, outputs: Sequence) -> None:
    if len(inputs) != len(outputs):
        raise LengthMismatch(f"{len(inputs)} inputs vs {len(outputs)} outputs")
    if len(inputs) == 0:
        raise EmptyInput("need at least one state pair")


def optimize_uniform_gamma(
    g_in: np.ndarray, g_out: np.ndarray, tol: float = 1e-9
) -> tuple[float, np.ndarray, float]:
    """
    Bisection for the largest uniform ``gamma`` passing the PSD test.

    Each bisection step asks the phase search for phases making
    ``G_in - gamma Z(delta)`` PSD within ``tol``. When ``G_in`` is
    nonsingular, ``G_in - gamma Z >= 0`` is equivalent to
    ``gamma <= 1 / lambda_max(G_in^{-1/2} Z G_in^{-1/2})``, a margin that does
    not depend on ``gamma``; the search for its best phases is then run once
    and reused by every step. Singular ``G_in`` falls back to a fresh search
    of ``lambda_min(G_in - gamma Z)`` at each step.

    Returns ``(gamma, phases, certificate)`` where ``gamma`` is the feasible
    end of the final bracket (width 1e-6) and ``certificate`` is the
    smallest eigenvalue of the PSD test matrix there.
    """
    k = g_in.shape[0]
    lam, vec = np.linalg.eigh(g_in)

    def margin(gamma, phases):
        return float(np.linalg.eigvalsh(g_in - gamma * _scaled_phase_matrix(g_out, phases))[0])

    if lam[0] > INVERTIBLE_EIG:
        inv_sqrt = (vec / np.sqrt(lam)) @ vec.conj().T
        ratio_phases, _ = _PhaseSearch(g_out, np.zeros((k, k)), 1.0, inv_sqrt).run()

        def step(gamma, start):
            return ratio_phases, margin(gamma, ratio_phases)
    else:
        def step(gamma, start):
            return _PhaseSearch(g_out, g_in, gamma, target=-tol).run(start)

    lo, hi = 0.0, 1.0
    best_phases = np.zeros(k)
    best_val = margin(0.0, best_phases)
    while hi - lo > GAMMA_WIDTH:
        mid = 0.5 * (lo + hi)
        phases, val = step(mid, best_phases)
        if val >= -tol:
            lo, best_phases, best_val = mid, phases, val
        else:
            hi = mid
    return lo, best_phases, best_val


def max_uniform_gamma(
    inputs: Sequence, outputs: Sequence, tol: float = 1e-9
) -> FeasibilityResult:
    """
    Classify the transformation ``inputs[i] -> outputs[i]``.

    Returns
    -------
    Exact
        A single unitary does it (success probability 1).
    Impossible
        The outputs span a larger space than the inputs, or no positive
        uniform success probability is PSD-feasible.
    Probabilistic
        Largest uniform success probability ``gamma`` in ``(0, 1)``, the
        phases reaching it and the smallest eigenvalue of the PSD test
        matrix there.
    """
    _check_pair_lists(inputs, outputs)
    exact = exact_transformability(inputs, outputs, tol)
    if isinstance(exact, Exact):
        return exact
    obstruction = rank_obstruction(inputs, outputs, max(tol, DEFAULT_RANK_TOL))
    if obstruction is not None:
        return Impossible(obstruction)
    gamma, phases, cert = optimize_uniform_gamma(gram(inputs), gram(outputs), tol)
    if gamma <= GAMMA_WIDTH:
        return Impossible(PsdInfeasible())
    log.debug("uniform gamma %.6f, certificate %.3e", gamma, cert)
    return Probabilistic(float(gamma), tuple(float(p) for p in phases), float(cert))


@dataclass(frozen=True)
class USDResult:
    value: float
    gammas: tuple[float, ...]


def _usd_barrier(g: np.ndarray, p: np.ndarray) -> np.ndarray:
    """
    Maximise ``p . gamma`` subject to ``G - diag(gamma) >= 0`` by a log-barrier Newton method.

    ``G`` must be positive definite. The barrier is
    ``mu * (log det(G - diag gamma) + sum log gamma)``; ``mu`` shrinks by 10
    per stage down to 1e-12, so the final duality gap is below ``2k * 1e-12``.
    """
    k = g.shape[0]
    lam = np.linalg.eigvalsh(g)[0]
    gam = np.full(k, 0.5 * lam)

    def barrier(x, mu):
        if np.any(x <= 0):
            return -np.inf
        try:
            c = np.linalg.cholesky(g - np.diag(x))
        except np.linalg.LinAlgError:
            return -np.inf
        logdet = 2 * np.sum(np.log(np.abs(np.diag(c))))
        return p @ x + mu * (logdet + np.sum(np.log(x)))

    mu = 1.0
    while mu > 1e-12:
        for _ in range(100):
            minv = np.linalg.inv(g - np.diag(gam))
            grad = p + mu * (-np.real(np.diag(minv)) + 1 / gam)
            hess = -mu * (np.abs(minv) ** 2 + np.diag(1 / gam**2))
            step = -np.linalg.solve(hess, grad)
            decrement = float(grad @ step)
            if decrement < 1e-14:
                break
            f0 = barrier(gam, mu)
            t = 1.0
            while t > 1e-12:
                trial = gam + t * step
                if barrier(trial, mu) >= f0 + 0.25 * t * (grad @ step):
                    break
                t *= 0.5
            else:
                break
            gam = trial
        mu *= 0.1
    return gam


def usd_max_success(
    states: Sequence, priors: Optional[Sequence[float]] = None, tol: float = DEFAULT_RANK_TOL
) -> USDResult:
    """
    Optimal unambiguous discrimination of ``states``.

    Unambiguous discrimination is the probabilistic transformation onto an
    orthonormal set, so the PSD condition reduces to
    ``G - diag(gamma) >= 0`` and phases drop out. The prior-weighted success
    ``sum p_i gamma_i`` is maximised. Linearly dependent sets give 0.

    Parameters
    ----------
    states : sequence of array_like
        State vectors, all of one dimension.
    priors : sequence of float, optional
        Non-negative, summing to 1 within 1e-10. Uniform if omitted.
    tol : float
        Relative rank tolerance used to detect linear dependence.
    """
    k = len(states)
    if k == 0:
        raise EmptyInput("usd_max_success needs at least one state")
    if priors is None:
        p = np.full(k, 1.0 / k)
    else:
        p = np.asarray(priors, dtype=float).ravel()
        if p.size != k:
            raise PriorMismatch(f"{p.size} priors for {k} states")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
            raise PriorMismatch(f"priors must be non-negative and sum to 1, got {p.tolist()}")
    g = gram(states)
    if numerical_rank(states, tol) < k:
        return USDResult(0.0, (0.0,) * k)
    if np.max(np.abs(g - np.eye(k))) <= tol:
        return USDResult(float(p.sum()), (1.0,) * k)
    gam = np.clip(_usd_barrier(g, p), 0.0, 1.0)
    return USDResult(float(p @ gam), tuple(float(x) for x in gam))


@dataclass
class AsymmetryReport:
    """Parallel vs anti-parallel comparison for one set of Bloch vectors."""

    vectors: list[BlochVector]
    circle: Union[GreatCircle, NoFit]
    dims: tuple[int, int]
    exact_pa: Union[Exact, Infeasible]
    exact_ap: Union[Exact, Infeasible]
    protrans_pa: FeasibilityResult
    protrans_ap: FeasibilityResult
    usd_parallel: USDResult
    usd_antiparallel: USDResult
    tol: float = field(default=GEOM_TOL)

    @property
    def on_circle(self) -> bool:
        return isinstance(self.circle, GreatCircle)


def compare_sets(vectors: Sequence[BlochVector], tol: float = GEOM_TOL) -> AsymmetryReport:
    """Run every analysis on ``P_S`` and ``A_S`` for the Bloch vectors ``S``."""
    if len(vectors) == 0:
        raise EmptyInput("compare_sets needs at least one vector")
    arr = np.array([v.as_array() for v in vectors])
    for i, j in itertools.combinations(range(len(arr)), 2):
        if np.max(np.abs(arr[i] - arr[j])) <= GEOM_TOL:
            raise DuplicateVectors(f"vectors {i} and {j} coincide")
    par = [parallel(v) for v in vectors]
    anti = [antiparallel(v) for v in vectors]
    rank_tol = max(tol, DEFAULT_RANK_TOL)
    return AsymmetryReport(
        vectors=list(vectors),
        circle=great_circle_fit(vectors, tol),
        dims=(span_dimension(par, rank_tol), span_dimension(anti, rank_tol)),
        exact_pa=exact_transformability(par, anti, tol),
        exact_ap=exact_transformability(anti, par, tol),
        protrans_pa=max_uniform_gamma(par, anti, tol),
        protrans_ap=max_uniform_gamma(anti, par, tol),
        usd_parallel=usd_max_success(par, tol=rank_tol),
        usd_antiparallel=usd_max_success(anti, tol=rank_tol),
        tol=tol,
    )
