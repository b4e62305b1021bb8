import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_state, random_unit
from oracles import grid_gamma, grid_usd, principal_minors_psd

from antiparallel import protrans
from antiparallel.bloch import BlochVector, GreatCircle, NoFit, great_circle_fit
from antiparallel.errors import (
    DuplicateVectors,
    EmptyInput,
    GammaOutOfRange,
    LengthMismatch,
    PriorMismatch,
    SizeMismatch,
)
from antiparallel.fixtures import equator, meridian_xz, tetrahedron
from antiparallel.protrans import (
    Impossible,
    Probabilistic,
    PsdInfeasible,
    RankObstruction,
    compare_sets,
    max_uniform_gamma,
    optimize_uniform_gamma,
    psd_feasible,
    rank_obstruction,
    softmin_and_grad,
    usd_max_success,
)
from antiparallel.states import Exact, Infeasible, antiparallel, gram, parallel

seeds = st.integers(0, 2**32 - 1)


def families(vectors):
    return [parallel(v) for v in vectors], [antiparallel(v) for v in vectors]


def off_circle(rng):
    while True:
        v = [random_unit(rng) for _ in range(3)]
        if isinstance(great_circle_fit(v, 0.01), NoFit):
            return v


class TestPsdFeasible:
    def test_identity_map(self, rng):
        g = gram([random_state(rng, 3) for _ in range(3)])
        assert psd_feasible(g, g, [1, 1, 1], [0, 0, 0])

    def test_orthogonal_target_needs_small_gamma(self):
        c = 0.6
        g_in = np.array([[1, c], [c, 1]])
        g_out = np.eye(2)
        assert psd_feasible(g_in, g_out, [1 - c] * 2, [0, 0])
        assert not psd_feasible(g_in, g_out, [1 - c + 1e-3] * 2, [0, 0])

    def test_errors(self):
        g = np.eye(2)
        with pytest.raises(SizeMismatch):
            psd_feasible(g, np.eye(3), [1, 1], [0, 0])
        with pytest.raises(SizeMismatch):
            psd_feasible(g, g, [1], [0, 0])
        with pytest.raises(GammaOutOfRange):
            psd_feasible(g, g, [1.5, 1], [0, 0])

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_matches_minor_oracle_away_from_boundary(self, seed):
        rng = np.random.default_rng(seed)
        par, anti = families([random_unit(rng) for _ in range(3)])
        gam, ph = rng.uniform(0, 1, 3), rng.uniform(0, 2 * np.pi, 3)
        amp = np.sqrt(gam) * np.exp(1j * ph)
        m = gram(par) - np.conj(amp)[:, None] * gram(anti) * amp[None, :]
        if np.min(np.abs(np.linalg.eigvalsh(m))) < 1e-6:
            return
        assert psd_feasible(gram(par), gram(anti), gam, ph) == bool(principal_minors_psd(m, 0.0))


class TestRankObstruction:
    def test_tetrahedron(self):
        par, anti = families(tetrahedron())
        assert rank_obstruction(par, anti) == RankObstruction(3, 4)
        assert rank_obstruction(anti, par) is None

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            rank_obstruction([np.ones(2)], [])
        with pytest.raises(EmptyInput):
            rank_obstruction([], [])


def test_softmin_gradient_matches_finite_differences(rng):
    par, anti = families(off_circle(rng))
    g_in, g_out = gram(par), gram(anti)
    x = rng.uniform(0, 2 * np.pi, 2)
    for offset, scale, frame in ((g_in, 0.4, np.eye(3)), (np.zeros((3, 3)), 1.0, np.linalg.inv(np.linalg.cholesky(g_in)).conj().T)):
        _, grad = softmin_and_grad(offset, scale, frame, g_out, x, 1e-2)
        h = 1e-6
        fd = [
            (softmin_and_grad(offset, scale, frame, g_out, x + h * e, 1e-2)[0]
             - softmin_and_grad(offset, scale, frame, g_out, x - h * e, 1e-2)[0]) / (2 * h)
            for e in np.eye(2)
        ]
        np.testing.assert_allclose(grad, fd, atol=1e-6)


class TestMaxUniformGamma:
    def test_on_circle_is_exact(self):
        par, anti = families(equator())
        assert isinstance(max_uniform_gamma(par, anti), Exact)
        assert isinstance(max_uniform_gamma(anti, par), Exact)

    def test_tetrahedron(self):
        par, anti = families(tetrahedron())
        assert max_uniform_gamma(par, anti) == Impossible(RankObstruction(3, 4))
        res = max_uniform_gamma(anti, par)
        assert isinstance(res, Probabilistic)
        assert res.gamma == pytest.approx(0.5, abs=2e-6)

    def test_tetrahedron_first_three_vertices(self):
        par, anti = families(tetrahedron()[:3])
        res = max_uniform_gamma(par, anti)
        assert res.gamma == pytest.approx(0.5, abs=2e-6)

    def test_result_is_feasible(self, rng):
        for _ in range(5):
            par, anti = families(off_circle(rng))
            res = max_uniform_gamma(par, anti)
            assert psd_feasible(gram(par), gram(anti), [res.gamma] * 3, res.phases)
            assert -1e-8 <= res.certificate <= 1e-3

    def test_orthogonal_outputs_give_impossible(self):
        # a repeated input can never be sent to two orthogonal outputs
        e = np.eye(2)
        assert max_uniform_gamma([e[0], e[0]], [e[0], e[1]]) == Impossible(RankObstruction(1, 2))

    def test_psd_infeasible(self):
        # a repeated input cannot be sent to two different outputs
        a, b = np.array([1, 0, 0]), np.array([0, 1, 0])
        assert max_uniform_gamma([a, b, a], [a, b, b]) == Impossible(PsdInfeasible())

    def test_singular_inputs_infeasible(self):
        # inputs obey d = 2c a - b; any contraction then fixes the image of d,
        # and no phase choice makes it parallel to the requested output
        c, s = np.cos(0.4), np.sin(0.4)
        inputs = [np.array([1, 0]), np.array([c, s]), np.array([c, -s])]
        outputs = [np.array([1, 0]), np.array([c, s]), np.array([c, 1j * s])]
        assert max_uniform_gamma(inputs, outputs) == Impossible(PsdInfeasible())
        assert grid_gamma(gram(inputs), gram(outputs)) == 0.0

    def test_both_search_modes_agree(self, rng, monkeypatch):
        par, anti = families(off_circle(rng))
        cached = optimize_uniform_gamma(gram(par), gram(anti))[0]
        monkeypatch.setattr(protrans, "INVERTIBLE_EIG", np.inf)
        fresh = optimize_uniform_gamma(gram(par), gram(anti))[0]
        assert cached == pytest.approx(fresh, abs=1e-4)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            max_uniform_gamma([np.ones(2)], [])


class TestOracleAgreement:
    """The coarse phase grid only ever undershoots; a finer grid closes the gap."""

    def test_never_below_grid(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            par, anti = families(off_circle(rng))
            res = max_uniform_gamma(par, anti)
            assert res.gamma >= grid_gamma(gram(par), gram(anti)) - 1e-6

    def test_large_gaps_close_on_finer_grid(self):
        rng = np.random.default_rng(4)
        checked = 0
        for _ in range(20):
            par, anti = families(off_circle(rng))
            res = max_uniform_gamma(par, anti)
            if res.gamma - grid_gamma(gram(par), gram(anti)) > 2e-2:
                fine = grid_gamma(gram(par), gram(anti), 1e-4, 400)
                assert abs(res.gamma - fine) < 5e-3
                checked += 1
        assert checked > 0


class TestUSD:
    @pytest.mark.parametrize("c", [0.0, 0.3, 0.6, 0.99])
    def test_two_states(self, c):
        a = np.array([1, 0])
        b = np.array([c, np.sqrt(1 - c**2)])
        assert usd_max_success([a, b]).value == pytest.approx(1 - c, abs=1e-8)

    def test_unequal_priors_two_states(self):
        # closed form for p1 <= p2 in the interior regime: 1 - 2 sqrt(p1 p2) c
        c, p = 0.3, (0.4, 0.6)
        a, b = np.array([1, 0]), np.array([c, np.sqrt(1 - c**2)])
        assert usd_max_success([a, b], p).value == pytest.approx(1 - 2 * np.sqrt(p[0] * p[1]) * c, abs=1e-8)

    def test_orthonormal(self):
        assert usd_max_success(list(np.eye(3))).value == 1.0

    def test_dependent(self):
        par, anti = families(tetrahedron())
        assert usd_max_success(par).value == 0.0
        assert usd_max_success(anti).value == pytest.approx(2 / 3, abs=1e-7)

    def test_equator(self):
        par, anti = families(equator())
        assert usd_max_success(par).value == pytest.approx(1 / 3, abs=1e-7)
        assert usd_max_success(anti).value == pytest.approx(1 / 3, abs=1e-7)

    @settings(max_examples=15, deadline=None)
    @given(seeds)
    def test_against_grid_oracle(self, seed):
        rng = np.random.default_rng(seed)
        states = [random_state(rng, 3) for _ in range(3)]
        res = usd_max_success(states)
        grid = grid_usd(gram(states))
        # rounding the optimum down onto the grid stays feasible
        assert res.value - 0.02 <= grid <= res.value + 1e-9
        assert psd_feasible(gram(states), np.eye(3), np.array(res.gammas) * (1 - 1e-9), np.zeros(3))

    def test_prior_errors(self):
        e = list(np.eye(2))
        with pytest.raises(PriorMismatch):
            usd_max_success(e, [1.0])
        with pytest.raises(PriorMismatch):
            usd_max_success(e, [0.7, 0.7])
        with pytest.raises(EmptyInput):
            usd_max_success([])


class TestCompareSets:
    def test_tetrahedron(self):
        r = compare_sets(tetrahedron())
        assert not r.on_circle
        assert r.dims == (3, 4)
        assert isinstance(r.exact_pa, Infeasible)
        assert r.protrans_pa == Impossible(RankObstruction(3, 4))
        assert r.protrans_ap.gamma == pytest.approx(0.5, abs=2e-6)

    def test_meridian(self):
        r = compare_sets(meridian_xz())
        assert r.on_circle and isinstance(r.exact_pa, Exact) and isinstance(r.exact_ap, Exact)

    def test_duplicates(self):
        n = BlochVector(1.0, 0.0, 0.0)
        with pytest.raises(DuplicateVectors):
            compare_sets([n, n])

    def test_empty(self):
        with pytest.raises(EmptyInput):
            compare_sets([])
