import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_unit

from antiparallel.bloch import BlochVector, GreatCircle, antipode, qubit_from_bloch
from antiparallel.errors import NotMeridian
from antiparallel.linalg import is_unitary
from antiparallel.machines import (
    antiparallel_to_parallel_machine,
    flipper_for_circle,
    machine_fidelity,
    parallel_to_antiparallel_machine,
    reverse_fidelity,
    verify_basis_action,
)
from antiparallel.states import antiparallel, parallel

seeds = st.integers(0, 2**32 - 1)


def circle_point(circle, t):
    w = circle.normal.as_array()
    e1 = np.cross(w, [1.0, 0, 0] if abs(w[0]) < 0.9 else [0, 1.0, 0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(w, e1)
    return BlochVector.from_array(np.cos(t) * e1 + np.sin(t) * e2, normalize=True)


class TestFlipper:
    def test_sigma_y_circle(self):
        m = flipper_for_circle(GreatCircle.from_normal([0, 1, 0]))
        np.testing.assert_allclose(m.u2, [[0, -1j], [1j, 0]])
        np.testing.assert_allclose(m.u4, np.kron(np.eye(2), m.u2))

    def test_arrays_read_only(self):
        m = flipper_for_circle(GreatCircle.from_normal([0, 0, 1]))
        with pytest.raises(ValueError):
            m.u4[0, 0] = 2

    def test_unitary(self, rng):
        m = flipper_for_circle(GreatCircle.from_normal(random_unit(rng).as_array()))
        assert is_unitary(m.u2) and is_unitary(m.u4)

    def test_flips_every_circle_point(self, rng):
        circle = GreatCircle.from_normal(random_unit(rng).as_array())
        m = flipper_for_circle(circle)
        for t in np.linspace(0, 2 * np.pi, 13):
            n = circle_point(circle, t)
            assert abs(np.vdot(qubit_from_bloch(antipode(n)), m.u2 @ qubit_from_bloch(n))) == pytest.approx(1, abs=1e-12)
            assert machine_fidelity(m, n) == pytest.approx(1, abs=1e-12)

    def test_pole_of_circle_is_fixed(self):
        m = flipper_for_circle(GreatCircle.from_normal([0, 0, 1]))
        assert machine_fidelity(m, BlochVector(0.0, 0.0, 1.0)) == pytest.approx(0, abs=1e-15)

    def test_inverse_machine(self, rng):
        circle = GreatCircle.from_normal(random_unit(rng).as_array())
        fwd = parallel_to_antiparallel_machine(circle)
        back = antiparallel_to_parallel_machine(circle)
        np.testing.assert_allclose(back.u4 @ fwd.u4, np.eye(4), atol=1e-12)
        n = circle_point(circle, 0.3)
        assert reverse_fidelity(back, n) == pytest.approx(1, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_fidelity_symmetric_in_probe_sign(seed):
    rng = np.random.default_rng(seed)
    m = flipper_for_circle(GreatCircle.from_normal(random_unit(rng).as_array()))
    n = random_unit(rng)
    assert machine_fidelity(m, n) == pytest.approx(machine_fidelity(m, antipode(n)), abs=1e-12)
    assert 0 <= machine_fidelity(m, n) <= 1


class TestBasisAction:
    def test_xz_meridian(self):
        act = verify_basis_action(flipper_for_circle(GreatCircle.from_normal([0, 1, 0])))
        assert act.phi_constraint_holds()
        assert act.leakage < 1e-12
        assert act.norm_c == pytest.approx(1, abs=1e-12)

    def test_rejects_non_meridian(self):
        with pytest.raises(NotMeridian):
            verify_basis_action(flipper_for_circle(GreatCircle.from_normal([0, 1, 1])))

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0, 2 * np.pi))
    def test_azimuth_law(self, phi):
        m = flipper_for_circle(GreatCircle.from_normal([np.cos(phi), np.sin(phi), 0.0]))
        act = verify_basis_action(m)
        assert act.azimuth_error < 1e-9
        # every parallel state on the meridian really lands on its anti-parallel partner
        az = act.circle_azimuth
        for theta in (0.4, 1.3, 2.9):
            n = BlochVector.from_angles(theta, az)
            assert abs(np.vdot(antiparallel(n), m.u4 @ parallel(n))) == pytest.approx(1, abs=1e-12)
