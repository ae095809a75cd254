import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaugelab import library as lib
from gaugelab.errors import NotNormalized, NotPeriodic
from gaugelab.gauge import (
    GaugeFunction,
    expectation_shift_check,
    fields_from_potentials,
    gauge_invariance_check,
    transform_potentials,
    transform_state,
)
from gaugelab.grid import Grid, ScalarField, norm

from .conftest import gaussian_state


class TestGaugeFunction:
    def test_multivalued_chi_rejected_on_periodic_grid(self, ring):
        with pytest.raises(NotPeriodic):
            lib.linear_gauge(ring, 0.3)

    def test_linear_gauge_allowed_in_a_box(self):
        chi = lib.linear_gauge(Grid.box(32, 4.0, "dirichlet"), 0.3)
        assert chi.gradient(0.0)[0].values == pytest.approx(np.full(32, 0.3))

    def test_finite_difference_fallbacks(self, ring):
        L = ring.periods[0]
        chi = GaugeFunction(ring, chi=lambda c, t: np.sin(2 * np.pi * c[0] / L) * t**2)
        assert not chi.analytic
        x = ring.coords[0]
        np.testing.assert_allclose(chi.time_derivative(1.5).array, 3.0 * np.sin(2 * np.pi * x / L), atol=1e-7)
        exact_grad = 2.25 * 2 * np.pi / L * np.cos(2 * np.pi * x / L)
        assert np.max(np.abs(chi.gradient(1.5)[0].array - exact_grad)) < 5e-3

    def test_combination(self, plane):
        chi = lib.random_smooth(plane, seed=3) - lib.random_smooth(plane, seed=3)
        assert np.max(np.abs(chi.values(0.7))) == 0.0

    def test_random_smooth_is_seeded(self, plane):
        a = lib.random_smooth(plane, seed=11).values(0.4)
        b = lib.random_smooth(plane, seed=11).values(0.4)
        c = lib.random_smooth(plane, seed=12).values(0.4)
        np.testing.assert_array_equal(a, b)
        assert np.max(np.abs(a - c)) > 1e-3

    def test_random_smooth_derivatives_match_differences(self, plane):
        chi = lib.random_smooth(plane, seed=5)
        t, dt = 0.6, 1e-5
        fd = (chi.values(t + dt) - chi.values(t - dt)) / (2 * dt)
        np.testing.assert_allclose(chi.time_derivative(t).array, fd, atol=1e-8)


class TestPotentialTransformation:
    def test_transform_law(self, plane):
        p = lib.soft_coulomb(plane)
        chi = lib.random_smooth(plane, seed=2)
        moved = transform_potentials(p, chi)
        t = 0.8
        np.testing.assert_allclose(moved.scalar(t).values, p.scalar(t).values - chi.time_derivative(t).values)
        for axis in range(2):
            np.testing.assert_allclose(moved.vector(t)[axis].values,
                                       p.vector(t)[axis].values + chi.gradient(t)[axis].values)
        assert not moved.static

    def test_static_gauge_keeps_static_flag(self, plane):
        moved = transform_potentials(lib.soft_coulomb(plane), lib.random_smooth(plane, seed=2, static=True))
        assert moved.static

    def test_link_integrals_shift_by_increments(self, plane):
        p = lib.periodic_transverse(plane, 1.0)
        chi = lib.random_smooth(plane, seed=9)
        moved = transform_potentials(p, chi)
        t = 0.3
        values = chi.values(t)
        for axis in range(2):
            increment = np.roll(values, -1, axis=axis) - values
            np.testing.assert_allclose(moved.link_integrals(t)[axis], p.link_integrals(t)[axis] + increment,
                                       atol=1e-14)

    @pytest.mark.parametrize("chi_name", ["random", "temporal", "constant"])
    def test_fields_invariant(self, plane, chi_name):
        p = lib.soft_coulomb(plane)
        chi = {"random": lib.random_smooth(plane, seed=4), "temporal": lib.temporal_gauge(p),
               "constant": lib.constant_rate(plane, 0.4)}[chi_name]
        rep = gauge_invariance_check(p, chi, [0.0, 0.5, 1.3])
        assert rep.analytic
        assert rep.max_e_deviation <= 1e-10 and rep.max_b_deviation <= 1e-10

    def test_fields_invariant_with_time_differences(self, plane):
        p = lib.soft_coulomb(plane)
        rep = gauge_invariance_check(p, lib.random_smooth(plane, seed=4), [0.5], dt=1e-4)
        assert not rep.analytic
        assert rep.max_e_deviation < 1e-6

    def test_electric_field_of_soft_coulomb(self, ring):
        p = lib.soft_coulomb(ring, kappa=2.0, soft=1.0)
        x = ring.coords[0]
        e = fields_from_potentials(p, 0.0).e[0].array
        np.testing.assert_allclose(e, -2.0 * x / (x * x + 1.0) ** 1.5, atol=1e-12)


class TestStateTransformation:
    @settings(max_examples=20, deadline=None)
    @given(amp=st.floats(-2.0, 2.0), q=st.floats(-3.0, 3.0), t=st.floats(0.0, 5.0))
    def test_phase_preserves_norm_and_density(self, amp, q, t):
        grid = Grid.box(64, 10.0)
        chi = lib.random_smooth(grid, seed=1, amplitude=abs(amp) + 0.01)
        psi = gaussian_state(grid, 1.0, 0.5)
        moved = transform_state(psi, chi, t, q)
        assert norm(moved) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(np.abs(moved.values), np.abs(psi.values), atol=1e-14)

    def test_expectation_shift_converges_at_second_order(self):
        devs, hs = [], []
        for n in (128, 256, 512):
            ring = Grid.box(n, 20.0)
            L = ring.periods[0]
            chi = GaugeFunction(ring, chi=lambda c, t: 0.8 * np.sin(2 * np.pi * c[0] / L), static=True)
            devs.append(expectation_shift_check(gaussian_state(ring, 1.5, 1.3), chi, 0.0, 1.0).deviation)
            hs.append(ring.spacing[0])
        orders = np.log(np.array(devs[:-1]) / devs[1:]) / np.log(np.array(hs[:-1]) / hs[1:])
        assert np.all((orders >= 1.8) & (orders <= 2.2))

    def test_constant_gradient_shift_is_exact(self):
        box = Grid.box(256, 20.0, "dirichlet")
        rep = expectation_shift_check(gaussian_state(box, 1.5, 0.0), lib.linear_gauge(box, 0.0), 0.0, 1.0)
        assert rep.deviation < 1e-14

    def test_unnormalised_state_rejected(self, ring):
        with pytest.raises(NotNormalized):
            expectation_shift_check(ScalarField(ring, np.ones(128)), lib.zero_gauge(ring), 0.0, 1.0)
