import math

import numpy as np
import pytest

import cyclobloch as cb
from cyclobloch.hamiltonian import (
    TO_DRIVEN,
    TO_STATIC,
    h1d_derivative,
    h2d_driven_derivative,
    h2d_static_derivative,
)
from cyclobloch.lattice import PERIODIC

from conftest import random_state_1d, random_state_2d
from oracles import (
    dense_h1d,
    dense_h2d_driven,
    dense_h2d_static,
    derivative_from_dense,
)

TJ = 2.0 * math.pi


def params(**kw):
    base = dict(j_x=1.0, j_y=1.0, alpha=0.1, omega_x=0.0, omega_y=0.0)
    base.update(kw)
    return cb.ModelParams(**base)


class TestApplyH1D:
    def test_hopping_off_pure_phase_rotation(self):
        lat = cb.Lattice1D(16)
        amps = np.zeros(16, complex)
        amps[lat.origin] = 1.0
        st = cb.State1D(amps, lat)
        p = params(j_x=0.0, j_y=1.3)
        deriv = cb.apply_h1d(st, 0.0, p)
        expected = 1j * 1.3 * np.cos(2 * np.pi * 0.1 * lat.labels) * amps
        np.testing.assert_allclose(deriv, expected, atol=1e-15)

    def test_bare_hopping_from_single_site(self):
        lat = cb.Lattice1D(16)
        amps = np.zeros(16, complex)
        amps[lat.origin] = 1.0
        st = cb.State1D(amps, lat)
        deriv = cb.apply_h1d(st, 0.0, params(j_y=0.0))
        expected = np.zeros(16, complex)
        expected[lat.origin - 1] = expected[lat.origin + 1] = 0.5j
        np.testing.assert_allclose(deriv, expected, atol=1e-15)

    def test_dense_oracle_gaussian(self):
        p = params(omega_y=0.1)
        lat = cb.Lattice1D(64)
        st = cb.coherent_gaussian(cb.GaussianSpec(sigma0=3.0), lat, p)
        t = 0.37
        deriv = cb.apply_h1d(st, t, p)
        h = dense_h1d(64, lat.origin, t, p.j_x, p.j_y, p.alpha, p.omega_x, p.omega_y)
        np.testing.assert_allclose(
            deriv, derivative_from_dense(h, st.amplitudes), atol=1e-12
        )

    def test_dense_oracle_with_drive_phases(self, rng):
        p = params(omega_x=0.7, omega_y=1.3, alpha=0.23, j_x=0.8, j_y=1.7)
        lat = cb.Lattice1D(32)
        st = random_state_1d(rng, lat)
        for t in (0.0, 0.5, 2.31):
            h = dense_h1d(32, lat.origin, t, p.j_x, p.j_y, p.alpha, p.omega_x, p.omega_y)
            np.testing.assert_allclose(
                cb.apply_h1d(st, t, p), derivative_from_dense(h, st.amplitudes), atol=1e-12
            )

    def test_shape_mismatch(self):
        lat = cb.Lattice1D(16)
        with pytest.raises(cb.ShapeError):
            h1d_derivative(np.zeros(8, complex), 0.0, params(), lat)

    def test_single_site_support_stays_local(self, rng):
        lat = cb.Lattice1D(32)
        amps = np.zeros(32, complex)
        amps[10] = 1.0
        deriv = h1d_derivative(amps, 1.2, params(omega_x=0.3, omega_y=0.4), lat)
        assert np.all(deriv[:9] == 0) and np.all(deriv[13:] == 0)
        assert np.count_nonzero(deriv) <= 3


class TestApplyH2DDriven:
    def test_y_uniform_matches_1d(self, rng):
        p = params(omega_x=0.06, omega_y=0.08)
        lat1 = cb.Lattice1D(24)
        st1 = random_state_1d(rng, lat1)
        st2 = cb.embed_y_uniform(st1, 6)
        t = 1.7
        d2 = cb.apply_h2d_driven(st2, t, p)
        d1 = cb.apply_h1d(st1, t, p)
        assert np.max(np.abs(d2 - d2[:, :1])) < 1e-12  # stays y-uniform
        np.testing.assert_allclose(d2[:, 0] * math.sqrt(6), d1, atol=1e-12)

    def test_zero_jy_decouples_rows(self, rng):
        p = params(j_y=0.0, omega_x=0.4)
        lat = cb.Lattice2D(10, 4)
        st = random_state_2d(rng, lat)
        deriv = cb.apply_h2d_driven(st, 0.9, p)
        chain = cb.Lattice1D(10, origin=lat.origin_x)
        for m in range(4):
            col = st.amplitudes[:, m]
            expected = h1d_derivative(np.ascontiguousarray(col), 0.9, p, chain)
            np.testing.assert_allclose(deriv[:, m], expected, atol=1e-13)

    @pytest.mark.parametrize("boundary_y", ["hard-wall", "periodic"])
    def test_dense_oracle_8x8(self, rng, boundary_y):
        p = params(alpha=0.25, omega_x=0.3, omega_y=0.9)
        lat = cb.Lattice2D(8, 8, boundary_y=boundary_y)
        st = random_state_2d(rng, lat)
        t = 1.3
        h = dense_h2d_driven(
            8, 8, lat.origin_x, t, p.j_x, p.j_y, p.alpha, p.omega_x, p.omega_y,
            periodic_y=(boundary_y == PERIODIC),
        )
        expected = derivative_from_dense(h, st.amplitudes.reshape(-1)).reshape(8, 8)
        np.testing.assert_allclose(cb.apply_h2d_driven(st, t, p), expected, atol=1e-12)


class TestApplyH2DStatic:
    def test_uniform_state_free_hopping_eigenstate(self):
        p = params(alpha=0.0)
        lat = cb.Lattice2D(6, 6, boundary_x=PERIODIC, boundary_y=PERIODIC)
        amps = np.full((6, 6), 1.0 / 6.0, dtype=complex)
        st = cb.State2D(amps, lat)
        deriv = cb.apply_h2d_static(st, p)
        np.testing.assert_allclose(deriv, 1j * (p.j_x + p.j_y) * amps, atol=1e-14)
        h = dense_h2d_static(6, 6, lat.origin_x, lat.origin_y,
                             p.j_x, p.j_y, p.alpha, 0.0, 0.0,
                             periodic_x=True, periodic_y=True)
        expected = derivative_from_dense(h, amps.reshape(-1)).reshape(6, 6)
        np.testing.assert_allclose(deriv, expected, atol=1e-13)

    def test_pure_potential_single_site(self):
        p = params(j_x=0.0, j_y=0.0, omega_x=0.3, omega_y=0.5)
        lat = cb.Lattice2D(8, 8)
        amps = np.zeros((8, 8), complex)
        ix = lat.origin_x + 2
        iy = lat.origin_y + 3
        amps[ix, iy] = 1.0
        deriv = cb.apply_h2d_static(cb.State2D(amps, lat), p)
        np.testing.assert_allclose(deriv, -1j * (2 * 0.3 + 3 * 0.5) * amps, atol=1e-15)

    def test_dense_oracle_6x6(self, rng):
        p = params(alpha=0.17, omega_x=0.21, omega_y=0.13)
        lat = cb.Lattice2D(6, 6)
        st = random_state_2d(rng, lat)
        h = dense_h2d_static(6, 6, lat.origin_x, lat.origin_y,
                             p.j_x, p.j_y, p.alpha, p.omega_x, p.omega_y)
        expected = derivative_from_dense(h, st.amplitudes.reshape(-1)).reshape(6, 6)
        np.testing.assert_allclose(cb.apply_h2d_static(st, p), expected, atol=1e-12)


class TestHermiticity:
    """<u, Hv> = conj(<v, Hu>) for all three Hamiltonians on random states."""

    def _check(self, hv, hu, u, v):
        lhs = np.vdot(u.reshape(-1), hv.reshape(-1))
        rhs = np.conj(np.vdot(v.reshape(-1), hu.reshape(-1)))
        assert abs(lhs - rhs) < 1e-12

    def test_h1d(self, rng):
        p = params(omega_x=0.3, omega_y=0.7)
        lat = cb.Lattice1D(24)
        for _ in range(5):
            u = random_state_1d(rng, lat)
            v = random_state_1d(rng, lat)
            t = float(rng.uniform(0, 10))
            # H psi = i * d(psi)/dt
            self._check(1j * cb.apply_h1d(v, t, p), 1j * cb.apply_h1d(u, t, p),
                        u.amplitudes, v.amplitudes)

    @pytest.mark.parametrize("boundary_y", ["hard-wall", "periodic"])
    def test_h2d_driven(self, rng, boundary_y):
        p = params(alpha=0.25, omega_x=0.4, omega_y=0.6)
        lat = cb.Lattice2D(7, 5, boundary_y=boundary_y)
        for _ in range(3):
            u = random_state_2d(rng, lat)
            v = random_state_2d(rng, lat)
            t = float(rng.uniform(0, 10))
            self._check(1j * cb.apply_h2d_driven(v, t, p), 1j * cb.apply_h2d_driven(u, t, p),
                        u.amplitudes, v.amplitudes)

    def test_h2d_static(self, rng):
        p = params(alpha=0.3, omega_x=0.2, omega_y=0.5)
        lat = cb.Lattice2D(6, 7)
        for _ in range(3):
            u = random_state_2d(rng, lat)
            v = random_state_2d(rng, lat)
            self._check(1j * cb.apply_h2d_static(v, p), 1j * cb.apply_h2d_static(u, p),
                        u.amplitudes, v.amplitudes)


class TestGaugeMap:
    def test_identity_at_t0(self, rng):
        p = params(omega_x=0.5, omega_y=0.8)
        st = random_state_2d(rng, cb.Lattice2D(6, 6))
        mapped = cb.gauge_map(st, 0.0, p, TO_DRIVEN)
        np.testing.assert_array_equal(mapped.amplitudes, st.amplitudes)

    def test_populations_invariant(self, rng):
        p = params(omega_x=0.5, omega_y=0.8)
        st = random_state_2d(rng, cb.Lattice2D(6, 6))
        mapped = cb.gauge_map(st, 3.7, p, TO_DRIVEN)
        np.testing.assert_allclose(
            np.abs(mapped.amplitudes) ** 2, np.abs(st.amplitudes) ** 2, atol=1e-15
        )

    def test_round_trip(self, rng):
        p = params(omega_x=0.5, omega_y=0.8)
        st = random_state_2d(rng, cb.Lattice2D(6, 6))
        back = cb.gauge_map(cb.gauge_map(st, 2.2, p, TO_DRIVEN), 2.2, p, TO_STATIC)
        np.testing.assert_allclose(back.amplitudes, st.amplitudes, atol=1e-14)

    def test_bad_direction(self, rng):
        st = random_state_2d(rng, cb.Lattice2D(6, 6))
        with pytest.raises(ValueError):
            cb.gauge_map(st, 1.0, params(), "sideways")

    def test_dual_propagation_equivalence(self):
        """Evolving the static form then gauge-mapping equals evolving the
        driven form from the same initial state."""
        p = params(alpha=0.25, omega_x=0.1 / math.sqrt(2), omega_y=0.1 / math.sqrt(2))
        lat = cb.Lattice2D(12, 12)
        g = np.exp(
            -(lat.labels_x[:, None] ** 2 + lat.labels_y[None, :] ** 2) / (2 * 2.0**2)
        ).astype(complex)
        amps = g / np.linalg.norm(g)
        t_end = 5 * TJ
        grid = cb.TimeGrid(t_end=t_end, dt=TJ / 800, record_every=800)
        fin_static, _ = cb.evolve(cb.State2D(amps.copy(), lat), p, grid,
                                  hamiltonian="h2d_static", edge_guard=0)
        fin_driven, _ = cb.evolve(cb.State2D(amps.copy(), lat), p, grid,
                                  hamiltonian="h2d_driven", edge_guard=0)
        mapped = cb.gauge_map(fin_static, t_end, p, TO_DRIVEN)
        np.testing.assert_allclose(
            np.abs(mapped.amplitudes) ** 2, np.abs(fin_driven.amplitudes) ** 2, atol=1e-8
        )
        np.testing.assert_allclose(mapped.amplitudes, fin_driven.amplitudes, atol=1e-8)
