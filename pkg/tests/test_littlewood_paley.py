import numpy as np
import pytest

from divcurl.errors import ComponentMismatchError, GridSizeError, ResolutionError, SizeLimitError, SymbolOrderError
from divcurl.littlewood_paley import (
    DyadicPartition,
    bessel_potential,
    dyadic_partition,
    kernel_l1_profile,
    kernel_matrix,
    lp_project,
    measure_action_bound,
    modulated_bessel_potential,
    smooth_step,
)
from divcurl.measures import atomic_measure
from divcurl.spectral import SpectralField, TorusGrid, constant_symbol, random_field

H_LIST = (0.05, 0.02, 0.01)


@pytest.fixture(scope="module")
def grid1024():
    return TorusGrid(1, 1024)


class TestPartition:
    @pytest.mark.parametrize("J", [1, 3, 6])
    def test_telescoping_exact(self, J):
        r = np.abs(TorusGrid(1, 256).axis_freqs)
        part = DyadicPartition(J)
        np.testing.assert_array_equal(part.partial_sum(r), smooth_step(r / 2**J))
        assert np.all(part.partial_sum(r)[r <= 2**J] == 1.0)

    def test_two_dimensional_lattice(self):
        g = TorusGrid(2, 64)
        r = np.sqrt(g.freq_sq)
        total = DyadicPartition(4).partial_sum(r)
        assert np.all(total[r <= 2**3] == 1.0)

    def test_origin(self):
        part = DyadicPartition(5)
        assert part.piece(0, 0.0) == 1.0
        assert all(part.piece(j, 0.0) == 0.0 for j in range(1, 6))

    @pytest.mark.parametrize("j", [2, 3, 4])
    def test_only_neighbours_at_dyadic_radius(self, j):
        part = DyadicPartition(6)
        active = [i for i in range(7) if part.piece(i, 2.0**j) != 0.0]
        assert set(active) <= {j - 1, j, j + 1}
        assert j in active

    @pytest.mark.parametrize("j", [1, 2, 5])
    def test_support(self, j):
        r = np.linspace(0, 200, 4001)
        v = DyadicPartition(6).piece(j, r)
        assert np.all(v[(r < 2 ** (j - 1)) | (r > 2 ** (j + 1))] == 0.0)

    def test_symbols_are_order_zero_multipliers(self):
        syms = DyadicPartition(3).symbols
        assert len(syms) == 4
        assert all(s.multiplier and s.order == 0.0 for s in syms)

    def test_grid_check(self):
        dyadic_partition(5, TorusGrid(1, 128))
        with pytest.raises(GridSizeError):
            dyadic_partition(6, TorusGrid(1, 128))
        with pytest.raises(GridSizeError):
            DyadicPartition(0)


class TestProjection:
    def test_reconstruction(self, rng):
        g = TorusGrid(2, 64)
        part = dyadic_partition(4, g)
        u = random_field(g, rng, bandwidth=5)
        total = sum((lp_project(u, j, part) for j in range(1, 5)), lp_project(u, 0, part))
        assert (total - u).max_norm() <= 1e-13 * u.max_norm()

    @pytest.mark.parametrize("k", [1, 3, 6, 12, 20])
    def test_single_mode_bands(self, k):
        g = TorusGrid(1, 128)
        part = dyadic_partition(5, g)
        u = SpectralField.from_function(g, lambda x: np.cos(k * x))
        hit = [j for j in range(6) if lp_project(u, j, part).max_norm() > 1e-14]
        assert 1 <= len(hit) <= 2

    def test_energy_equivalence(self):
        # sum_j |Delta_j u|^2 against |u|^2, 20 random fields; observed within [0.87, 0.93]
        g = TorusGrid(2, 64)
        part = dyadic_partition(4, g)
        r = np.random.default_rng(7)
        for _ in range(20):
            u = random_field(g, r, bandwidth=8)
            energy = sum(np.sum(lp_project(u, j, part).values ** 2) for j in range(5))
            ratio = energy / np.sum(u.values**2)
            assert 1 / 3 <= ratio <= 3

    def test_level_out_of_range(self, grid2d):
        with pytest.raises(ValueError):
            lp_project(SpectralField.zeros(grid2d), 4, DyadicPartition(3))


class TestKernelMatrix:
    def test_low_pass_row_sums(self):
        g = TorusGrid(1, 256)
        K = kernel_matrix(constant_symbol(1.0), 0, dyadic_partition(5, g), g)
        np.testing.assert_allclose(K.sum(axis=1) * g.spacing, 1.0, atol=1e-12)

    def test_toeplitz_for_multiplier(self):
        g = TorusGrid(1, 128)
        K = kernel_matrix(bessel_potential(-1.0), 3, dyadic_partition(4, g), g)
        for s in range(1, 5):
            np.testing.assert_allclose(np.roll(np.roll(K, s, axis=0), s, axis=1), K, atol=1e-12)

    def test_not_toeplitz_for_modulated(self):
        g = TorusGrid(1, 128)
        K = kernel_matrix(modulated_bessel_potential(-1.0), 3, dyadic_partition(4, g), g)
        assert np.max(np.abs(np.roll(np.roll(K, 7, axis=0), 7, axis=1) - K)) > 1e-3

    def test_applies_operator(self, rng):
        from divcurl.littlewood_paley import lp_project
        from divcurl.spectral import apply_multiplier

        g = TorusGrid(1, 128)
        part = dyadic_partition(4, g)
        u = random_field(g, rng)
        a = bessel_potential(-1.0)
        K = kernel_matrix(a, 2, part, g)
        expect = apply_multiplier(a, lp_project(u, 2, part))
        np.testing.assert_allclose(K @ u.values[0] * g.spacing, expect.values[0], atol=1e-12)

    def test_restrictions(self):
        with pytest.raises(ComponentMismatchError):
            kernel_matrix(constant_symbol(), 0, DyadicPartition(2), TorusGrid(2, 32))
        with pytest.raises(SizeLimitError):
            kernel_matrix(constant_symbol(), 0, DyadicPartition(2), TorusGrid(1, 2048))


class TestKernelProfile:
    LEVELS = range(2, 7)

    def test_negative_order_scaled_masses(self, grid1024):
        rows = kernel_l1_profile(bessel_potential(-1.0), 6, grid1024, levels=self.LEVELS)
        scaled = [r.scaled_mass for r in rows]
        assert max(scaled) / min(scaled) <= 4.0
        masses = [r.mass for r in rows]
        assert all(b < a for a, b in zip(masses, masses[1:]))
        for r in rows:
            assert r.scaled_mass == pytest.approx(r.mass * 2.0**r.j)

    def test_order_zero_control(self, grid1024):
        rows = kernel_l1_profile(constant_symbol(1.0), 6, grid1024, levels=self.LEVELS)
        masses = [r.mass for r in rows]
        assert max(masses) / min(masses) <= 4.0

    def test_modulated_close_to_multiplier(self, grid1024):
        plain = kernel_l1_profile(bessel_potential(-1.0), 6, grid1024, levels=self.LEVELS)
        mod = kernel_l1_profile(modulated_bessel_potential(-1.0), 6, grid1024, levels=self.LEVELS)
        scaled = [r.scaled_mass for r in mod]
        assert max(scaled) / min(scaled) <= 4.0
        for p, m in zip(plain, mod):
            assert 0.5 <= m.scaled_mass / p.scaled_mass <= 2.0

    def test_sup_within_frequency_sum_bound(self, grid1024):
        for r in kernel_l1_profile(bessel_potential(-1.0), 6, grid1024, levels=self.LEVELS):
            assert r.sup <= r.sup_bound * (1 + 1e-12)
            assert r.sup >= r.sup_bound / 4

    def test_integrate_over_x(self):
        g = TorusGrid(1, 256)
        by_y = kernel_l1_profile(bessel_potential(-1.0), 4, g)
        by_x = kernel_l1_profile(bessel_potential(-1.0), 4, g, integrate_over="x")
        for a, b in zip(by_y, by_x):
            assert a.mass == pytest.approx(b.mass, rel=1e-12)


class TestMeasureBound:
    @pytest.mark.parametrize("order, limit", [(-1.0, 1.5), (-0.25, 2.0)])
    def test_uniform_in_h(self, order, limit, grid1024):
        mu = atomic_measure([((np.pi,), (1.0,))])
        norms = [r.l1_norm for r in measure_action_bound(bessel_potential(order), mu, H_LIST, grid1024)]
        assert max(norms) / min(norms) <= limit

    def test_modulated_symbol(self, grid1024):
        mu = atomic_measure([((1.0,), (1.0,)), ((4.0,), (-0.5,))])
        norms = [r.l1_norm for r in measure_action_bound(modulated_bessel_potential(-1.0), mu, H_LIST, grid1024)]
        assert max(norms) / min(norms) <= 1.5
        assert max(norms) <= 1.5 * mu.total_variation()

    def test_zero_measure(self, grid1024):
        rows = measure_action_bound(bessel_potential(-1.0), atomic_measure([], dim=1), H_LIST, grid1024)
        assert [r.l1_norm for r in rows] == [0.0, 0.0, 0.0]

    def test_rejects_nonnegative_order(self, grid1024):
        with pytest.raises(SymbolOrderError):
            measure_action_bound(constant_symbol(), atomic_measure([], dim=1), H_LIST, grid1024)

    def test_rejects_unresolved_h(self):
        with pytest.raises(ResolutionError):
            measure_action_bound(bessel_potential(-1.0), atomic_measure([], dim=1), [1e-4], TorusGrid(1, 128))
