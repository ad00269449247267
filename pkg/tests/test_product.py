import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divcurl.errors import GridMismatchError
from divcurl.hodge import hodge_z, make_cutoff
from divcurl.measures import atomic_measure, mollify
from divcurl.product import (
    PairingRequest,
    chi_independence_report,
    extended_product_field,
    hodge_product_field,
    hodge_product_pair,
    hodge_product_terms,
)
from divcurl.spectral import (
    SpectralField,
    TorusGrid,
    dealiased_dot,
    dealiased_product,
    divergence,
    eval_at,
    gradient,
    pair,
    random_field,
    resample,
)
from divcurl.testfunctions import load_bank, raised_cosine

CUTOFFS = [make_cutoff(d) for d in (0.5, 1.5, 3.0)]


def _divfree(grid, rng):
    g = gradient(random_field(grid, rng))
    return SpectralField(grid, np.stack([g.values[1], -g.values[0]]), vector=True)


def _atoms(rng, count=3, dim=2):
    locs = rng.uniform(0, 2 * np.pi, size=(count, dim))
    return atomic_measure(list(zip(locs, rng.standard_normal((count, dim)))))


class TestProductField:
    @pytest.mark.parametrize("chi", CUTOFFS, ids=lambda c: f"delta{c.delta}")
    def test_coincides_with_classical_product(self, chi, grid2d, rng):
        v, w = random_field(grid2d, rng, vector=True), random_field(grid2d, rng, vector=True)
        classical = dealiased_dot(v, w)
        assert (hodge_product_field(v, w, chi) - classical).max_norm() <= 1e-11 * classical.max_norm()

    def test_divergence_free_w(self, grid2d, rng):
        v, w = random_field(grid2d, rng, vector=True), _divfree(grid2d, rng)
        t1, t2, t3 = hodge_product_terms(v, w, make_cutoff(1.5))
        assert t2.max_norm() < 1e-13 and t3.max_norm() < 1e-13
        assert (t1 - dealiased_dot(v, w)).max_norm() < 1e-13

    def test_single_mode_closed_form(self):
        g = TorusGrid(2, 32)
        v = SpectralField.from_function(g, lambda x, y: (np.sin(x), 0 * y))
        w = SpectralField.from_function(g, lambda x, y: (np.cos(x), 0 * y))
        phi = SpectralField.from_function(g, lambda x, y: np.sin(2 * x) + 0 * y)
        prod = hodge_product_field(v, w, make_cutoff(0.5))
        expect = SpectralField.from_function(g, lambda x, y: 0.5 * np.sin(2 * x) + 0 * y)
        assert (prod - expect).max_norm() < 1e-13
        fine = pair(resample(prod, 128), resample(phi, 128))
        assert fine == pytest.approx(np.pi**2, abs=1e-11)
        assert pair(prod, phi) == pytest.approx(np.pi**2, abs=1e-11)

    def test_grid_mismatch(self, vec2d):
        other = random_field(TorusGrid(2, 16), np.random.default_rng(0), vector=True)
        with pytest.raises(GridMismatchError):
            hodge_product_field(vec2d, other)


class TestPairing:
    def test_atom_against_divergence_free(self, grid2d, rng):
        w = _divfree(grid2d, rng)
        phi = raised_cosine(grid2d, (2.0, 3.0), 4)
        x0, a = np.array([1.1, 4.2]), np.array([0.3, -1.7])
        res = hodge_product_pair(PairingRequest(atomic_measure([(x0, a)]), w, phi, make_cutoff(1.5)))
        expected = float(np.dot(a, eval_at(w, x0)) * eval_at(phi, x0))
        assert res.total == pytest.approx(expected, abs=1e-12)
        assert abs(res.t2) < 1e-13 and abs(res.t3) < 1e-13

    @pytest.mark.parametrize("chi", CUTOFFS, ids=lambda c: f"delta{c.delta}")
    def test_field_path_matches_product_field(self, chi, grid2d, rng):
        v, w = random_field(grid2d, rng, vector=True), random_field(grid2d, rng, vector=True)
        for phi in load_bank(grid2d):
            direct = hodge_product_pair(PairingRequest(v, w, phi, chi)).total
            via_field = pair(hodge_product_field(v, w, chi), phi)
            assert direct == pytest.approx(via_field, abs=1e-11)

    def test_mollified_atom_approaches_measure_path(self):
        g = TorusGrid(2, 256)
        rng = np.random.default_rng(5)
        w = random_field(TorusGrid(2, 32), rng, bandwidth=4, vector=True)
        w = resample(w, 256)
        phi = raised_cosine(g, (2.0, 3.0), 4)
        mu = atomic_measure([((2.3, 2.8), (1.0, 0.5))])
        chi = make_cutoff(0.5)
        exact = hodge_product_pair(PairingRequest(mu, w, phi, chi)).total
        errors = [abs(hodge_product_pair(PairingRequest(mollify(mu, h, g), w, phi, chi)).total - exact)
                  for h in (0.05, 0.02, 0.01)]
        assert errors[0] > errors[1] > errors[2]

    def test_measure_with_density(self, grid2d, rng):
        from divcurl.measures import VectorMeasure

        v, w = random_field(grid2d, rng, vector=True), random_field(grid2d, rng, vector=True)
        phi = raised_cosine(grid2d, (1.0, 2.0), 4)
        mu = VectorMeasure(2, (), v)
        assert hodge_product_pair(PairingRequest(mu, w, phi)).total == pytest.approx(
            hodge_product_pair(PairingRequest(v, w, phi)).total, abs=1e-14
        )

    def test_result_serializes(self, vec2d):
        phi = raised_cosine(vec2d.grid, (1.0, 2.0), 2)
        res = hodge_product_pair(PairingRequest(vec2d, vec2d, phi, make_cutoff(1.5)))
        d = json.loads(json.dumps(res.to_dict()))
        assert set(d) == {"terms", "total", "chi", "residuals"}
        assert set(d["terms"]) == {"t1", "t2", "t3"}
        assert d["chi"] == {"delta": 1.5, "inner": 0.5, "profile": "exp"}
        assert d["total"] == pytest.approx(sum(d["terms"].values()))

    @given(seed=st.integers(0, 2**32 - 1), a=st.floats(-2, 2), b=st.floats(-2, 2))
    @settings(max_examples=20, deadline=None)
    def test_bilinear(self, seed, a, b):
        g = TorusGrid(2, 16)
        r = np.random.default_rng(seed)
        v1, v2, w1, w2 = (random_field(g, r, vector=True) for _ in range(4))
        chi = make_cutoff(1.5)
        f = lambda v, w: hodge_product_field(v, w, chi)
        scale = max(v.max_norm() for v in (v1, v2)) * max(w.max_norm() for w in (w1, w2)) * (1 + abs(a) + abs(b))
        assert (f(v1 * a + v2 * b, w1) - (f(v1, w1) * a + f(v2, w1) * b)).max_norm() <= 1e-12 * scale
        assert (f(v1, w1 * a + w2 * b) - (f(v1, w1) * a + f(v1, w2) * b)).max_norm() <= 1e-12 * scale


class TestExtendedProduct:
    @pytest.mark.parametrize("chi", CUTOFFS, ids=lambda c: f"delta{c.delta}")
    def test_equals_classical_and_three_term(self, chi, grid2d, rng):
        v, w = random_field(grid2d, rng, vector=True), random_field(grid2d, rng, vector=True)
        ext = extended_product_field(v, w, chi)
        classical = dealiased_dot(v, w)
        assert (ext - classical).max_norm() <= 1e-10 * classical.max_norm()
        assert (ext - hodge_product_field(v, w, chi)).max_norm() <= 1e-10 * classical.max_norm()

    def test_both_divergence_free(self, grid2d, rng):
        v, w = _divfree(grid2d, rng), _divfree(grid2d, rng)
        assert (extended_product_field(v, w) - dealiased_dot(v, w)).max_norm() <= 1e-12 * v.max_norm() * w.max_norm()


class TestChiIndependence:
    def test_smooth(self, grid2d, rng):
        v, w = random_field(grid2d, rng, vector=True), random_field(grid2d, rng, vector=True)
        rep = chi_independence_report(v, w, make_cutoff(1.5), make_cutoff(3.0), load_bank(grid2d))
        assert rep.max_abs_difference <= 1e-10
        assert rep.max_rel_difference <= 1e-9
        assert rep.delta_bandwidth_ok
        assert rep.identity_residual <= 1e-12 * v.max_norm() * w.max_norm()
        assert rep.delta_max > 0 and not rep.degenerate

    def test_atomic(self, grid2d, rng):
        mu, w = _atoms(rng), random_field(grid2d, rng, vector=True)
        rep = chi_independence_report(mu, w, make_cutoff(1.5), make_cutoff(3.0), load_bank(grid2d))
        assert rep.max_abs_difference <= 1e-10
        assert rep.identity_residual <= 1e-12 * mu.total_variation() * w.max_norm()

    def test_identical_cutoffs(self, vec2d):
        chi = make_cutoff(1.5)
        rep = chi_independence_report(vec2d, vec2d, chi, chi, load_bank(vec2d.grid))
        assert rep.degenerate
        assert rep.max_abs_difference == 0.0
        assert rep.delta_max == 0.0

    def test_bank_too_small(self, vec2d):
        with pytest.raises(ValueError):
            chi_independence_report(vec2d, vec2d, make_cutoff(1.5), make_cutoff(3.0), load_bank(vec2d.grid)[:7])

    def test_difference_identity_sign(self, grid2d, rng):
        # Y_chi1 - Y_chi2 = -grad d, so the vanishing combination is -v.grad d - (div v) d + div(v d);
        # with +v.grad d it equals 2 v.grad d, which is not zero
        v, w = random_field(grid2d, rng, vector=True), random_field(grid2d, rng, vector=True)
        c1, c2 = make_cutoff(1.5), make_cutoff(3.0)
        d = hodge_z(w, c1) - hodge_z(w, c2)
        right = -dealiased_dot(v, gradient(d)) - dealiased_product(divergence(v), d) + divergence(dealiased_product(v, d))
        wrong = dealiased_dot(v, gradient(d)) - dealiased_product(divergence(v), d) + divergence(dealiased_product(v, d))
        assert right.max_norm() < 1e-12 * v.max_norm() * w.max_norm()
        assert wrong.max_norm() > 1e-3 * v.max_norm() * d.max_norm()

    def test_report_serializes(self, vec2d):
        rep = chi_independence_report(vec2d, vec2d, make_cutoff(1.5), make_cutoff(3.0), load_bank(vec2d.grid))
        d = json.loads(json.dumps(rep.to_dict()))
        assert d["chi1"]["delta"] == 1.5 and len(d["differences"]) == len(load_bank(vec2d.grid))
