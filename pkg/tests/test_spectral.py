from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.linalg import expm

from conftest import random_complex_values, random_spinor
from nlde.model import ALPHA
from nlde.spectral import (
    PHYSICAL,
    SPECTRAL,
    ComplexField,
    SpectralGrid,
    apply_matrix_multiplier_coeffs,
    apply_scalar_multiplier,
    fd_resolvent,
    forward_transform,
    free_dirac_matrix_function,
    inverse_laplacian,
    inverse_transform,
    phi1,
    phi1_shift_multiplier,
    phi2,
    poisson_potential,
    sobolev_norm,
    sobolev_norm_coeffs,
    to_physical,
    to_spectral,
    translation_multiplier,
)


def field(grid, values):
    return ComplexField(grid, np.asarray(values, dtype=complex), PHYSICAL)


class TestGrid:
    def test_points_and_modes(self):
        g = SpectralGrid.of_size(8)
        assert np.allclose(g.points, 2 * np.pi * np.arange(8) / 8)
        assert list(g.modes) == [0, 1, 2, 3, -4, -3, -2, -1]

    @pytest.mark.parametrize("n", [3, 7, 2, 0, -4])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ValueError):
            SpectralGrid.of_size(n)


class TestTransforms:
    def test_constant_function(self):
        g = SpectralGrid.of_size(16)
        fh = forward_transform(field(g, np.ones(16)))
        assert fh.values[0] == pytest.approx(1.0)
        assert np.max(np.abs(fh.values[1:])) < 1e-14

    def test_pure_mode(self):
        g = SpectralGrid.of_size(8)
        fh = forward_transform(field(g, np.exp(1j * g.points)))
        expected = np.zeros(8, dtype=complex)
        expected[1] = 1.0
        np.testing.assert_allclose(fh.values, expected, atol=1e-14)

    def test_matches_direct_dft_sum(self):
        # oracle: O(N^2) evaluation of the coefficient definition
        g = SpectralGrid.of_size(16)
        f = random_complex_values(16, seed=10)
        direct = np.array(
            [np.sum(f * np.exp(-1j * l * g.points)) / 16 for l in g.modes]
        )
        fh = forward_transform(field(g, f))
        assert np.max(np.abs(fh.values - direct)) / np.max(np.abs(direct)) < 1e-12

    @pytest.mark.parametrize("n", [8, 16, 64, 4096])
    def test_round_trip(self, n):
        g = SpectralGrid.of_size(n)
        f = field(g, random_complex_values(n, seed=n))
        back = inverse_transform(forward_transform(f))
        assert np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values)) < 1e-12

    def test_transform_requires_matching_space(self):
        g = SpectralGrid.of_size(8)
        f = field(g, np.ones(8))
        with pytest.raises(ValueError):
            inverse_transform(f)
        with pytest.raises(ValueError):
            forward_transform(forward_transform(f))


class TestScalarMultipliers:
    def test_all_ones_is_identity(self):
        g = SpectralGrid.of_size(16)
        f = field(g, random_complex_values(16, seed=1))
        out = apply_scalar_multiplier(
            translation_multiplier(g, 0.0), f
        )
        np.testing.assert_allclose(out.values, f.values, atol=1e-13)

    def test_translation_phase_on_pure_mode(self):
        g = SpectralGrid.of_size(16)
        s = 0.7
        f = field(g, np.exp(1j * g.points))
        out = apply_scalar_multiplier(translation_multiplier(g, s), f)
        np.testing.assert_allclose(out.values, np.exp(1j * s) * f.values, atol=1e-13)

    def test_translation_semantics_cosine(self):
        g = SpectralGrid.of_size(32)
        out = apply_scalar_multiplier(
            translation_multiplier(g, np.pi / 2), field(g, np.cos(g.points))
        )
        np.testing.assert_allclose(out.values, np.cos(g.points + np.pi / 2), atol=1e-12)

    def test_translation_by_two_pi_is_identity(self):
        g = SpectralGrid.of_size(16)
        f = field(g, random_complex_values(16, seed=2))
        out = apply_scalar_multiplier(translation_multiplier(g, 2 * np.pi), f)
        np.testing.assert_allclose(out.values, f.values, atol=1e-12)

    def test_phi1_multiplier_matches_mode_quadrature(self):
        # oracle: per-mode adaptive quadrature of int_0^1 exp(i*a*l*s) ds
        g = SpectralGrid.of_size(16)
        tau = 0.13
        f = field(g, random_complex_values(16, seed=3))
        out = apply_scalar_multiplier(phi1_shift_multiplier(g, 2 * tau), f)
        fh = to_spectral(f.values)
        expected = np.empty(16, dtype=complex)
        for i, l in enumerate(g.modes):
            re, _ = quad(lambda s: np.cos(2 * tau * l * s), 0, 1, epsabs=1e-13)
            im, _ = quad(lambda s: np.sin(2 * tau * l * s), 0, 1, epsabs=1e-13)
            expected[i] = (re + 1j * im) * fh[i]
        got = to_spectral(out.values)
        assert np.max(np.abs(got - expected)) / np.max(np.abs(expected)) < 1e-10

    def test_spectral_space_input_kept_spectral(self):
        g = SpectralGrid.of_size(8)
        f = ComplexField(g, random_complex_values(8, seed=4), SPECTRAL)
        out = apply_scalar_multiplier(translation_multiplier(g, 0.3), f)
        assert out.space == SPECTRAL


class TestPhiFunctions:
    def test_limit_values(self):
        assert phi1(0.0) == pytest.approx(1.0)
        assert phi2(0.0) == pytest.approx(0.5)

    def test_phi1_at_i_pi(self):
        assert phi1(1j * np.pi) == pytest.approx(2j / np.pi, abs=1e-14)

    def test_identities_bulk(self):
        # 1e4 random z with |z| <= 100, relative 1e-12
        rng = np.random.default_rng(0)
        r = 100 * np.sqrt(rng.random(10_000))
        ang = 2 * np.pi * rng.random(10_000)
        z = r * np.exp(1j * ang)
        lhs1 = z * phi1(z)
        rhs1 = np.exp(z) - 1
        assert np.max(np.abs(lhs1 - rhs1) / np.maximum(np.abs(rhs1), 1e-300)) < 1e-12
        lhs2 = z * z * phi2(z)
        rhs2 = np.exp(z) - z - 1
        assert np.max(np.abs(lhs2 - rhs2) / np.maximum(np.abs(rhs2), 1e-300)) < 1e-12

    def test_accuracy_across_branch_cutoff(self):
        # oracle: 50-digit evaluation on both sides of the series radius
        import mpmath

        mpmath.mp.dps = 50
        for z in (1e-5 + 2e-5j, 9e-5 - 1e-5j, 1.1e-4 + 0j, 1e-2j, 1.0 + 1.0j):
            zm = mpmath.mpc(z)
            exact1 = complex(mpmath.expm1(zm) / zm)
            exact2 = complex((mpmath.expm1(zm) - zm) / zm**2)
            assert abs(phi1(z) - exact1) / abs(exact1) < 1e-12
            assert abs(phi2(z) - exact2) / abs(exact2) < 1e-11

    def test_zero_mode_of_shift_multiplier(self):
        g = SpectralGrid.of_size(8)
        m = phi1_shift_multiplier(g, 1.7)
        assert m.factors[0] == pytest.approx(1.0)
        m0 = phi1_shift_multiplier(g, 0.0)
        np.testing.assert_allclose(m0.factors, np.ones(8), atol=1e-15)

    def test_phi1_factor_against_quadrature_value(self):
        # frozen from int_0^1 exp(6i*tau*s) ds at tau = 0.13
        tau = 0.13
        got = phi1_shift_multiplier(SpectralGrid.of_size(8), 2 * tau).factors[3]
        re, _ = quad(lambda s: np.cos(6 * tau * s), 0, 1, epsabs=1e-14)
        im, _ = quad(lambda s: np.sin(6 * tau * s), 0, 1, epsabs=1e-14)
        assert got == pytest.approx(re + 1j * im, abs=1e-12)


class TestMatrixMultipliers:
    def test_identity_matrix_is_identity(self):
        g = SpectralGrid.of_size(16)
        m = free_dirac_matrix_function(g, "exp", 0.0)
        coeffs = np.stack([random_complex_values(16, 5), random_complex_values(16, 6)])
        np.testing.assert_allclose(apply_matrix_multiplier_coeffs(m, coeffs), coeffs, atol=1e-14)

    def test_zero_mode_is_beta_phase(self):
        tau = 0.4
        m = free_dirac_matrix_function(SpectralGrid.of_size(8), "exp", tau)
        assert m.m11[0] == pytest.approx(np.exp(-1j * tau), abs=1e-14)
        assert m.m22[0] == pytest.approx(np.exp(1j * tau), abs=1e-14)
        assert abs(m.m12[0]) < 1e-14 and abs(m.m21[0]) < 1e-14

    @pytest.mark.parametrize("kind", ["exp", "phi1", "phi2"])
    def test_against_dense_matrix_function(self, kind):
        # oracle: scaling-and-squaring expm / series evaluation on 2x2 blocks
        g = SpectralGrid.of_size(16)
        tau = 0.3
        m = free_dirac_matrix_function(g, kind, tau)
        for i, l in enumerate(g.modes):
            t_l = np.array([[1.0, l], [l, -1.0]], dtype=complex)
            z = -1j * tau * t_l
            if kind == "exp":
                dense = expm(z)
            elif kind == "phi1":
                dense = sum(np.linalg.matrix_power(z, k) / factorial(k + 1) for k in range(30))
            else:
                dense = sum(np.linalg.matrix_power(z, k) / factorial(k + 2) for k in range(30))
            got = np.array([[m.m11[i], m.m12[i]], [m.m21[i], m.m22[i]]])
            np.testing.assert_allclose(got, dense, atol=1e-12)

    def test_exp_semigroup(self):
        g = SpectralGrid.of_size(32)
        a = free_dirac_matrix_function(g, "exp", 0.3)
        b = free_dirac_matrix_function(g, "exp", 0.45)
        c = free_dirac_matrix_function(g, "exp", 0.75)
        coeffs = np.stack([random_complex_values(32, 7), random_complex_values(32, 8)])
        one = apply_matrix_multiplier_coeffs(a, apply_matrix_multiplier_coeffs(b, coeffs))
        two = apply_matrix_multiplier_coeffs(c, coeffs)
        assert np.max(np.abs(one - two)) < 1e-12

    def test_exp_preserves_sobolev_norms(self):
        g = SpectralGrid.of_size(64)
        phi = random_spinor(g, 11)
        coeffs = to_spectral(phi.values)
        out = apply_matrix_multiplier_coeffs(free_dirac_matrix_function(g, "exp", 0.7), coeffs)
        for r in (0.0, 0.7, 1.0, 2.0):
            n0 = sobolev_norm_coeffs(coeffs, g, r)
            n1 = sobolev_norm_coeffs(out, g, r)
            assert abs(n1 - n0) / n0 < 1e-12

    def test_invalid_kind_and_tau(self):
        g = SpectralGrid.of_size(8)
        with pytest.raises(ValueError):
            free_dirac_matrix_function(g, "cosh", 0.1)
        with pytest.raises(ValueError):
            free_dirac_matrix_function(g, "exp", -0.1)


class TestResolvent:
    def test_zero_mode_identity(self):
        m = fd_resolvent(SpectralGrid.of_size(8), 0.2)
        assert m.m11[0] == pytest.approx(1.0) and abs(m.m12[0]) < 1e-15

    def test_defining_identity(self):
        g = SpectralGrid.of_size(32)
        tau = 0.17
        m = fd_resolvent(g, tau)
        for i, l in enumerate(g.modes):
            a = np.array([[m.m11[i], m.m12[i]], [m.m21[i], m.m22[i]]])
            lhs = (np.eye(2) + 1j * tau * l * ALPHA) @ a
            np.testing.assert_allclose(lhs, np.eye(2), atol=1e-14)

    def test_contraction_in_sobolev_norms(self):
        g = SpectralGrid.of_size(64)
        phi = random_spinor(g, 12)
        coeffs = to_spectral(phi.values)
        out = apply_matrix_multiplier_coeffs(fd_resolvent(g, 0.1), coeffs)
        for r in (0.0, 0.7, 1.0, 2.0):
            assert sobolev_norm_coeffs(out, g, r) <= sobolev_norm_coeffs(coeffs, g, r) + 1e-14

    def test_requires_positive_tau(self):
        with pytest.raises(ValueError):
            fd_resolvent(SpectralGrid.of_size(8), 0.0)


class TestInverseLaplacian:
    def test_annihilates_constants(self):
        g = SpectralGrid.of_size(16)
        out = apply_scalar_multiplier(inverse_laplacian(g), field(g, np.full(16, 3.0)))
        assert np.max(np.abs(out.values)) < 1e-14

    def test_cosine_eigenfunction(self):
        g = SpectralGrid.of_size(16)
        out = apply_scalar_multiplier(inverse_laplacian(g), field(g, np.cos(g.points)))
        np.testing.assert_allclose(out.values, -np.cos(g.points), atol=1e-13)

    def test_right_inverse_of_second_derivative(self):
        g = SpectralGrid.of_size(32)
        f = random_complex_values(32, seed=13)
        f -= f.mean()
        w = apply_scalar_multiplier(inverse_laplacian(g), field(g, f))
        # apply the forward symbol -l^2
        ddx = to_physical(-(g.modes.astype(float) ** 2) * to_spectral(w.values))
        assert np.max(np.abs(ddx - f)) < 1e-10


class TestSobolevNorm:
    def test_single_mode(self):
        g = SpectralGrid.of_size(16)
        assert sobolev_norm(field(g, np.exp(1j * g.points)), 2.0) == pytest.approx(2.0)

    def test_constant(self):
        g = SpectralGrid.of_size(16)
        c = 1.5 - 2.0j
        for r in (0.0, 0.7, 2.0):
            assert sobolev_norm(field(g, np.full(16, c)), r) == pytest.approx(abs(c))

    def test_r0_is_discrete_l2(self):
        # oracle: physical-space quadrature with 1/N weight (Parseval)
        g = SpectralGrid.of_size(64)
        f = random_complex_values(64, seed=14)
        direct = np.sqrt(np.sum(np.abs(f) ** 2) / 64)
        assert sobolev_norm(field(g, f), 0.0) == pytest.approx(direct, rel=1e-12)

    def test_rejects_negative_r(self):
        g = SpectralGrid.of_size(8)
        with pytest.raises(ValueError):
            sobolev_norm(field(g, np.ones(8)), -1.0)


class TestPoisson:
    def test_cosine_density(self):
        g = SpectralGrid.of_size(16)
        v = poisson_potential(field(g, 2 * np.cos(g.points)))
        np.testing.assert_allclose(v.values, 2 * np.cos(g.points), atol=1e-12)

    def test_constant_density_gives_zero(self):
        g = SpectralGrid.of_size(16)
        v = poisson_potential(field(g, np.ones(16)))
        assert np.max(np.abs(v.values)) < 1e-14

    def test_residual_for_spinor_density(self):
        g = SpectralGrid.of_size(32)
        phi = random_spinor(g, 15)
        rho = np.abs(phi.values[0]) ** 2 + np.abs(phi.values[1]) ** 2
        v = poisson_potential(field(g, rho))
        lap = to_physical(-(g.modes.astype(float) ** 2) * to_spectral(v.values))
        residual = -lap - (rho - rho.mean())
        l2 = np.sqrt(np.sum(np.abs(residual) ** 2) / 32)
        assert l2 < 1e-10

    def test_zero_mean(self):
        g = SpectralGrid.of_size(32)
        v = poisson_potential(field(g, np.abs(random_complex_values(32, 16)) ** 2))
        assert abs(v.values.mean()) < 1e-13

    def test_rejects_complex_density(self):
        g = SpectralGrid.of_size(8)
        with pytest.raises(ValueError):
            poisson_potential(field(g, np.ones(8) + 1e-3j))


class TestPropertyBased:
    @given(n_exp=st.integers(min_value=3, max_value=7), seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_round_trip_property(self, n_exp, seed):
        n = 2**n_exp
        g = SpectralGrid.of_size(n)
        f = field(g, random_complex_values(n, seed))
        back = inverse_transform(forward_transform(f))
        assert np.max(np.abs(back.values - f.values)) <= 1e-12 * max(1.0, np.max(np.abs(f.values)))

    @given(
        s=st.floats(-10, 10, allow_nan=False),
        t=st.floats(-10, 10, allow_nan=False),
        seed=st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=20, deadline=None)
    def test_translation_semigroup_and_isometry(self, s, t, seed):
        g = SpectralGrid.of_size(32)
        f = field(g, random_complex_values(32, seed))
        one = apply_scalar_multiplier(
            translation_multiplier(g, s),
            apply_scalar_multiplier(translation_multiplier(g, t), f),
        )
        two = apply_scalar_multiplier(translation_multiplier(g, s + t), f)
        assert np.max(np.abs(one.values - two.values)) < 1e-11 * max(1.0, np.max(np.abs(f.values)))
        for r in (0.0, 0.7, 1.0, 2.0):
            assert abs(sobolev_norm(two, r) - sobolev_norm(f, r)) / sobolev_norm(f, r) < 1e-12
