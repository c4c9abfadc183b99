import numpy as np
import pytest

from nlde.roughdata import RNG_ALGORITHM, RoughDataSpec, generate_rough_spinor
from nlde.spectral import sobolev_norm, to_spectral


class TestConstruction:
    def test_sup_norm_one_per_component(self):
        phi = generate_rough_spinor(RoughDataSpec(2.4, 256, seed=7))
        for c in range(2):
            assert np.max(np.abs(phi.values[c])) == pytest.approx(1.0, abs=1e-14)

    def test_zero_mean_per_component(self):
        phi = generate_rough_spinor(RoughDataSpec(1.4, 128, seed=8))
        assert np.max(np.abs(phi.values.mean(axis=1))) < 1e-13

    def test_deterministic_bit_identical(self):
        spec = RoughDataSpec(2.2, 512, seed=123)
        a = generate_rough_spinor(spec)
        b = generate_rough_spinor(spec)
        assert np.array_equal(a.values, b.values)

    def test_seed_changes_output(self):
        a = generate_rough_spinor(RoughDataSpec(2.2, 128, seed=1))
        b = generate_rough_spinor(RoughDataSpec(2.2, 128, seed=2))
        assert not np.allclose(a.values, b.values)

    def test_components_differ(self):
        phi = generate_rough_spinor(RoughDataSpec(2.2, 128, seed=3))
        assert not np.allclose(phi.values[0], phi.values[1])

    def test_invalid_specs_rejected(self):
        with pytest.raises(ValueError):
            RoughDataSpec(-0.5, 128, 0)
        with pytest.raises(ValueError):
            RoughDataSpec(2.0, 127, 0)

    def test_rng_identifier_exported(self):
        assert RNG_ALGORITHM == "numpy-pcg64"


class TestSpectralDecay:
    def test_decay_slope_matches_theta(self):
        # oracle: least-squares fit of log|c_l| against log|l| over the
        # window 4 <= |l| <= N/4, slope averaged over 20 seeds
        theta, n = 2.4, 2**10
        slopes = []
        for seed in range(20):
            phi = generate_rough_spinor(RoughDataSpec(theta, n, seed))
            coeffs = to_spectral(phi.values[0])
            l = np.abs(np.concatenate([np.arange(0, n // 2), np.arange(-n // 2, 0)]))
            keep = (l >= 4) & (l <= n // 4)
            slopes.append(
                np.polyfit(np.log(l[keep]), np.log(np.abs(coeffs[keep])), 1)[0]
            )
        assert abs(np.mean(slopes) - (-theta)) < 0.3

    def test_norm_growth_across_resolutions(self):
        # above theta - 1/2 the Sobolev norms grow with N, below they settle
        theta = 2.4
        sizes = [2**8, 2**9, 2**10, 2**11, 2**12]
        means = {2.2: [], 1.5: []}
        for n in sizes:
            norms = {2.2: [], 1.5: []}
            for seed in range(10):
                phi = generate_rough_spinor(RoughDataSpec(theta, n, seed))
                for r in norms:
                    norms[r].append(sobolev_norm(phi, r))
            for r in means:
                means[r].append(np.mean(norms[r]))
        grow = means[2.2]
        assert all(b > a for a, b in zip(grow, grow[1:]))
        assert grow[-1] / grow[0] > 1.5
        settle = means[1.5]
        assert max(settle) / min(settle) < 1.2
