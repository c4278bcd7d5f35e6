import os
import sys
import math
import unittest

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.elastic import kernel_split as ks
from src.elastic.config import SolverConfig
from src.elastic.errors import SingularityError
from src.elastic.navier_green import ElasticMedium
from src.elastic.surface import STABLE_BAND, SurfaceProfile, named_surface

# Offsets for two-level Richardson extrapolation to the diagonal
RICHARDSON_STEPS = (1e-2, 1e-3, 1e-4)


def richardson(values):
    """Extrapolate values at eps, eps/10, eps/100 to eps = 0."""
    v1, v2, v3 = values
    coarse = (10.0 * v2 - v1) / 9.0
    fine = (10.0 * v3 - v2) / 9.0
    return (100.0 * fine - coarse) / 99.0


def _parabola() -> SurfaceProfile:
    """f(t) = t^2, with f'(0) = 0 and f''(0) = 2."""
    return SurfaceProfile(
        f=lambda x: np.asarray(x, dtype=float) ** 2,
        df=lambda x: 2.0 * np.asarray(x, dtype=float),
        ddf=lambda x: np.full(np.shape(x), 2.0),
        name="parabola",
        lower_bound=0.0,
        image_level=-1.0,
    )


class TestCutoff(unittest.TestCase):
    """The smooth cut-off chi."""

    def test_chi_values(self):
        """Test plateau, support and a mid value."""
        print("\n✅ Testing chi...")
        self.assertEqual(ks.chi(0.0), 1.0)
        self.assertEqual(ks.chi(1.0), 1.0)
        self.assertEqual(ks.chi(-0.5), 1.0)
        self.assertEqual(ks.chi(math.pi), 0.0)
        self.assertEqual(ks.chi(4.0), 0.0)
        self.assertAlmostEqual(ks.chi(2.0), 0.5310, places=4)
        self.assertEqual(ks.chi(-2.0), ks.chi(2.0))

    def test_chi_is_monotone(self):
        """Test chi decreases from 1 to 0 on (1, pi)."""
        print("\n✅ Testing chi monotonicity...")
        u = np.linspace(1.0, math.pi, 200)
        values = ks.chi(u)
        self.assertEqual(values.shape, (200,))
        self.assertTrue(np.all(np.diff(values) <= 0))
        self.assertGreater(ks.chi(1.0 + 1e-3), 1.0 - 1e-12)
        self.assertLess(ks.chi(math.pi - 1e-3), 1e-12)

    def test_series_threshold(self):
        """Test 0.05 min(1, 1/kappa_s)."""
        print("\n✅ Testing series threshold...")
        config = SolverConfig()
        self.assertAlmostEqual(ks.series_threshold(ElasticMedium(omega=20.0), config), 2.5e-3)
        self.assertAlmostEqual(ks.series_threshold(ElasticMedium(omega=0.5), config), 0.05)


class TestSplitPieces(unittest.TestCase):
    """B1, C1, B2, C2 and the direct kernels."""

    def setUp(self):
        self.medium = ElasticMedium()
        self.rough = named_surface("rough", image_level=-1.0)

    def test_direct_kernels_singular_on_diagonal(self):
        """Test A1 and A2 reject s = t while A3 stays finite."""
        print("\n✅ Testing direct kernels at s = t...")
        with self.assertRaises(SingularityError):
            ks.kernel_A1(self.medium, self.rough, 0.3, 0.3)
        with self.assertRaises(SingularityError):
            ks.kernel_A2(self.medium, self.rough, 0.3, 0.3)
        a3 = ks.kernel_A3(self.medium, self.rough, 0.3, 0.3)
        self.assertEqual(a3.shape, (2, 2))
        self.assertTrue(np.all(np.isfinite(a3)))

    def test_log_pieces_on_diagonal(self):
        """Test B1 = -2J/(3 pi) I and B2 = 0 at s = t for lambda = mu = 1."""
        print("\n✅ Testing B1, B2 on the diagonal...")
        for name in ("flat", "rough"):
            prof = named_surface(name, image_level=-1.0)
            for s in (-0.8, 0.0, 1.7):
                jac = float(prof.jacobian(s))
                b1, _ = ks.kernel_B1_C1(self.medium, prof, s, s)
                b2, _ = ks.kernel_B2_C2(self.medium, prof, s, s)
                np.testing.assert_allclose(b1, -2.0 * jac / (3.0 * math.pi) * np.eye(2), atol=1e-14)
                np.testing.assert_allclose(b2, np.zeros((2, 2)), atol=1e-14)

    def test_double_layer_diagonal_on_parabola(self):
        """Test C2(0, 0) for f = t^2 against its closed form."""
        print("\n✅ Testing C2 diagonal on a parabola...")
        expected = np.diag([3.0 / (2.0 * math.pi), 1.0 / (2.0 * math.pi)])
        for omega in (1.0, 20.0):
            _, c2 = ks.kernel_B2_C2(ElasticMedium(omega=omega), _parabola(), 0.0, 0.0)
            np.testing.assert_allclose(c2, expected, atol=1e-13)

    def test_flat_double_layer_diagonal_vanishes(self):
        """Test C2(s, s) = 0 on a flat surface."""
        print("\n✅ Testing flat C2 diagonal...")
        _, c2 = ks.kernel_B2_C2(self.medium, named_surface("flat"), 0.4, 0.4)
        np.testing.assert_allclose(c2, np.zeros((2, 2)), atol=1e-14)

    def test_near_branch_matches_direct(self):
        """Test the series branch agrees with A - B ln|s-t| where both are accurate."""
        print("\n✅ Testing near-diagonal branch...")
        rng = np.random.default_rng(7)
        s = rng.uniform(-4.0, 4.0, 12)
        u = rng.uniform(1e-3, 2.4e-3, 12) * rng.choice([-1.0, 1.0], 12)
        t = s - u
        self.assertTrue(np.all(np.abs(u) < ks.series_threshold(self.medium, SolverConfig())))

        b1, c1 = ks.kernel_B1_C1(self.medium, self.rough, s, t)
        b2, c2 = ks.kernel_B2_C2(self.medium, self.rough, s, t)
        log_u = np.log(np.abs(u))[:, None, None]
        c1_direct = ks.kernel_A1(self.medium, self.rough, s, t) - b1 * log_u
        c2_direct = ks.kernel_A2(self.medium, self.rough, s, t) - b2 * log_u

        self.assertLess(np.max(np.abs(c1 - c1_direct)), 1e-7 * np.max(np.abs(c1)))
        self.assertLess(np.max(np.abs(c2 - c2_direct)), 1e-7 * np.max(np.abs(c2)))

    def test_diagonal_is_limit_of_off_diagonal(self):
        """Test C1, C2 at s = t equal the extrapolated off-diagonal values."""
        print("\n✅ Testing diagonal limits of C1, C2...")
        medium = ElasticMedium(omega=5.0)
        for name in ("periodic", "rough"):
            prof = named_surface(name, image_level=-1.0)
            for s in (-1.1, 0.6):
                for split in (ks.kernel_B1_C1, ks.kernel_B2_C2):
                    on = split(medium, prof, s, s)[1]
                    near = [split(medium, prof, s, s + e)[1] for e in RICHARDSON_STEPS]
                    scale = max(np.max(np.abs(on)), 1e-3)
                    self.assertLess(
                        np.max(np.abs(richardson(near) - on)), 1e-6 * scale,
                        msg=f"{name}, {split.__name__}, s={s}",
                    )

    def test_smooth_part_is_linear_next_to_diagonal(self):
        """Test C1, C2 just off the diagonal follow their tangent line at omega = 20."""
        print("\n✅ Testing C1, C2 next to the diagonal...")
        reference = 2e-6
        for name in ("periodic", "rough"):
            prof = named_surface(name, image_level=-1.0)
            for s in (-1.1, 0.6):
                for split in (ks.kernel_B1_C1, ks.kernel_B2_C2):
                    on = split(self.medium, prof, s, s)[1]
                    slope = (split(self.medium, prof, s, s + reference)[1] - on) / reference
                    for e in (1.5e-7, 5e-7, 1e-6):
                        near = split(self.medium, prof, s, s + e)[1]
                        self.assertLess(
                            np.max(np.abs(near - (on + slope * e))), 1e-9,
                            msg=f"{name}, {split.__name__}, s={s}, eps={e}",
                        )


class TestKernelPair(unittest.TestCase):
    """Final B and C of the boundary operator."""

    def test_reconstructs_full_kernel(self):
        """Test A = (1/2pi) ln(4 sin^2((s-t)/2)) B + C off the diagonal."""
        print("\n✅ Testing kernel reconstruction...")
        rng = np.random.default_rng(11)
        for name in ("flat", "periodic", "rough"):
            pair = ks.kernel_pair(ElasticMedium(omega=5.0), named_surface(name, image_level=-1.0))
            s = rng.uniform(-6.0, 6.0, 40)
            u = rng.uniform(1e-2, 5.0, 40) * rng.choice([-1.0, 1.0], 40)
            t = s - u
            kernel_b, kernel_c = pair.evaluate(s, t)
            weight = (np.log(4.0 * np.sin(u / 2.0) ** 2) / (2.0 * math.pi))[:, None, None]
            full = pair.full_kernel(s, t)
            self.assertLess(
                np.max(np.abs(weight * kernel_b + kernel_c - full)),
                1e-9 * np.max(np.abs(full)),
                msg=name,
            )

    def test_b_vanishes_outside_band(self):
        """Test B = 0 and C = A for |s - t| >= pi."""
        print("\n✅ Testing kernel outside the band...")
        pair = ks.kernel_pair(ElasticMedium(omega=5.0), named_surface("periodic", image_level=-1.0))
        t = np.array([math.pi, 4.0, -7.5])
        kernel_b, kernel_c = pair.evaluate(0.0, t)
        np.testing.assert_array_equal(kernel_b, np.zeros((3, 2, 2)))
        np.testing.assert_allclose(kernel_c, pair.full_kernel(0.0, t), rtol=1e-13)

    def test_c_is_smooth_across_branch_edges(self):
        """Test second differences of C show no jump at the branch and band edges."""
        print("\n✅ Testing smoothness of C across branch edges...")
        medium = ElasticMedium(omega=5.0)
        h = 5e-4
        for name in ("periodic", "rough"):
            pair = ks.kernel_pair(
                medium, named_surface(name, image_level=-1.0), SolverConfig(series_threshold_factor=0.25)
            )
            for s in (-1.1, 0.4):
                for edge in (pair.threshold, STABLE_BAND, 1.0, math.pi):
                    for sign in (1.0, -1.0):
                        u = sign * (edge + h * np.arange(-4, 5))
                        values = pair.C(s, s - u)
                        second = values[:-2] - 2.0 * values[1:-1] + values[2:]
                        # second[3] straddles the edge, second[0] and second[6] do not
                        jump = np.max(np.abs(second[3] - 0.5 * (second[0] + second[6])))
                        scale = max(np.max(np.abs(values)), 1.0)
                        self.assertLess(
                            jump, 1e-8 * scale, msg=f"{name}, s={s}, edge={edge:.3g}, sign={sign}"
                        )

    def test_diagonal_values_finite(self):
        """Test B and C are finite on the diagonal and B matches pi B*."""
        print("\n✅ Testing kernel pair on the diagonal...")
        medium = ElasticMedium()
        prof = named_surface("rough", image_level=-1.0)
        pair = ks.kernel_pair(medium, prof)
        s = np.linspace(-3.0, 3.0, 7)
        kernel_b, kernel_c = pair.evaluate(s, s)
        self.assertTrue(np.all(np.isfinite(kernel_c)))
        b1, _ = ks.kernel_B1_C1(medium, prof, s, s)
        b2, _ = ks.kernel_B2_C2(medium, prof, s, s)
        np.testing.assert_allclose(kernel_b, math.pi * (-1j * medium.eta * b1 + b2), rtol=1e-13)

    def test_broadcast_shapes(self):
        """Test broadcasting of (s, t) grids."""
        print("\n✅ Testing kernel pair shapes...")
        pair = ks.kernel_pair(ElasticMedium(omega=5.0), named_surface("flat"))
        s = np.linspace(-1.0, 1.0, 3)[:, None]
        t = np.linspace(-4.0, 4.0, 4)[None, :]
        self.assertEqual(pair.B(s, t).shape, (3, 4, 2, 2))
        self.assertEqual(pair.C(s, t).shape, (3, 4, 2, 2))
        self.assertEqual(pair.C(0.0, 0.5).shape, (2, 2))


if __name__ == "__main__":
    unittest.main()
