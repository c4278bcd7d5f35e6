import os
import sys
import math
import unittest

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.elastic import surface
from src.elastic.errors import DegenerateGeometryError, InvalidArgumentError

# Offsets for two-level Richardson extrapolation to the diagonal
RICHARDSON_STEPS = (1e-2, 1e-3, 1e-4)


def richardson(values):
    """Extrapolate values at eps, eps/10, eps/100 to eps = 0, cancelling the eps and eps**2 terms."""
    v1, v2, v3 = values
    coarse = (10.0 * v2 - v1) / 9.0
    fine = (10.0 * v3 - v2) / 9.0
    return (100.0 * fine - coarse) / 99.0


class TestSurfaceProfiles(unittest.TestCase):
    """Built-in profiles, derivatives and frames."""

    def test_flat_frame(self):
        """Test normal, Jacobian and points of the flat surface."""
        print("\n✅ Testing flat surface frame...")
        flat = surface.named_surface("flat")
        t = np.linspace(-3.0, 3.0, 7)
        np.testing.assert_array_equal(flat.jacobian(t), np.ones(7))
        np.testing.assert_array_equal(flat.normal(t), np.tile([0.0, 1.0], (7, 1)))
        np.testing.assert_array_equal(flat.point(t)[:, 1], np.zeros(7))
        self.assertEqual(flat.image_level, -1.0)

    def test_derivatives_match_finite_differences(self):
        """Test the analytic f' and f'' of the periodic and rough profiles."""
        print("\n✅ Testing profile derivatives...")
        x = np.linspace(-9.0, 9.0, 37)
        step = 1e-5
        for name in ("periodic", "rough"):
            prof = surface.named_surface(name)
            df_fd = (prof.f(x + step) - prof.f(x - step)) / (2.0 * step)
            ddf_fd = (prof.df(x + step) - prof.df(x - step)) / (2.0 * step)
            np.testing.assert_allclose(prof.df(x), df_fd, rtol=0, atol=1e-7, err_msg=name)
            np.testing.assert_allclose(prof.ddf(x), ddf_fd, rtol=0, atol=1e-7, err_msg=name)

    def test_normal_is_unit_and_orthogonal(self):
        """Test |nu| = 1 and nu . (1, f') = 0."""
        print("\n✅ Testing unit normal...")
        prof = surface.named_surface("rough")
        t = np.linspace(-5.0, 5.0, 21)
        nu = prof.normal(t)
        np.testing.assert_allclose(np.linalg.norm(nu, axis=-1), 1.0, rtol=1e-14)
        np.testing.assert_allclose(nu[:, 0] + prof.df(t) * nu[:, 1], 0.0, atol=1e-15)
        self.assertTrue(np.all(nu[:, 1] > 0))

    def test_named_surface_errors(self):
        """Test unknown names and sampling arguments."""
        print("\n✅ Testing named surface errors...")
        with self.assertRaises(InvalidArgumentError):
            surface.named_surface("bogus")
        with self.assertRaises(InvalidArgumentError):
            surface.sample_profile(surface.named_surface("flat"), (0.0, 1.0), 1)

    def test_sample_profile(self):
        """Test equispaced sampling of (x1, f(x1))."""
        print("\n✅ Testing sample_profile...")
        prof = surface.named_surface("periodic")
        samples = surface.sample_profile(prof, (-2.0, 2.0), 5)
        self.assertEqual(samples.shape, (5, 2))
        np.testing.assert_allclose(samples[:, 0], [-2.0, -1.0, 0.0, 1.0, 2.0])
        np.testing.assert_allclose(samples[:, 1], prof.f(samples[:, 0]))

    def test_check_image_level(self):
        """Test the image line must stay strictly below the surface."""
        print("\n✅ Testing image level check...")
        window = (-10.0 * math.pi, 10.0 * math.pi)
        flat = surface.named_surface("flat")
        self.assertAlmostEqual(flat.check_image_level(window, 0.01), 1.0)
        with self.assertRaises(DegenerateGeometryError):
            flat.with_image_level(0.0).check_image_level(window, 0.01)

        rough = surface.named_surface("rough", image_level=0.0)
        with self.assertRaises(DegenerateGeometryError):
            rough.check_image_level(window, 0.01)
        margin = rough.with_image_level(-1.0).check_image_level(window, 0.01)
        self.assertGreater(margin, 0.7)


class TestPairGeometry(unittest.TestCase):
    """r(s,t)/|s-t|, xi, zeta and their diagonal limits."""

    def test_flat_geometry_record(self):
        """Test the scalar geometry record on the flat surface."""
        print("\n✅ Testing geometry record...")
        g = surface.geometry(surface.named_surface("flat"), 0.0, 1.0)
        self.assertAlmostEqual(g.r, 1.0)
        self.assertAlmostEqual(g.r_image, math.sqrt(5.0))
        self.assertAlmostEqual(g.jacobian_t, 1.0)
        np.testing.assert_allclose(g.l_t, [0.0, 1.0])
        np.testing.assert_allclose(g.l_perp_t, [1.0, 0.0])

    def test_flat_xi_and_ratio(self):
        """Test xi = 0 and r/|s-t| = 1 everywhere on a flat surface."""
        print("\n✅ Testing flat xi and ratio...")
        flat = surface.named_surface("flat")
        s = np.array([[0.0], [1.0]])
        t = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(surface.r_ratio(flat, s, t), np.ones((2, 3)))
        np.testing.assert_allclose(surface.xi(flat, s, t), np.zeros((2, 3)))
        z = surface.zeta(flat, 0.0, 3.0)
        np.testing.assert_allclose(z, [[1.0, 0.0], [0.0, 0.0]])

    def test_diagonal_values(self):
        """Test the closed-form diagonal limits."""
        print("\n✅ Testing diagonal values...")
        prof = surface.named_surface("rough")
        s = 0.7
        jac = math.sqrt(1.0 + float(prof.df(s)) ** 2)
        self.assertAlmostEqual(surface.r_ratio(prof, s, s), jac, places=15)
        self.assertAlmostEqual(
            surface.xi(prof, s, s), -float(prof.ddf(s)) / (2.0 * jac ** 2), places=15
        )
        tangent = np.array([1.0, float(prof.df(s))]) / jac
        np.testing.assert_allclose(surface.zeta(prof, s, s), np.outer(tangent, tangent), atol=1e-15)

    def test_diagonal_limits_are_continuous(self):
        """Test off-diagonal values extrapolate to the diagonal limits."""
        print("\n✅ Testing diagonal continuity...")
        for name in ("periodic", "rough"):
            prof = surface.named_surface(name)
            for s in (-1.3, 0.0, 2.2):
                for fn in (surface.r_ratio, surface.xi):
                    near = [fn(prof, s, s + e) for e in RICHARDSON_STEPS]
                    self.assertAlmostEqual(
                        richardson(near), fn(prof, s, s), delta=1e-6,
                        msg=f"{name}, {fn.__name__}, s={s}",
                    )
                np.testing.assert_allclose(
                    surface.zeta(prof, s, s + 1e-6), surface.zeta(prof, s, s), atol=1e-6
                )

    def test_xi_is_linear_next_to_diagonal(self):
        """Test xi just off the diagonal follows its tangent line to rounding level."""
        print("\n✅ Testing xi next to the diagonal...")
        reference = 1e-5
        for name in ("periodic", "rough"):
            prof = surface.named_surface(name)
            for s in (-1.1, 0.0, 2.2):
                on = surface.xi(prof, s, s)
                slope = (surface.xi(prof, s, s + reference) - on) / reference
                for e in (1.5e-7, 1e-6, 3e-6):
                    self.assertAlmostEqual(
                        surface.xi(prof, s, s + e), on + slope * e, delta=1e-9,
                        msg=f"{name}, s={s}, eps={e}",
                    )

    def test_closed_form_limits(self):
        """Test zeta for a straight slope, xi for a parabola and unit trace of zeta."""
        print("\n✅ Testing closed-form limits...")
        slope = surface.SurfaceProfile(
            f=lambda x: np.asarray(x, dtype=float),
            df=lambda x: np.ones(np.shape(x)),
            ddf=lambda x: np.zeros(np.shape(x)),
            lower_bound=-np.inf,
        )
        np.testing.assert_allclose(surface.zeta(slope, 0.4, 0.4), np.full((2, 2), 0.5), atol=1e-15)
        self.assertAlmostEqual(surface.r_ratio(slope, 0.4, 0.4), math.sqrt(2.0), places=15)

        parabola = surface.SurfaceProfile(
            f=lambda x: np.asarray(x, dtype=float) ** 2,
            df=lambda x: 2.0 * np.asarray(x, dtype=float),
            ddf=lambda x: np.full(np.shape(x), 2.0),
        )
        self.assertAlmostEqual(surface.xi(parabola, 0.0, 0.0), -1.0, places=15)

        rng = np.random.default_rng(5)
        s = rng.uniform(-5.0, 5.0, 50)
        t = rng.uniform(-5.0, 5.0, 50)
        traces = np.trace(surface.zeta(surface.named_surface("rough"), s, t), axis1=-2, axis2=-1)
        np.testing.assert_allclose(traces, 1.0, rtol=1e-14)

    def test_vectorized_shapes(self):
        """Test broadcasting of s against t."""
        print("\n✅ Testing pair geometry shapes...")
        prof = surface.named_surface("periodic")
        g = surface.pair_geometry(prof, np.arange(3.0)[:, None], np.linspace(0.0, 1.0, 4)[None, :])
        self.assertEqual(g.r.shape, (3, 4))
        self.assertEqual(g.d.shape, (3, 4, 2))
        self.assertEqual(g.zeta.shape, (3, 4, 2, 2))
        self.assertTrue(g.diagonal[0, 0])
        self.assertFalse(g.diagonal[1, 0])

        sub = g.subset(g.diagonal)
        self.assertEqual(sub.r.shape, (int(np.count_nonzero(g.diagonal)),))
        np.testing.assert_allclose(sub.r, 0.0)

    def test_image_distance_positive(self):
        """Test the reflected point stays away from the surface."""
        print("\n✅ Testing image distances...")
        prof = surface.named_surface("rough", image_level=-1.0)
        s = np.linspace(-5.0, 5.0, 11)
        g = surface.pair_geometry(prof, s[:, None], s[None, :])
        self.assertGreater(float(np.min(g.r_image)), 1.0)


if __name__ == "__main__":
    unittest.main()
