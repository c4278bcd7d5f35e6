import os
import sys
import math
import unittest

import numpy as np
from scipy import special

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.elastic import specfun
from src.elastic.errors import DomainError


class TestBesselFunctions(unittest.TestCase):
    """Bessel, Neumann and Hankel functions of orders 0..3."""

    def test_bessel_j_values(self):
        """Test J_n at zero and at the first zero of J0."""
        print("\n✅ Testing bessel_j...")
        self.assertEqual(specfun.bessel_j(0, 0.0), 1.0)
        self.assertEqual(specfun.bessel_j(1, 0.0), 0.0)
        self.assertLess(abs(specfun.bessel_j(0, 2.404825557695773)), 1e-12)

        x = np.linspace(0.0, 50.0, 11)
        np.testing.assert_allclose(specfun.bessel_j(2, x), special.jv(2, x), rtol=0, atol=1e-15)

    def test_bessel_y_values(self):
        """Test Y_n against a reference value and its small-argument behaviour."""
        print("\n✅ Testing bessel_y...")
        self.assertAlmostEqual(specfun.bessel_y(0, 1.0), 0.08825696421567696, places=14)

        x = 1e-12
        ratio = specfun.bessel_y(0, x) / (2.0 / math.pi * math.log(x / 2.0))
        self.assertAlmostEqual(ratio, 1.0, delta=0.05)

        x = 1e-6
        self.assertAlmostEqual(specfun.bessel_y(1, x) * math.pi * x / 2.0, -1.0, delta=1e-6)

    def test_hankel1(self):
        """Test H_n = J_n + i Y_n."""
        print("\n✅ Testing hankel1...")
        x = np.array([0.3, 1.0, 7.5, 120.0])
        for n in range(4):
            expected = special.jv(n, x) + 1j * special.yv(n, x)
            np.testing.assert_allclose(specfun.hankel1(n, x), expected, rtol=1e-13)
        self.assertIsInstance(specfun.hankel1(0, 2.0), complex)

    def test_domain_errors(self):
        """Test rejected arguments and orders."""
        print("\n✅ Testing domain errors...")
        with self.assertRaises(DomainError):
            specfun.bessel_j(0, -1.0)
        with self.assertRaises(DomainError):
            specfun.bessel_y(0, 0.0)
        with self.assertRaises(DomainError):
            specfun.hankel1(1, -2.0)
        with self.assertRaises(DomainError):
            specfun.bessel_j(4, 1.0)
        with self.assertRaises(DomainError):
            specfun.bessel_j(True, 1.0)
        with self.assertRaises(DomainError):
            specfun.bessel_j(0, float("nan"))

    def test_wronskian(self):
        """Test J_{n+1} Y_n - J_n Y_{n+1} = 2/(pi x)."""
        print("\n✅ Testing Wronskian...")
        x = np.geomspace(1e-3, 100.0, 40)
        for n in range(3):
            w = specfun.bessel_j(n + 1, x) * specfun.bessel_y(n, x) - specfun.bessel_j(n, x) * specfun.bessel_y(n + 1, x)
            np.testing.assert_allclose(w, 2.0 / (np.pi * x), rtol=1e-10)

    def test_three_term_recurrence(self):
        """Test C_{n-1} + C_{n+1} = (2n/x) C_n for J, Y and H."""
        print("\n✅ Testing three-term recurrence...")
        x = np.geomspace(1e-2, 50.0, 60)
        for name, fn in (("J", specfun.bessel_j), ("Y", specfun.bessel_y), ("H", specfun.hankel1)):
            for n in (1, 2):
                with self.subTest(function=name, order=n):
                    lhs = fn(n - 1, x) + fn(n + 1, x)
                    rhs = 2.0 * n / x * fn(n, x)
                    np.testing.assert_allclose(lhs, rhs, rtol=1e-11, atol=1e-14)


class TestRegularizedCombinations(unittest.TestCase):
    """Harmonic numbers, J_n/x^n, singular and regular Hankel parts."""

    def test_harmonic(self):
        """Test harmonic numbers."""
        print("\n✅ Testing harmonic numbers...")
        self.assertEqual(specfun.harmonic(0), 0.0)
        self.assertAlmostEqual(specfun.harmonic(4), 25.0 / 12.0, places=15)
        with self.assertRaises(DomainError):
            specfun.harmonic(-1)

    def test_j_over_pow(self):
        """Test the removable singularity and continuity across the series switch."""
        print("\n✅ Testing j_over_pow...")
        for n in range(4):
            self.assertAlmostEqual(
                specfun.j_over_pow(n, 0.0), 1.0 / (2 ** n * math.factorial(n)), places=15
            )
            x = 0.9 * specfun.J_OVER_POW_SWITCH
            direct = special.jv(n, x) / x ** n
            self.assertAlmostEqual(specfun.j_over_pow(n, x) / direct, 1.0, places=12)

        self.assertLess(abs(specfun.j_over_pow(2, 1e-8) - specfun.j_over_pow(2, 0.0)), 1e-15)

        x = np.array([0.0, 0.01, 0.5, 3.0])
        values = specfun.j_over_pow(1, x)
        self.assertEqual(values.shape, (4,))
        np.testing.assert_allclose(values[2:], special.jv(1, x[2:]) / x[2:], rtol=1e-14)

    def test_singular_hankel_part(self):
        """Test the negative-power part of H_n."""
        print("\n✅ Testing singular_hankel_part...")
        self.assertEqual(specfun.singular_hankel_part(0, 0.5), 0.0)
        z = 0.25
        self.assertAlmostEqual(specfun.singular_hankel_part(1, z), -2j / (math.pi * z), places=12)
        # Y_1 z -> -2/pi as z -> 0, matching the singular part
        z = 1e-5
        ratio = specfun.singular_hankel_part(1, z).imag / specfun.bessel_y(1, z)
        self.assertAlmostEqual(ratio, 1.0, places=8)

    def test_scaled_regular_hankel_reassembles_hankel(self):
        """Test log part + singular part + regular part = H_n for moderate arguments."""
        print("\n✅ Testing scaled_regular_hankel decomposition...")
        kappa = 20.0
        for z in (0.05, 0.2, 1.0):
            r = z / kappa
            gap = 0.9 * r  # |s - t|
            log_ratio = math.log(r / gap)
            for n in range(4):
                scale = kappa ** n / r ** n
                total = scale * specfun.hankel1(n, z)
                rebuilt = (
                    scale * 2j / math.pi * specfun.bessel_j(n, z) * math.log(gap)
                    + scale * specfun.singular_hankel_part(n, z)
                    + specfun.scaled_regular_hankel(n, kappa, r, log_ratio)
                )
                self.assertLess(abs(rebuilt - total), 1e-10 * abs(total), msg=f"n={n}, z={z}")

    def test_scaled_regular_hankel_at_zero(self):
        """Test the bounded value at r = 0."""
        print("\n✅ Testing scaled_regular_hankel at r = 0...")
        kappa = 3.0
        log_ratio = 0.1
        value = specfun.scaled_regular_hankel(0, kappa, 0.0, log_ratio)
        expected = 1.0 + 2j / math.pi * (specfun.EULER_GAMMA + math.log(kappa / 2.0) + log_ratio)
        self.assertAlmostEqual(value, expected, places=13)
        values = specfun.scaled_regular_hankel(2, kappa, np.zeros(3), np.zeros(3))
        self.assertEqual(values.shape, (3,))
        self.assertTrue(np.all(np.isfinite(values)))

    def test_log_sinc_half(self):
        """Test ln(sin(u/2)/(u/2)) and its small-u series."""
        print("\n✅ Testing log_sinc_half...")
        self.assertEqual(specfun.log_sinc_half(0.0), 0.0)
        self.assertAlmostEqual(specfun.log_sinc_half(1.0), math.log(math.sin(0.5) / 0.5), places=15)
        u = 5e-4
        self.assertAlmostEqual(specfun.log_sinc_half(u), -u * u / 24.0, places=15)
        u = np.array([-2.0, -1e-4, 0.0, 1e-4, 2.0])
        values = specfun.log_sinc_half(u)
        np.testing.assert_allclose(values, values[::-1], rtol=0, atol=1e-16)


if __name__ == "__main__":
    unittest.main()
