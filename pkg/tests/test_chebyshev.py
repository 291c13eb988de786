import sys
import os
import math
import unittest

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from polys.chebyshev import (ChebPoly1, eval1, mul1, derivative1, markov_bound, markov_exact,
                             norm_1cheb, norm_conversion_factor, sup_norm_sampled,
                             to_monomial, from_monomial)
from utils.errors import PreconditionError


class TestChebPoly1(unittest.TestCase):
    def setUp(self):
        """Set up test fixtures"""
        self.rng = np.random.default_rng(7)

    def test_evaluation(self):
        """Test Clenshaw evaluation against closed forms"""
        print("Testing evaluation...")

        self.assertAlmostEqual(eval1(ChebPoly1.basis(5), 0.5), 0.5, places=12)
        self.assertEqual(eval1(ChebPoly1.basis(0), 0.123), 1.0)
        self.assertAlmostEqual(eval1(ChebPoly1.basis(3), 2.0), 26.0, places=12)
        print("  [OK] T_5(0.5), T_0, T_3(2) match")

        x = self.rng.uniform(-1, 1, 1000)
        for k in range(31):
            err = np.max(np.abs(eval1(ChebPoly1.basis(k), x) - np.cos(k * np.arccos(x))))
            self.assertLess(err, 1e-11, f"k={k}")
        print("  [OK] Agrees with cos(k arccos x) for k <= 30 on 1000 points")

        for k in range(1, 11):
            self.assertLess(eval1(ChebPoly1.basis(k), 1 + 1 / (10 * k * k)), 2.0)
        print("  [OK] T_k(1 + 1/(10k^2)) < 2 for k <= 10")

        for k in range(13):
            for y in (-3.0, -2.0, -1.5, -1.0, 1.0, 1.5, 2.0, 3.0):
                value = abs(eval1(ChebPoly1.basis(k), y))
                self.assertLessEqual(value, abs(2 * y) ** k * (1 + 1e-12), f"k={k}, y={y}")
        print("  [OK] |T_k(y)| <= |2y|^k for |y| >= 1, k <= 12")

    def test_trim_and_degree(self):
        """Test exact trailing-zero trimming"""
        print("Testing trimming...")

        p = ChebPoly1([1.0, 2.0, 0.0, 0.0])
        self.assertEqual(p.deg, 1)
        self.assertEqual(ChebPoly1([]).deg, 0)
        self.assertTrue(ChebPoly1.zero().is_zero())
        self.assertEqual(ChebPoly1([1.0, 1e-300]).deg, 1)
        print("  [OK] Only exact zeros are trimmed")

        with self.assertRaises(PreconditionError):
            ChebPoly1([1.0, float('nan')])
        print("  [OK] Non-finite coefficients rejected")

    def test_immutable(self):
        """Test that coefficients cannot be modified in place"""
        print("Testing immutability...")

        p = ChebPoly1([1.0, 2.0])
        with self.assertRaises(ValueError):
            p.coeffs[0] = 5.0
        print("  [OK] Coefficient array is read-only")

    def test_multiplication(self):
        """Test product-to-sum identities"""
        print("Testing multiplication...")

        product = mul1(ChebPoly1.basis(2), ChebPoly1.basis(3))
        self.assertTrue(np.allclose(product.coeffs, [0, 0.5, 0, 0, 0, 0.5]))
        square = ChebPoly1.basis(1) * ChebPoly1.basis(1)
        self.assertTrue(np.allclose(square.coeffs, [0.5, 0, 0.5]))
        p = ChebPoly1(self.rng.normal(size=6))
        self.assertEqual(mul1(ChebPoly1.constant(1.0), p), p)
        print("  [OK] T_2 T_3, T_1^2 and identity")

        q = ChebPoly1(self.rng.normal(size=4))
        x = self.rng.uniform(-1, 1, 20)
        pq = p * q
        self.assertEqual(pq.deg, p.deg + q.deg)
        self.assertTrue(np.allclose(pq(x), p(x) * q(x), rtol=1e-12, atol=1e-12))
        print("  [OK] Product agrees pointwise")

    def test_derivative(self):
        """Test derivatives against Markov values"""
        print("Testing derivatives...")

        self.assertAlmostEqual(derivative1(ChebPoly1.basis(3), 1)(1.0), 9.0, places=10)
        self.assertTrue(derivative1(ChebPoly1.basis(0), 1).is_zero())
        self.assertAlmostEqual(derivative1(ChebPoly1.basis(4), 2)(1.0), 80.0, places=9)
        print("  [OK] T_3' (1) = 9, T_4''(1) = 80")

        for k in range(1, 11):
            for ell in range(1, 5):
                value = derivative1(ChebPoly1.basis(k), ell)(1.0)
                self.assertAlmostEqual(value, markov_exact(k, ell), delta=1e-8 * max(1.0, abs(value)))
                self.assertLessEqual(abs(value), markov_bound(k, ell) * (1 + 1e-12))
        print("  [OK] Markov bound holds for k <= 10, ell <= 4")

    def test_markov_bound(self):
        """Test Markov bound values and errors"""
        print("Testing markov_bound...")

        self.assertEqual(markov_bound(3, 1), 9.0)
        self.assertEqual(markov_bound(1, 1), 1.0)
        self.assertAlmostEqual(markov_bound(4, 2), 256 / 3)
        with self.assertRaises(PreconditionError):
            markov_bound(3, 0)
        with self.assertRaises(OverflowError):
            markov_bound(10 ** 6, 30)
        print("  [OK] Values, precondition and overflow")

    def test_norms(self):
        """Test 1-Chebyshev norm and conversion factor"""
        print("Testing norms...")

        self.assertEqual(norm_1cheb(ChebPoly1([1.0, 1.0])), 2.0)
        self.assertEqual(norm_1cheb(ChebPoly1([0.5, -0.5])), 1.0)
        self.assertAlmostEqual(norm_conversion_factor(3), math.sqrt(8))
        print("  [OK] ||.||_{1,cheb} and sqrt(2(d+1))")

        for trial in range(500):
            p = ChebPoly1(self.rng.normal(size=1 + trial % 10))
            sup = sup_norm_sampled(p)
            self.assertLessEqual(sup, p.norm_1cheb() + 1e-12)
            self.assertLessEqual(p.norm_1cheb(), norm_conversion_factor(p.deg) * sup * (1 + 1e-9))
        print("  [OK] sup <= 1-norm <= sqrt(2(d+1)) sup over 500 random polynomials")

        self.assertAlmostEqual(sup_norm_sampled(ChebPoly1.basis(4)), 1.0, places=10)
        with self.assertRaises(PreconditionError):
            sup_norm_sampled(ChebPoly1.basis(10), grid_size=5)
        print("  [OK] Sampled sup norm of T_4")

    def test_monomial_bridge(self):
        """Test conversion to and from the monomial basis"""
        print("Testing monomial conversion...")

        self.assertTrue(np.allclose(to_monomial(ChebPoly1.basis(3)), [0, -3, 0, 4]))
        p = from_monomial([0, 0, 1])
        self.assertTrue(np.allclose(p.coeffs, [0.5, 0, 0.5]))
        print("  [OK] T_3 = 4x^3 - 3x and x^2 = (T_0 + T_2)/2")


if __name__ == '__main__':
    print("\n" + "="*50)
    print("CHEBYSHEV TESTS")
    print("="*50 + "\n")

    # Run tests
    unittest.main(verbosity=0, exit=False)
