import sys
import os
import unittest

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bench.oracle import grid_oracle, lipschitz_bound
from bench.suite import hierarchy_suite, maxcut_polynomial, oracle_suite
from polys.multivariate import ChebPolyN
from utils.errors import PreconditionError


class TestOracle(unittest.TestCase):
    def test_simple_cases(self):
        """Test constant, linear and quadratic cases"""
        print("Testing grid_oracle...")

        const = grid_oracle(ChebPolyN(1, {(0,): 1.0}))
        self.assertEqual((const.f_min_hat, const.f_max_hat), (1.0, 1.0))
        self.assertEqual(const.slack, 0.0)
        print("  [OK] Constant")

        lin = grid_oracle(ChebPolyN(1, {(0,): 2.0, (1,): 1.0}))
        self.assertAlmostEqual(lin.f_min_hat, 1.0, places=12)
        self.assertAlmostEqual(lin.argmin[0], -1.0, places=12)
        self.assertAlmostEqual(lin.f_max_hat, 3.0, places=12)
        print("  [OK] 2 + T_1 attains 1 at -1 and 3 at 1")

        t2 = grid_oracle(ChebPolyN(1, {(2,): 1.0}))
        self.assertAlmostEqual(t2.f_min_hat, -1.0, places=12)
        self.assertAlmostEqual(t2.argmin[0], 0.0, places=8)
        self.assertAlmostEqual(t2.f_max_hat, 1.0, places=12)
        print("  [OK] T_2 attains -1 at 0")

    def test_suite_soundness(self):
        """Test |f_min_hat - f_min| <= slack on all eight instances"""
        print("Testing oracle soundness on the suite...")

        suite = oracle_suite()
        self.assertEqual(len(suite), 8)
        for inst in suite:
            result = grid_oracle(inst.poly, 41)
            self.assertLessEqual(abs(result.f_min_hat - inst.f_min), result.slack + 1e-9)
            self.assertLessEqual(abs(result.f_max_hat - inst.f_max), result.slack + 1e-9)
            self.assertLessEqual(result.lower_bound, inst.f_min + 1e-12)
            print(f"  [OK] {inst.name}: [{result.f_min_hat:.6f}, {result.f_max_hat:.6f}] slack {result.slack:.3e}")
        self.assertEqual(len(hierarchy_suite()), 5)

    def test_slack(self):
        """Test the Lipschitz slack formula"""
        print("Testing slack...")

        f = ChebPolyN(2, {(1, 1): 1.0})
        self.assertAlmostEqual(lipschitz_bound(f), 2.0)
        result = grid_oracle(f, 21)
        self.assertAlmostEqual(result.slack, 2.0 * 0.1 / 2)
        print("  [OK] slack = L h / 2")

    def test_maxcut(self):
        """Test the Laplacian form on the triangle"""
        print("Testing maxcut_polynomial...")

        triangle = [(0, 1), (1, 2), (0, 2)]
        cut = maxcut_polynomial(triangle, 3, negate=False)
        for x in np.ndindex(2, 2, 2):
            point = 2 * np.array(x) - 1
            edges = sum(point[i] != point[j] for i, j in triangle)
            self.assertAlmostEqual(cut(point), edges)
        self.assertEqual(maxcut_polynomial(triangle, 3), -cut)
        print("  [OK] Counts cut edges on the hypercube vertices")

    def test_preconditions(self):
        """Test oracle preconditions"""
        print("Testing oracle preconditions...")

        with self.assertRaises(PreconditionError):
            grid_oracle(ChebPolyN(4, {(1, 0, 0, 0): 1.0}))
        with self.assertRaises(PreconditionError):
            grid_oracle(ChebPolyN(1, {(1,): 1.0}), 5)
        print("  [OK] n > 3 and fewer than 11 points refused")


if __name__ == '__main__':
    print("\n" + "="*50)
    print("ORACLE TESTS")
    print("="*50 + "\n")

    # Run tests
    unittest.main(verbosity=0, exit=False)
