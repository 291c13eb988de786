import sys
import os
import math
import unittest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bench.oracle import grid_oracle
from bench.pipeline import (end_to_end_bound, eps_threshold, multivariate_rate_term, rate_term,
                            rbounds2, smallest_r_for_eps)
from bench.suite import hierarchy_suite
from polys.multivariate import ChebPolyN
from sdp.hierarchy import lasserre_bound
from utils.errors import CapacityError, PreconditionError


class TestRateArithmetic(unittest.TestCase):
    def test_threshold(self):
        """Test the accuracy threshold on r / log r"""
        print("Testing eps threshold...")

        self.assertAlmostEqual(eps_threshold(2, 0.5), 3394.1, delta=0.1)
        r = smallest_r_for_eps(2, 0.5)
        self.assertGreaterEqual(r / math.log(r), 3394.1)
        self.assertLess((r - 1) / math.log(r - 1), eps_threshold(2, 0.5))
        print(f"  [OK] d=2, eps=0.5: r = {r}")

        self.assertLessEqual(smallest_r_for_eps(2, 0.9), smallest_r_for_eps(2, 0.5))
        print("  [OK] Larger eps needs smaller r")

        with self.assertRaises(PreconditionError):
            smallest_r_for_eps(2, 1.5)
        with self.assertRaises(CapacityError):
            smallest_r_for_eps(40, 1e-6)
        print("  [OK] eps outside (0, 1) and r overflow refused")

    def test_rate_terms(self):
        """Test the slack terms as formula evaluations"""
        print("Testing rate terms...")

        r = 1000
        expected = (3.5 * 2 ** 4.5 + 14) * math.log(r) / r ** 2
        self.assertAlmostEqual(rate_term(2, r, 1.0), expected)
        self.assertAlmostEqual(multivariate_rate_term(1, 2, r, 1.0), math.e * expected)
        self.assertTrue(rbounds2(10 ** 6, 2, 1.0))
        self.assertFalse(rbounds2(100, 2, 1.0))
        print("  [OK] (7/2 d^(9/2) + 14) ||f|| log r / r^2 and its e n multiple")


class TestEndToEnd(unittest.TestCase):
    def test_arithmetic_mode(self):
        """Test the accounted bound and the hierarchy level"""
        print("Testing end_to_end_bound (arithmetic)...")

        f = ChebPolyN(2, {(2, 0): 1.0, (0, 2): 1.0})
        result = end_to_end_bound(f, 0.5)
        acc = result.details["accounting"]
        self.assertEqual(result.mode, "arithmetic")
        self.assertIsNone(result.certificate)
        self.assertEqual(acc["t"], 104 * acc["r"])
        self.assertEqual(result.r_level, 208 * 2 * acc["r"])
        self.assertAlmostEqual(result.epsilon, acc["range_term"] + acc["rate_term"])
        self.assertLessEqual(result.bound_value, -2.0)
        print(f"  [OK] r = {acc['r']}, level {result.r_level}, slack {result.epsilon:.4f}")

        with self.assertRaises(PreconditionError):
            end_to_end_bound(ChebPolyN(1, {(0,): 1.0}), 0.5)
        with self.assertRaises(PreconditionError):
            end_to_end_bound(f, 0.5, mode="guess")
        print("  [OK] Constant f and unknown mode refused")

    def test_slack_never_tighter(self):
        """Test the accounted slack against solved hierarchy gaps"""
        print("Testing slack consistency...")

        for inst in hierarchy_suite():
            oracle = grid_oracle(inst.poly)
            result = end_to_end_bound(inst.poly, 0.5, oracle=oracle)
            level = max(inst.poly.degree, 2) + 2
            gap = oracle.f_min_hat - lasserre_bound(inst.poly, level).value
            self.assertGreaterEqual(result.epsilon, gap - 1e-6)
            print(f"  [OK] {inst.name}: slack {result.epsilon:.4f} >= gap {gap:.2e}")

    def test_construct_multivariate(self):
        """Test a construction-mode certificate in two variables"""
        print("Testing end_to_end_bound (construct, n = 2)...")

        f = ChebPolyN(2, {(0, 0): 1.0, (1, 1): 0.5, (2, 0): 0.25})
        result = end_to_end_bound(f, 0.2, mode="construct")
        self.assertEqual(result.mode, "construct")
        self.assertTrue(result.details["schedule_off"])
        self.assertTrue(result.verification.ok, result.verification.violations)
        oracle = result.details["oracle"]
        self.assertLessEqual(result.bound_value, oracle["f_min_hat"])
        print(f"  [OK] Certified f >= {result.bound_value:.4f} (oracle min {oracle['f_min_hat']:.4f})")

    def test_construct_univariate(self):
        """Test a construction-mode certificate in one variable"""
        print("Testing end_to_end_bound (construct, n = 1)...")

        f = ChebPolyN(1, {(0,): 0.59, (1,): -0.6, (2,): 0.5})
        result = end_to_end_bound(f, 0.25, mode="construct")
        self.assertTrue(result.verification.ok)
        self.assertLessEqual(result.bound_value, 0.0)
        self.assertEqual(result.certificate.n, 1)
        print(f"  [OK] (x - 0.3)^2 >= {result.bound_value:.4f}, degree {result.r_level}")


if __name__ == '__main__':
    print("\n" + "="*50)
    print("PIPELINE TESTS")
    print("="*50 + "\n")

    # Run tests
    unittest.main(verbosity=0, exit=False)
