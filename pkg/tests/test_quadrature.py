import sys
import os
import unittest

import numpy as np
from numpy.polynomial import legendre as L

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from kernels.quadrature import gauss_legendre, node_count, tensor_rule
from utils.config_loader import config_loader
from utils.errors import CapacityError, PreconditionError


class TestQuadrature(unittest.TestCase):
    def test_nodes_and_weights(self):
        """Test Gauss-Legendre nodes against numpy's reference rule"""
        print("Testing gauss_legendre...")

        for N in (1, 2, 5, 16, 63, 200):
            rule = gauss_legendre(N)
            ref_x, ref_w = L.leggauss(N)
            self.assertTrue(np.allclose(rule.nodes, ref_x, atol=1e-13))
            self.assertTrue(np.allclose(rule.weights, ref_w, atol=1e-13))
            self.assertTrue(np.all(rule.weights > 0))
            self.assertTrue(np.all(np.diff(rule.nodes) > 0))
        print("  [OK] Matches leggauss for N up to 200, weights positive")

    def test_exactness(self):
        """Test exactness up to degree 2N - 1 on a shifted interval"""
        print("Testing exactness...")

        N, a, b = 7, -1.3, 1.3
        rule = gauss_legendre(N, a, b)
        self.assertEqual(rule.exact_degree, 13)
        self.assertAlmostEqual(rule.weights.sum(), b - a, places=13)
        for k in range(0, 14):
            exact = (b ** (k + 1) - a ** (k + 1)) / (k + 1)
            self.assertAlmostEqual(rule.integrate(rule.nodes ** k), exact, places=11)
        print("  [OK] Monomials up to degree 13 integrated exactly on [-1.3, 1.3]")

        with self.assertRaises(PreconditionError):
            gauss_legendre(0)
        with self.assertRaises(PreconditionError):
            gauss_legendre(4, 1.0, -1.0)
        print("  [OK] Invalid N and interval rejected")

    def test_node_count(self):
        """Test the node count for kernel images"""
        print("Testing node_count...")

        self.assertEqual(node_count(3, 40), 23)
        self.assertGreaterEqual(2 * node_count(4, 40) - 1, 44)
        print("  [OK] 2N - 1 >= deg f + deg K")

    def test_tensor_cap(self):
        """Test the tensor-product node cap"""
        print("Testing tensor_rule...")

        rule = gauss_legendre(10)
        tensor = tensor_rule(rule, 3)
        self.assertEqual(tensor.size, 1000)
        self.assertAlmostEqual(tensor.weight_tensor().sum(), 8.0, places=12)

        cap = config_loader.get('quadrature.max_tensor_nodes')
        config_loader.update('quadrature.max_tensor_nodes', 999)
        try:
            with self.assertRaises(CapacityError):
                tensor_rule(rule, 3)
        finally:
            config_loader.update('quadrature.max_tensor_nodes', cap)
        print("  [OK] Cap enforced")


if __name__ == '__main__':
    print("\n" + "="*50)
    print("QUADRATURE TESTS")
    print("="*50 + "\n")

    # Run tests
    unittest.main(verbosity=0, exit=False)
