import sys
import os
import tempfile
import unittest
from pathlib import Path

import yaml

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils.config_loader import ConfigLoader, DEFAULT_CONFIG
from utils.errors import ConfigError


class TestConfigLoader(unittest.TestCase):
    def setUp(self):
        """Set up test fixtures"""
        self.config_loader = ConfigLoader()

    def test_load_config(self):
        """Test config file loading"""
        print("Testing config loading...")
        config = self.config_loader.load_config(str(DEFAULT_CONFIG))

        self.assertIsNotNone(config)
        self.assertIsInstance(config, dict)

        required_sections = ['numerics', 'quadrature', 'expapprox', 'construct',
                             'solver', 'hierarchy', 'oracle', 'output', 'logging']
        for section in required_sections:
            self.assertIn(section, config)
            print(f"  [OK] Section '{section}' exists")

    def test_singleton(self):
        """Test that every ConfigLoader() is the same instance"""
        print("Testing singleton...")
        self.assertIs(ConfigLoader(), self.config_loader)
        print("  [OK] Single shared instance")

    def test_get_value(self):
        """Test getting config values with dot notation"""
        print("Testing get value with dot notation...")

        self.assertEqual(self.config_loader.get('numerics.residual_tol'), 1e-10)
        print("  [OK] numerics.residual_tol = 1e-10")

        self.assertEqual(self.config_loader.get('oracle.grid'), 101)
        print("  [OK] oracle.grid = 101")

        non_existent = self.config_loader.get('non.existent.key', 'default')
        self.assertEqual(non_existent, 'default')
        self.assertEqual(self.config_loader.get("solver.tolerance.deeper", "default"), "default")
        print("  [OK] Default value works")

    def test_get_section(self):
        """Test getting entire config section"""
        print("Testing get section...")

        solver = self.config_loader.get_section('solver')
        self.assertIsInstance(solver, dict)
        self.assertIn('backend', solver)
        self.assertGreater(float(solver['tolerance']), 0)
        print(f"  [OK] Solver section retrieved: {list(solver.keys())}")

    def test_construct_profiles(self):
        """Test that both construction-mode profiles are present"""
        print("Testing construction profiles...")

        construct = self.config_loader.get_section('construct')
        self.assertAlmostEqual(construct['univariate']['sigma'], 0.02)
        self.assertAlmostEqual(construct['multivariate']['R'], 1.1)
        print("  [OK] Univariate and multivariate profiles loaded")

    def test_env_override(self):
        """Test PKL_SOLVER_TOL overriding the solver tolerance"""
        print("Testing environment override...")

        os.environ['PKL_SOLVER_TOL'] = '1e-6'
        try:
            self.config_loader.load_config(str(DEFAULT_CONFIG))
            self.assertEqual(self.config_loader.get('solver.tolerance'), 1e-6)
            print("  [OK] PKL_SOLVER_TOL applied")
        finally:
            del os.environ['PKL_SOLVER_TOL']
            self.config_loader.load_config(str(DEFAULT_CONFIG))
        self.assertEqual(float(self.config_loader.get('solver.tolerance')), 1e-8)
        print("  [OK] Tolerance restored")

    def test_missing_file(self):
        """Test that a missing config file is reported"""
        print("Testing missing config file...")

        with self.assertRaises(ConfigError):
            self.config_loader.load_config("does_not_exist.yaml")
        self.config_loader.load_config(str(DEFAULT_CONFIG))
        print("  [OK] Missing file rejected")

    def test_invalid_config(self):
        """Test that validation rejects a bad backend and a bad profile"""
        print("Testing config validation...")

        with open(DEFAULT_CONFIG, encoding="utf-8") as fh:
            base = yaml.safe_load(fh)
        broken = [("solver", "backend", "mosek"), ("construct", "univariate", {"sigma": 0.02, "delta": 2.0, "R": 1.05})]
        with tempfile.TemporaryDirectory() as tmp:
            for section, key, value in broken:
                data = yaml.safe_load(yaml.safe_dump(base))
                data[section][key] = value
                path = Path(tmp) / "bad.yaml"
                path.write_text(yaml.safe_dump(data), encoding="utf-8")
                with self.assertRaises(ConfigError):
                    self.config_loader.load_config(str(path))
                self.assertEqual(self.config_loader.get("solver.backend"), "cvxpy")
                print(f"  [OK] {section}.{key} = {value!r} rejected")
        self.config_loader.load_config(str(DEFAULT_CONFIG))

    def test_directory_creation(self):
        """Test that required directories are created"""
        print("Testing directory creation...")

        dirs_to_check = [
            Path(self.config_loader.get('output.dir')),
            Path(self.config_loader.get('logging.file')).parent
        ]

        for dir_path in dirs_to_check:
            self.assertTrue(dir_path.exists())
            print(f"  [OK] Directory exists: {dir_path}")

    def test_update_value(self):
        """Test updating config values at runtime"""
        print("Testing update value...")

        original = self.config_loader.get('oracle.refine')
        self.config_loader.update('oracle.refine', False)
        self.assertFalse(self.config_loader.get('oracle.refine'))
        print("  [OK] Updated oracle.refine to False")

        self.config_loader.update('oracle.refine', original)
        self.assertEqual(self.config_loader.get('oracle.refine'), original)
        print(f"  [OK] Restored oracle.refine to {original}")


if __name__ == '__main__':
    print("\n" + "="*50)
    print("CONFIG LOADER TESTS")
    print("="*50 + "\n")

    # Run tests
    unittest.main(verbosity=0, exit=False)
