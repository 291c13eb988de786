import sys
import os
import logging
import unittest
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from sdp.problem import SolverReport
from utils.config_loader import config_loader
from utils.logger import get_logger, reconfigure_all, RunLogger


class TestLogger(unittest.TestCase):
    def setUp(self):
        """Set up test fixtures"""
        self.test_logger = get_logger('test_logger')
        self.run_logger = RunLogger()

    def test_logger_creation(self):
        """Test logger creation"""
        print("Testing logger creation...")

        logger = get_logger('test_module')
        self.assertIsNotNone(logger)
        self.assertFalse(logger.propagate)
        print("  [OK] Logger created successfully")

        try:
            logger.info("Test info message")
            logger.debug("Test debug message")
            logger.warning("Test warning message")
            print("  [OK] Logging messages work")
        except Exception as e:
            self.fail(f"Logger failed: {str(e)}")

    def test_console_on_stderr(self):
        """Test that console output never goes to stdout"""
        print("Testing console handler stream...")

        streams = [getattr(h, 'stream', None) for h in self.test_logger.handlers]
        self.assertIn(sys.stderr, streams)
        self.assertNotIn(sys.stdout, streams)
        print("  [OK] Console handler writes to stderr")

    def test_reconfigure_all(self):
        """Test that a level change reaches loggers created earlier"""
        print("Testing reconfigure_all...")

        original = config_loader.get('logging.level')
        try:
            config_loader.update('logging.level', 'DEBUG')
            reconfigure_all()
            self.assertEqual(logging.getLogger('test_logger').level, logging.DEBUG)
            print("  [OK] Existing logger switched to DEBUG")
        finally:
            config_loader.update('logging.level', original)
            reconfigure_all()
        self.assertEqual(logging.getLogger('test_logger').level, getattr(logging, original.upper()))
        print(f"  [OK] Restored to {original}")

    def test_log_file_creation(self):
        """Test that log file is created"""
        print("Testing log file creation...")

        log_path = Path(config_loader.get('logging.file'))
        self.test_logger.info("Test message for file creation")

        self.assertTrue(log_path.exists())
        print(f"  [OK] Log file exists: {log_path}")

    def test_solver_run_logging(self):
        """Test solver run logging"""
        print("Testing solver run logging...")

        report = SolverReport(status="optimal", objective=1.0, primal_residual=1e-10,
                              dual_residual=1e-10, wall_time=0.01, backend="cvxpy:CLARABEL")
        self.run_logger.log_solver_run("unit", report)
        print("  [OK] Solver success logging works")

        self.run_logger.log_solver_run("unit", error=Exception("solver crashed"))
        print("  [OK] Solver error logging works")

    def test_verification_logging(self):
        """Test certificate verification logging"""
        print("Testing verification logging...")

        self.run_logger.log_verification("pell", 1e-15, 1e-10)
        self.run_logger.log_verification("pell", 1e-3, 1e-10)
        print("  [OK] Accepted and rejected certificates logged")

    def test_command_logging(self):
        """Test CLI command logging"""
        print("Testing command logging...")

        self.run_logger.log_command("oracle", {"grid": 101})
        self.run_logger.log_command("oracle", {"grid": 3}, error=Exception("grid too small"))
        self.run_logger.log_pipeline_step("accounting", {"r": 100})
        print("  [OK] Command and pipeline logging works")


if __name__ == '__main__':
    print("\n" + "="*50)
    print("LOGGER TESTS")
    print("="*50 + "\n")

    # Run tests
    unittest.main(verbosity=0, exit=False)
