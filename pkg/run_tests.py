#!/usr/bin/env python3
"""
Test runner
Runs every test module in a subprocess and reports the results
"""
import sys
import os
import subprocess
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))


def run_test_module(module_path: str, description: str) -> bool:
    """
    Run a single test module

    Args:
        module_path: Path of the test module
        description: Test description

    Returns:
        True on success
    """
    print(f"\n{'='*60}")
    print(f" {description}")
    print(f"{'='*60}")

    try:
        result = subprocess.run(
            [sys.executable, module_path],
            capture_output=True,
            text=True,
            encoding='utf-8',
            cwd=str(project_root)
        )

        # Show output
        if result.stdout:
            print(result.stdout)
        if result.stderr and 'OK' not in result.stderr:
            print(result.stderr)

        # unittest.main(exit=False) keeps the return code at 0 on failures
        return result.returncode == 0 and 'FAILED' not in result.stderr

    except Exception as e:
        print(f"  [ERROR] Could not run tests: {str(e)}")
        return False


def main():
    """Run all test modules"""
    quick = "--quick" in sys.argv[1:]

    print("\n" + "="*60)
    print(" Kernel SOS certificates test suite")
    print("="*60)

    # Test modules
    test_modules = [
        ("tests/test_config_loader.py", "Configuration loader"),
        ("tests/test_logger.py", "Logging"),
        ("tests/test_chebyshev.py", "Univariate Chebyshev algebra"),
        ("tests/test_multivariate.py", "Multivariate Chebyshev algebra"),
        ("tests/test_gauss_weierstrass.py", "Gauss-Weierstrass operator"),
        ("tests/test_quadrature.py", "Gauss-Legendre quadrature"),
        ("tests/test_sos_exp.py", "SOS approximation of exp(-t)"),
        ("tests/test_kernel_operator.py", "Kernel operator"),
        ("tests/test_certificates.py", "Putinar certificates"),
        ("tests/test_sdp_problem.py", "SDP problem and backends"),
        ("tests/test_hierarchy.py", "Moment-SOS hierarchy"),
        ("tests/test_oracle.py", "Grid oracle"),
        ("tests/test_pipeline.py", "End-to-end pipeline"),
        ("tests/test_cli.py", "Command line"),
    ]
    if not quick:
        test_modules.append(("tests/test_acceptance.py", "Published values"))

    # Track results
    results = []
    passed = 0
    failed = 0

    for module_path, description in test_modules:
        if (project_root / module_path).exists():
            success = run_test_module(module_path, description)
            results.append((description, success))
            if success:
                passed += 1
            else:
                failed += 1
        else:
            print(f"\n[SKIP] {description} - file not found: {module_path}")
            results.append((description, None))

    # Summary
    print("\n" + "="*60)
    print(" Summary")
    print("="*60)

    for description, success in results:
        if success is None:
            status = "[SKIP]"
        elif success:
            status = "[PASS]"
        else:
            status = "[FAIL]"

        print(f"{status:6} {description}")

    skipped = len([r for r in results if r[1] is None])
    print(f"\nTotal: {len(results)}")
    print(f"Passed: {passed}")
    print(f"Failed: {failed}")
    print(f"Skipped: {skipped}")

    if failed == 0 and skipped == 0:
        print("\nAll tests passed")
        return 0
    else:
        print(f"\n{failed} failed, {skipped} skipped")
        return 1


if __name__ == "__main__":
    sys.exit(main())
