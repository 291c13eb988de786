import sys
import os
import io
import csv
import time
import unittest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bench.reports import figures_data, published_cells, published_vrd, table_vrd, write_table_csv
from sdp.hierarchy import compute_vrd, sos_distance_scaling

REFERENCE_CELLS = {(2, 1): 0.9954, (5, 2): 0.9475, (8, 1): 0.5515, (10, 3): 0.8441, (12, 1): 0.3097}


class TestTable(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        """Solve the r <= 8, d <= 4 block once"""
        start = time.perf_counter()
        cls.cells = table_vrd(8, 4)
        cls.elapsed = time.perf_counter() - start

    def test_block(self):
        """Test the r <= 8, d <= 4 block: every cell optimal with v = 1"""
        print("Testing table block...")

        self.assertEqual(len(self.cells), 26)
        for cell in self.cells:
            self.assertEqual(cell.status, "optimal", f"cell ({cell.r}, {cell.d})")
            self.assertTrue(cell.ok)
            self.assertAlmostEqual(cell.v, 1.0, delta=1e-6)
        self.assertLess(self.elapsed, 600.0)
        print(f"  [OK] 26 optimal cells in {self.elapsed:.1f}s")

    def test_published_values_unattainable(self):
        """Test that every printed value lies below the certified optimum"""
        print("Testing published values against the optimum...")

        for cell in self.cells:
            self.assertLess(published_vrd(cell.r, cell.d), cell.v)
        for (r, d), printed in REFERENCE_CELLS.items():
            result = compute_vrd(r, d)
            self.assertEqual(result.report.status, "optimal")
            self.assertAlmostEqual(result.v, 1.0, delta=1e-6)
            self.assertEqual(published_vrd(r, d), printed)
            print(f"  [OK] v({r}, {d}) = {result.v:.6f} (printed {printed})")

    def test_table_csv(self):
        """Test the CSV carries status and the printed value per cell"""
        print("Testing table CSV...")

        buffer = io.StringIO()
        write_table_csv(self.cells, buffer)
        rows = list(csv.DictReader(io.StringIO(buffer.getvalue())))
        self.assertEqual(len(rows), 26)
        self.assertEqual(rows[0]["status"], "optimal")
        self.assertAlmostEqual(float(rows[1]["published"]), 0.9954)
        print("  [OK] r, d, v, status, published")

    def test_figure_series(self):
        """Test the derived figure series"""
        print("Testing figure series...")

        printed = {(row["d"], row["r"]): row for row in figures_data(published_cells(12, 4))}
        self.assertAlmostEqual(printed[(1, 12)]["v_r_over_d_sq"], 44.5968, delta=1e-3)
        self.assertAlmostEqual(printed[(2, 10)]["v_r_over_d"], 3.3990, delta=1e-3)
        print("  [OK] v (r/d)^2 at (12, 1) and v r/d at (10, 2) from the printed table")

        rows = figures_data(self.cells)
        self.assertEqual(len(rows), 26)
        for row in rows:
            self.assertAlmostEqual(row["inv_v"] * row["v"], 1.0)
            self.assertAlmostEqual(row["v_r_over_d"], row["r"] / row["d"], delta=1e-4)
        print("  [OK] Series computed from the solved cells")


class TestScaling(unittest.TestCase):
    def test_slope(self):
        """Test the log-log slope of the SOS distance"""
        print("Testing SOS distance scaling...")

        results, slope = sos_distance_scaling(list(range(4, 25, 2)))
        self.assertEqual(len(results), 11)
        self.assertGreaterEqual(slope, -2.3)
        self.assertLessEqual(slope, -1.7)
        print(f"  [OK] slope {slope:.3f} in [-2.3, -1.7]")


if __name__ == '__main__':
    print("\n" + "="*50)
    print("ACCEPTANCE TESTS")
    print("="*50 + "\n")

    # Run tests
    unittest.main(verbosity=0, exit=False)
