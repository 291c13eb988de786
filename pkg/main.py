#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import sys
import json
import argparse
from pathlib import Path
from typing import Any, Optional

import numpy as np
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from utils import config_loader, reconfigure_all, setup_logging, run_logger
from utils.errors import DimensionMismatchError, PklError, PreconditionError, SolverError


# Initialize logger
logger = setup_logging('main')

# Human-readable summaries go to stderr; stdout carries JSON / CSV only
console = Console(stderr=True)

COMMANDS = ("certify", "bound", "kernel", "expapprox", "vrd", "lasserre", "sosdist", "oracle")


def _jsonable(value: Any):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


class CertifierCLI:
    """Command-line interface for certificates, kernels and hierarchy benchmarks"""

    def __init__(self, args: argparse.Namespace):
        """
        Initialize the CLI

        Args:
            args: Parsed command-line arguments
        """
        self.args = args
        self.verbose = args.verbose

    # ------------------------------------------------------------------ helpers

    def _backend(self):
        from sdp.backends import get_backend
        return get_backend(self.args.backend, self.args.tol)

    def _polynomial(self):
        from polys.formats import load_polynomial
        if not self.args.poly:
            raise PreconditionError(f"'{self.args.command}' needs -f/--poly <path>")
        poly = load_polynomial(self.args.poly)
        if self.args.n is not None and poly.n != self.args.n:
            raise DimensionMismatchError(f"polynomial has {poly.n} variables, --n says {self.args.n}")
        return poly

    def _require(self, *names: str):
        missing = [f"--{name}" for name in names if getattr(self.args, name) is None]
        if missing:
            raise PreconditionError(f"'{self.args.command}' needs {', '.join(missing)}")

    def emit_json(self, payload: Any):
        text = json.dumps(payload, indent=2, default=_jsonable)
        if self.args.out:
            Path(self.args.out).write_text(text + "\n", encoding='utf-8')
            console.print(f"[green]Wrote {self.args.out}[/green]")
        else:
            sys.stdout.write(text + "\n")

    def display_pairs(self, title: str, pairs):
        table = Table(title=title, show_header=True, header_style="bold magenta")
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="white")
        for key, value in pairs:
            table.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))
        console.print(table)

    # ----------------------------------------------------------------- commands

    def cmd_oracle(self):
        from bench.oracle import grid_oracle
        result = grid_oracle(self._polynomial(), self.args.grid)
        self.display_pairs("Grid oracle", [("f_min_hat", result.f_min_hat), ("f_max_hat", result.f_max_hat),
                                           ("slack", result.slack), ("grid", result.grid)])
        self.emit_json(result.to_dict())

    def cmd_bound(self):
        from bench.pipeline import end_to_end_bound
        self._require("eps")
        result = end_to_end_bound(self._polynomial(), self.args.eps, mode=self.args.mode or "arithmetic")
        self.display_pairs(f"Certified lower bound ({result.mode})",
                           [("bound", result.bound_value), ("epsilon", result.epsilon),
                            ("level", result.r_level)])
        self.emit_json(result.to_dict())

    def cmd_certify(self):
        from bench.pipeline import end_to_end_bound
        from certify.certificates import save_certificate
        result = end_to_end_bound(self._polynomial(), self.args.eps or 0.1, mode="construct")
        report = result.verification
        self.display_pairs("Construction-mode certificate",
                           [("bound", result.bound_value), ("epsilon", result.epsilon),
                            ("declared degree", result.r_level), ("residual", report.residual),
                            ("verified", report.ok)])
        if self.args.out:
            save_certificate(result.certificate, self.args.out)
        summary = result.to_dict()
        summary.pop("f")
        sys.stdout.write(json.dumps(summary, indent=2, default=_jsonable) + "\n")
        if not report.ok:
            raise PklError(f"certificate residual {report.residual:.3e} above tolerance {report.tolerance:.1e}")

    def cmd_kernel(self):
        from kernels.operator import approximate_identity_terms, measure_identity_error, identity_bound
        from kernels.sos_exp import (custom_kernel, kernel_degree_upper_bound, schedule,
                                     schedule_kernel_degree)
        if self.args.mode == "construct":
            profile = config_loader.get_section('construct')['univariate']
            d = self.args.d or profile.get('d', 3)
            kernel = custom_kernel(profile['sigma'], profile['delta'], profile['R'], d=d)
            rows = []
            for k in range(1, d + 1):
                terms = approximate_identity_terms(kernel, k)
                terms["measured"] = measure_identity_error(kernel, k)
                rows.append({"k": k, **terms})
            self.display_pairs("Schedule-off kernel", [("sigma", kernel.sigma), ("delta", kernel.delta),
                                                        ("R", kernel.R), ("degree", kernel.kernel_degree)])
            self.emit_json({"kernel": kernel.to_dict(), "identity_error": rows})
            return

        self._require("r", "d")
        params = schedule(self.args.r, self.args.d)
        payload = {
            "schedule": params.to_dict(),
            "schedule_kernel_degree": schedule_kernel_degree(self.args.r, self.args.d),
            "kernel_degree_upper_bound": kernel_degree_upper_bound(self.args.r),
            "degree_cap_104r": 104 * self.args.r,
            "identity_bound": identity_bound(self.args.d, self.args.r),
        }
        self.display_pairs(f"Schedule r={self.args.r}, d={self.args.d}",
                           [("sigma", params.sigma), ("R", params.R), ("feasible", params.feasible),
                            ("kernel degree", payload["schedule_kernel_degree"])])
        self.emit_json(payload)

    def cmd_expapprox(self):
        from kernels.sos_exp import build_exp_approx
        self._require("b", "delta")
        approx = build_exp_approx(self.args.b, self.args.delta)
        self.display_pairs("exp(-t) approximation", [("degree", approx.achieved_degree),
                                                     ("theoretical", approx.theoretical_degree),
                                                     ("error", approx.achieved_error)])
        payload = approx.to_dict()
        payload["coeffs"] = list(approx.poly.coeffs)
        self.emit_json(payload)

    def cmd_vrd(self):
        from bench.reports import save_vrd_coefficients, table_vrd, write_figures_csv, write_table_csv
        from sdp.hierarchy import compute_vrd, vrd_eigen_check
        if self.args.r is not None and self.args.d is not None:
            result = compute_vrd(self.args.r, self.args.d, self._backend())
            payload = result.to_dict()
            payload["eigen_check"] = vrd_eigen_check(result)
            self.display_pairs(f"v(r={result.r}, d={result.d})", [("v", result.v), ("status", result.report.status)])
            self.emit_json(payload)
            return

        cells = table_vrd(self.args.rmax or 8, self.args.dmax or 4, self._backend())
        write_table_csv(cells, self.args.out)
        if self.args.figures:
            write_figures_csv(cells, self.args.figures)
        if self.args.coeffs:
            save_vrd_coefficients(cells, self.args.coeffs)
        failed = [c for c in cells if not c.ok]
        console.print(f"[cyan]{len(cells)} cells, {len(failed)} failed[/cyan]")
        if failed:
            raise SolverError(f"{len(failed)} of {len(cells)} cells did not solve to optimality: "
                              + ", ".join(f"({c.r}, {c.d}) {c.status}" for c in failed))

    def cmd_lasserre(self):
        from sdp.hierarchy import lasserre_bound
        self._require("r")
        result = lasserre_bound(self._polynomial(), self.args.r, self._backend())
        self.display_pairs(f"Hierarchy level {result.r}", [("f_(r)", result.value),
                                                          ("status", result.report.status)])
        self.emit_json(result.to_dict())

    def cmd_sosdist(self):
        from bench.reports import write_sosdist_csv
        from sdp.hierarchy import sos_distance_scaling
        r_values = list(range(self.args.rmin or 4, (self.args.rmax or 24) + 1, self.args.step or 2))
        results, slope = sos_distance_scaling(r_values, self._backend())
        write_sosdist_csv(results, slope, self.args.out)
        console.print(Panel(f"log-log slope: {slope:.4f}", title="SOS distance scaling", border_style="cyan"))

    def run(self) -> int:
        handler = getattr(self, f"cmd_{self.args.command}")
        run_logger.log_command(self.args.command, vars(self.args))
        try:
            handler()
            return 0
        except PklError as e:
            run_logger.log_command(self.args.command, vars(self.args), error=e)
            console.print(f"[red]Error: {str(e)}[/red]")
            return e.exit_code
        except OverflowError as e:
            run_logger.log_command(self.args.command, vars(self.args), error=e)
            console.print(f"[red]Overflow: {str(e)}[/red]")
            return 2
        except Exception as e:
            logger.error(f"Command '{self.args.command}' failed: {str(e)}", exc_info=self.verbose)
            console.print(f"[red]Error: {str(e)}[/red]")
            return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Putinar certificates on the box via polynomial kernels"
    )
    parser.add_argument('command', choices=COMMANDS, help='Command to run')
    parser.add_argument('-f', '--poly', type=str, help='Polynomial JSON file')
    parser.add_argument('--r', type=int, help='Level / degree parameter r')
    parser.add_argument('--d', type=int, help='Target polynomial degree d')
    parser.add_argument('--n', type=int, help='Number of variables')
    parser.add_argument('--eps', type=float, help='Relative accuracy in (0, 1)')
    parser.add_argument('--grid', type=int, help='Oracle points per axis')
    parser.add_argument('--backend', type=str, help='Solver backend: cvxpy, clarabel, scs')
    parser.add_argument('--tol', type=float, help='Solver tolerance')
    parser.add_argument('-o', '--out', type=str, help='Output path (stdout if omitted)')
    parser.add_argument('--mode', choices=("arithmetic", "construct"), help='Reporting mode')
    parser.add_argument('--rmax', type=int, help='Largest r (vrd, sosdist)')
    parser.add_argument('--dmax', type=int, help='Largest d (vrd)')
    parser.add_argument('--rmin', type=int, help='Smallest r (sosdist)')
    parser.add_argument('--step', type=int, help='Step in r (sosdist)')
    parser.add_argument('--b', type=float, help='Interval end b (expapprox)')
    parser.add_argument('--delta', type=float, help='Target accuracy delta (expapprox)')
    parser.add_argument('--figures', type=str, help='Figure series CSV path (vrd)')
    parser.add_argument('--coeffs', type=str, help='Kernel coefficient JSON path (vrd)')
    parser.add_argument('-c', '--config', type=str, default=None, help='Path to configuration file')
    parser.add_argument('-v', '--verbose', action='store_true', help='Enable verbose output')
    return parser


def main(argv: Optional[list] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)

    # Load configuration
    try:
        if args.config:
            config_loader.load_config(args.config)
    except Exception as e:
        console.print(f"[red]Failed to load configuration: {str(e)}[/red]")
        return 1
    if args.verbose:
        config_loader.update('logging.level', 'DEBUG')
    if args.config or args.verbose:
        reconfigure_all()

    if args.n is not None and args.n < 1:
        console.print("[red]--n must be >= 1[/red]")
        return 2

    return CertifierCLI(args).run()


if __name__ == "__main__":
    sys.exit(main())
