"""Conic solver backends behind one ``solve(problem) -> SolverReport`` contract."""

import time
from abc import ABC, abstractmethod
from typing import Dict, Optional, Type

import cvxpy as cp
import numpy as np
import scipy.sparse as sp

from sdp.problem import SdpProblem, SolverReport
from utils.config_loader import config_loader
from utils.errors import PreconditionError
from utils.logger import get_logger, run_logger

logger = get_logger(__name__)

STATUS_MAP = {
    cp.OPTIMAL: "optimal",
    cp.OPTIMAL_INACCURATE: "inaccurate",
    cp.INFEASIBLE: "infeasible",
    cp.INFEASIBLE_INACCURATE: "infeasible",
}


class SolverBackend(ABC):
    name = "abstract"

    def __init__(self, tolerance: Optional[float] = None):
        self.tolerance = tolerance or float(config_loader.get('solver.tolerance', 1e-8))

    @abstractmethod
    def solve(self, problem: SdpProblem) -> SolverReport:
        ...


def _block_matrix(entries, n_rows: int, block: int, dim: int) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    for row, b, i, j, coef in entries:
        if b == block:
            rows.append(row)
            cols.append(i * dim + j)
            vals.append(coef)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n_rows, dim * dim))


def _scalar_matrix(entries, n_rows: int, n_vars: int) -> sp.csr_matrix:
    rows = [e[0] for e in entries]
    cols = [e[1] for e in entries]
    vals = [e[2] for e in entries]
    return sp.csr_matrix((vals, (rows, cols)), shape=(n_rows, n_vars))


class CvxpyBackend(SolverBackend):
    """Models the problem in cvxpy; Clarabel (interior point) by default, SCS as fallback."""

    name = "cvxpy"

    def __init__(self, tolerance: Optional[float] = None, solver: Optional[str] = None,
                 fallback: Optional[str] = None):
        super().__init__(tolerance)
        cfg = config_loader.get_section('solver')
        self.solver = (solver or cfg.get('inner_solver', 'CLARABEL')).upper()
        self.fallback = (fallback or cfg.get('fallback_solver', 'SCS')).upper()

    def _solver_options(self, solver: str) -> Dict[str, float]:
        tol = self.tolerance
        if solver == "CLARABEL":
            return {"tol_gap_abs": tol, "tol_gap_rel": tol, "tol_feas": tol}
        if solver == "SCS":
            return {"eps": tol, "max_iters": 100000}
        return {}

    def _build(self, problem: SdpProblem):
        blocks = [cp.Variable((d, d), symmetric=True) for d in problem.block_dims]
        s = cp.Variable(problem.n_scalars) if problem.n_scalars else None
        psd = [X >> 0 for X in blocks]
        constraints = list(psd)

        def linear(block_entries, scalar_entries, n_rows):
            expr = 0
            for b, (X, d) in enumerate(zip(blocks, problem.block_dims)):
                A = _block_matrix(block_entries, n_rows, b, d)
                if A.nnz:
                    expr = expr + A @ cp.reshape(X, (d * d,), order='C')
            if s is not None and scalar_entries:
                expr = expr + _scalar_matrix(scalar_entries, n_rows, problem.n_scalars) @ s
            return expr

        eq_constraint = None
        if problem.eq_rhs:
            eq_constraint = linear(problem.eq_blocks, problem.eq_scalars, len(problem.eq_rhs)) == np.array(problem.eq_rhs)
            constraints.append(eq_constraint)
        if problem.ineq_rhs:
            constraints.append(linear(problem.ineq_blocks, problem.ineq_scalars, len(problem.ineq_rhs))
                               <= np.array(problem.ineq_rhs))
        if s is not None:
            lower = [(v, lo) for v, lo in enumerate(problem.scalar_lower) if lo is not None]
            upper = [(v, hi) for v, hi in enumerate(problem.scalar_upper) if hi is not None]
            if lower:
                idx, val = zip(*lower)
                constraints.append(s[list(idx)] >= np.array(val))
            if upper:
                idx, val = zip(*upper)
                constraints.append(s[list(idx)] <= np.array(val))

        objective = 0
        for v, c in problem.obj_scalars:
            objective = objective + c * s[v]
        for b, i, j, c in problem.obj_blocks:
            objective = objective + c * blocks[b][i, j]
        goal = cp.Minimize(objective) if problem.sense == "min" else cp.Maximize(objective)
        return cp.Problem(goal, constraints), blocks, s, psd

    def _run(self, prob: cp.Problem, solver: str) -> Optional[str]:
        try:
            prob.solve(solver=solver, **self._solver_options(solver))
            return None
        except (cp.error.SolverError, ValueError) as e:
            return str(e)

    def solve(self, problem: SdpProblem) -> SolverReport:
        problem.validate()
        prob, blocks, s, psd = self._build(problem)
        start = time.perf_counter()

        installed = cp.installed_solvers()
        solver = self.solver if self.solver in installed else self.fallback
        if solver != self.solver:
            logger.warning(f"{self.solver} is not installed; using {solver}")
        error = self._run(prob, solver)
        if (error or prob.status not in STATUS_MAP) and solver != self.fallback and self.fallback in installed:
            logger.warning(f"{solver} did not finish ({error or prob.status}); retrying with {self.fallback}")
            solver = self.fallback
            error = self._run(prob, solver)
        wall = time.perf_counter() - start

        status = STATUS_MAP.get(prob.status, "failed")
        if error:
            status = "failed"
        report = SolverReport(status=status, objective=None, primal_residual=float("inf"),
                              dual_residual=float("inf"), wall_time=wall,
                              backend=f"{self.name}:{solver}", message=error or str(prob.status))

        if status in ("optimal", "inaccurate"):
            values = [0.5 * (X.value + X.value.T) for X in blocks]
            scalars = np.asarray(s.value, dtype=float) if s is not None else np.zeros(0)
            report.blocks, report.scalars = values, scalars
            report.objective = float(prob.value)
            psd_defect = max((max(0.0, -float(np.linalg.eigvalsh(X).min())) for X in values), default=0.0)
            report.primal_residual = max(problem.residuals(values, scalars), psd_defect)
            dual_defect = 0.0
            for con in psd:
                if con.dual_value is not None:
                    Z = np.asarray(con.dual_value, dtype=float)
                    Z = 0.5 * (Z + Z.T)
                    dual_defect = max(dual_defect, -float(np.linalg.eigvalsh(Z).min()))
            report.dual_residual = dual_defect
            scale = 1.0 + max(abs(v) for v in problem.eq_rhs) if problem.eq_rhs else 1.0
            if status == "optimal" and report.primal_residual > 10 * self.tolerance * scale:
                report.status = "inaccurate"
                report.message = f"primal residual {report.primal_residual:.2e} above tolerance"

        run_logger.log_solver_run(problem.name, report)
        return report


BACKENDS: Dict[str, Type[SolverBackend]] = {"cvxpy": CvxpyBackend}


def get_backend(name: Optional[str] = None, tolerance: Optional[float] = None) -> SolverBackend:
    """Backend by name: ``cvxpy`` (configured inner solver), ``clarabel`` or ``scs``."""
    name = (name or config_loader.get('solver.backend', 'cvxpy')).lower()
    if name == "cvxpy":
        return CvxpyBackend(tolerance)
    if name in ("clarabel", "scs"):
        return CvxpyBackend(tolerance, solver=name.upper())
    raise PreconditionError(f"unknown solver backend '{name}'")
