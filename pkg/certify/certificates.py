"""Constructive quadratic-module certificates on the box [-1, 1]^n.

Building blocks:
  * 1 - T_k^2 = (1 - x^2) U_{k-1}^2 with U_{k-1} = T_k' / k,
  * 1 +- T_alpha = ((1 +- T_alpha)^2 + (1 - T_alpha^2)) / 2, where
    1 - prod_i T_{alpha_i}^2 telescopes into
    sum_i (1 - T_{alpha_i}(x_i)^2) * prod_{j>i} T_{alpha_j}(x_j)^2,
  * ||p||_{1,cheb} - p = sum_alpha |p_alpha| (1 - sign(p_alpha) T_alpha),
  * f + ||f - q||_{1,cheb} = q + (||q - f|| - (q - f)) for a sum of squares q.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from certify.sos import QuadraticModuleElement, WeightedSquaresSOS
from polys.chebyshev import ChebPoly1, derivative1
from polys.formats import poly_to_json
from polys.multivariate import ChebPolyN, as_multivariate, tensor_polynomial
from utils.config_loader import config_loader
from utils.errors import DimensionMismatchError, PreconditionError
from utils.logger import get_logger, run_logger

logger = get_logger(__name__)

Poly = Union[ChebPoly1, ChebPolyN]


def chebyshev_u(k: int) -> ChebPoly1:
    """U_k in Chebyshev-T coefficients."""
    return derivative1(ChebPoly1.basis(k + 1), 1) * (1.0 / (k + 1))


def pell_certificate(k: int) -> QuadraticModuleElement:
    """Certificate for 1 - T_k^2."""
    if k < 1:
        raise PreconditionError(f"pell_certificate needs k >= 1, got {k}")
    mult = WeightedSquaresSOS(1, [(1.0, chebyshev_u(k - 1))])
    return QuadraticModuleElement(1, WeightedSquaresSOS.empty(1), [mult], 2 * k)


def _one_pm_terms(alpha: Tuple[int, ...], sign: int, scale: float):
    """(base terms, per-axis multiplier terms) of scale * (1 + sign * T_alpha)."""
    n = len(alpha)
    t_alpha = ChebPolyN.basis(alpha)
    base = [(0.5 * scale, ChebPolyN.constant(n, 1.0) + t_alpha * float(sign))]
    multipliers: List[list] = [[] for _ in range(n)]
    for i, a in enumerate(alpha):
        if a == 0:
            continue
        factors = [ChebPoly1.constant(1.0)] * n
        factors[i] = chebyshev_u(a - 1)
        for j in range(i + 1, n):
            factors[j] = ChebPoly1.basis(alpha[j])
        multipliers[i].append((0.5 * scale, tensor_polynomial(factors)))
    return base, multipliers


def one_pm_Talpha(alpha: Sequence[int], sign: int) -> QuadraticModuleElement:
    """Certificate for 1 + sign * T_alpha, sign in {+1, -1}."""
    alpha = tuple(int(a) for a in alpha)
    if sum(alpha) < 1:
        raise PreconditionError(f"one_pm_Talpha needs |alpha| >= 1, got {alpha}")
    if sign not in (1, -1):
        raise PreconditionError(f"sign must be +1 or -1, got {sign}")
    n = len(alpha)
    base, multipliers = _one_pm_terms(alpha, sign, 1.0)
    return QuadraticModuleElement(n, WeightedSquaresSOS(n, base),
                                  [WeightedSquaresSOS(n, m) for m in multipliers], 2 * sum(alpha))


def norm_shift_certificate(p: Poly) -> QuadraticModuleElement:
    """Certificate for ||p||_{1,cheb} - p."""
    p = as_multivariate(p)
    if p.is_zero():
        raise PreconditionError("norm_shift_certificate needs a nonzero polynomial")
    n = p.n
    base: list = []
    multipliers: List[list] = [[] for _ in range(n)]
    for alpha, coef in p.items():
        if sum(alpha) == 0:
            # |p_0| - p_0 is 0 or 2|p_0|
            if coef < 0:
                base.append((2 * abs(coef), ChebPolyN.constant(n, 1.0)))
            continue
        b, m = _one_pm_terms(alpha, -1 if coef > 0 else 1, abs(coef))
        base.extend(b)
        for i in range(n):
            multipliers[i].extend(m[i])
    return QuadraticModuleElement(n, WeightedSquaresSOS(n, base),
                                  [WeightedSquaresSOS(n, m) for m in multipliers], 2 * p.degree)


def assemble_putinar(f: Poly, q_sos: WeightedSquaresSOS) -> Tuple[float, QuadraticModuleElement]:
    """(eps, certificate for f + eps) with eps = ||f - q||_{1,cheb}."""
    f = as_multivariate(f, q_sos.n)
    if f.n != q_sos.n:
        raise DimensionMismatchError(f"f has {f.n} variables, q has {q_sos.n}")
    q = q_sos.expand()
    if q.degree < f.degree:
        raise PreconditionError(f"deg q = {q.degree} is below deg f = {f.degree}")
    gap = q - f
    eps = gap.norm_1cheb()
    declared = 2 * q.degree
    if gap.is_zero():
        empty = [WeightedSquaresSOS.empty(f.n) for _ in range(f.n)]
        return 0.0, QuadraticModuleElement(f.n, q_sos, empty, declared)
    shift = norm_shift_certificate(gap)
    return eps, QuadraticModuleElement(f.n, q_sos + shift.base, shift.multipliers, declared)


@dataclass
class VerificationReport:
    residual: float
    sup_residual: float
    declared_degree: int
    component_degrees: Dict[str, Any]
    violations: List[str]
    tolerance: float
    ok: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def verify(cert: QuadraticModuleElement, target: Poly, tolerance: Optional[float] = None,
           kind: str = "certificate", samples: int = 256) -> VerificationReport:
    target = as_multivariate(target, cert.n)
    if target.n != cert.n:
        raise DimensionMismatchError(f"certificate has {cert.n} variables, target has {target.n}")
    tolerance = tolerance if tolerance is not None else config_loader.get('numerics.residual_tol', 1e-10)

    residual = (cert.expand() - target).norm_1cheb()

    rng = np.random.default_rng(config_loader.get('numerics.seed', 0))
    points = rng.uniform(-1.0, 1.0, size=(samples, cert.n))
    sup_residual = float(np.max(np.abs(cert.evaluate_many(points) - target.evaluate_many(points))))

    degrees = cert.component_degrees()
    violations = []
    if degrees["base"] > cert.declared_degree:
        violations.append(f"base degree {degrees['base']} exceeds declared {cert.declared_degree}")
    for i, d in enumerate(degrees["multipliers"]):
        if d > cert.declared_degree - 2:
            violations.append(f"multiplier {i} degree {d} exceeds declared - 2 = {cert.declared_degree - 2}")

    run_logger.log_verification(kind, residual, tolerance)
    return VerificationReport(residual=residual, sup_residual=sup_residual,
                              declared_degree=cert.declared_degree, component_degrees=degrees,
                              violations=violations, tolerance=tolerance,
                              ok=residual <= tolerance and not violations)


def one_norm_gap(f: Poly, q_sos: WeightedSquaresSOS, f_min_candidate: float) -> float:
    """||f - f_min_candidate - q||_{1,cheb}."""
    f = as_multivariate(f, q_sos.n)
    return (f - f_min_candidate - q_sos.expand()).norm_1cheb()


@dataclass
class CertifiedLowerBound:
    f: ChebPolyN
    r_level: int
    epsilon: float
    certificate: Optional[QuadraticModuleElement]
    bound_value: float
    mode: str = "construct"
    verification: Optional[VerificationReport] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "f": poly_to_json(self.f),
            "r_level": self.r_level,
            "epsilon": self.epsilon,
            "bound_value": self.bound_value,
            "mode": self.mode,
            "verification": self.verification.to_dict() if self.verification else None,
            "details": self.details,
        }


# extension of positivity from [-1, 1]^n to [-R, R]^n

C_RANGE = (1.0, math.exp(5))


def extension_radius_threshold(f_min: float, f_max: float, d: int, c: float) -> float:
    """1 + f_min / (2 c d^2 f_max)."""
    if not C_RANGE[0] <= c <= C_RANGE[1]:
        raise PreconditionError(f"c must lie in [1, e^5], got {c}")
    return 1 + f_min / (2 * c * d * d * f_max)


def _oracle_bounds(f: ChebPolyN) -> Tuple[float, float]:
    from bench.oracle import grid_oracle
    result = grid_oracle(f)
    return result.f_min_hat - result.slack, result.f_max_hat + result.slack


def check_extension_radius(f: Poly, R: float, c: float, f_min: Optional[float] = None,
                           f_max: Optional[float] = None) -> bool:
    """Whether positivity of f on the box provably extends to [-R, R]^n.

    f_min / f_max default to the padded grid-oracle bounds.
    """
    if not C_RANGE[0] <= c <= C_RANGE[1]:
        raise PreconditionError(f"c must lie in [1, e^5], got {c}")
    if R <= 1:
        return True
    f = as_multivariate(f)
    if f_min is None or f_max is None:
        lo, hi = _oracle_bounds(f)
        f_min = lo if f_min is None else f_min
        f_max = hi if f_max is None else f_max
    if f_min <= 0:
        return False
    return R <= extension_radius_threshold(f_min, f_max, max(f.degree, 1), c)


def extension_radius_report(f: Poly, R: float, f_min: Optional[float] = None,
                            f_max: Optional[float] = None) -> Dict[str, Any]:
    """Both ends of the unknown constant: c = 1 (best case) and c = e^5 (worst case)."""
    f = as_multivariate(f)
    if f_min is None or f_max is None:
        f_min, f_max = _oracle_bounds(f)
    d = max(f.degree, 1)
    report = {"R": R, "f_min": f_min, "f_max": f_max, "d": d}
    for label, c in (("c_1", C_RANGE[0]), ("c_e5", C_RANGE[1])):
        threshold = extension_radius_threshold(f_min, f_max, d, c) if f_min > 0 else 1.0
        report[label] = {"threshold": threshold,
                         "holds": check_extension_radius(f, R, c, f_min, f_max)}
    return report


def save_certificate(cert: QuadraticModuleElement, path: Union[str, Path]):
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(cert.to_json(), fh, indent=2)
    logger.info(f"Certificate saved to {path}")


def load_certificate(path: Union[str, Path]) -> QuadraticModuleElement:
    with open(path, 'r', encoding='utf-8') as fh:
        return QuadraticModuleElement.from_json(json.load(fh))
