"""End-to-end certified lower bounds on min f over [-1, 1]^n.

Two modes:
  * ``arithmetic``: the hierarchy-rate accounting. The smallest r with
    r / log r >= 300 d^(5/2) / eps gives
        f_min - f_(208 n r) <= eps (f_max - f_min) + e n (7/2 d^(9/2) + 14) ||f|| log r / r^2.
    Nothing is constructed; r is typically in the 10^5 range.
  * ``construct``: an actual certificate from a schedule-off kernel (desk-scale
    sigma, delta, R from the ``construct`` config section), flagged as such.
"""

import math
from typing import Any, Dict, Optional

from bench.oracle import OracleResult, grid_oracle
from certify.certificates import (CertifiedLowerBound, assemble_putinar, extension_radius_report,
                                  verify)
from kernels.operator import apply_product_kernel, sos_decompose_image
from kernels.sos_exp import custom_kernel
from polys.multivariate import ChebPolyN, as_multivariate
from utils.config_loader import config_loader
from utils.errors import CapacityError, PreconditionError
from utils.logger import get_logger, run_logger

logger = get_logger(__name__)

RATE_CONSTANT = 300
UNIVARIATE_RATIO_CONSTANT = 150
KERNEL_DEGREE_FACTOR = 104
R_GUARD = 10 ** 9
MODES = ("arithmetic", "construct")


def eps_threshold(d: int, eps: float) -> float:
    """300 d^(5/2) / eps, the lower bound required of r / log r."""
    return RATE_CONSTANT * d ** 2.5 / eps


def smallest_r_for_eps(d: int, eps: float) -> int:
    if d < 1:
        raise PreconditionError(f"degree must be >= 1, got {d}")
    if not 0 < eps < 1:
        raise PreconditionError(f"eps must lie in (0, 1), got {eps}")
    target = eps_threshold(d, eps)
    hi = 3
    while hi / math.log(hi) < target:
        hi *= 2
        if hi > 2 * R_GUARD:
            raise CapacityError(f"eps={eps} needs r beyond {R_GUARD:.0e}")
    lo = max(3, hi // 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid / math.log(mid) >= target:
            hi = mid
        else:
            lo = mid + 1
    if lo > R_GUARD:
        raise CapacityError(f"eps={eps} needs r = {lo} beyond {R_GUARD:.0e}")
    return lo


def rbounds2(r: int, d: int, ratio: float) -> bool:
    """r / log r >= 150 d^(5/2) f_max / f_min, the univariate level condition."""
    return r / math.log(r) >= UNIVARIATE_RATIO_CONSTANT * d ** 2.5 * ratio


def rate_term(d: int, r: int, norm: float) -> float:
    """(7/2 d^(9/2) + 14) ||f|| log r / r^2."""
    return (3.5 * d ** 4.5 + 14) * norm * math.log(r) / r ** 2


def multivariate_rate_term(n: int, d: int, r: int, norm: float) -> float:
    return math.e * n * rate_term(d, r, norm)


def _range_upper(oracle: OracleResult) -> float:
    return (oracle.f_max_hat - oracle.f_min_hat) + 2 * oracle.slack


def arithmetic_accounting(f: ChebPolyN, eps: float, oracle: OracleResult) -> Dict[str, Any]:
    n, d, norm = f.n, f.degree, f.norm_1cheb()
    r = smallest_r_for_eps(d, eps)
    t = KERNEL_DEGREE_FACTOR * r
    first = eps * _range_upper(oracle)
    second = multivariate_rate_term(n, d, r, norm)
    out = {
        "threshold": eps_threshold(d, eps),
        "r": r,
        "r_over_log_r": r / math.log(r),
        "t": t,
        "level": 2 * n * t,
        "level_form": f"208nr = {208 * n * r}",
        # the outline's level, inconsistent with 2nt
        "level_outline_334r": 334 * r,
        "range_term": first,
        "rate_term": second,
        "slack": first + second,
    }
    if n == 1 and oracle.lower_bound > 0:
        ratio = oracle.upper_bound / oracle.lower_bound
        out["univariate_ratio"] = ratio
        out["rbounds2"] = rbounds2(r, d, ratio)
        out["univariate_rate_term"] = rate_term(d, r, norm)
    return out


def _construct_profile(n: int) -> Dict[str, float]:
    section = 'univariate' if n == 1 else 'multivariate'
    return dict(config_loader.get(f'construct.{section}', {}))


def construct_certificate(f: ChebPolyN, eps: float, oracle: OracleResult,
                          profile: Optional[Dict[str, float]] = None) -> CertifiedLowerBound:
    """Certificate for f - (c - eps_tilde) with a schedule-off kernel.

    c = f_min_lower - eps * range makes f - c >= eps * range > 0 on the box.
    """
    profile = profile or _construct_profile(f.n)
    d = int(profile.get('d', max(f.degree, 1)))
    kernel = custom_kernel(profile['sigma'], profile['delta'], profile['R'], d=d)
    run_logger.log_pipeline_step("kernel", kernel.to_dict())

    c = oracle.lower_bound - eps * _range_upper(oracle)
    shifted = f - c
    if f.n == 1:
        q = sos_decompose_image(kernel, shifted.to_univariate())
    else:
        _, q = apply_product_kernel(kernel, shifted)
    run_logger.log_pipeline_step("kernel_image", {"squares": len(q), "degree": q.ambient_degree})

    eps_tilde, cert = assemble_putinar(shifted, q)
    tolerance = config_loader.get('numerics.construct_residual_tol', 1e-8)
    report = verify(cert, shifted + eps_tilde, tolerance=tolerance, kind="end_to_end")
    bound = c - eps_tilde
    details = {
        "kernel": kernel.to_dict(),
        "shift": c,
        "eps_tilde": eps_tilde,
        "schedule_off": True,
        "extension": extension_radius_report(f, kernel.R, oracle.lower_bound, oracle.upper_bound),
    }
    return CertifiedLowerBound(f=f, r_level=cert.declared_degree, epsilon=eps_tilde, certificate=cert,
                               bound_value=bound, mode="construct", verification=report, details=details)


def end_to_end_bound(f, eps_target: float, mode: str = "arithmetic",
                     oracle: Optional[OracleResult] = None) -> CertifiedLowerBound:
    f = as_multivariate(f)
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}, got '{mode}'")
    if f.degree == 0:
        raise PreconditionError("end_to_end_bound needs a nonconstant polynomial")
    if not 0 < eps_target < 1:
        raise PreconditionError(f"eps_target must lie in (0, 1), got {eps_target}")

    oracle = oracle or grid_oracle(f)
    accounting = arithmetic_accounting(f, eps_target, oracle)
    run_logger.log_pipeline_step("accounting", accounting)
    details = {"oracle": oracle.to_dict(), "accounting": accounting}

    if mode == "arithmetic":
        return CertifiedLowerBound(f=f, r_level=accounting["level"], epsilon=accounting["slack"],
                                   certificate=None, bound_value=oracle.lower_bound - accounting["slack"],
                                   mode="arithmetic", details=details)

    result = construct_certificate(f, eps_target, oracle)
    result.details.update(details)
    logger.info(f"Construction-mode bound {result.bound_value:.6g} (oracle min {oracle.f_min_hat:.6g}, "
                f"level {result.r_level})")
    return result
