"""Polynomial approximation of exp(-t) on [0, b] and the SOS kernel built from it.

    K_r(x, y) = s((x - y)^2 / (4 sigma^2))^2 / (sqrt(2 pi) sigma)

with the level-r schedule
    delta = r^(-7/2), sigma = sqrt(log(1/delta)) / r, gamma = sqrt(5/2 log r),
    R = 1 + gamma (2 + sqrt 2) sqrt(d) sigma, b = (R + 1)^2 / (4 sigma^2).
All logarithms are natural.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev as C

from polys.chebyshev import ChebPoly1
from utils.config_loader import config_loader
from utils.errors import CapacityError, ConstructionError, PreconditionError
from utils.logger import get_logger

logger = get_logger(__name__)

SQRT2 = math.sqrt(2.0)
FEASIBILITY_CONSTANT = 10 * math.sqrt(35) * (1 + 1 / SQRT2)


@dataclass(frozen=True)
class ExpApprox:
    """s(t) ~ exp(-t) on [0, b]; ``poly`` lives on u = 2t/b - 1 in [-1, 1]."""
    b: float
    delta: float
    poly: ChebPoly1
    theoretical_degree: int
    achieved_degree: int
    achieved_error: float

    def __call__(self, t):
        u = 2.0 * np.asarray(t, dtype=float) / self.b - 1.0
        return C.chebval(u, self.poly.coeffs)

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "delta": self.delta,
            "theoretical_degree": self.theoretical_degree,
            "achieved_degree": self.achieved_degree,
            "achieved_error": self.achieved_error,
        }


@dataclass(frozen=True)
class Schedule:
    r: Optional[int]
    d: int
    delta: float
    sigma: float
    gamma: float
    R: float
    b: float
    feasible: bool
    schedule_off: bool = False

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("r", "d", "delta", "sigma", "gamma", "R", "b", "feasible", "schedule_off")}


@dataclass(frozen=True)
class KernelSpec:
    params: Schedule
    s: ExpApprox
    kernel_degree: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "kernel_degree", 4 * self.s.achieved_degree)

    # flat access to the schedule values
    @property
    def r(self):
        return self.params.r

    @property
    def d(self):
        return self.params.d

    @property
    def delta(self):
        return self.params.delta

    @property
    def sigma(self):
        return self.params.sigma

    @property
    def gamma(self):
        return self.params.gamma

    @property
    def R(self):
        return self.params.R

    @property
    def b(self):
        return self.params.b

    @property
    def prefactor(self) -> float:
        return 1.0 / (math.sqrt(2 * math.pi) * self.sigma)

    def to_dict(self) -> dict:
        out = self.params.to_dict()
        out.update(kernel_degree=self.kernel_degree,
                   theoretical_kernel_degree=4 * self.s.theoretical_degree,
                   s=self.s.to_dict())
        return out


def is_feasible(r: float, d: int) -> bool:
    return r / math.log(r) >= FEASIBILITY_CONSTANT * d ** 2.5


def schedule(r: int, d: int) -> Schedule:
    if r < 2 or d < 2:
        raise PreconditionError(f"schedule needs r >= 2 and d >= 2, got r={r}, d={d}")
    delta = r ** -3.5
    sigma = math.sqrt(math.log(1 / delta)) / r
    gamma = math.sqrt(2.5 * math.log(r))
    R = 1 + gamma * (2 + SQRT2) * math.sqrt(d) * sigma
    b = (R + 1) ** 2 / (4 * sigma ** 2)
    return Schedule(r=r, d=d, delta=delta, sigma=sigma, gamma=gamma, R=R, b=b,
                    feasible=is_feasible(r, d))


def smallest_feasible_r(d: int) -> int:
    """Least integer r >= 3 with r / log r above the feasibility threshold."""
    target = FEASIBILITY_CONSTANT * d ** 2.5
    hi = 3
    while hi / math.log(hi) < target:
        hi *= 2
    lo = hi // 2 if hi > 3 else 3
    while lo < hi:
        mid = (lo + hi) // 2
        if mid / math.log(mid) >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def theta(b: float, delta: float) -> int:
    return int(math.ceil(max(0.5 * b * math.e ** 2, math.log(2 / delta))))


def theoretical_degree(b: float, delta: float) -> int:
    if b <= 0 or not 0 < delta < 1:
        raise PreconditionError(f"need b > 0 and 0 < delta < 1, got b={b}, delta={delta}")
    return int(math.ceil(math.sqrt(2 * theta(b, delta) * math.log(4 / delta))))


def schedule_kernel_degree(r: int, d: int) -> int:
    """Kernel degree at the schedule from the theoretical degree of s (no construction)."""
    p = schedule(r, d)
    return 4 * theoretical_degree(p.b, p.delta)


def kernel_degree_upper_bound(r: int) -> float:
    """Closed-form upper bound on the schedule kernel degree; below 104 r."""
    log_r = math.log(r)
    return (20 * math.e * r + 4 * math.sqrt(7 * log_r)
            + 20 * math.sqrt(math.log(4)) * math.e * r / math.sqrt(3.5 * log_r)
            + 4 * math.sqrt(2 * math.log(4)))


def build_exp_approx(b: float, delta: float) -> ExpApprox:
    cfg = config_loader.get_section('expapprox')
    theo = theoretical_degree(b, delta)
    cap = cfg.get('degree_cap_factor', 2) * theo
    if theo > cfg.get('max_construct_degree', 4000):
        raise CapacityError(f"exp approximation of degree ~{theo} is beyond desk scale; "
                            f"use arithmetic mode")

    # uniform grid over [0, b] mapped to u in [-1, 1], endpoints included
    grid = np.linspace(-1.0, 1.0, cfg.get('grid_points', 10000) + 2)
    target = np.exp(-b * (grid + 1.0) / 2.0)
    full = C.chebinterpolate(lambda u: np.exp(-b * (u + 1.0) / 2.0), cap)

    def error_at(m: int) -> float:
        return float(np.max(np.abs(C.chebval(grid, full[:m + 1]) - target)))

    if error_at(cap) > delta:
        raise ConstructionError(f"degree cap {cap} cannot reach delta={delta} for b={b}")

    # truncation error is essentially monotone in the degree; bisect, then confirm
    lo, hi = 0, cap
    while lo < hi:
        mid = (lo + hi) // 2
        if error_at(mid) <= delta:
            hi = mid
        else:
            lo = mid + 1
    degree = lo
    err = error_at(degree)
    while err > delta:
        degree += 1
        err = error_at(degree)

    logger.debug(f"exp approximation b={b:.4g} delta={delta:.1e}: degree {degree} "
                 f"(theoretical {theo}), error {err:.3e}")
    return ExpApprox(b=b, delta=delta, poly=ChebPoly1(full[:degree + 1]),
                     theoretical_degree=theo, achieved_degree=ChebPoly1(full[:degree + 1]).deg,
                     achieved_error=err)


def build_kernel(r: int, d: int) -> KernelSpec:
    params = schedule(r, d)
    if not params.feasible:
        raise PreconditionError(
            f"schedule (r={r}, d={d}) is infeasible: r/log r = {r / math.log(r):.1f} "
            f"< {FEASIBILITY_CONSTANT * d ** 2.5:.1f}")
    return KernelSpec(params=params, s=build_exp_approx(params.b, params.delta))


def custom_kernel(sigma: float, delta: float, R: float, d: int = 1) -> KernelSpec:
    """Schedule-off kernel with sigma, delta and R chosen directly."""
    if sigma <= 0 or R <= 1 or not 0 < delta < 1:
        raise PreconditionError("custom kernel needs sigma > 0, R > 1, 0 < delta < 1")
    gamma = (R - 1) / ((2 + SQRT2) * math.sqrt(d) * sigma)
    b = (R + 1) ** 2 / (4 * sigma ** 2)
    logger.warning(f"Schedule-off kernel: sigma={sigma}, delta={delta}, R={R} (construction mode)")
    params = Schedule(r=None, d=d, delta=delta, sigma=sigma, gamma=gamma, R=R, b=b,
                      feasible=False, schedule_off=True)
    return KernelSpec(params=params, s=build_exp_approx(b, delta))


def kernel_eval(kernel: KernelSpec, x, y):
    t = (np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) ** 2 / (4 * kernel.sigma ** 2)
    return kernel.prefactor * kernel.s(t) ** 2


def gaussian_density(sigma: float, x, y):
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return np.exp(-diff ** 2 / (2 * sigma ** 2)) / (math.sqrt(2 * math.pi) * sigma)


def pointwise_gap_bound(delta: float, sigma: float) -> float:
    """Bound 3 delta / (sqrt(2 pi) sigma) on |K_r - Gaussian| pointwise."""
    return 3 * delta / (math.sqrt(2 * math.pi) * sigma)


def truncation_error_bound(k: int, sigma: float, R: float, delta: float) -> float:
    """Bound 2R * 3 delta / (sqrt(2 pi) sigma) * max_{[-R,R]} |T_k| on ||K_r T_k - K_R T_k||_inf."""
    peak = math.cosh(k * math.acosh(R)) if R >= 1 else 1.0
    return 2 * R * pointwise_gap_bound(delta, sigma) * peak
