"""Brute-force extreme values of a polynomial on the box [-1, 1]^n.

The grid value is within ``slack`` of the true extremum: every point of the
box is within h/2 (per coordinate) of a grid point, and
|f(x) - f(g)| <= sum_i ||d_i f||_{1,cheb} * h / 2.
"""

from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import minimize

from polys.multivariate import ChebPolyN, as_multivariate
from utils.config_loader import config_loader
from utils.errors import PreconditionError
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class OracleResult:
    f_min_hat: float
    f_max_hat: float
    argmin: List[float]
    argmax: List[float]
    grid: int
    slack: float

    @property
    def lower_bound(self) -> float:
        """Certified lower bound on the true minimum."""
        return self.f_min_hat - self.slack

    @property
    def upper_bound(self) -> float:
        return self.f_max_hat + self.slack

    def to_dict(self) -> dict:
        return asdict(self)


def lipschitz_bound(f: ChebPolyN) -> float:
    return float(sum(f.partial_derivative(i).norm_1cheb() for i in range(f.n)))


def _refine(f: ChebPolyN, start: np.ndarray, sign: float):
    res = minimize(lambda x: sign * f.evaluate_many(x[None, :])[0], start, method='L-BFGS-B',
                   bounds=[(-1.0, 1.0)] * f.n)
    x = np.clip(res.x, -1.0, 1.0)
    return float(f.evaluate_many(x[None, :])[0]), x


def grid_oracle(f, points_per_axis: Optional[int] = None) -> OracleResult:
    f = as_multivariate(f)
    cfg = config_loader.get_section('oracle')
    m = points_per_axis or cfg.get('grid', 101)
    if f.n > 3:
        raise PreconditionError(f"grid_oracle supports n <= 3, got {f.n}")
    if m < 11:
        raise PreconditionError(f"points_per_axis must be >= 11, got {m}")

    axis = np.linspace(-1.0, 1.0, m)
    values = f.evaluate_grid([axis] * f.n)
    i_min = np.unravel_index(int(np.argmin(values)), values.shape)
    i_max = np.unravel_index(int(np.argmax(values)), values.shape)
    x_min, f_min = axis[list(i_min)], float(values[i_min])
    x_max, f_max = axis[list(i_max)], float(values[i_max])

    if cfg.get('refine', True) and not f.is_zero():
        value, x = _refine(f, x_min, 1.0)
        if value < f_min:
            f_min, x_min = value, x
        value, x = _refine(f, x_max, -1.0)
        if value > f_max:
            f_max, x_max = value, x

    slack = lipschitz_bound(f) * (2.0 / (m - 1)) / 2.0
    logger.debug(f"grid_oracle: min {f_min:.6g}, max {f_max:.6g}, slack {slack:.3e} on {m}^{f.n} grid")
    return OracleResult(f_min_hat=f_min, f_max_hat=f_max, argmin=[float(v) for v in x_min],
                        argmax=[float(v) for v in x_max], grid=m, slack=slack)
