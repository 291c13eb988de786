"""Univariate Chebyshev-basis polynomials.

Coefficients are stored low degree first; ``coeffs[k]`` multiplies T_k.
Evaluation is Clenshaw (``chebval``), products use the identity
T_a T_b = (T_{a+b} + T_{|a-b|}) / 2 (``chebmul``).
"""

import math
from typing import Iterable, Union

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.optimize import minimize_scalar

from utils.config_loader import config_loader
from utils.errors import PreconditionError
from utils.logger import get_logger

logger = get_logger(__name__)

Number = Union[int, float]


def _trim(coeffs: np.ndarray, threshold: float) -> np.ndarray:
    last = len(coeffs) - 1
    while last > 0 and abs(coeffs[last]) <= threshold:
        last -= 1
    return coeffs[:last + 1]


class ChebPoly1:
    """Immutable univariate polynomial sum_k c_k T_k."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Number]):
        arr = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                       dtype=float).ravel()
        if arr.size == 0:
            arr = np.zeros(1)
        if not np.all(np.isfinite(arr)):
            raise PreconditionError("Chebyshev coefficients must be finite")
        arr = _trim(arr, config_loader.get('numerics.trim_threshold', 0.0)).copy()
        arr.setflags(write=False)
        self._coeffs = arr

    # constructors
    @classmethod
    def basis(cls, k: int) -> "ChebPoly1":
        if k < 0:
            raise PreconditionError(f"Chebyshev index must be non-negative, got {k}")
        c = np.zeros(k + 1)
        c[k] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value: float) -> "ChebPoly1":
        return cls([value])

    @classmethod
    def zero(cls) -> "ChebPoly1":
        return cls([0.0])

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def deg(self) -> int:
        """Degree; the zero polynomial reports 0."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not np.any(self._coeffs)

    def __call__(self, x):
        return eval1(self, x)

    def __add__(self, other):
        if isinstance(other, ChebPoly1):
            return ChebPoly1(C.chebadd(self._coeffs, other._coeffs))
        if np.isscalar(other):
            return self + ChebPoly1.constant(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return ChebPoly1(-self._coeffs)

    def __sub__(self, other):
        if isinstance(other, ChebPoly1):
            return ChebPoly1(C.chebsub(self._coeffs, other._coeffs))
        if np.isscalar(other):
            return self - ChebPoly1.constant(other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ChebPoly1):
            return mul1(self, other)
        if np.isscalar(other):
            return ChebPoly1(self._coeffs * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ChebPoly1) and np.array_equal(self._coeffs, other._coeffs)

    def __hash__(self):
        return hash(self._coeffs.tobytes())

    def __repr__(self):
        return f"ChebPoly1(deg={self.deg}, coeffs={self._coeffs.tolist()})"

    def derivative(self, order: int = 1) -> "ChebPoly1":
        return derivative1(self, order)

    def norm_1cheb(self) -> float:
        return float(np.abs(self._coeffs).sum())


def eval1(p: ChebPoly1, x):
    """Clenshaw evaluation; valid for any real x, including outside [-1, 1]."""
    return C.chebval(x, p.coeffs)


def mul1(p: ChebPoly1, q: ChebPoly1) -> ChebPoly1:
    return ChebPoly1(C.chebmul(p.coeffs, q.coeffs))


def derivative1(p: ChebPoly1, order: int = 1) -> ChebPoly1:
    if order < 0:
        raise PreconditionError(f"derivative order must be non-negative, got {order}")
    if order == 0:
        return p
    if order > p.deg:
        return ChebPoly1.zero()
    return ChebPoly1(C.chebder(p.coeffs, m=order))


def double_factorial(m: int) -> float:
    """(m)!! in floating point; (-1)!! = 0!! = 1."""
    result = 1.0
    while m > 1:
        result *= m
        m -= 2
    return result


def markov_bound(k: int, ell: int) -> float:
    """Upper bound k^(2 ell) / (2 ell - 1)!! on sup |T_k^(ell)| over [-1, 1].

    Raises OverflowError when the bound is not representable.
    """
    if k < 0 or ell < 1:
        raise PreconditionError("markov_bound needs k >= 0 and ell >= 1")
    numerator = float(k ** (2 * ell))
    value = numerator / double_factorial(2 * ell - 1)
    if math.isinf(value):
        raise OverflowError(f"markov_bound({k}, {ell}) overflows")
    return value


def markov_exact(k: int, ell: int) -> float:
    """T_k^(ell)(1), the value at which the derivative attains its sup."""
    if ell > k:
        return 0.0
    value = 1.0
    for i in range(ell):
        value *= (k * k - i * i)
    return value / double_factorial(2 * ell - 1)


def norm_1cheb(p) -> float:
    """Sum of absolute Chebyshev coefficients; works for ChebPoly1 and ChebPolyN."""
    return p.norm_1cheb()


def norm_conversion_factor(d: int) -> float:
    """sqrt(2(d+1)): ||p||_{1,cheb} <= factor * ||p||_inf for deg p <= d."""
    return math.sqrt(2 * (d + 1))


def sup_norm_sampled(p: ChebPoly1, grid_size: int = None) -> float:
    """Sampled sup norm on [-1, 1], refined near the best samples.

    Returns a value attained by p, so it never exceeds the true sup norm.
    """
    if grid_size is None:
        grid_size = config_loader.get('numerics.sup_grid', 2001)
    if grid_size < p.deg + 1:
        raise PreconditionError(f"grid_size {grid_size} below deg + 1 = {p.deg + 1}")
    grid = np.sort(C.chebpts2(max(grid_size, 2)))
    values = np.abs(C.chebval(grid, p.coeffs))
    best = float(values.max())

    for idx in np.argsort(values)[-3:]:
        lo = grid[max(idx - 1, 0)]
        hi = grid[min(idx + 1, len(grid) - 1)]
        if hi <= lo:
            continue
        res = minimize_scalar(lambda x: -abs(C.chebval(x, p.coeffs)), bounds=(lo, hi),
                              method='bounded', options={'xatol': 1e-12})
        best = max(best, float(-res.fun))
    return best


def to_monomial(p: ChebPoly1) -> np.ndarray:
    limit = config_loader.get('numerics.monomial_degree_limit', 30)
    if p.deg > limit:
        logger.warning(f"Monomial conversion at degree {p.deg} (> {limit}) is ill-conditioned")
    return C.cheb2poly(p.coeffs)


def from_monomial(coeffs: Iterable[Number]) -> ChebPoly1:
    return ChebPoly1(C.poly2cheb(np.asarray(list(coeffs), dtype=float)))
