"""Gauss-Weierstrass smoothing of univariate polynomials and its error bounds.

The full operator is applied exactly through the Gaussian moment formula
    K(x^k) = sum_l C(k, 2l) sigma^(2l) (2l-1)!! x^(k-2l),
so it maps degree-k polynomials to degree-k polynomials. The truncated
operator (integration restricted to [-R, R]) is not polynomial-preserving
and is only evaluated numerically.
"""

import math
from dataclasses import dataclass
from typing import List

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import legendre as L

from polys.chebyshev import ChebPoly1, double_factorial, from_monomial, to_monomial
from utils.config_loader import config_loader
from utils.errors import DegreeLimitError, HypothesisError, PreconditionError
from utils.logger import get_logger

logger = get_logger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class GaussOperator:
    """Convolution with the N(0, sigma^2) density; sigma = 0 is the identity."""
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.sigma) or self.sigma < 0:
            raise PreconditionError(f"sigma must be finite and >= 0, got {self.sigma}")

    def apply(self, p: ChebPoly1) -> ChebPoly1:
        return apply_gauss(p, self.sigma)


@dataclass(frozen=True)
class TruncationParams:
    R: float
    gamma: float

    def __post_init__(self):
        if not self.R > 1:
            raise PreconditionError(f"R must exceed 1, got {self.R}")
        if not self.gamma >= 1:
            raise PreconditionError(f"gamma must be >= 1, got {self.gamma}")


def gauss_moment(ell: int, sigma: float) -> float:
    """E[Z^ell] for Z ~ N(0, sigma^2)."""
    if ell % 2:
        return 0.0
    return sigma ** ell * double_factorial(ell - 1)


def apply_gauss(p: ChebPoly1, sigma: float) -> ChebPoly1:
    limit = config_loader.get('numerics.monomial_degree_limit', 30)
    if p.deg > limit:
        raise DegreeLimitError(f"apply_gauss supports degree <= {limit}, got {p.deg}")
    if sigma == 0:
        return p

    mono = to_monomial(p)
    out = np.zeros_like(mono)
    for k, a in enumerate(mono):
        if a == 0:
            continue
        for ell in range(k // 2 + 1):
            out[k - 2 * ell] += a * math.comb(k, 2 * ell) * gauss_moment(2 * ell, sigma)
    return from_monomial(out)


def sup_error_bound(k: int, sigma: float) -> float:
    """Bound on ||T_k - K T_k||_inf."""
    if k < 1 or sigma < 0:
        raise PreconditionError("sup_error_bound needs k >= 1 and sigma >= 0")
    x = k * k * sigma
    total = 0.0
    for ell in range(1, k // 2 + 1):
        coef = double_factorial(2 * ell - 1) / (math.factorial(2 * ell) * double_factorial(4 * ell - 1))
        total += coef * x ** (2 * ell)
    return total


def cheb_error_bound(k: int, sigma: float) -> float:
    """Bound k^(9/2) sigma^2 on ||T_k - K T_k||_{1,cheb}, valid for k^2 sigma <= 1."""
    if k * k * sigma > 1:
        raise HypothesisError("k^2 * sigma <= 1", f"k={k}, sigma={sigma}")
    return k ** 4.5 * sigma ** 2


def tail_hypotheses(k: int, sigma: float, R: float, gamma: float) -> List[str]:
    """Names of the truncation-tail hypotheses that fail."""
    failed = []
    if k * sigma ** 2 > 1:
        failed.append("k * sigma^2 <= 1")
    if gamma < 1:
        failed.append("gamma >= 1")
    if R <= 1:
        failed.append("R > 1")
    if R - 1 < gamma * (2 + SQRT2) * math.sqrt(k) * sigma:
        failed.append("R - 1 >= gamma * (2 + sqrt 2) * sqrt(k) * sigma")
    return failed


def tail_bound(k: int, sigma: float, R: float, gamma: float, check: bool = True) -> float:
    """Bound 2 sqrt(2) exp(-gamma^2) on ||K T_k - K_R T_k||_inf.

    With ``check=False`` the formula is evaluated even where its hypotheses
    fail; the failures are logged.
    """
    failed = tail_hypotheses(k, sigma, R, gamma)
    if failed:
        if check:
            raise HypothesisError(failed[0], f"k={k}, sigma={sigma}, R={R}, gamma={gamma}")
        logger.warning(f"tail_bound evaluated outside its hypotheses: {', '.join(failed)}")
    return 2 * SQRT2 * math.exp(-gamma * gamma)


def gamma_from_radius(k: int, sigma: float, R: float) -> float:
    """Largest gamma allowed by R - 1 >= gamma (2 + sqrt 2) sqrt(k) sigma."""
    return (R - 1) / ((2 + SQRT2) * math.sqrt(k) * sigma)


def chernoff_tail(c: float, sigma: float) -> float:
    """P(|Z| >= c) <= 2 exp(-c^2 / (2 sigma^2)) for Z ~ N(0, sigma^2)."""
    if sigma <= 0:
        raise PreconditionError("chernoff_tail needs sigma > 0")
    if c < 0:
        raise PreconditionError("chernoff_tail needs c >= 0")
    return 2 * math.exp(-c * c / (2 * sigma * sigma))


def _panel_integral(p: ChebPoly1, sigma: float, R: float, x: np.ndarray,
                    panels: int, t: np.ndarray, w: np.ndarray) -> np.ndarray:
    edges = np.linspace(-R, R, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    y = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wy = (half[:, None] * w[None, :]).ravel()
    py = C.chebval(y, p.coeffs) * wy
    dens = np.exp(-(x[:, None] - y[None, :]) ** 2 / (2 * sigma * sigma)) / (math.sqrt(2 * math.pi) * sigma)
    return dens @ py


def apply_truncated_gauss_numeric(p: ChebPoly1, sigma: float, R: float, x,
                                  nodes: int = None) -> np.ndarray:
    """Values of int_{-R}^{R} N(x, sigma^2)(y) p(y) dy at the points x.

    Composite Gauss-Legendre; the panel count doubles until two successive
    evaluations agree to ``quadrature.panel_tol``.
    """
    cfg = config_loader.get_section('quadrature')
    nodes = nodes or cfg.get('panel_nodes', 64)
    if nodes < 64:
        raise PreconditionError(f"nodes must be >= 64, got {nodes}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if sigma == 0:
        inside = np.abs(x) <= R
        return np.where(inside, C.chebval(x, p.coeffs), 0.0)

    tol = cfg.get('panel_tol', 1e-11)
    max_panels = cfg.get('max_panels', 131072)
    t, w = L.leggauss(nodes)

    # start with panels no wider than 8 sigma so the Gaussian peak is resolved
    panels = max(1, int(math.ceil(2 * R / (8 * sigma))))
    previous = _panel_integral(p, sigma, R, x, panels, t, w)
    while panels < max_panels:
        panels *= 2
        current = _panel_integral(p, sigma, R, x, panels, t, w)
        if np.max(np.abs(current - previous)) < tol:
            return current
        previous = current
    logger.warning(f"Truncated Gauss integral stopped at the panel cap ({max_panels})")
    return previous
