"""Gauss-Legendre rules: positive weights, interior nodes, exact to degree 2N - 1."""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from utils.config_loader import config_loader
from utils.errors import CapacityError, PreconditionError
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    interval: Tuple[float, float]

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class TensorQuadrature:
    """n-fold product of one univariate rule, kept per axis."""
    axis_rule: QuadratureRule
    n: int

    @property
    def size(self) -> int:
        return len(self.axis_rule) ** self.n

    def weight_tensor(self) -> np.ndarray:
        w = self.axis_rule.weights
        out = w
        for _ in range(self.n - 1):
            out = np.multiply.outer(out, w)
        return out


def _legendre_with_derivative(N: int, x: np.ndarray):
    p_prev, p = np.ones_like(x), x.copy()
    for k in range(2, N + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    if N == 0:
        p = np.ones_like(x)
    dp = N * (x * p - p_prev) / (x * x - 1)
    return p, dp


def gauss_legendre(N: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """Nodes by Newton iteration on the three-term recurrence from Tricomi's
    initial guesses; only the nonnegative half is iterated, the rest mirrored."""
    if N < 1:
        raise PreconditionError(f"N must be >= 1, got {N}")
    if not a < b:
        raise PreconditionError(f"need a < b, got [{a}, {b}]")
    cfg = config_loader.get_section('quadrature')
    tol = cfg.get('newton_tol', 1e-14)
    max_iter = cfg.get('newton_max_iter', 100)

    half = (N + 1) // 2
    k = np.arange(1, half + 1)
    x = (1 - 1 / (8 * N ** 2) + 1 / (8 * N ** 3)) * np.cos(math.pi * (4 * k - 1) / (4 * N + 2))
    for _ in range(max_iter):
        p, dp = _legendre_with_derivative(N, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < tol:
            break
    else:
        logger.warning(f"Gauss-Legendre Newton iteration for N={N} hit {max_iter} iterations")
    _, dp = _legendre_with_derivative(N, x)
    w = 2 / ((1 - x * x) * dp * dp)

    # x is descending and nonnegative; the middle root of odd N is 0
    if N % 2:
        nodes = np.concatenate([-x[:-1], x[::-1]])
        weights = np.concatenate([w[:-1], w[::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])

    scale, shift = 0.5 * (b - a), 0.5 * (a + b)
    return QuadratureRule(nodes=scale * nodes + shift, weights=scale * weights,
                          exact_degree=2 * N - 1, interval=(a, b))


def node_count(poly_degree: int, kernel_degree: int) -> int:
    """Per-axis node count that integrates deg f + deg K exactly."""
    return int(math.ceil((poly_degree + kernel_degree) / 2)) + 1


def tensor_rule(rule: QuadratureRule, n: int) -> TensorQuadrature:
    cap = config_loader.get('quadrature.max_tensor_nodes', 1000000)
    tensor = TensorQuadrature(axis_rule=rule, n=n)
    if tensor.size > cap:
        raise CapacityError(f"tensor quadrature with {len(rule)}^{n} = {tensor.size} nodes "
                            f"exceeds the cap of {cap}")
    return tensor
