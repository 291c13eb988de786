"""Test polynomials with analytic extreme values on the box."""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from polys.multivariate import ChebPolyN


@dataclass(frozen=True)
class SuiteInstance:
    name: str
    poly: ChebPolyN
    f_min: float
    f_max: float


def maxcut_polynomial(edges: Sequence[Tuple[int, int]], n: int, negate: bool = True) -> ChebPolyN:
    """(1/4) x^T L x for the graph Laplacian L, i.e. (1/4) sum_edges (x_i - x_j)^2.

    On {-1, 1}^n it counts cut edges; ``negate`` turns max-cut into minimisation.
    """
    terms: Dict[tuple, float] = {}

    def add(alpha, coef):
        terms[alpha] = terms.get(alpha, 0.0) + coef

    for i, j in edges:
        # (x_i - x_j)^2 = T_2(x_i)/2 + T_2(x_j)/2 + 1 - 2 T_1(x_i) T_1(x_j)
        for axis in (i, j):
            alpha = [0] * n
            alpha[axis] = 2
            add(tuple(alpha), 0.125)
        add((0,) * n, 0.25)
        alpha = [0] * n
        alpha[i] = alpha[j] = 1
        add(tuple(alpha), -0.5)
    poly = ChebPolyN(n, terms)
    return -poly if negate else poly


def oracle_suite() -> List[SuiteInstance]:
    return [
        SuiteInstance("constant", ChebPolyN(1, {(0,): 1.0}), 1.0, 1.0),
        SuiteInstance("shifted_linear", ChebPolyN(1, {(0,): 2.0, (1,): 1.0}), 1.0, 3.0),
        SuiteInstance("t2", ChebPolyN(1, {(2,): 1.0}), -1.0, 1.0),
        SuiteInstance("t3", ChebPolyN(1, {(3,): 1.0}), -1.0, 1.0),
        # (x - 0.3)^2
        SuiteInstance("square_shift", ChebPolyN(1, {(0,): 0.59, (1,): -0.6, (2,): 0.5}), 0.0, 1.69),
        SuiteInstance("bilinear", ChebPolyN(2, {(1, 1): 1.0}), -1.0, 1.0),
        SuiteInstance("sum_t2", ChebPolyN(2, {(2, 0): 1.0, (0, 2): 1.0}), -2.0, 2.0),
        SuiteInstance("maxcut_triangle", maxcut_polynomial([(0, 1), (1, 2), (0, 2)], 3), -2.0, 0.0),
    ]


def hierarchy_suite() -> List[SuiteInstance]:
    """Five instances with n <= 2 and degree <= 4 for the SDP hierarchy."""
    wanted = ("shifted_linear", "t3", "square_shift", "bilinear", "sum_t2")
    return [inst for inst in oracle_suite() if inst.name in wanted]
