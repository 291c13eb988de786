"""Kernel images of polynomials and their explicit sum-of-squares decompositions.

With a positive-weight rule (omega_j, c_j) exact to degree deg f + deg K,

    (K f)(x) = sum_j c_j K(x, omega_j) f(omega_j)
             = sum_j [c_j f(omega_j) / (sqrt(2 pi) sigma)] * s((x - omega_j)^2 / (4 sigma^2))^2,

which is a weighted sum of squares as soon as f(omega_j) >= 0 at every node.
The n-variate operator uses the product kernel prod_i K(x_i, y_i).
"""

import math
from typing import Dict, NamedTuple, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C

from certify.sos import WeightedSquaresSOS
from kernels.gauss_weierstrass import cheb_error_bound, gamma_from_radius, tail_bound
from kernels.quadrature import QuadratureRule, gauss_legendre, node_count, tensor_rule
from kernels.sos_exp import KernelSpec, schedule, truncation_error_bound
from polys.chebyshev import ChebPoly1, norm_conversion_factor
from polys.multivariate import ChebPolyN, tensor_polynomial
from utils.errors import CertificateError, HypothesisError
from utils.logger import get_logger

logger = get_logger(__name__)


def kernel_rule(kernel: KernelSpec, poly_degree: int) -> QuadratureRule:
    return gauss_legendre(node_count(poly_degree, kernel.kernel_degree), -kernel.R, kernel.R)


def kernel_roots(kernel: KernelSpec, nodes: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients in x of s((x - omega)^2 / (4 sigma^2)), one row per node.

    Interpolation at M first-kind Chebyshev points is exact for degree M - 1.
    """
    M = 2 * kernel.s.achieved_degree + 1
    pts = C.chebpts1(M)
    vander = C.chebvander(pts, M - 1)
    t = (pts[None, :] - np.asarray(nodes)[:, None]) ** 2 / (4 * kernel.sigma ** 2)
    coeffs = (2.0 / M) * (kernel.s(t) @ vander)
    coeffs[:, 0] *= 0.5
    return coeffs


def _squares(roots: np.ndarray) -> np.ndarray:
    return np.vstack([C.chebmul(row, row) for row in roots])


def apply_kernel(kernel: KernelSpec, f: ChebPoly1) -> ChebPoly1:
    rule = kernel_rule(kernel, f.deg)
    fvals = C.chebval(rule.nodes, f.coeffs)
    squares = _squares(kernel_roots(kernel, rule.nodes))
    weights = rule.weights * fvals * kernel.prefactor
    return ChebPoly1(weights @ squares)


def sos_decompose_image(kernel: KernelSpec, f: ChebPoly1, f_nonneg_check: bool = True) -> WeightedSquaresSOS:
    """Weighted squares whose expansion is ``apply_kernel(kernel, f)``.

    With ``f_nonneg_check=False`` nodes where f is not positive are dropped
    instead of refused; the result then no longer equals the kernel image.
    """
    rule = kernel_rule(kernel, f.deg)
    fvals = C.chebval(rule.nodes, f.coeffs)
    negative = np.flatnonzero(fvals < 0)
    if negative.size and f_nonneg_check:
        j = int(negative[0])
        raise CertificateError(f"f is negative at quadrature node {rule.nodes[j]:.6g} "
                               f"(value {fvals[j]:.3e}); the kernel image is not a certificate",
                               node=float(rule.nodes[j]), value=float(fvals[j]))
    if negative.size:
        logger.warning(f"Dropping {negative.size} quadrature nodes with negative f")

    roots = kernel_roots(kernel, rule.nodes)
    terms = [(rule.weights[j] * fvals[j] * kernel.prefactor, ChebPoly1(roots[j]))
             for j in range(len(rule)) if fvals[j] > 0]
    return WeightedSquaresSOS(1, terms, degree=kernel.kernel_degree)


def apply_product_kernel(kernel: KernelSpec, f: ChebPolyN, n: int = None) -> Tuple[ChebPolyN, WeightedSquaresSOS]:
    """Product-kernel image of f and its weighted-squares decomposition."""
    n = n or f.n
    if n != f.n:
        raise CertificateError(f"polynomial has {f.n} variables, product kernel has {n}")
    rule = kernel_rule(kernel, f.degree)
    tensor = tensor_rule(rule, n)
    values = f.evaluate_grid([rule.nodes] * n)

    if values.min() < 0:
        idx = np.unravel_index(int(np.argmin(values)), values.shape)
        node = tuple(float(rule.nodes[i]) for i in idx)
        raise CertificateError(f"f is negative at tensor node {node} (value {values[idx]:.3e})",
                               node=node, value=float(values[idx]))

    roots = kernel_roots(kernel, rule.nodes)
    scaled_squares = (rule.weights * kernel.prefactor)[:, None] * _squares(roots)

    # contract one axis at a time; summation order is fixed by node index
    image = values
    for _ in range(n):
        image = np.tensordot(image, scaled_squares, axes=([0], [0]))
    image_poly = ChebPolyN.from_dense(image)

    node_weights = tensor.weight_tensor() * kernel.prefactor ** n * values
    root_polys = [ChebPoly1(row) for row in roots]
    terms = []
    for idx in zip(*np.nonzero(node_weights > 0)):
        terms.append((node_weights[idx], tensor_polynomial([root_polys[i] for i in idx])))
    sos = WeightedSquaresSOS(n, terms, degree=n * kernel.kernel_degree)
    logger.debug(f"Product kernel image: n={n}, {tensor.size} nodes, {len(terms)} squares")
    return image_poly, sos


class MultivariateErrorBound(NamedTuple):
    value: float
    simplification_applies: bool
    simplified: float


def multivariate_error_bound(epsilon: float, n: int) -> MultivariateErrorBound:
    """eps * sum_{i<n} (1 + eps)^i, and the e * eps * n form valid for eps <= 1/n."""
    value = epsilon * sum((1 + epsilon) ** i for i in range(n))
    return MultivariateErrorBound(value, epsilon <= 1.0 / n, math.e * epsilon * n)


def approximate_identity_terms(kernel: KernelSpec, k: int, check: bool = False) -> Dict[str, float]:
    """The three bound terms on ||K T_k - T_k||_{1,cheb}, each from its own bound.

    The tail term uses the largest gamma the truncation radius allows at this k.
    """
    sigma, R = kernel.sigma, kernel.R
    try:
        gauss = cheb_error_bound(k, sigma)
    except HypothesisError:
        if check:
            raise
        logger.warning(f"k^2 sigma <= 1 fails for k={k}, sigma={sigma}; evaluating k^4.5 sigma^2 anyway")
        gauss = k ** 4.5 * sigma ** 2
    conversion = norm_conversion_factor(kernel.kernel_degree)
    gamma = gamma_from_radius(k, sigma, R)
    tail = tail_bound(k, sigma, R, gamma, check=check)
    truncation = truncation_error_bound(k, sigma, R, kernel.delta)
    terms = {
        "gauss": gauss,
        "tail": conversion * tail,
        "truncation": conversion * truncation,
        "conversion_factor": conversion,
        "gamma": gamma,
        "total": gauss + conversion * (tail + truncation),
    }
    logger.info(f"k={k}: gauss {gauss:.3e}, tail {terms['tail']:.3e} (gamma {gamma:.3f}), "
                f"truncation {terms['truncation']:.3e}, conversion {conversion:.3e}")
    if gamma < 1:
        logger.warning(f"k={k}: gamma {gamma:.3f} < 1, the tail term {terms['tail']:.3e} carries the bound")
    return terms


def measure_identity_error(kernel: KernelSpec, k: int) -> float:
    tk = ChebPoly1.basis(k)
    return (apply_kernel(kernel, tk) - tk).norm_1cheb()


def identity_bound(d: int, r: int) -> float:
    """(7/2 d^(9/2) + 14) log r / r^2."""
    return (3.5 * d ** 4.5 + 14) * math.log(r) / r ** 2


def identity_bound_at_degree(k: int, r: int, d: int) -> float:
    """The bound before simplification, at the level-r schedule with kernel degree 104 r."""
    p = schedule(r, d)
    conversion = norm_conversion_factor(104 * r)
    tail = 2 * math.sqrt(2) * math.exp(-p.gamma ** 2)
    return k ** 4.5 * p.sigma ** 2 + conversion * (tail + truncation_error_bound(k, p.sigma, p.R, p.delta))
