"""Sparse multivariate polynomials in the tensor Chebyshev basis.

A polynomial is a map multi-index -> coefficient with
T_alpha(x) = prod_i T_{alpha_i}(x_i). Only nonzero coefficients are stored.
"""

import itertools
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.signal import convolve

from polys.chebyshev import ChebPoly1
from utils.errors import DimensionMismatchError, PreconditionError

MultiIndex = Tuple[int, ...]

# Below this many term pairs the product-to-sum expansion is used directly.
SPARSE_PRODUCT_LIMIT = 4096


def _pair_expansion(a: int, b: int) -> List[Tuple[int, float]]:
    """T_a T_b as [(index, coefficient)]."""
    if a == 0 or b == 0:
        return [(a + b, 1.0)]
    if a == b:
        return [(2 * a, 0.5), (0, 0.5)]
    return [(a + b, 0.5), (abs(a - b), 0.5)]


def product_terms(alpha: MultiIndex, beta: MultiIndex) -> List[Tuple[MultiIndex, float]]:
    """Expansion of T_alpha * T_beta in the tensor basis."""
    per_axis = [_pair_expansion(a, b) for a, b in zip(alpha, beta)]
    out = []
    for combo in itertools.product(*per_axis):
        idx = tuple(c[0] for c in combo)
        coef = 1.0
        for c in combo:
            coef *= c[1]
        out.append((idx, coef))
    return out


class ChebPolyN:
    """Immutable sparse polynomial in n variables."""

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Mapping[MultiIndex, float] = None):
        if n < 1:
            raise PreconditionError(f"number of variables must be >= 1, got {n}")
        clean: Dict[MultiIndex, float] = {}
        for alpha, coef in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n:
                raise DimensionMismatchError(f"multi-index {alpha} has length {len(alpha)}, expected {n}")
            if any(a < 0 for a in alpha):
                raise PreconditionError(f"multi-index {alpha} has a negative entry")
            coef = float(coef)
            if not np.isfinite(coef):
                raise PreconditionError(f"coefficient of {alpha} is not finite")
            if coef != 0.0:
                clean[alpha] = clean.get(alpha, 0.0) + coef
        self._n = n
        self._terms = {a: c for a, c in sorted(clean.items()) if c != 0.0}

    @classmethod
    def constant(cls, n: int, value: float) -> "ChebPolyN":
        return cls(n, {(0,) * n: value})

    @classmethod
    def basis(cls, alpha: Sequence[int]) -> "ChebPolyN":
        return cls(len(alpha), {tuple(alpha): 1.0})

    @classmethod
    def from_univariate(cls, p: ChebPoly1, n: int = 1, axis: int = 0) -> "ChebPolyN":
        if not 0 <= axis < n:
            raise PreconditionError(f"axis {axis} outside 0..{n - 1}")
        terms = {}
        for k, c in enumerate(p.coeffs):
            alpha = [0] * n
            alpha[axis] = k
            terms[tuple(alpha)] = c
        return cls(n, terms)

    @classmethod
    def from_dense(cls, array: np.ndarray) -> "ChebPolyN":
        array = np.asarray(array, dtype=float)
        nz = np.nonzero(array)
        terms = {tuple(int(i) for i in idx): array[idx] for idx in zip(*nz)}
        return cls(array.ndim, terms)

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Dict[MultiIndex, float]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def coefficient(self, alpha: Sequence[int]) -> float:
        return self._terms.get(tuple(alpha), 0.0)

    @property
    def degree(self) -> int:
        """Total degree; 0 for constants and the zero polynomial."""
        return max((sum(a) for a in self._terms), default=0)

    def axis_degrees(self) -> Tuple[int, ...]:
        return tuple(max((a[i] for a in self._terms), default=0) for i in range(self._n))

    def is_zero(self) -> bool:
        return not self._terms

    def to_dense(self, shape: Sequence[int] = None) -> np.ndarray:
        if shape is None:
            shape = tuple(d + 1 for d in self.axis_degrees())
        out = np.zeros(shape)
        for alpha, coef in self._terms.items():
            out[alpha] = coef
        return out

    def to_univariate(self) -> ChebPoly1:
        if self._n != 1:
            raise DimensionMismatchError(f"cannot view a {self._n}-variate polynomial as univariate")
        return ChebPoly1(self.to_dense())

    def norm_1cheb(self) -> float:
        return float(sum(abs(c) for c in self._terms.values()))

    def __call__(self, x):
        return evalN(self, x)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at each row of an (m, n) array."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self._n:
            raise DimensionMismatchError(f"points have {points.shape[1]} coordinates, expected {self._n}")
        if not self._terms:
            return np.zeros(points.shape[0])
        degs = self.axis_degrees()
        tables = [C.chebvander(points[:, i], degs[i]) for i in range(self._n)]
        total = np.zeros(points.shape[0])
        for alpha, coef in self._terms.items():
            col = np.full(points.shape[0], coef)
            for i, a in enumerate(alpha):
                if a:
                    col = col * tables[i][:, a]
            total += col
        return total

    def evaluate_grid(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Values on the tensor grid axes[0] x ... x axes[n-1]."""
        if len(axes) != self._n:
            raise DimensionMismatchError(f"{len(axes)} grid axes for {self._n} variables")
        dense = self.to_dense()
        values = dense
        # contract one axis at a time; the contracted axis moves to the end
        for i, pts in enumerate(axes):
            vander = C.chebvander(np.asarray(pts, dtype=float), dense.shape[i] - 1)
            values = np.tensordot(values, vander, axes=([0], [1]))
        return values

    def partial_derivative(self, axis: int) -> "ChebPolyN":
        if not 0 <= axis < self._n:
            raise PreconditionError(f"axis {axis} outside 0..{self._n - 1}")
        if self.is_zero() or self.axis_degrees()[axis] == 0:
            return ChebPolyN(self._n)
        return ChebPolyN.from_dense(C.chebder(self.to_dense(), m=1, axis=axis))

    def __add__(self, other):
        if isinstance(other, ChebPolyN):
            _check_same_n(self, other)
            merged = dict(self._terms)
            for alpha, coef in other._terms.items():
                merged[alpha] = merged.get(alpha, 0.0) + coef
            return ChebPolyN(self._n, merged)
        if np.isscalar(other):
            return self + ChebPolyN.constant(self._n, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return ChebPolyN(self._n, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, ChebPolyN) or np.isscalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ChebPolyN):
            return mulN(self, other)
        if np.isscalar(other):
            return ChebPolyN(self._n, {a: c * float(other) for a, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ChebPolyN) and self._n == other._n and self._terms == other._terms

    def __hash__(self):
        return hash((self._n, tuple(self._terms.items())))

    def __repr__(self):
        return f"ChebPolyN(n={self._n}, degree={self.degree}, terms={len(self._terms)})"


def _check_same_n(p: ChebPolyN, q: ChebPolyN):
    if p.n != q.n:
        raise DimensionMismatchError(f"dimension mismatch: {p.n} vs {q.n}")


def evalN(p: ChebPolyN, x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float).ravel()
    if x.size != p.n:
        raise DimensionMismatchError(f"point has {x.size} coordinates, expected {p.n}")
    return float(p.evaluate_many(x[None, :])[0])


def _to_zseries(dense: np.ndarray) -> np.ndarray:
    """Symmetric Laurent coefficients of a dense Chebyshev array, axis by axis."""
    z = dense
    for axis in range(dense.ndim):
        z = np.moveaxis(z, axis, 0)
        half = z.copy()
        half[1:] *= 0.5
        z = np.concatenate([half[:0:-1], half], axis=0)
        z = np.moveaxis(z, 0, axis)
    return z


def _from_zseries(z: np.ndarray) -> np.ndarray:
    c = z
    for axis in range(z.ndim):
        c = np.moveaxis(c, axis, 0)
        center = (c.shape[0] - 1) // 2
        out = c[center:].copy()
        out[1:] *= 2.0
        c = np.moveaxis(out, 0, axis)
    return c


def dense_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Chebyshev product of two dense coefficient arrays of equal ndim."""
    return _from_zseries(convolve(_to_zseries(a), _to_zseries(b)))


def mulN(p: ChebPolyN, q: ChebPolyN) -> ChebPolyN:
    _check_same_n(p, q)
    if p.is_zero() or q.is_zero():
        return ChebPolyN(p.n)
    if len(p) * len(q) <= SPARSE_PRODUCT_LIMIT:
        acc: Dict[MultiIndex, float] = {}
        for alpha, a in p.items():
            for beta, b in q.items():
                for gamma, coef in product_terms(alpha, beta):
                    acc[gamma] = acc.get(gamma, 0.0) + a * b * coef
        return ChebPolyN(p.n, acc)
    return ChebPolyN.from_dense(dense_product(p.to_dense(), q.to_dense()))


def multivariate_norm_conversion_factor(n: int, d: int) -> float:
    """(2^d C(n+d, d))^(1/2): bound on ||p||_{1,cheb} / ||p||_inf for deg p <= d."""
    from math import comb, sqrt
    return sqrt(2 ** d * comb(n + d, d))


def tensor_polynomial(factors: Sequence[ChebPoly1]) -> ChebPolyN:
    """prod_i factors[i](x_i)."""
    dense = np.asarray(factors[0].coeffs, dtype=float)
    for f in factors[1:]:
        dense = np.multiply.outer(dense, f.coeffs)
    return ChebPolyN.from_dense(dense)


def as_multivariate(p, n: int = 1) -> ChebPolyN:
    if isinstance(p, ChebPolyN):
        return p
    if isinstance(p, ChebPoly1):
        return ChebPolyN.from_univariate(p, n)
    raise PreconditionError(f"not a polynomial: {type(p).__name__}")


def sum_polys(polys: Iterable[ChebPolyN], n: int) -> ChebPolyN:
    acc: Dict[MultiIndex, float] = {}
    for p in polys:
        for alpha, coef in p.items():
            acc[alpha] = acc.get(alpha, 0.0) + coef
    return ChebPolyN(n, acc)
