"""Structural sums of squares.

``WeightedSquaresSOS`` stores sum_j w_j p_j^2 as (weight, root) pairs with
w_j > 0, so nonnegativity never depends on a numerical check.
``QuadraticModuleElement`` pairs one such sum with each box constraint
g_i = 1 - x_i^2: base + sum_i g_i * multipliers[i].
"""

from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from polys.chebyshev import ChebPoly1
from polys.formats import poly_from_json, poly_to_json
from polys.multivariate import ChebPolyN, as_multivariate, dense_product, mulN
from utils.errors import DimensionMismatchError, PreconditionError

Root = Union[ChebPoly1, ChebPolyN]


def _accumulate(acc: np.ndarray, block: np.ndarray, scale: float) -> np.ndarray:
    shape = tuple(max(a, b) for a, b in zip(acc.shape, block.shape))
    if shape != acc.shape:
        grown = np.zeros(shape)
        grown[tuple(slice(0, s) for s in acc.shape)] = acc
        acc = grown
    acc[tuple(slice(0, s) for s in block.shape)] += scale * block
    return acc


def box_constraint(n: int, axis: int) -> ChebPolyN:
    """1 - x_axis^2 = (T_0 - T_2(x_axis)) / 2."""
    two = [0] * n
    two[axis] = 2
    return ChebPolyN(n, {(0,) * n: 0.5, tuple(two): -0.5})


class WeightedSquaresSOS:
    def __init__(self, n: int, terms: Iterable[Tuple[float, Root]] = (), degree: Optional[int] = None):
        self.n = n
        clean: List[Tuple[float, ChebPolyN]] = []
        for weight, root in terms:
            weight = float(weight)
            if not np.isfinite(weight) or weight <= 0:
                raise PreconditionError(f"sum-of-squares weight must be positive, got {weight}")
            root = as_multivariate(root, n)
            if root.n != n:
                raise DimensionMismatchError(f"root in {root.n} variables, expected {n}")
            if not root.is_zero():
                clean.append((weight, root))
        self.terms = clean
        self._declared = degree

    @classmethod
    def empty(cls, n: int) -> "WeightedSquaresSOS":
        return cls(n)

    def __len__(self):
        return len(self.terms)

    @property
    def ambient_degree(self) -> int:
        if self._declared is not None:
            return self._declared
        return self.structural_degree

    @property
    def structural_degree(self) -> int:
        """Degree of the expansion; leading forms of weighted squares cannot cancel."""
        return max((2 * root.degree for _, root in self.terms), default=0)

    def __add__(self, other: "WeightedSquaresSOS") -> "WeightedSquaresSOS":
        if other.n != self.n:
            raise DimensionMismatchError(f"cannot add sums of squares in {self.n} and {other.n} variables")
        return WeightedSquaresSOS(self.n, self.terms + other.terms)

    def scaled(self, factor: float) -> "WeightedSquaresSOS":
        if factor <= 0:
            raise PreconditionError(f"scaling factor must be positive, got {factor}")
        return WeightedSquaresSOS(self.n, [(w * factor, root) for w, root in self.terms])

    def expand(self) -> ChebPolyN:
        if not self.terms:
            return ChebPolyN(self.n)
        acc = np.zeros((1,) * self.n)
        for weight, root in self.terms:
            dense = root.to_dense()
            acc = _accumulate(acc, dense_product(dense, dense), weight)
        return ChebPolyN.from_dense(acc)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        total = np.zeros(points.shape[0])
        for weight, root in self.terms:
            total += weight * root.evaluate_many(points) ** 2
        return total

    def __call__(self, x) -> float:
        return float(self.evaluate_many(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def to_json(self) -> Dict[str, Any]:
        return {
            "prefactor_degree": self.ambient_degree,
            "n": self.n,
            "terms": [{"weight": w, "root": poly_to_json(root)} for w, root in self.terms],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any], n: Optional[int] = None) -> "WeightedSquaresSOS":
        roots = [(t["weight"], poly_from_json(t["root"])) for t in data.get("terms", [])]
        if n is None:
            n = data.get("n") or (roots[0][1].n if roots else 1)
        return cls(n, roots, degree=data.get("prefactor_degree"))


class QuadraticModuleElement:
    def __init__(self, n: int, base: WeightedSquaresSOS,
                 multipliers: Sequence[WeightedSquaresSOS], declared_degree: int):
        if len(multipliers) != n:
            raise DimensionMismatchError(f"{len(multipliers)} multipliers for {n} variables")
        for part in [base, *multipliers]:
            if part.n != n:
                raise DimensionMismatchError(f"component in {part.n} variables, expected {n}")
        self.n = n
        self.base = base
        self.multipliers = list(multipliers)
        self.declared_degree = int(declared_degree)

    @classmethod
    def zero(cls, n: int, declared_degree: int = 0) -> "QuadraticModuleElement":
        return cls(n, WeightedSquaresSOS.empty(n), [WeightedSquaresSOS.empty(n) for _ in range(n)],
                   declared_degree)

    def __add__(self, other: "QuadraticModuleElement") -> "QuadraticModuleElement":
        if other.n != self.n:
            raise DimensionMismatchError(f"cannot add certificates in {self.n} and {other.n} variables")
        return QuadraticModuleElement(
            self.n, self.base + other.base,
            [a + b for a, b in zip(self.multipliers, other.multipliers)],
            max(self.declared_degree, other.declared_degree))

    def scaled(self, factor: float) -> "QuadraticModuleElement":
        return QuadraticModuleElement(self.n, self.base.scaled(factor),
                                      [m.scaled(factor) for m in self.multipliers],
                                      self.declared_degree)

    def expand(self) -> ChebPolyN:
        total = self.base.expand()
        for axis, mult in enumerate(self.multipliers):
            if len(mult):
                total = total + mulN(box_constraint(self.n, axis), mult.expand())
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        total = self.base.evaluate_many(points)
        for axis, mult in enumerate(self.multipliers):
            total += (1 - points[:, axis] ** 2) * mult.evaluate_many(points)
        return total

    def component_degrees(self) -> Dict[str, Any]:
        return {
            "base": self.base.structural_degree,
            "multipliers": [m.structural_degree for m in self.multipliers],
        }

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "declared_degree": self.declared_degree,
            "base": self.base.to_json(),
            "multipliers": [m.to_json() for m in self.multipliers],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "QuadraticModuleElement":
        n = int(data["n"])
        return cls(n, WeightedSquaresSOS.from_json(data["base"], n),
                   [WeightedSquaresSOS.from_json(m, n) for m in data["multipliers"]],
                   int(data["declared_degree"]))
