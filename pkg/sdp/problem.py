"""Solver-independent semidefinite programs.

Variables are symmetric PSD blocks X_b and a vector s of bounded scalars.
Constraint rows are sparse: ``(row, block, i, j, coef)`` contributes
coef * X_b[i, j] (both orientations of an off-diagonal entry are listed
explicitly) and ``(row, var, coef)`` contributes coef * s[var].
"""

import itertools
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from polys.multivariate import ChebPolyN, MultiIndex, product_terms
from utils.errors import PreconditionError
from utils.logger import get_logger

logger = get_logger(__name__)

FORMAT_TAG = "pkl-sdp"
FORMAT_VERSION = 1

BlockEntry = Tuple[int, int, int, int, float]
ScalarEntry = Tuple[int, int, float]


@dataclass
class SdpProblem:
    name: str = "sdp"
    block_dims: List[int] = field(default_factory=list)
    scalar_lower: List[Optional[float]] = field(default_factory=list)
    scalar_upper: List[Optional[float]] = field(default_factory=list)
    eq_blocks: List[BlockEntry] = field(default_factory=list)
    eq_scalars: List[ScalarEntry] = field(default_factory=list)
    eq_rhs: List[float] = field(default_factory=list)
    ineq_blocks: List[BlockEntry] = field(default_factory=list)
    ineq_scalars: List[ScalarEntry] = field(default_factory=list)
    ineq_rhs: List[float] = field(default_factory=list)
    obj_blocks: List[Tuple[int, int, int, float]] = field(default_factory=list)
    obj_scalars: List[Tuple[int, float]] = field(default_factory=list)
    sense: str = "min"

    @property
    def n_scalars(self) -> int:
        return len(self.scalar_lower)

    def validate(self):
        if self.sense not in ("min", "max"):
            raise PreconditionError(f"objective sense must be 'min' or 'max', got {self.sense}")
        if len(self.scalar_upper) != self.n_scalars:
            raise PreconditionError("scalar bound lists differ in length")
        for rows, rhs, blocks, scalars, label in (
                (len(self.eq_rhs), self.eq_rhs, self.eq_blocks, self.eq_scalars, "equality"),
                (len(self.ineq_rhs), self.ineq_rhs, self.ineq_blocks, self.ineq_scalars, "inequality")):
            for row, b, i, j, _ in blocks:
                if not 0 <= row < rows:
                    raise PreconditionError(f"{label} row {row} out of range")
                if not 0 <= b < len(self.block_dims):
                    raise PreconditionError(f"{label} references missing block {b}")
                dim = self.block_dims[b]
                if not (0 <= i < dim and 0 <= j < dim):
                    raise PreconditionError(f"{label} entry ({i}, {j}) outside block {b} of side {dim}")
            for row, var, _ in scalars:
                if not 0 <= row < rows:
                    raise PreconditionError(f"{label} row {row} out of range")
                if not 0 <= var < self.n_scalars:
                    raise PreconditionError(f"{label} references missing scalar {var}")
        for b, i, j, _ in self.obj_blocks:
            if not 0 <= b < len(self.block_dims):
                raise PreconditionError(f"objective references missing block {b}")
        for var, _ in self.obj_scalars:
            if not 0 <= var < self.n_scalars:
                raise PreconditionError(f"objective references missing scalar {var}")

    def residuals(self, blocks: Sequence[np.ndarray], scalars: np.ndarray) -> float:
        """Largest violation of equalities, inequalities and scalar bounds."""
        eq = np.array(self.eq_rhs, dtype=float) * -1.0
        for row, b, i, j, coef in self.eq_blocks:
            eq[row] += coef * blocks[b][i, j]
        for row, var, coef in self.eq_scalars:
            eq[row] += coef * scalars[var]
        ineq = np.array(self.ineq_rhs, dtype=float) * -1.0
        for row, b, i, j, coef in self.ineq_blocks:
            ineq[row] += coef * blocks[b][i, j]
        for row, var, coef in self.ineq_scalars:
            ineq[row] += coef * scalars[var]
        worst = max(np.max(np.abs(eq), initial=0.0), np.max(ineq, initial=0.0))
        for var, (lo, hi) in enumerate(zip(self.scalar_lower, self.scalar_upper)):
            if lo is not None:
                worst = max(worst, lo - scalars[var])
            if hi is not None:
                worst = max(worst, scalars[var] - hi)
        return float(max(worst, 0.0))

    def to_json(self) -> Dict[str, Any]:
        return {
            "format": FORMAT_TAG,
            "version": FORMAT_VERSION,
            "name": self.name,
            "blocks": list(self.block_dims),
            "scalars": {"lower": self.scalar_lower, "upper": self.scalar_upper},
            "equalities": {"block_triplets": [list(e) for e in self.eq_blocks],
                           "scalar_triplets": [list(e) for e in self.eq_scalars],
                           "rhs": list(self.eq_rhs)},
            "inequalities": {"block_triplets": [list(e) for e in self.ineq_blocks],
                             "scalar_triplets": [list(e) for e in self.ineq_scalars],
                             "rhs": list(self.ineq_rhs)},
            "objective": {"sense": self.sense,
                          "block_entries": [list(e) for e in self.obj_blocks],
                          "scalar_entries": [list(e) for e in self.obj_scalars]},
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "SdpProblem":
        if data.get("format") != FORMAT_TAG:
            raise PreconditionError(f"not a {FORMAT_TAG} document")
        if data.get("version") != FORMAT_VERSION:
            raise PreconditionError(f"unsupported {FORMAT_TAG} version {data.get('version')}")

        def block(rows):
            return [(int(r), int(b), int(i), int(j), float(c)) for r, b, i, j, c in rows]

        def scalar(rows):
            return [(int(r), int(v), float(c)) for r, v, c in rows]

        problem = cls(
            name=data.get("name", "sdp"),
            block_dims=[int(d) for d in data["blocks"]],
            scalar_lower=data["scalars"]["lower"],
            scalar_upper=data["scalars"]["upper"],
            eq_blocks=block(data["equalities"]["block_triplets"]),
            eq_scalars=scalar(data["equalities"]["scalar_triplets"]),
            eq_rhs=[float(v) for v in data["equalities"]["rhs"]],
            ineq_blocks=block(data["inequalities"]["block_triplets"]),
            ineq_scalars=scalar(data["inequalities"]["scalar_triplets"]),
            ineq_rhs=[float(v) for v in data["inequalities"]["rhs"]],
            obj_blocks=[(int(b), int(i), int(j), float(c)) for b, i, j, c in data["objective"]["block_entries"]],
            obj_scalars=[(int(v), float(c)) for v, c in data["objective"]["scalar_entries"]],
            sense=data["objective"]["sense"],
        )
        problem.validate()
        return problem


def export_problem(problem: SdpProblem, path: Union[str, Path]):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(problem.to_json(), f)
    logger.info(f"Exported SDP '{problem.name}' to {path}")


def import_problem(path: Union[str, Path]) -> SdpProblem:
    with open(path, 'r', encoding='utf-8') as f:
        return SdpProblem.from_json(json.load(f))


class SdpBuilder:
    """Incremental construction of an ``SdpProblem``."""

    def __init__(self, name: str = "sdp"):
        self.problem = SdpProblem(name=name)

    def add_block(self, dim: int) -> int:
        if dim < 1:
            raise PreconditionError(f"PSD block side must be >= 1, got {dim}")
        self.problem.block_dims.append(dim)
        return len(self.problem.block_dims) - 1

    def add_scalar(self, lower: Optional[float] = None, upper: Optional[float] = None) -> int:
        self.problem.scalar_lower.append(lower)
        self.problem.scalar_upper.append(upper)
        return self.problem.n_scalars - 1

    def add_equality(self, block_terms: Iterable[Tuple[int, int, int, float]] = (),
                     scalar_terms: Iterable[Tuple[int, float]] = (), rhs: float = 0.0) -> int:
        row = len(self.problem.eq_rhs)
        self.problem.eq_blocks.extend((row, b, i, j, c) for b, i, j, c in block_terms)
        self.problem.eq_scalars.extend((row, v, c) for v, c in scalar_terms)
        self.problem.eq_rhs.append(float(rhs))
        return row

    def add_inequality(self, block_terms: Iterable[Tuple[int, int, int, float]] = (),
                       scalar_terms: Iterable[Tuple[int, float]] = (), rhs: float = 0.0) -> int:
        """sum of terms <= rhs."""
        row = len(self.problem.ineq_rhs)
        self.problem.ineq_blocks.extend((row, b, i, j, c) for b, i, j, c in block_terms)
        self.problem.ineq_scalars.extend((row, v, c) for v, c in scalar_terms)
        self.problem.ineq_rhs.append(float(rhs))
        return row

    def set_objective(self, scalar_terms: Iterable[Tuple[int, float]] = (),
                      block_terms: Iterable[Tuple[int, int, int, float]] = (), sense: str = "min"):
        self.problem.obj_scalars = list(scalar_terms)
        self.problem.obj_blocks = list(block_terms)
        self.problem.sense = sense

    def build(self) -> SdpProblem:
        self.problem.validate()
        return self.problem


@dataclass
class SolverReport:
    status: str
    objective: Optional[float]
    primal_residual: float
    dual_residual: float
    wall_time: float
    backend: str
    blocks: List[np.ndarray] = field(default_factory=list, repr=False)
    scalars: Optional[np.ndarray] = field(default=None, repr=False)
    message: str = ""

    STATUSES = ("optimal", "infeasible", "inaccurate", "failed")

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "objective": self.objective,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "wall_time": self.wall_time,
            "backend": self.backend,
            "message": self.message,
        }


class LinearizationMap:
    """Gram entries -> Chebyshev coefficients of sum_{i,j} G_ij w phi_i phi_j.

    ``entries[alpha]`` lists (i, j, coef) over ordered pairs.
    """

    def __init__(self, basis: Sequence[MultiIndex], entries: Dict[MultiIndex, List[Tuple[int, int, float]]]):
        self.basis = list(basis)
        self.entries = entries

    @property
    def support(self) -> List[MultiIndex]:
        return sorted(self.entries)

    def apply(self, gram: np.ndarray) -> ChebPolyN:
        n = len(self.basis[0])
        return ChebPolyN(n, {alpha: sum(c * gram[i, j] for i, j, c in rows)
                             for alpha, rows in self.entries.items()})

    def adjoint(self, coeffs: Dict[MultiIndex, float]) -> np.ndarray:
        m = len(self.basis)
        out = np.zeros((m, m))
        for alpha, value in coeffs.items():
            for i, j, c in self.entries.get(tuple(alpha), []):
                out[i, j] += c * value
        return out

    def block_terms(self, alpha: MultiIndex, block: int) -> List[Tuple[int, int, int, float]]:
        return [(block, i, j, c) for i, j, c in self.entries.get(alpha, [])]


def linearize_products(basis: Sequence[MultiIndex], weight: Optional[ChebPolyN] = None) -> LinearizationMap:
    """Product-to-sum expansion of w * phi_i * phi_j for every ordered basis pair."""
    basis = [tuple(b) for b in basis]
    if not basis:
        raise PreconditionError("empty Gram basis")
    n = len(basis[0])
    if any(len(b) != n or min(b) < 0 for b in basis):
        raise PreconditionError("Gram basis entries must be nonnegative multi-indices of equal length")
    weight_terms = list(weight.items()) if weight is not None else [((0,) * n, 1.0)]

    entries: Dict[MultiIndex, Dict[Tuple[int, int], float]] = {}
    for i, j in itertools.combinations_with_replacement(range(len(basis)), 2):
        for gamma, c in product_terms(basis[i], basis[j]):
            for omega, w in weight_terms:
                for alpha, c2 in product_terms(gamma, omega):
                    slot = entries.setdefault(alpha, {})
                    slot[(i, j)] = slot.get((i, j), 0.0) + c * w * c2
                    if i != j:
                        slot[(j, i)] = slot.get((j, i), 0.0) + c * w * c2
    return LinearizationMap(basis, {alpha: [(i, j, c) for (i, j), c in sorted(rows.items()) if c != 0.0]
                                    for alpha, rows in entries.items()})


def prune_gram_basis(lin: LinearizationMap, zero: Iterable[MultiIndex]) -> List[int]:
    """Facial reduction by zero-diagonal propagation.

    A coefficient pinned to 0 whose surviving Gram terms are all diagonal and of
    one sign forces those diagonal entries to 0, and a PSD matrix with a zero
    diagonal entry has a zero row. Repeats until nothing changes and returns
    the indices of the basis elements that survive.
    """
    alive = set(range(len(lin.basis)))
    zero = [tuple(alpha) for alpha in zero]
    changed = True
    while changed:
        changed = False
        for alpha in zero:
            rows = [(i, j, c) for i, j, c in lin.entries.get(alpha, []) if i in alive and j in alive]
            if not rows or any(i != j for i, j, _ in rows):
                continue
            if all(c > 0 for _, _, c in rows) or all(c < 0 for _, _, c in rows):
                alive -= {i for i, _, _ in rows}
                changed = True
    return sorted(alive)


@dataclass
class GramSOS:
    basis: List[MultiIndex]
    gram: np.ndarray
    weight: Optional[ChebPolyN] = None

    def __post_init__(self):
        self.gram = 0.5 * (np.asarray(self.gram, dtype=float) + np.asarray(self.gram, dtype=float).T)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.gram).min())

    def expand(self) -> ChebPolyN:
        """sum_{i,j} G_ij phi_i phi_j, without the weight."""
        return linearize_products(self.basis).apply(self.gram)

    def to_weighted_squares(self):
        """Eigen-decomposition into weighted squares; negative eigenvalues are clipped."""
        from certify.sos import WeightedSquaresSOS

        n = len(self.basis[0])
        vals, vecs = np.linalg.eigh(self.gram)
        terms = []
        for lam, vec in zip(vals, vecs.T):
            if lam <= 0:
                continue
            root = ChebPolyN(n, {alpha: v for alpha, v in zip(self.basis, vec)})
            terms.append((lam, root))
        return WeightedSquaresSOS(n, terms)

    def to_dict(self) -> Dict[str, Any]:
        return {"basis": [list(b) for b in self.basis], "gram": self.gram.tolist()}
