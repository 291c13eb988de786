"""Gram-matrix sums of squares in the Chebyshev basis.

- ``lasserre_bound``: f_(r) = max t with f - t = sigma_0 + sum_i (1 - x_i^2) sigma_i.
- ``compute_vrd``: best uniform eigenvalue gap of an SOS kernel
  1 + 2 sum_{k<=d} lambda_k T_k(x)T_k(y) + 2 sum_{d<i,j<=r} alpha_ij T_i(x)T_j(y).
- ``min_sos_cheb_distance``: min ||(1 - x^2) - q||_{1,cheb} over SOS q of degree r.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C

from certify.sos import box_constraint
from polys.chebyshev import ChebPoly1
from polys.multivariate import ChebPolyN, MultiIndex, as_multivariate
from sdp.backends import SolverBackend, get_backend
from sdp.problem import GramSOS, SdpBuilder, SolverReport, linearize_products, prune_gram_basis
from utils.config_loader import config_loader
from utils.errors import PreconditionError, SolverError
from utils.logger import get_logger

logger = get_logger(__name__)


def multi_indices(n: int, max_degree: int) -> List[MultiIndex]:
    """All alpha in N^n with |alpha| <= max_degree, graded then lexicographic."""
    out = [a for a in itertools.product(range(max_degree + 1), repeat=n) if sum(a) <= max_degree]
    return sorted(out, key=lambda a: (sum(a), a))


def _require_solution(report: SolverReport, what: str, strict: bool = False):
    if report.status == "inaccurate" and not strict:
        logger.warning(f"{what}: solver finished inaccurately ({report.message})")
        return
    if report.status != "optimal":
        raise SolverError(f"{what}: solver status {report.status} ({report.message})", report)


@dataclass
class LasserreResult:
    r: int
    value: float
    report: SolverReport
    sigma0: GramSOS
    multipliers: List[GramSOS]

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "value": self.value,
            "solver": self.report.to_dict(),
            "sigma0_min_eig": self.sigma0.min_eigenvalue(),
            "multiplier_min_eig": [g.min_eigenvalue() for g in self.multipliers],
        }


def lasserre_bound(f, r: int, backend: Optional[SolverBackend] = None) -> LasserreResult:
    f = as_multivariate(f)
    cfg = config_loader.get_section('hierarchy')
    n = f.n
    if n > cfg.get('max_n', 3):
        raise PreconditionError(f"lasserre_bound supports n <= {cfg.get('max_n', 3)}, got {n}")
    if r > cfg.get('max_r', 16):
        raise PreconditionError(f"lasserre_bound supports r <= {cfg.get('max_r', 16)}, got {r}")
    if r < f.degree:
        raise PreconditionError(f"level r={r} is below deg f = {f.degree}")

    builder = SdpBuilder(name=f"lasserre n={n} r={r}")
    basis0 = multi_indices(n, r // 2)
    maps = [(builder.add_block(len(basis0)), basis0, linearize_products(basis0))]
    if r >= 2:
        basis_g = multi_indices(n, (r - 2) // 2)
        for axis in range(n):
            maps.append((builder.add_block(len(basis_g)), basis_g,
                         linearize_products(basis_g, weight=box_constraint(n, axis))))
    t = builder.add_scalar()

    support = set(f.terms)
    for _, _, lin in maps:
        support.update(lin.support)
    zero = (0,) * n
    for alpha in sorted(support):
        block_terms = [term for block, _, lin in maps for term in lin.block_terms(alpha, block)]
        scalar_terms = [(t, 1.0)] if alpha == zero else []
        builder.add_equality(block_terms, scalar_terms, rhs=f.coefficient(alpha))
    builder.set_objective([(t, 1.0)], sense="max")

    report = (backend or get_backend()).solve(builder.build())
    _require_solution(report, f"lasserre_bound(r={r})")
    grams = [GramSOS(basis, report.blocks[block]) for block, basis, _ in maps]
    for gram, axis in zip(grams[1:], range(n)):
        gram.weight = box_constraint(n, axis)
    return LasserreResult(r=r, value=float(report.scalars[t]), report=report,
                          sigma0=grams[0], multipliers=grams[1:])


@dataclass
class VrdResult:
    r: int
    d: int
    v: float
    lambdas: List[float]
    alpha: Dict[Tuple[int, int], float]
    report: SolverReport
    gram: Optional[GramSOS] = field(default=None, repr=False)

    def kernel_polynomial(self) -> ChebPolyN:
        """The kernel in the prescribed form, built from lambda and alpha."""
        terms = {(0, 0): 1.0}
        for k, lam in enumerate(self.lambdas, start=1):
            terms[(k, k)] = 2 * lam
        for (i, j), a in self.alpha.items():
            terms[(i, j)] = terms.get((i, j), 0.0) + 2 * a
            if i != j:
                terms[(j, i)] = terms.get((j, i), 0.0) + 2 * a
        return ChebPolyN(2, terms)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "v": self.v,
            "lambda": self.lambdas,
            "alpha": [[i, j, a] for (i, j), a in sorted(self.alpha.items())],
            "status": self.report.status,
            "gram_size": len(self.gram.basis) if self.gram is not None else None,
        }


def _vrd_pinned(a: int, b: int, d: int) -> bool:
    """Kernel coefficient (a, b) held at 0 by the prescribed form."""
    return (a, b) != (0, 0) and not (a == b and a <= d) and not (a > d and b > d)


def vrd_gram_basis(r: int, d: int, facial_reduction: bool = True) -> List[MultiIndex]:
    """Gram basis for the v(r, d) kernel.

    Every kernel coefficient has per-variable degree <= r, so squares use
    {T_i(x)T_j(y) : 0 <= i, j <= r // 2}. With ``facial_reduction`` the basis is
    pruned by zero-diagonal propagation on the coefficients pinned to 0.
    """
    half = r // 2
    basis = [(i, j) for i in range(half + 1) for j in range(half + 1)]
    if not facial_reduction:
        return basis
    pinned = [(a, b) for a in range(r + 1) for b in range(r + 1) if _vrd_pinned(a, b, d)]
    keep = prune_gram_basis(linearize_products(basis), pinned)
    logger.debug(f"v(r={r}, d={d}): Gram basis {len(basis)} -> {len(keep)} after facial reduction")
    return [basis[i] for i in keep]


def compute_vrd(r: int, d: int, backend: Optional[SolverBackend] = None,
                facial_reduction: Optional[bool] = None) -> VrdResult:
    """Minimise max_l |lambda_l - 1| over kernels of the prescribed form that are
    sums of squares, with alpha_ij free for d+1 <= i <= j <= r.

    Without facial reduction the program has no strictly feasible point and
    solvers drift. Anything short of an optimal status raises SolverError.
    """
    max_r = config_loader.get('hierarchy.vrd_max_r', 12)
    if not 1 <= d <= r:
        raise PreconditionError(f"compute_vrd needs 1 <= d <= r, got r={r}, d={d}")
    if r > max_r:
        raise PreconditionError(f"compute_vrd supports r <= {max_r}, got {r}")
    if facial_reduction is None:
        facial_reduction = bool(config_loader.get('hierarchy.vrd_facial_reduction', True))

    basis = vrd_gram_basis(r, d, facial_reduction)
    lin = linearize_products(basis)

    builder = SdpBuilder(name=f"vrd r={r} d={d}")
    block = builder.add_block(len(basis))
    v = builder.add_scalar(lower=0.0)
    lam = {k: builder.add_scalar(0.0, 1.0) for k in range(1, d + 1)}
    free = range(d + 1, r + 1)
    alpha = {(i, j): builder.add_scalar(0.0, 1.0) for i in free for j in free if i <= j}

    # the basis reaches per-variable degree <= r, so nothing above r appears
    for a in range(r + 1):
        for b in range(r + 1):
            block_terms = lin.block_terms((a, b), block)
            rhs = 1.0 if (a, b) == (0, 0) else 0.0
            scalar_terms = []
            if a == b and a in lam:
                scalar_terms = [(lam[a], -2.0)]
            elif a > d and b > d:
                scalar_terms = [(alpha[(min(a, b), max(a, b))], -2.0)]
            if block_terms or scalar_terms or rhs:
                builder.add_equality(block_terms, scalar_terms, rhs)

    for k, idx in lam.items():
        builder.add_inequality(scalar_terms=[(idx, -1.0), (v, -1.0)], rhs=-1.0)
        builder.add_inequality(scalar_terms=[(idx, 1.0), (v, -1.0)], rhs=1.0)
    builder.set_objective([(v, 1.0)], sense="min")

    report = (backend or get_backend()).solve(builder.build())
    _require_solution(report, f"compute_vrd(r={r}, d={d})", strict=True)
    s = report.scalars
    lambdas = [float(s[lam[k]]) for k in range(1, d + 1)]
    return VrdResult(r=r, d=d, v=max(abs(x - 1) for x in lambdas), lambdas=lambdas,
                     alpha={key: float(s[idx]) for key, idx in alpha.items()},
                     report=report, gram=GramSOS(basis, report.blocks[block]))


def vrd_eigen_check(result: VrdResult, samples: int = 64, nodes: int = None) -> float:
    """max_k max_x |(K T_k)(x) - lambda_k T_k(x)| for the solver's kernel,
    integrating against the Chebyshev measure with Gauss-Chebyshev nodes."""
    kernel = result.gram.expand() if result.gram is not None else result.kernel_polynomial()
    nodes = nodes or 4 * result.r + 8
    y = np.cos((2 * np.arange(1, nodes + 1) - 1) * math.pi / (2 * nodes))
    x = np.linspace(-1.0, 1.0, samples)
    table = kernel.evaluate_grid([x, y])
    worst = 0.0
    for k, lam in enumerate(result.lambdas, start=1):
        image = table @ C.chebval(y, _unit(k)) / nodes
        worst = max(worst, float(np.max(np.abs(image - lam * C.chebval(x, _unit(k))))))
    return worst


def _unit(k: int) -> np.ndarray:
    c = np.zeros(k + 1)
    c[k] = 1.0
    return c


def apply_vrd_operator(result: VrdResult, f: ChebPoly1) -> ChebPoly1:
    """Operator of the optimal kernel on f of degree <= d: T_k -> lambda_k T_k."""
    if f.deg > result.d:
        raise PreconditionError(f"deg f = {f.deg} exceeds d = {result.d}")
    coeffs = np.array(f.coeffs, dtype=float)
    for k in range(1, len(coeffs)):
        coeffs[k] *= result.lambdas[k - 1]
    return ChebPoly1(coeffs)


@dataclass
class SosDistanceResult:
    r: int
    delta_min: float
    gram: GramSOS
    report: SolverReport

    def to_dict(self) -> dict:
        return {"r": self.r, "delta_min": self.delta_min, "status": self.report.status}


def min_sos_cheb_distance(r: int, backend: Optional[SolverBackend] = None) -> SosDistanceResult:
    if r < 2:
        raise PreconditionError(f"min_sos_cheb_distance needs r >= 2, got {r}")
    if r % 2:
        logger.warning(f"odd r={r}: the sum of squares has degree {2 * (r // 2)}")
    target = {0: 0.5, 2: -0.5}
    basis = [(k,) for k in range(r // 2 + 1)]
    lin = linearize_products(basis)

    builder = SdpBuilder(name=f"sosdist r={r}")
    block = builder.add_block(len(basis))
    top = max(2, 2 * (r // 2))
    slack = {}
    for k in range(top + 1):
        e = builder.add_scalar(lower=0.0)
        slack[k] = e
        terms = lin.block_terms((k,), block)
        # |q_k - p_k| <= e_k
        builder.add_inequality(terms, [(e, -1.0)], rhs=target.get(k, 0.0))
        builder.add_inequality([(b, i, j, -c) for b, i, j, c in terms], [(e, -1.0)],
                               rhs=-target.get(k, 0.0))
    builder.set_objective([(e, 1.0) for e in slack.values()], sense="min")

    report = (backend or get_backend()).solve(builder.build())
    _require_solution(report, f"min_sos_cheb_distance(r={r})")
    gram = GramSOS(basis, report.blocks[block])
    q = gram.expand()
    p = ChebPolyN(1, {(k,): c for k, c in target.items()})
    return SosDistanceResult(r=r, delta_min=(p - q).norm_1cheb(), gram=gram, report=report)


def sos_distance_scaling(r_values: Sequence[int], backend: Optional[SolverBackend] = None):
    """(results, least-squares slope of log delta_min against log r)."""
    results = [min_sos_cheb_distance(r, backend) for r in r_values]
    slope = float(np.polyfit(np.log([res.r for res in results]),
                             np.log([res.delta_min for res in results]), 1)[0])
    return results, slope
