"""Reproducible reports: the v_{r,d} table, its derived series and the SOS-distance probe."""

import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Dict, Iterable, List, Optional, Sequence, Union

from sdp.backends import SolverBackend, get_backend
from sdp.hierarchy import SosDistanceResult, VrdResult, compute_vrd
from utils.config_loader import config_loader
from utils.errors import PklError
from utils.logger import get_logger

logger = get_logger(__name__)

Target = Union[str, Path, IO[str], None]


@dataclass
class VrdCell:
    r: int
    d: int
    v: float
    status: str
    result: Optional[VrdResult] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.status in ("optimal", "published") and not math.isnan(self.v)


def _solve_cell(r: int, d: int, backend: Optional[SolverBackend]) -> VrdCell:
    try:
        result = compute_vrd(r, d, backend)
        return VrdCell(r, d, result.v, result.report.status, result)
    except PklError as e:
        # per-cell failures are recorded, not fatal
        status = e.report.status if getattr(e, "report", None) is not None else "failed"
        logger.error(f"v(r={r}, d={d}) failed: {e}")
        return VrdCell(r, d, float("nan"), status)


def vrd_cells(r_max: int, d_max: int) -> List[tuple]:
    return [(r, d) for r in range(1, r_max + 1) for d in range(1, min(r, d_max) + 1)]


def table_vrd(r_max: int, d_max: int, backend: Optional[SolverBackend] = None,
              workers: Optional[int] = None) -> List[VrdCell]:
    """Solve every cell 1 <= d <= min(r, d_max), r <= r_max; output order is (r, d)."""
    backend = backend or get_backend()
    workers = workers or config_loader.get('solver.workers', 1)
    cells = vrd_cells(r_max, d_max)
    logger.info(f"Computing {len(cells)} v(r, d) cells with {workers} worker(s)")
    if workers <= 1:
        return [_solve_cell(r, d, backend) for r, d in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda rd: _solve_cell(rd[0], rd[1], backend), cells))


# published v(r, d) as printed, first column d = 1
PUBLISHED_VRD: Dict[int, List[float]] = {
    1: [0.9999],
    2: [0.9954, 0.9998],
    3: [0.9641, 0.9958, 0.9998],
    4: [0.8993, 0.9813, 0.9975, 0.9998],
    5: [0.8116, 0.9475, 0.9892, 0.9973, 0.9995],
    6: [0.7272, 0.9062, 0.9733, 0.9914, 0.9974, 0.9997],
    7: [0.6624, 0.8552, 0.9484, 0.9798, 0.9940, 0.9979, 0.9996],
    8: [0.5515, 0.7932, 0.9096, 0.9657, 0.9870, 0.9956, 0.9982, 0.9994],
    9: [0.4899, 0.7383, 0.8796, 0.9455, 0.9760, 0.9887, 0.9955, 0.9982, 0.9995],
    10: [0.4037, 0.6798, 0.8441, 0.9104, 0.9595, 0.9834, 0.9922, 0.9966, 0.9983, 0.9994],
    11: [0.3519, 0.6173, 0.7958, 0.8949, 0.9450, 0.9738, 0.9866, 0.9938, 0.9968, 0.9987],
    12: [0.3097, 0.5676, 0.7502, 0.8614],
}


def published_vrd(r: int, d: int) -> float:
    row = PUBLISHED_VRD.get(r, [])
    return row[d - 1] if 1 <= d <= len(row) else float("nan")


def published_cells(r_max: int, d_max: int) -> List[VrdCell]:
    """The printed values as cells, for the derived series."""
    return [VrdCell(r, d, published_vrd(r, d), "published")
            for r, d in vrd_cells(r_max, d_max) if not math.isnan(published_vrd(r, d))]


def _fmt(value: float, digits: Optional[int] = None) -> str:
    digits = digits or config_loader.get('output.float_digits', 6)
    return "nan" if math.isnan(value) else f"{value:.{digits}g}"


def _open(target: Target):
    if target is None:
        return sys.stdout, False
    if hasattr(target, "write"):
        return target, False
    return open(target, "w", newline="", encoding="utf-8"), True


def _write_rows(header: Sequence[str], rows: Iterable[Sequence], target: Target):
    stream, owned = _open(target)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    finally:
        if owned:
            stream.close()


def write_table_csv(cells: Sequence[VrdCell], target: Target = None):
    _write_rows(("r", "d", "v", "status", "published"),
                ((c.r, c.d, c.v, c.status, published_vrd(c.r, c.d)) for c in cells), target)


def figures_data(cells: Sequence[VrdCell]) -> List[Dict[str, float]]:
    """1/v, v r/d and v (r/d)^2 for every solved cell, grouped by d."""
    rows = []
    for c in sorted((c for c in cells if c.ok), key=lambda c: (c.d, c.r)):
        ratio = c.r / c.d
        rows.append({"d": c.d, "r": c.r, "v": c.v,
                     "inv_v": 1.0 / c.v if c.v > 0 else float("inf"),
                     "v_r_over_d": c.v * ratio, "v_r_over_d_sq": c.v * ratio ** 2})
    return rows


def write_figures_csv(cells: Sequence[VrdCell], target: Target = None):
    keys = ("d", "r", "v", "inv_v", "v_r_over_d", "v_r_over_d_sq")
    _write_rows(keys, ([row[k] for k in keys] for row in figures_data(cells)), target)


def save_vrd_coefficients(cells: Sequence[VrdCell], path: Union[str, Path]):
    payload = [c.result.to_dict() for c in cells if c.result is not None]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
    logger.info(f"Saved {len(payload)} kernel coefficient sets to {path}")


def write_sosdist_csv(results: Sequence[SosDistanceResult], slope: float, target: Target = None):
    rows = [(res.r, res.delta_min, res.delta_min * res.r ** 2, res.report.status) for res in results]
    _write_rows(("r", "delta_min", "delta_min_r2", "status"), rows, target)
    logger.info(f"log-log slope of delta_min against r: {slope:.4f}")
