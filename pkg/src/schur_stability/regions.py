"""
Coefficient-locus membership for n = 2, 3 and the parameter-plane scanner.

A scan walks a rectangular grid, maps every node (x, y) to a monic polynomial
through a named mapping, and records the first certifying stage of the l1
engine next to a ground-truth label from the exact locus or the Jury table.
"""

import io
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pandas as pd
from PIL import Image
from tqdm import tqdm

from .config import get_settings, progress_disabled
from .engine import AlgoConfig, Verdict, run_algorithm
from .errors import InvalidCell, InvalidInput, UnknownMapping
from .jury import JuryVerdict, jury_table
from .poly import MonicPolynomial
from .scalar import Backend, Scalar, as_scalar, format_scalar

logger = logging.getLogger(__name__)

UNCERTIFIED = -1
INVALID = -2


class CellTruth(str, Enum):
    STABLE = "Stable"
    BOUNDARY = "Boundary"
    UNSTABLE = "Unstable"
    INVALID = "Invalid"


TRUTH_CODES = {truth: code for code, truth in enumerate(CellTruth)}
TRUTHS = tuple(CellTruth)


# ---------- exact loci ----------

def c2_membership(a0: Scalar, a1: Scalar) -> bool:
    """x^2 + a1*x + a0 has both roots in the open unit disk."""
    return a0 < 1 and a0 + a1 > -1 and a0 - a1 > -1


def c2_closure(a0: Scalar, a1: Scalar) -> bool:
    return a0 <= 1 and a0 + a1 >= -1 and a0 - a1 >= -1


def c3_membership(a0: Scalar, a1: Scalar, a2: Scalar) -> bool:
    """
    x^3 + a2*x^2 + a1*x + a0 has all roots in the open unit disk.

    -1 < a0 < 1, a0^2 - 1 < a0*a2 - a1 and |a0 + a2| < 1 + a1. The companion
    inequality a0*a2 - a1 < 1 - a0^2 is implied by the first and last ones.
    """
    return -1 < a0 < 1 and a0 * a0 - 1 < a0 * a2 - a1 and abs(a0 + a2) < 1 + a1


def truth_label(p: MonicPolynomial) -> CellTruth:
    """Exact locus for n = 2 and 3, the Jury table otherwise."""
    a = p.coeffs
    if p.degree == 2:
        if c2_membership(a[0], a[1]):
            return CellTruth.STABLE
        return CellTruth.BOUNDARY if c2_closure(a[0], a[1]) else CellTruth.UNSTABLE
    if p.degree == 3 and c3_membership(*a):
        return CellTruth.STABLE
    table = jury_table(p)
    if table.verdict is JuryVerdict.STABLE:
        return CellTruth.STABLE
    if table.on_boundary or table.verdict is JuryVerdict.SINGULAR:
        return CellTruth.BOUNDARY
    return CellTruth.UNSTABLE


# ---------- grid description ----------

@dataclass(frozen=True)
class Axis:
    name: str
    min: Fraction
    max: Fraction
    steps: int

    def __post_init__(self):
        object.__setattr__(self, "min", as_scalar(self.min, Backend.EXACT))
        object.__setattr__(self, "max", as_scalar(self.max, Backend.EXACT))
        if self.steps < 2:
            raise InvalidInput(f"Axis {self.name}: steps must be >= 2, got {self.steps}")
        if not self.min < self.max:
            raise InvalidInput(f"Axis {self.name}: min must be < max")

    @property
    def spacing(self) -> Fraction:
        return (self.max - self.min) / (self.steps - 1)

    def nodes(self, backend: Backend = Backend.EXACT) -> tuple:
        """min + k*(max - min)/(steps - 1), computed in rationals."""
        exact = [self.min + k * self.spacing for k in range(self.steps)]
        if backend is Backend.FLOAT:
            return tuple(float(v) for v in exact)
        return tuple(exact)

    def describe(self) -> dict:
        return {"name": self.name, "min": format_scalar(self.min), "max": format_scalar(self.max), "steps": self.steps}


@dataclass(frozen=True)
class RegionMapping:
    name: str
    build: Callable
    x_axis: Axis
    y_axis: Axis
    params: dict = field(default_factory=dict)
    description: str = ""


def _quadratic_alpha_beta(x, y, params, backend):
    # x^2 - alpha*x + beta
    return MonicPolynomial((y, -x), backend)


def _ricker_ba(x, y, params, backend):
    from .cases import RickerParams, ricker_quadratic

    if y == 0:
        raise InvalidCell("a = 0 leaves t = r/a undefined")
    return ricker_quadratic(RickerParams(r=as_scalar(params["r"], backend), a=y, b=x))


def _coeffs_n2(x, y, params, backend):
    return MonicPolynomial((y, x), backend)


def _coeffs_n3(x, y, params, backend):
    return MonicPolynomial((y, x, as_scalar(params["a2"], backend)), backend)


MAPPINGS = {
    mapping.name: mapping
    for mapping in (
        RegionMapping(
            "quadratic-alpha-beta",
            _quadratic_alpha_beta,
            Axis("alpha", Fraction(-5, 2), Fraction(5, 2), 501),
            Axis("beta", Fraction(-3, 2), Fraction(3, 2), 301),
            description="(alpha, beta) -> x^2 - alpha*x + beta",
        ),
        RegionMapping(
            "ricker-ba",
            _ricker_ba,
            Axis("b", Fraction(0), Fraction(3), 121),
            Axis("a", Fraction(1), Fraction(3), 81),
            params={"r": Fraction(1)},
            description="(b, a; r) -> x^2 - (r + 2 - 3t)x + 1 + (a - 3)t + bt^2, t = r/a",
        ),
        RegionMapping(
            "coeffs-n2",
            _coeffs_n2,
            Axis("a1", Fraction(-5, 2), Fraction(5, 2), 201),
            Axis("a0", Fraction(-3, 2), Fraction(3, 2), 121),
            description="(a1, a0) -> x^2 + a1*x + a0",
        ),
        RegionMapping(
            "coeffs-n3",
            _coeffs_n3,
            Axis("a1", Fraction(-3), Fraction(3), 121),
            Axis("a0", Fraction(-3, 2), Fraction(3, 2), 61),
            params={"a2": Fraction(0)},
            description="(a1, a0; a2) -> x^3 + a2*x^2 + a1*x + a0",
        ),
    )
}


def get_mapping(name: str) -> RegionMapping:
    try:
        return MAPPINGS[name]
    except KeyError:
        raise UnknownMapping(f"Unknown mapping {name!r}; choose one of {', '.join(MAPPINGS)}") from None


@dataclass(frozen=True)
class GridSpec:
    mapping: str
    x_axis: Optional[Axis] = None
    y_axis: Optional[Axis] = None
    backend: Backend = Backend.EXACT
    max_stages: int = 3
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        mapping = get_mapping(self.mapping)
        if self.max_stages < 0:
            raise InvalidInput("max_stages must be >= 0")
        object.__setattr__(self, "x_axis", self.x_axis or mapping.x_axis)
        object.__setattr__(self, "y_axis", self.y_axis or mapping.y_axis)
        merged = dict(mapping.params)
        for key, value in self.params.items():
            if key not in mapping.params:
                raise InvalidInput(f"Mapping {self.mapping!r} takes no parameter {key!r}")
            merged[key] = as_scalar(value, Backend.EXACT)
        object.__setattr__(self, "params", merged)
        object.__setattr__(self, "backend", Backend(self.backend))

    def polynomial(self, x: Scalar, y: Scalar) -> MonicPolynomial:
        return get_mapping(self.mapping).build(x, y, self.params, self.backend)

    def algo_config(self) -> AlgoConfig:
        return AlgoConfig(max_stages=self.max_stages, float_boundary_epsilon=get_settings().float_epsilon)


@dataclass
class RegionGrid:
    spec: GridSpec
    x_nodes: tuple
    y_nodes: tuple
    # row j is y_nodes[j], column i is x_nodes[i]
    stage: np.ndarray
    truth: np.ndarray

    def truth_at(self, j: int, i: int) -> CellTruth:
        return TRUTHS[int(self.truth[j, i])]

    def certified_mask(self) -> np.ndarray:
        return self.stage >= 0

    def truth_mask(self, label: CellTruth) -> np.ndarray:
        return self.truth == TRUTH_CODES[label]

    def stage_counts(self) -> dict:
        values, counts = np.unique(self.stage, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def truth_counts(self) -> dict:
        return {label.value: int(self.truth_mask(label).sum()) for label in CellTruth}

    def soundness_violations(self) -> list:
        """(x, y) of certified cells whose ground truth is not Stable."""
        bad = self.certified_mask() & ~self.truth_mask(CellTruth.STABLE)
        return [(self.x_nodes[i], self.y_nodes[j]) for j, i in zip(*np.nonzero(bad))]


# ---------- scanning ----------

def evaluate_cell(spec: GridSpec, x: Scalar, y: Scalar) -> tuple:
    """(stage, truth) for one node; (-2, Invalid) when the mapping cannot build it."""
    try:
        p = spec.polynomial(x, y)
    except InvalidCell:
        return INVALID, CellTruth.INVALID
    certificate = run_algorithm(p, spec.algo_config())
    stage = certificate.deciding_stage if certificate.verdict is Verdict.CERTIFIED else UNCERTIFIED
    return stage, truth_label(p)


def _scan_row(task: tuple) -> tuple:
    spec, x_nodes, y = task
    stages, truths = [], []
    for x in x_nodes:
        stage, truth = evaluate_cell(spec, x, y)
        stages.append(stage)
        truths.append(TRUTH_CODES[truth])
    return stages, truths


def scan_region(spec: GridSpec, workers: Optional[int] = None, progress: Optional[bool] = False) -> RegionGrid:
    """
    Evaluate every grid node.

    Rows are independent; with workers > 1 they are farmed out to a process
    pool and gathered in index order, so the result does not depend on the
    worker count. progress=None shows a row counter on an interactive stderr.
    """
    workers = workers or get_settings().workers
    x_nodes = spec.x_axis.nodes(spec.backend)
    y_nodes = spec.y_axis.nodes(spec.backend)
    tasks = [(spec, x_nodes, y) for y in y_nodes]
    logger.info(
        f"Scanning {spec.mapping} on {len(x_nodes)}x{len(y_nodes)} nodes "
        f"({spec.backend.value}, max_stages={spec.max_stages}, workers={workers})"
    )

    bar = dict(total=len(tasks), desc=f"scan {spec.mapping}", unit="row", disable=progress_disabled(progress))
    if workers > 1:
        with Pool(workers) as pool:
            rows = list(tqdm(pool.imap(_scan_row, tasks), **bar))
    else:
        rows = [_scan_row(task) for task in tqdm(tasks, **bar)]

    stage = np.array([r[0] for r in rows], dtype=np.int16).reshape(len(y_nodes), len(x_nodes))
    truth = np.array([r[1] for r in rows], dtype=np.uint8).reshape(len(y_nodes), len(x_nodes))
    grid = RegionGrid(spec=spec, x_nodes=x_nodes, y_nodes=y_nodes, stage=stage, truth=truth)

    violations = grid.soundness_violations()
    if violations and spec.backend is Backend.EXACT:
        logger.error(f"{len(violations)} certified cells are not Stable, first at {violations[0]}")
    logger.info(f"Scan done: {int(grid.certified_mask().sum())} of {stage.size} cells certified")
    return grid


# ---------- emitters ----------

def region_frame(grid: RegionGrid) -> pd.DataFrame:
    """Long format, one row per cell, y-major."""
    records = []
    for j, y in enumerate(grid.y_nodes):
        for i, x in enumerate(grid.x_nodes):
            records.append((format_scalar(x), format_scalar(y), int(grid.stage[j, i]), grid.truth_at(j, i).value))
    return pd.DataFrame(records, columns=["x", "y", "stage", "truth"])


def region_csv(grid: RegionGrid) -> str:
    return region_frame(grid).to_csv(index=False, lineterminator="\n")


def region_summary(grid: RegionGrid) -> dict:
    spec = grid.spec
    certified = grid.certified_mask()
    stable = grid.truth_mask(CellTruth.STABLE)
    stable_count = int(stable.sum())
    return {
        "mapping": spec.mapping,
        "backend": spec.backend.value,
        "max_stages": spec.max_stages,
        "params": {k: format_scalar(v) for k, v in spec.params.items()},
        "x_axis": spec.x_axis.describe(),
        "y_axis": spec.y_axis.describe(),
        "cells": int(grid.stage.size),
        "stage_counts": {str(k): v for k, v in sorted(grid.stage_counts().items())},
        "truth_counts": grid.truth_counts(),
        "certified": int(certified.sum()),
        "soundness_violations": len(grid.soundness_violations()),
        "stable_coverage": (int((certified & stable).sum()) / stable_count) if stable_count else 0.0,
    }


def stage_bytes(grid: RegionGrid) -> np.ndarray:
    """Palette: 0 = not certified, 1 + stage for certified cells (capped at 254), 255 = invalid."""
    out = np.where(grid.stage >= 0, np.minimum(grid.stage.astype(np.int32) + 1, 254), 0)
    out = np.where(grid.stage == INVALID, 255, out)
    return out.astype(np.uint8)


def _truth_edges(grid: RegionGrid) -> np.ndarray:
    stable = grid.truth_mask(CellTruth.STABLE)
    edge = grid.truth_mask(CellTruth.BOUNDARY).copy()
    edge[1:, :] |= stable[1:, :] != stable[:-1, :]
    edge[:, 1:] |= stable[:, 1:] != stable[:, :-1]
    return edge


def _encode(array: np.ndarray) -> bytes:
    # uint8 HxW encodes as P5 (PGM), HxWx3 as P6 (PPM); image rows run top
    # to bottom while y increases upward
    image = Image.fromarray(np.ascontiguousarray(array[::-1]))
    buffer = io.BytesIO()
    image.save(buffer, format="PPM")
    return buffer.getvalue()


def region_pgm(grid: RegionGrid) -> bytes:
    return _encode(stage_bytes(grid))


def region_ppm(grid: RegionGrid) -> bytes:
    """R = stage palette, G = 255 on exactly stable cells, B = 255 on the truth boundary."""
    red = stage_bytes(grid)
    green = np.where(grid.truth_mask(CellTruth.STABLE), 255, 0).astype(np.uint8)
    blue = np.where(_truth_edges(grid), 255, 0).astype(np.uint8)
    return _encode(np.stack([red, green, blue], axis=-1))


def region_summary_json(grid: RegionGrid) -> str:
    """The summary validated through its wire model."""
    from .schemas import RegionSummaryOut

    return RegionSummaryOut.from_grid(grid).model_dump_json(indent=2)


EMITTERS = {
    "csv": lambda grid: region_csv(grid).encode(),
    "json": lambda grid: (region_summary_json(grid) + "\n").encode(),
    "pgm": region_pgm,
    "ppm": region_ppm,
}


def write_region(grid: RegionGrid, path: Path, fmt: Optional[str] = None) -> Path:
    """Write one emitter's output; the format defaults to the file suffix."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if fmt not in EMITTERS:
        raise InvalidInput(f"Unknown region format {fmt!r}; choose one of {', '.join(EMITTERS)}")
    path.write_bytes(EMITTERS[fmt](grid))
    logger.info(f"Wrote {fmt} region output to {path}")
    return path
