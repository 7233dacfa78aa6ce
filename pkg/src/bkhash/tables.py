"""Recomputation of the comparison tables and their rendering.

Bound values are rounded upward when printed, so a rounded figure is still a
valid upper bound.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import ROUND_CEILING, Decimal

from . import __version__
from .classic import dvj_bound, km_bound
from .cluster import cluster_rate_bound, psi_max_bound
from .optimize import SearchConfig
from .reference import CLUSTER_SETTINGS, REFERENCE_ONLY, TABLE_I, TABLE_II
from .simplex import ParameterError

TABLE_DIGITS = 5
# slack covers binary noise on values sitting on a rounding edge
TOLERANCE = {"km": 1e-5, "dvj": 1e-5, "cluster": 1e-5, "psimax": 5e-4}
EDGE_SLACK = 1e-9

COLUMNS = {
    1: ("psimax", "dvj", "arikan", "gr", "km"),
    2: ("cluster", "psimax", "dvj", "arikan", "gr"),
}
HEADERS = {
    "psimax": "psi-max",
    "dvj": "DVJ",
    "arikan": "Arikan",
    "gr": "Guruswami-Riazanov",
    "km": "Korner-Marton",
    "cluster": "cluster",
}


def round_up(x: float, digits: int) -> str:
    """Decimal string of ``x`` rounded toward +infinity at ``digits`` places."""
    if not 1 <= digits <= 15:
        raise ParameterError(f"precision must lie in [1, 15], got {digits}")
    return str(Decimal(x).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_CEILING))


def round_up_value(x: float, digits: int) -> float:
    return float(round_up(x, digits))


@dataclass
class Cell:
    column: str
    value: float | None
    reference: float | None
    j: int | None = None
    reference_j: int | None = None
    reference_only: bool = False
    flagged: bool = False

    def check(self) -> None:
        if self.reference_only or self.value is None or self.reference is None:
            return
        diff = abs(round_up_value(self.value, TABLE_DIGITS) - self.reference)
        self.flagged = diff > TOLERANCE[self.column] + EDGE_SLACK or (
            self.reference_j is not None and self.j != self.reference_j
        )


@dataclass
class Row:
    b: int
    k: int
    cells: dict[str, Cell] = field(default_factory=dict)


@dataclass
class TableResult:
    which: int
    rows: list[Row]
    config: SearchConfig

    @property
    def mismatches(self) -> list[tuple[int, int, str]]:
        return [(r.b, r.k, c.column) for r in self.rows for c in r.cells.values() if c.flagged]


def _compute_cell(args) -> Cell:
    which, b, k, col, cfg = args
    ref = (TABLE_I if which == 1 else TABLE_II)[(b, k)][col]
    if col in REFERENCE_ONLY:
        return Cell(col, None, ref, reference_only=True)
    ref_j = None
    if col == "km":
        ref, ref_j = ref
        rep = km_bound(b, k)
    elif col == "dvj":
        rep = dvj_bound(b, k)
    elif col == "psimax":
        rep = psi_max_bound(b, k, cfg=cfg)
    else:
        kind, eps, j = CLUSTER_SETTINGS[(b, k)]
        rep = cluster_rate_bound(b, k, kind, eps, cfg, j)
    cell = Cell(col, rep.value, ref, rep.params.j if col == "km" else None, ref_j)
    cell.check()
    return cell


def compute_table(which: int, cfg: SearchConfig | None = None, workers: int = 1) -> TableResult:
    """Recompute every computable column; reference-only columns are copied.

    ``workers > 1`` evaluates cells in a process pool; rows keep their fixed
    order either way.
    """
    if which not in COLUMNS:
        raise ParameterError(f"table must be 1 or 2, got {which}")
    cfg = cfg or SearchConfig()
    data = TABLE_I if which == 1 else TABLE_II
    jobs = [(which, b, k, col, cfg) for (b, k) in data for col in COLUMNS[which]]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            cells = list(pool.map(_compute_cell, jobs))
    else:
        cells = [_compute_cell(job) for job in jobs]
    rows = {key: Row(*key) for key in data}
    for (_, b, k, col, _), cell in zip(jobs, cells):
        rows[(b, k)].cells[col] = cell
    return TableResult(which, list(rows.values()), cfg)


def manifest(cfg: SearchConfig, **extra) -> dict:
    return {
        "package": "bkhash",
        "version": __version__,
        "search_config": asdict(cfg),
        "cluster_settings": {
            f"{b},{k}": {"kind": kind.value, "epsilon": eps, "j": j}
            for (b, k), (kind, eps, j) in CLUSTER_SETTINGS.items()
        },
        **extra,
    }


def _shown(cell: Cell, digits: int) -> str:
    if cell.reference_only:
        return f"{cell.reference:.5f}"
    text = round_up(cell.value, digits)
    if cell.j is not None:
        text += f"({cell.j})"
    return text


def render_table(table: TableResult, fmt: str = "md", digits: int = TABLE_DIGITS) -> str:
    cols = COLUMNS[table.which]
    if fmt == "json":
        doc = {
            "table": table.which,
            "manifest": manifest(table.config),
            "rows": [
                {"b": r.b, "k": r.k, "cells": {c: asdict(r.cells[c]) for c in cols}} for r in table.rows
            ],
            "mismatches": [list(m) for m in table.mismatches],
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["b", "k"]
        for c in cols:
            head.append(HEADERS[c] + (" (reference)" if c in REFERENCE_ONLY else ""))
            if c not in REFERENCE_ONLY:
                head.append(HEADERS[c] + " flagged")
        w.writerow(head)
        for r in table.rows:
            line = [r.b, r.k]
            for c in cols:
                cell = r.cells[c]
                line.append(_shown(cell, digits))
                if not cell.reference_only:
                    line.append(int(cell.flagged))
            w.writerow(line)
        return buf.getvalue()
    if fmt != "md":
        raise ParameterError(f"unknown format {fmt!r}")
    out = ["| (b,k) | " + " | ".join(HEADERS[c] + ("*" if c in REFERENCE_ONLY else "") for c in cols) + " |"]
    out.append("|---" * (len(cols) + 1) + "|")
    for r in table.rows:
        shown = []
        for c in cols:
            cell = r.cells[c]
            s = _shown(cell, digits)
            if cell.reference_only:
                s = f"_{s}_"
            elif cell.flagged:
                s += f" !({cell.reference:.5f})"
            shown.append(s)
        out.append(f"| ({r.b},{r.k}) | " + " | ".join(shown) + " |")
    out.append("")
    out.append("\\* reference value, not recomputed. `!` marks a cell that disagrees with the published value.")
    return "\n".join(out) + "\n"
