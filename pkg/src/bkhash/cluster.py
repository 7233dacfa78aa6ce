"""Rate bounds from clustered quadratic forms.

The simplex is split into a balanced cell and ``b`` unbalanced cells. By
permutation symmetry the suprema of Psi over cell pairs take four values
(balanced/balanced, balanced/unbalanced, same unbalanced cell, two distinct
unbalanced cells). With cell masses ``eta`` the quadratic form is bounded by

    F(eta) = eta0^2 m1 + 2 eta0 s m2 + sum_i eta_i^2 m3 + 2 sum_{i<h} eta_i eta_h m4,

``s = 1 - eta0``, and its maximum M replaces the global maximum of Psi in
the rate formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classic import BoundReport, check_bk, rate_bound_from_M
from .kernel import KernelContext
from .optimize import OptimumWitness, SearchConfig, maximize_pair, psi_max_global
from .simplex import ParameterError, PartitionKind, RegionSpec

# epsilon per (kind, b, k) for the published cases
DEFAULT_EPSILON = {
    (PartitionKind.MAX, 7, 7): 9 / 100,
    (PartitionKind.MAX, 8, 8): 3 / 25,
    (PartitionKind.MAX, 9, 8): 1 / 10,
    (PartitionKind.MAX, 10, 9): 1 / 15,
    (PartitionKind.MAX, 11, 10): 1 / 11,
    (PartitionKind.MIN, 5, 5): (4 + math.sqrt(5)) / 44,
    (PartitionKind.MIN, 6, 5): 1 / 10,
    (PartitionKind.MIN, 6, 6): 1 / 20,
}

CROSS_FACTOR_NOTE = (
    "balanced/unbalanced term uses factor 2 (symmetric expansion of the double sum); "
    "M_cross_factor_1 records the value without it"
)


@dataclass
class ClusterMatrix:
    m1: float
    m2: float
    m3: float
    m4: float
    kind: PartitionKind
    epsilon: float
    b: int
    j: int
    witnesses: tuple[OptimumWitness, ...] = ()
    relaxed: bool = False

    @property
    def values(self) -> tuple[float, float, float, float]:
        return (self.m1, self.m2, self.m3, self.m4)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "epsilon": self.epsilon,
            "b": self.b,
            "j": self.j,
            "relaxed_same_cell": self.relaxed,
            "M1": self.m1,
            "M2": self.m2,
            "M3": self.m3,
            "M4": self.m4,
            "witnesses": [w.as_dict() for w in self.witnesses],
        }


@dataclass
class ReducedFormResult:
    M: float
    eta: np.ndarray
    support_pattern: tuple[bool, int]
    cross_factor: int = 2

    @property
    def eta0(self) -> float:
        return float(self.eta[0])


def compute_cluster_matrix(
    kind: PartitionKind,
    b: int,
    j: int,
    epsilon: float,
    cfg: SearchConfig | None = None,
    relax_same_cell: bool = False,
) -> ClusterMatrix:
    """Estimate the four cluster suprema over cell closures.

    Cells 1 and 2 stand in for every unbalanced pair by symmetry. With
    ``relax_same_cell`` (min-based only) the same-cell supremum is taken over
    ``{p_1 <= eps} x {q_1 <= eps}``, which contains the closure and so gives a
    larger, more conservative value.
    """
    ctx = KernelContext(b, j)
    cells = [RegionSpec(kind, b, epsilon, i) for i in range(3)]
    same = cells[1]
    if relax_same_cell:
        if kind is not PartitionKind.MIN:
            raise ParameterError("same-cell relaxation is defined for min-based partitions")
        same = RegionSpec(kind, b, epsilon, 1, relaxed=True)
    pairs = [(cells[0], cells[0]), (cells[0], cells[1]), (same, same), (cells[1], cells[2])]
    ws = tuple(maximize_pair(ctx, rp, rq, cfg) for rp, rq in pairs)
    return ClusterMatrix(*(w.value for w in ws), kind, epsilon, b, j, ws, relax_same_cell)


def reduced_form_value(m: Sequence[float], eta: Sequence[float], cross_factor: int = 2) -> float:
    """F(eta) evaluated directly from the cell masses."""
    m1, m2, m3, m4 = m
    eta = np.asarray(eta, dtype=float)
    e0, rest = eta[0], eta[1:]
    s = rest.sum()
    sq = float(rest @ rest)
    return float(e0 * e0 * m1 + cross_factor * e0 * s * m2 + sq * m3 + (s * s - sq) * m4)


def maximize_reduced_form(
    cm: ClusterMatrix | Sequence[float], b: int | None = None, cross_factor: int = 2
) -> ReducedFormResult:
    """Exact maximum of F over the (b+1)-simplex.

    Spreading unbalanced mass ``s`` evenly over ``r`` cells gives the block
    value ``s^2 (m3/r + m4 (r-1)/r)``, which is optimal for that support size;
    for each ``r`` the objective is a quadratic in ``eta0`` maximised at an
    endpoint or its stationary point.
    """
    if isinstance(cm, ClusterMatrix):
        m, b = cm.values, cm.b
    else:
        m = tuple(float(x) for x in cm)
        if b is None:
            raise ParameterError("alphabet size b is required with a bare value tuple")
    m1, m2, m3, m4 = m
    if min(m) < 0:
        raise ParameterError("cluster values must be nonnegative")
    best = None
    for r in range(1, b + 1):
        c = m3 / r + m4 * (r - 1) / r
        A = m1 - cross_factor * m2 + c
        B = cross_factor * m2 - 2.0 * c
        xs = [1.0, 0.0]
        if A < 0:
            x = -B / (2.0 * A)
            if 0.0 < x < 1.0:
                xs.append(x)
        for x in xs:
            v = (A * x + B) * x + c
            if best is None or v > best[0]:
                best = (v, x, r)
    v, x, r = best
    eta = np.zeros(b + 1)
    eta[0] = x
    if x < 1.0:
        eta[1 : r + 1] = (1.0 - x) / r
    active = 0 if x >= 1.0 else r
    M = reduced_form_value(m, eta, cross_factor)
    return ReducedFormResult(M, eta, (x > 0.0, active), cross_factor)


def resolve_parameters(kind: PartitionKind, b: int, k: int, epsilon: float | None, j: int | None):
    check_bk(b, k)
    j = k - 2 if j is None else j
    if not 2 <= j <= k - 2:
        raise ParameterError(f"j must lie in [2, {k - 2}], got {j}")
    if epsilon is None:
        try:
            epsilon = DEFAULT_EPSILON[(kind, b, k)]
        except KeyError:
            raise ParameterError(f"no default epsilon for {kind.value}-based (b,k)=({b},{k}); pass one") from None
    return epsilon, j


def cluster_rate_bound(
    b: int,
    k: int,
    kind: PartitionKind,
    epsilon: float | None = None,
    cfg: SearchConfig | None = None,
    j: int | None = None,
    relax_same_cell: bool = False,
) -> BoundReport:
    """Cluster matrix, then reduced form, then the rate formula with M."""
    epsilon, j = resolve_parameters(kind, b, k, epsilon, j)
    cm = compute_cluster_matrix(kind, b, j, epsilon, cfg, relax_same_cell)
    red = maximize_reduced_form(cm)
    alt = maximize_reduced_form(cm, cross_factor=1)
    rep = rate_bound_from_M(b, k, j, red.M, method=f"cluster-{kind.value}")
    rep.params = type(rep.params)(b, k, j, epsilon)
    rep.intermediates.update(
        {
            "M1": cm.m1,
            "M2": cm.m2,
            "M3": cm.m3,
            "M4": cm.m4,
            "eta0": red.eta0,
            "active_unbalanced_cells": red.support_pattern[1],
            "M_cross_factor_1": alt.M,
            "relaxed_same_cell": relax_same_cell,
            "witnesses": [w.as_dict() for w in cm.witnesses],
        }
    )
    rep.notes.append(CROSS_FACTOR_NOTE)
    rep.notes.append("suprema are numerical estimates, not certified maxima")
    return rep


def psi_max_bound(b: int, k: int, j: int | None = None, cfg: SearchConfig | None = None) -> BoundReport:
    """Rate bound using the global maximum of Psi (j defaults to k-2)."""
    check_bk(b, k)
    j = k - 2 if j is None else j
    w = psi_max_global(KernelContext(b, j), cfg)
    rep = rate_bound_from_M(b, k, j, w.value, method="psimax")
    rep.intermediates = {"psi_max": w.value, "witness": w.as_dict()}
    rep.notes.append("global maximum is a numerical estimate, not certified")
    return rep


@dataclass
class SweepResult:
    reports: list[BoundReport] = field(default_factory=list)

    @property
    def best(self) -> BoundReport | None:
        if not self.reports:
            return None
        return min(self.reports, key=lambda r: (r.value, r.params.epsilon))


def epsilon_sweep(
    b: int,
    k: int,
    kind: PartitionKind,
    j: int | None,
    eps_grid: Sequence[float],
    cfg: SearchConfig | None = None,
) -> SweepResult:
    for eps in eps_grid:
        if not 0.0 < eps < kind.max_epsilon(b):
            raise ParameterError(f"epsilon {eps} inadmissible for {kind.value}-based b={b}")
    return SweepResult([cluster_rate_bound(b, k, kind, eps, cfg, j) for eps in eps_grid])
