"""Probability-simplex geometry.

Distributions over ``b`` symbols, the max-based and min-based partitions of
the simplex into one balanced cell and ``b`` unbalanced cells, exact lattice
enumeration, uniform sampling inside a cell and Euclidean projection onto a
cell closure.

Coordinates are 0-based in arrays; cell indices follow the partition
convention (0 is the balanced cell, ``i >= 1`` is unbalanced on array
coordinate ``i - 1``).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

SUM_TOL = 1e-12


class ParameterError(ValueError):
    """Inadmissible parameters (dimension, epsilon, alphabet size, ...)."""


@dataclass(frozen=True, eq=False)
class Distribution:
    """A validated point of the probability simplex (read-only array)."""

    probs: np.ndarray

    @property
    def b(self) -> int:
        return self.probs.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    def __len__(self) -> int:
        return self.b

    def __iter__(self):
        return iter(self.probs.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return bool(np.array_equal(self.probs, other.probs))

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())

    def __repr__(self) -> str:
        return f"Distribution({np.array2string(self.probs, precision=6, separator=', ')})"


def _freeze(x: np.ndarray) -> Distribution:
    a = np.array(x, dtype=float)
    a.setflags(write=False)
    return Distribution(a)


def make_distribution(values: Sequence[float], b: int | None = None) -> Distribution:
    """Validate ``values`` as a distribution on ``b`` symbols.

    Entries in ``[-1e-12, 0)`` are clamped to zero and the vector is
    renormalised; anything further from the simplex is rejected.
    """
    a = np.asarray(values, dtype=float).ravel()
    if b is None:
        b = a.shape[0]
    if b < 2:
        raise ParameterError(f"alphabet size must be >= 2, got {b}")
    if a.shape[0] != b:
        raise ParameterError(f"expected {b} entries, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ParameterError("entries must be finite")
    if a.min() < -SUM_TOL:
        raise ParameterError(f"negative entry {a.min():.3g}")
    a = np.clip(a, 0.0, None)
    total = a.sum()
    if total <= 0.0:
        raise ParameterError("zero total mass")
    if abs(total - 1.0) > SUM_TOL:
        raise ParameterError(f"mass {total:.15g} differs from 1 beyond tolerance")
    return _freeze(a / total)


def uniform(b: int) -> Distribution:
    return _freeze(np.full(b, 1.0 / b))


class PartitionKind(enum.Enum):
    MAX = "max"
    MIN = "min"

    def max_epsilon(self, b: int) -> float:
        """Exclusive upper limit on epsilon for the partition to be disjoint."""
        return 1.0 / (b - 1) if self is PartitionKind.MAX else 1.0 / b


@dataclass(frozen=True)
class RegionSpec:
    """One cell of a simplex partition, or the whole simplex (``kind=None``).

    ``relaxed`` applies to unbalanced min-based cells only: the closure
    ``{p_i <= eps, p_h >= p_i}`` is replaced by the larger set
    ``{p_i <= eps}``.
    """

    kind: PartitionKind | None
    b: int
    epsilon: float = 0.0
    index: int = 0
    use_closure: bool = True
    relaxed: bool = False

    def __post_init__(self):
        if self.b < 2:
            raise ParameterError(f"alphabet size must be >= 2, got {self.b}")
        if self.kind is None:
            return
        if not 0 <= self.index <= self.b:
            raise ParameterError(f"cell index {self.index} outside 0..{self.b}")
        if not 0.0 < self.epsilon < self.kind.max_epsilon(self.b):
            raise ParameterError(
                f"epsilon={self.epsilon!r} inadmissible for {self.kind.value}-based "
                f"partition with b={self.b} (need 0 < eps < {self.kind.max_epsilon(self.b):.6g})"
            )
        if self.relaxed and (self.kind is not PartitionKind.MIN or self.index == 0):
            raise ParameterError("relaxation applies to unbalanced min-based cells only")

    @classmethod
    def simplex(cls, b: int) -> "RegionSpec":
        return cls(None, b)

    @property
    def coordinate(self) -> int | None:
        """Array coordinate singled out by an unbalanced cell."""
        if self.kind is None or self.index == 0:
            return None
        return self.index - 1

    def closure(self) -> "RegionSpec":
        return RegionSpec(self.kind, self.b, self.epsilon, self.index, True, self.relaxed)

    def label(self) -> str:
        if self.kind is None:
            return "simplex"
        tag = f"{self.kind.value}[{self.index}]"
        return tag + ("~" if self.relaxed else "")


def partition(kind: PartitionKind, b: int, epsilon: float, use_closure: bool = False) -> list[RegionSpec]:
    """The ``b + 1`` cells of a partition, balanced cell first."""
    return [RegionSpec(kind, b, epsilon, i, use_closure) for i in range(b + 1)]


# -- membership -------------------------------------------------------------

def member_mask(P: np.ndarray, r: RegionSpec, tol: float = 0.0) -> np.ndarray:
    """Vectorised membership for rows of ``P`` (shape ``(..., b)``)."""
    P = np.asarray(P, dtype=float)
    if P.shape[-1] != r.b:
        raise ParameterError(f"dimension mismatch: {P.shape[-1]} vs b={r.b}")
    ok = np.all(P >= -tol, axis=-1) & (np.abs(P.sum(axis=-1) - 1.0) <= max(tol, SUM_TOL))
    if r.kind is None:
        return ok
    eps = r.epsilon
    if r.kind is PartitionKind.MAX:
        if r.index == 0:
            return ok & np.all(P <= 1.0 - eps + tol, axis=-1)
        pi = P[..., r.index - 1]
        if r.use_closure:
            return ok & (pi >= 1.0 - eps - tol)
        return ok & (pi > 1.0 - eps)
    if r.index == 0:
        return ok & np.all(P >= eps - tol, axis=-1)
    c = r.index - 1
    pi = P[..., c]
    if r.relaxed:
        return ok & ((pi <= eps + tol) if r.use_closure else (pi < eps))
    if r.use_closure:
        return ok & (pi <= eps + tol) & np.all(P >= pi[..., None] - tol, axis=-1)
    before = P[..., :c]
    return (
        ok
        & (pi < eps)
        & np.all(P >= pi[..., None], axis=-1)
        & np.all(before > pi[..., None], axis=-1)
    )


def region_member(p, r: RegionSpec, tol: float = 0.0) -> bool:
    """True iff ``p`` lies in cell ``r`` (weak inequalities when closed)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ParameterError("expected a single distribution")
    return bool(member_mask(p, r, tol))


# -- lattice ----------------------------------------------------------------

def grid_count(b: int, D: int) -> int:
    return math.comb(D + b - 1, b - 1)


def grid_compositions(b: int, D: int) -> np.ndarray:
    """All compositions of ``D`` into ``b`` nonnegative parts, as integer rows."""
    if b < 2 or D < 1:
        raise ParameterError("need b >= 2 and D >= 1")
    bars = np.array(list(itertools.combinations(range(D + b - 1), b - 1)), dtype=np.int64)
    bars = bars.reshape(-1, b - 1)
    n = bars.shape[0]
    edges = np.hstack([np.full((n, 1), -1), bars, np.full((n, 1), D + b - 1)])
    return np.diff(edges, axis=1) - 1


def grid_points(b: int, D: int) -> np.ndarray:
    return grid_compositions(b, D) / D


def cell_lattice(r: RegionSpec, D: int, levels: int = 4) -> np.ndarray:
    """Lattice points of the closure of ``r``.

    Cells that are affine images of the simplex get the image of the
    ``1/D`` lattice, so their corners are always included. A min-based
    unbalanced cell is swept as ``t 1 + (1 - b t) w`` with ``t`` on
    ``levels + 1`` equally spaced values in ``[0, eps]`` and ``w`` on the
    lattice of the face ``w_c = 0``. Other cells keep the simplex lattice
    points that fall inside.
    """
    b, eps = r.b, r.epsilon
    if r.kind is PartitionKind.MAX and r.index > 0:
        X = eps * grid_points(b, D)
        X[:, r.index - 1] += 1.0 - eps
        return X
    if r.kind is PartitionKind.MIN and r.index == 0:
        return eps + (1.0 - b * eps) * grid_points(b, D)
    if r.kind is PartitionKind.MIN and not r.relaxed:
        c = r.index - 1
        F = grid_points(b - 1, D)
        W = np.zeros((len(F), b))
        W[:, np.arange(b) != c] = F
        return np.vstack([t + (1.0 - b * t) * W for t in np.linspace(0.0, eps, levels + 1)])
    G = grid_points(b, D)
    return G[member_mask(G, r.closure(), SUM_TOL)]


def grid_enumerate(b: int, D: int) -> Iterator[Distribution]:
    """Every distribution with entries in ``{0, 1/D, ..., 1}``, once each."""
    for row in grid_compositions(b, D):
        yield _freeze(row / D)


# -- sampling ---------------------------------------------------------------

def sample_region(r: RegionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points drawn uniformly from the closure of ``r``."""
    b, eps = r.b, r.epsilon
    if r.kind is None:
        return rng.dirichlet(np.ones(b), n)
    if r.kind is PartitionKind.MAX and r.index > 0:
        X = eps * rng.dirichlet(np.ones(b), n)
        X[:, r.index - 1] += 1.0 - eps
        return X
    if r.kind is PartitionKind.MIN and r.index == 0:
        return eps + (1.0 - b * eps) * rng.dirichlet(np.ones(b), n)
    if r.kind is PartitionKind.MIN and not r.relaxed:
        # p = t*1 + (1 - b t) w with w uniform on the face w_c = 0;
        # the density of t is proportional to (1 - b t)^(b-2)
        c = r.index - 1
        u = rng.random(n)
        top = 1.0 - (1.0 - b * eps) ** (b - 1)
        t = (1.0 - (1.0 - u * top) ** (1.0 / (b - 1))) / b
        W = np.zeros((n, b))
        W[:, np.arange(b) != c] = rng.dirichlet(np.ones(b - 1), n)
        return t[:, None] + (1.0 - b * t)[:, None] * W
    # max-based balanced cell and relaxed min cells: rejection from the simplex
    out = np.empty((0, b))
    while out.shape[0] < n:
        X = rng.dirichlet(np.ones(b), 2 * n + 16)
        out = np.vstack([out, X[member_mask(X, r.closure())]])
    return out[:n]


# -- projection -------------------------------------------------------------

def box_bounds(r: RegionSpec) -> tuple[np.ndarray, np.ndarray] | None:
    """Coordinate bounds when the cell closure is a box cut by the simplex."""
    b, eps = r.b, r.epsilon
    lo, hi = np.zeros(b), np.ones(b)
    if r.kind is None:
        return lo, hi
    if r.kind is PartitionKind.MAX:
        if r.index == 0:
            hi[:] = 1.0 - eps
        else:
            lo[r.index - 1] = 1.0 - eps
        return lo, hi
    if r.index == 0:
        lo[:] = eps
        return lo, hi
    if r.relaxed:
        hi[r.index - 1] = eps
        return lo, hi
    return None


def _project_box(Y: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Exact projection of rows of ``Y`` onto ``{lo <= x <= hi, sum x = 1}``."""
    if lo.sum() > 1.0 + SUM_TOL or hi.sum() < 1.0 - SUM_TOL:
        raise ParameterError("infeasible region: box does not meet the simplex")
    # x(tau) = clip(y - tau, lo, hi); sum is piecewise linear and nonincreasing in tau
    T = np.sort(np.concatenate([Y - lo, Y - hi], axis=1), axis=1)
    G = np.clip(Y[:, None, :] - T[:, :, None], lo, hi).sum(axis=2)
    k = np.sum(G >= 1.0, axis=1) - 1
    k = np.clip(k, 0, T.shape[1] - 1)
    rows = np.arange(Y.shape[0])
    k1 = np.minimum(k + 1, T.shape[1] - 1)
    t0, t1 = T[rows, k], T[rows, k1]
    g0, g1 = G[rows, k], G[rows, k1]
    denom = g0 - g1
    frac = np.divide(g0 - 1.0, denom, out=np.zeros_like(g0), where=denom > 0)
    tau = t0 + np.clip(frac, 0.0, 1.0) * (t1 - t0)
    return np.clip(Y - tau[:, None], lo, hi)


def _project_min_cell(Y: np.ndarray, c: int, eps: float) -> np.ndarray:
    """Exact projection onto ``{x_c <= eps, x_h >= x_c, x >= 0, sum x = 1}``.

    At the optimum the coordinates tied to ``x_c`` are the smallest other
    entries of ``y``; the common value ``t`` is interior or sits at 0 or eps.
    All ``3 b`` structures are built and the nearest feasible one is kept.
    """
    n, b = Y.shape
    others = np.array([h for h in range(b) if h != c])
    Z = Y[:, others]
    order = np.argsort(Z, axis=1, kind="stable")
    Zs = np.take_along_axis(Z, order, axis=1)
    yc = Y[:, c]
    total = Y.sum(axis=1)
    csum = np.hstack([np.zeros((n, 1)), np.cumsum(Zs, axis=1)])  # csum[:, s] = sum of s smallest
    m = b - 1
    cands = []
    for s in range(m + 1):
        tied_sum = yc + csum[:, s]
        free_sum = csum[:, m] - csum[:, s]
        nfree = m - s
        regimes = []
        tau_int = (total - 1.0) / b
        regimes.append((tied_sum / (s + 1) - tau_int, tau_int))
        for t_fix in (0.0, eps):
            t = np.full(n, t_fix)
            if nfree == 0:
                tau = np.full(n, np.nan)
            else:
                tau = (free_sum + (s + 1) * t_fix - 1.0) / nfree
            regimes.append((t, tau))
        for t, tau in regimes:
            Xs = np.empty((n, m))
            Xs[:, :s] = t[:, None]
            Xs[:, s:] = Zs[:, s:] - tau[:, None]
            X = np.empty((n, b))
            X[:, c] = t
            back = np.empty_like(Xs)
            np.put_along_axis(back, order, Xs, axis=1)
            X[:, others] = back
            cands.append(X)
    C = np.stack(cands, axis=1)  # (n, 3b, b)
    t_all = C[:, :, c]
    feas = (
        np.all(np.isfinite(C), axis=2)
        & (t_all >= -1e-13)
        & (t_all <= eps + 1e-13)
        & np.all(C >= t_all[:, :, None] - 1e-13, axis=2)
        & (np.abs(C.sum(axis=2) - 1.0) <= 1e-11)
    )
    if not np.all(feas.any(axis=1)):
        raise ParameterError("infeasible region: empty min-based cell")
    dist = np.where(feas, ((C - Y[:, None, :]) ** 2).sum(axis=2), np.inf)
    best = np.argmin(dist, axis=1)
    X = C[np.arange(n), best]
    t = np.clip(X[:, c], 0.0, eps)
    X[:, c] = t
    return np.maximum(X, t[:, None])


def project_batch(Y: np.ndarray, r: RegionSpec) -> np.ndarray:
    """Project each row of ``Y`` onto the closure of ``r``."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if Y.shape[1] != r.b:
        raise ParameterError(f"dimension mismatch: {Y.shape[1]} vs b={r.b}")
    bounds = box_bounds(r)
    if bounds is not None:
        return _project_box(Y, *bounds)
    return _project_min_cell(Y, r.index - 1, r.epsilon)


def project_to_region(x: Sequence[float], r: RegionSpec) -> Distribution:
    """Euclidean projection of ``x`` onto the closure of cell ``r``."""
    X = project_batch(np.asarray(x, dtype=float).reshape(1, -1), r)
    return _freeze(X[0])
