"""The symmetric polynomial kernel Psi(p, q) and the quadratic form it induces.

For order ``j``, Psi sums over ordered tuples ``(a_1, ..., a_{j+1})`` of
distinct symbols::

    p[a_1] ... p[a_j] q[a_{j+1}] + q[a_1] ... q[a_j] p[a_{j+1}]

Grouping by the set ``B = {a_1, ..., a_{j+1}}`` gives

    Psi(p, q) = j! * (D e_{j+1}(p)[q] + D e_{j+1}(q)[p])

where ``e_m`` is the elementary symmetric polynomial and ``D e_m(x)[y]`` its
directional derivative, sum over ``|B| = m`` of ``sum_{c in B} y_c prod_{B - c} x``.
Both are accumulated in one pass over the coordinates, so evaluation costs
O(b j) per pair. On the simplex ``sum_{c not in A} q_c = 1 - sum_{a in A} q_a``,
so this is the familiar "fraction of the code outside the chosen symbols"
form; off the simplex the homogeneous polynomial is used.

All functions broadcast over leading axes and accept ``object`` arrays of
``fractions.Fraction`` for exact arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .simplex import SUM_TOL, ParameterError

NAIVE_GUARD = 10**8


@dataclass(frozen=True)
class KernelContext:
    b: int
    j: int

    def __post_init__(self):
        if self.b < 2:
            raise ParameterError(f"alphabet size must be >= 2, got {self.b}")
        if self.j < 1:
            raise ParameterError(f"tuple order j must be >= 1, got {self.j}")

    @property
    def degenerate(self) -> bool:
        """No distinct (j+1)-tuple exists; Psi vanishes identically."""
        return self.j + 1 > self.b


def _as_array(x, b: int) -> np.ndarray:
    a = np.asarray(x)
    if a.dtype != object:
        a = a.astype(float)
    if a.shape[-1] != b:
        raise ParameterError(f"dimension mismatch: got {a.shape[-1]} entries, b={b}")
    return a


def _polarized(x: np.ndarray, y: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """``(e_t(x), D e_t(x)[y])`` for ``t = 0..m`` over the last axis."""
    shape = np.broadcast_shapes(x.shape[:-1], y.shape[:-1]) + (m + 1,)
    dtype = object if object in (x.dtype, y.dtype) else float
    E = np.zeros(shape, dtype=dtype)
    F = np.zeros(shape, dtype=dtype)
    E[..., 0] = 1
    for c in range(x.shape[-1]):
        xc = x[..., c, None]
        yc = y[..., c, None]
        F[..., 1:] = F[..., 1:] + xc * F[..., :-1] + yc * E[..., :-1]
        E[..., 1:] = E[..., 1:] + xc * E[..., :-1]
    return E, F


def psi(ctx: KernelContext, p, q):
    """Psi(p, q); returns a float for single inputs, an array for batches."""
    p = _as_array(p, ctx.b)
    q = _as_array(q, ctx.b)
    if ctx.degenerate:
        out = np.zeros(np.broadcast_shapes(p.shape[:-1], q.shape[:-1]))
        return out if out.ndim else 0.0
    m = ctx.j + 1
    _, Fpq = _polarized(p, q, m)
    _, Fqp = _polarized(q, p, m)
    out = math.factorial(ctx.j) * (Fpq[..., m] + Fqp[..., m])
    if isinstance(out, np.ndarray) and out.ndim == 0:
        out = out[()]
    return out if isinstance(out, np.ndarray) or p.dtype == object or q.dtype == object else float(out)


def psi_naive(ctx: KernelContext, p: Sequence, q: Sequence):
    """Direct sum over ordered distinct (j+1)-tuples. Reference only."""
    b, j = ctx.b, ctx.j
    if b ** (j + 1) > NAIVE_GUARD:
        raise ParameterError(f"naive evaluation refused: b^(j+1) = {b ** (j + 1)} > {NAIVE_GUARD}")
    p, q = list(p), list(q)
    if len(p) != b or len(q) != b:
        raise ParameterError("dimension mismatch")
    total = 0
    for t in itertools.permutations(range(b), j + 1):
        head, last = t[:j], t[j]
        total += math.prod(p[a] for a in head) * q[last] + math.prod(q[a] for a in head) * p[last]
    return total


def _leave_one_out(x: np.ndarray, y: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """``e_m(x without c)`` and ``D e_m(x without c)[y without c]`` for every c.

    Prefix and suffix tables are convolved; every term is a product of
    nonnegative entries, so there is no cancellation near simplex vertices.
    """
    b = x.shape[-1]
    lead = np.broadcast_shapes(x.shape[:-1], y.shape[:-1])
    x = np.broadcast_to(x, lead + (b,))
    y = np.broadcast_to(y, lead + (b,))
    PE = np.zeros(lead + (b, m + 1))
    PF = np.zeros_like(PE)
    SE = np.zeros_like(PE)
    SF = np.zeros_like(PE)
    E = np.zeros(lead + (m + 1,))
    F = np.zeros_like(E)
    E[..., 0] = 1.0
    for c in range(b):
        PE[..., c, :] = E
        PF[..., c, :] = F
        xc, yc = x[..., c, None], y[..., c, None]
        F[..., 1:] = F[..., 1:] + xc * F[..., :-1] + yc * E[..., :-1]
        E[..., 1:] = E[..., 1:] + xc * E[..., :-1]
    E = np.zeros(lead + (m + 1,))
    F = np.zeros_like(E)
    E[..., 0] = 1.0
    for c in range(b - 1, -1, -1):
        SE[..., c, :] = E
        SF[..., c, :] = F
        xc, yc = x[..., c, None], y[..., c, None]
        F[..., 1:] = F[..., 1:] + xc * F[..., :-1] + yc * E[..., :-1]
        E[..., 1:] = E[..., 1:] + xc * E[..., :-1]
    e = np.zeros(lead + (b,))
    d = np.zeros(lead + (b,))
    for t in range(m + 1):
        e += PE[..., t] * SE[..., m - t]
        d += PF[..., t] * SE[..., m - t] + PE[..., t] * SF[..., m - t]
    return e, d


def psi_gradient(ctx: KernelContext, p, q) -> tuple[np.ndarray, np.ndarray]:
    """Partial derivatives of Psi with respect to the entries of p and of q."""
    p = _as_array(p, ctx.b).astype(float)
    q = _as_array(q, ctx.b).astype(float)
    if ctx.degenerate:
        shape = np.broadcast_shapes(p.shape, q.shape)
        return np.zeros(shape), np.zeros(shape)
    j = ctx.j
    ep, dpq = _leave_one_out(p, q, j)
    eq, dqp = _leave_one_out(q, p, j)
    f = math.factorial(j)
    return f * (eq + dpq), f * (ep + dqp)


def psi_value_and_gradient(ctx: KernelContext, P: np.ndarray, Q: np.ndarray):
    """Batched value and gradient; value is recovered from the gradient by Euler's identity."""
    gp, gq = psi_gradient(ctx, P, Q)
    value = ((P * gp).sum(axis=-1) + (Q * gq).sum(axis=-1)) / (ctx.j + 1)
    return value, gp, gq


def psi_matrix(ctx: KernelContext, A, B) -> np.ndarray:
    """Psi for every pair of rows, ``out[a, c] = Psi(A[a], B[c])``.

    Since ``D e_{j+1}(p)[q] = sum_c q_c e_j(p without c)``, the kernel is
    bilinear in ``(p, L(p))`` with ``L(p)_c = e_j(p without c)``, so a full
    pair scan is two matrix products.
    """
    A = np.atleast_2d(_as_array(A, ctx.b).astype(float))
    B = np.atleast_2d(_as_array(B, ctx.b).astype(float))
    if ctx.degenerate:
        return np.zeros((A.shape[0], B.shape[0]))
    LA, _ = _leave_one_out(A, A, ctx.j)
    LB, _ = _leave_one_out(B, B, ctx.j)
    return math.factorial(ctx.j) * (LA @ B.T + A @ LB.T)


def uniform_value(b: int, j: int):
    """Exact Psi(u, u) = 2 b(b-1)...(b-j) / b^(j+1) as a Fraction."""
    from fractions import Fraction

    return Fraction(2 * math.perm(b, j + 1), b ** (j + 1))


@dataclass(frozen=True)
class WeightedEnsemble:
    """A finite distribution ``weights`` over simplex points ``points``."""

    weights: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        P = np.atleast_2d(np.asarray(self.points, dtype=float))
        if w.ndim != 1 or w.shape[0] != P.shape[0]:
            raise ParameterError("weights and points must have matching lengths")
        if w.min() < 0 or abs(w.sum() - 1.0) > SUM_TOL:
            raise ParameterError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "points", P)


def quadratic_form(ctx: KernelContext, ensemble: WeightedEnsemble) -> float:
    """sum_{p, q} lambda_p lambda_q Psi(p, q)."""
    P = ensemble.points
    if P.shape[1] != ctx.b:
        raise ParameterError(f"dimension mismatch: {P.shape[1]} vs b={ctx.b}")
    K = psi(ctx, P[:, None, :], P[None, :, :])
    w = ensemble.weights
    return float(w @ K @ w)
