"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from bkhash.simplex import PartitionKind, RegionSpec


def psi_by_products(b, j, p, q):
    """Psi summed over every (j+1)-tuple of symbols, discarding those with repeats."""
    total = 0
    for t in itertools.product(range(b), repeat=j + 1):
        if len(set(t)) < j + 1:
            continue
        total += math.prod(p[a] for a in t[:j]) * q[t[j]] + math.prod(q[a] for a in t[:j]) * p[t[j]]
    return total


def uniform_closed_form(b, j):
    return Fraction(2 * math.factorial(b) // math.factorial(b - j - 1), b ** (j + 1))


def region_constraints(r: RegionSpec):
    """Linear inequality constraints g(x) >= 0 describing the closure of ``r``."""
    b, eps = r.b, r.epsilon
    cons = [{"type": "eq", "fun": lambda x: x.sum() - 1.0}]
    ineq = [lambda x, i=i: x[i] for i in range(b)]
    if r.kind is PartitionKind.MAX:
        if r.index == 0:
            ineq += [lambda x, i=i: 1.0 - eps - x[i] for i in range(b)]
        else:
            ineq.append(lambda x, c=r.index - 1: x[c] - (1.0 - eps))
    elif r.kind is PartitionKind.MIN:
        if r.index == 0:
            ineq += [lambda x, i=i: x[i] - eps for i in range(b)]
        else:
            c = r.index - 1
            ineq.append(lambda x: eps - x[c])
            if not r.relaxed:
                ineq += [lambda x, h=h: x[h] - x[c] for h in range(b) if h != c]
    cons += [{"type": "ineq", "fun": g} for g in ineq]
    return cons


def slsqp_projection(x, r: RegionSpec, starts: int = 4, seed: int = 0):
    """Euclidean projection by a generic constrained solver, best of several starts."""
    x = np.asarray(x, dtype=float)
    rng = np.random.default_rng(seed)
    best = None
    for s in range(starts):
        x0 = np.full(r.b, 1.0 / r.b) if s == 0 else rng.dirichlet(np.ones(r.b))
        res = minimize(
            lambda y: 0.5 * np.sum((y - x) ** 2),
            x0,
            jac=lambda y: y - x,
            constraints=region_constraints(r),
            method="SLSQP",
            options={"ftol": 1e-15, "maxiter": 500},
        )
        if best is None or res.fun < best.fun:
            best = res
    return best.x


def reduced_form_grid(m, b, denominator=200, zoom_rounds=40):
    """Maximise F over cluster masses by lattice search in (eta0, r), then zoom in eta0.

    With all unbalanced mass on ``r`` cells split evenly, the remaining freedom
    is eta0; the lattice covers eta0 in steps of 1/denominator and every r.
    """
    m1, m2, m3, m4 = m

    def F(e0, r):
        s = 1.0 - e0
        return e0 * e0 * m1 + 2.0 * e0 * s * m2 + s * s * (m3 / r + m4 * (r - 1) / r)

    best = max(((F(a / denominator, r), a / denominator, r) for a in range(denominator + 1)
                for r in range(1, b + 1)))
    v, x, r = best
    width = 1.0 / denominator
    for _ in range(zoom_rounds):
        xs = np.clip(np.linspace(x - width, x + width, 41), 0.0, 1.0)
        vals = [F(t, r) for t in xs]
        i = int(np.argmax(vals))
        if vals[i] > v:
            v, x = vals[i], xs[i]
        width /= 4.0
    return v


def reduced_form_direct(m, eta):
    """F(eta) from the explicit double sum over cell pairs."""
    m1, m2, m3, m4 = m
    n = len(eta)
    total = 0.0
    for a in range(n):
        for c in range(n):
            if a == 0 and c == 0:
                w = m1
            elif a == 0 or c == 0:
                w = m2
            elif a == c:
                w = m3
            else:
                w = m4
            total += eta[a] * eta[c] * w
    return total


def is_hash_code(words, k):
    """Plain-Python k-hash check."""
    for sub in itertools.combinations(words, k):
        if not any(len({w[i] for w in sub}) == k for i in range(len(sub[0]))):
            return False
    return True


def max_code_brute(b, k, n):
    """Largest k-hash code found by scanning subsets of decreasing size."""
    words = list(itertools.product(range(1, b + 1), repeat=n))
    for size in range(len(words), 0, -1):
        for sub in itertools.combinations(words, size):
            if is_hash_code(sub, k):
                return size
    return 0
