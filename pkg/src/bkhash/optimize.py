"""Maximisation of Psi over products of simplex cells.

``maximize_pair`` reports the better of two searches:

* a structured candidate list (uniform points, vertices, points pinned at
  ``1 - eps`` / ``eps`` / ``0`` on the distinguished coordinates, and two
  one-parameter families whose free scalar is tuned by golden-section search);
* multistart projected gradient ascent, batched over restarts, with
  backtracking from the configured initial step.

Neither route certifies a global optimum. ``oracle_scan`` is an independent
lower estimate built from lattice points and uniform samples.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .kernel import KernelContext, psi, psi_matrix, psi_value_and_gradient
from .simplex import (
    Distribution,
    ParameterError,
    RegionSpec,
    _freeze,
    cell_lattice,
    grid_count,
    member_mask,
    project_batch,
    sample_region,
)

FEAS_TOL = 1e-12
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 256
    max_iterations: int = 2000
    initial_step: float = 0.5
    step_decay: float = 0.5
    tolerance: float = 1e-10
    seed: int = 0
    grid_denominator: int = 12
    oracle_samples: int = 2000
    candidate_starts: int = 32

    def __post_init__(self):
        for name in ("restarts", "max_iterations", "grid_denominator", "oracle_samples"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be positive")
        if not self.tolerance > 0:
            raise ParameterError("tolerance must be positive")
        if not 0 < self.step_decay < 1 or not self.initial_step > 0:
            raise ParameterError("step schedule must have 0 < decay < 1 and a positive initial step")


class Method(str, enum.Enum):
    CANDIDATE = "CandidatePoint"
    ASCENT = "ProjectedAscent"
    ORACLE = "GridOracle"


@dataclass(frozen=True)
class OptimumWitness:
    value: float
    p: Distribution
    q: Distribution
    method: Method
    converged: bool

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "p": self.p.probs.tolist(),
            "q": self.q.probs.tolist(),
            "method": self.method.value,
            "converged": self.converged,
        }


def _check_pair(ctx: KernelContext, rp: RegionSpec, rq: RegionSpec) -> None:
    if rp.b != ctx.b or rq.b != ctx.b:
        raise ParameterError(f"regions over b={rp.b}/{rq.b} do not match kernel b={ctx.b}")


# -- candidates -------------------------------------------------------------

def _epsilon(rp: RegionSpec, rq: RegionSpec) -> float | None:
    for r in (rp, rq):
        if r.kind is not None:
            return r.epsilon
    return None


def _coords(rp: RegionSpec, rq: RegionSpec, b: int) -> list[int]:
    out = [c for c in (rp.coordinate, rq.coordinate) if c is not None]
    out = list(dict.fromkeys(out))
    fill = iter(range(b))
    while len(out) < min(3, b):
        c = next(fill)
        if c not in out:
            out.append(c)
    return out


def _static_points(b: int, eps: float | None, K: list[int]) -> np.ndarray:
    pts = [np.full(b, 1.0 / b)]
    for a in range(1, b):
        head = np.zeros(b)
        head[:a] = 1.0 / a
        pts += [head, head[::-1].copy()]
    for c in K:
        e = np.zeros(b)
        e[c] = 1.0
        off = np.full(b, 1.0 / (b - 1))
        off[c] = 0.0
        pts += [e, off]
        if eps is None:
            continue
        mx = np.full(b, eps / (b - 1))
        mx[c] = 1.0 - eps
        mn = np.full(b, (1.0 - eps) / (b - 1))
        mn[c] = eps
        pts += [mx, mn]
        if b < 3:
            continue
        for d in K:
            if d == c:
                continue
            mx2 = np.full(b, eps / (b - 2))
            mx2[c], mx2[d] = 1.0 - eps, 0.0
            mn0 = np.full(b, (1.0 - eps) / (b - 2))
            mn0[c], mn0[d] = eps, 0.0
            pts += [mx2, mn0]
    P = np.unique(np.round(np.array(pts), 15), axis=0)
    return P


def _families(b: int, eps: float | None, K: list[int]) -> list[tuple[np.ndarray, np.ndarray, float, float]]:
    """Affine paths ``x0 + theta * d`` on the simplex with their theta range."""
    fams = []
    for c in K:
        # (gamma at c, delta elsewhere), gamma = 1 - (b-1) delta
        x0 = np.zeros(b)
        x0[c] = 1.0
        d = np.ones(b)
        d[c] = -(b - 1.0)
        fams.append((x0, d, 0.0, 1.0 / (b - 1)))
        if eps is None or b < 3:
            continue
        for h in K:
            if h == c:
                continue
            # (eps at c, beta at h, alpha elsewhere), alpha = (1 - eps - beta)/(b - 2)
            x0 = np.full(b, (1.0 - eps) / (b - 2))
            x0[c], x0[h] = eps, 0.0
            d = np.full(b, -1.0 / (b - 2))
            d[c], d[h] = 0.0, 1.0
            fams.append((x0, d, 0.0, 1.0 - eps))
    return fams


def _golden_family(ctx, S, X0, Dd, lo, hi, region, n_grid=257):
    """For each row, maximise Psi(S, X0 + t Dd) over feasible t in [lo, hi]."""
    n = S.shape[0]
    ts = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, n_grid)[None, :]
    X = X0[:, None, :] + ts[:, :, None] * Dd[:, None, :]
    feas = member_mask(X, region, FEAS_TOL)
    vals = np.where(feas, psi(ctx, S[:, None, :], X), -np.inf)
    keep = feas.any(axis=1)
    best = np.argmax(vals, axis=1)
    rows = np.arange(n)
    a = ts[rows, np.maximum(best - 1, 0)]
    c = ts[rows, np.minimum(best + 1, n_grid - 1)]
    # shrink the bracket to its feasible part around the best grid point
    for side in (0, 1):
        inner = ts[rows, best]
        outer = a if side == 0 else c
        for _ in range(60):
            Xo = X0 + outer[:, None] * Dd
            ok = member_mask(Xo, region, FEAS_TOL)
            if ok.all():
                break
            outer = np.where(ok, outer, 0.5 * (outer + inner))
        if side == 0:
            a = outer
        else:
            c = outer

    def f(t):
        return psi(ctx, S, X0 + t[:, None] * Dd)

    x1 = c - GOLDEN * (c - a)
    x2 = a + GOLDEN * (c - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(80):
        if np.all(c - a <= 1e-12):
            break
        left = f1 >= f2
        c = np.where(left, x2, c)
        a = np.where(left, a, x1)
        x1 = c - GOLDEN * (c - a)
        x2 = a + GOLDEN * (c - a)
        f1, f2 = f(x1), f(x2)
    t_star = np.where(f1 >= f2, x1, x2)
    # compare against the grid optimum in case the bracket was not unimodal
    t_grid = ts[rows, best]
    Xs = X0 + t_star[:, None] * Dd
    Xg = X0 + t_grid[:, None] * Dd
    ok_s = member_mask(Xs, region, FEAS_TOL)
    vs = np.where(ok_s, f(t_star), -np.inf)
    vg = vals[rows, best]
    X_out = np.where((vs >= vg)[:, None], Xs, Xg)
    return X_out[keep], keep


def candidate_pairs(ctx: KernelContext, rp: RegionSpec, rq: RegionSpec) -> tuple[np.ndarray, np.ndarray]:
    """Structured candidate pairs ``(P, Q)`` lying in the two cell closures."""
    _check_pair(ctx, rp, rq)
    b = ctx.b
    rp, rq = rp.closure(), rq.closure()
    eps = _epsilon(rp, rq)
    K = _coords(rp, rq, b)
    S = _static_points(b, eps, K)
    Sp = S[member_mask(S, rp, FEAS_TOL)]
    Sq = S[member_mask(S, rq, FEAS_TOL)]
    Ps = [np.repeat(Sp, len(Sq), axis=0)]
    Qs = [np.tile(Sq, (len(Sp), 1))]
    fams = _families(b, eps, K)
    for fixed, free_region, fixed_is_p in ((Sp, rq, True), (Sq, rp, False)):
        if not len(fixed) or not fams:
            continue
        n_f = len(fams)
        Sx = np.repeat(fixed, n_f, axis=0)
        X0 = np.tile(np.array([f[0] for f in fams]), (len(fixed), 1))
        Dd = np.tile(np.array([f[1] for f in fams]), (len(fixed), 1))
        lo = np.tile(np.array([f[2] for f in fams]), len(fixed))
        hi = np.tile(np.array([f[3] for f in fams]), len(fixed))
        X, keep = _golden_family(ctx, Sx, X0, Dd, lo, hi, free_region)
        if fixed_is_p:
            Ps.append(Sx[keep])
            Qs.append(X)
        else:
            Ps.append(X)
            Qs.append(Sx[keep])
    P = np.vstack(Ps) if Ps else np.empty((0, b))
    Q = np.vstack(Qs) if Qs else np.empty((0, b))
    ok = member_mask(P, rp, FEAS_TOL) & member_mask(Q, rq, FEAS_TOL)
    return P[ok], Q[ok]


# -- projected ascent -------------------------------------------------------

def projected_ascent(
    ctx: KernelContext,
    rp: RegionSpec,
    rq: RegionSpec,
    P: np.ndarray,
    Q: np.ndarray,
    cfg: SearchConfig,
    trace: bool = False,
):
    """Batched projected gradient ascent from the rows of ``(P, Q)``.

    Each iteration moves along the tangential gradient scaled to unit
    sup-norm, retrying with a smaller step until the objective strictly
    improves. Returns ``(P, Q, values, converged[, history])``.
    """
    P = project_batch(P, rp)
    Q = project_batch(Q, rq)
    f = np.asarray(psi(ctx, P, Q), dtype=float)
    N = f.shape[0]
    step = np.full(N, cfg.initial_step)
    done = np.zeros(N, dtype=bool)
    converged = np.zeros(N, dtype=bool)
    history = [f.copy()] if trace else None
    for _ in range(cfg.max_iterations):
        act = np.flatnonzero(~done)
        if act.size == 0:
            break
        Pa, Qa, fa = P[act], Q[act], f[act]
        _, gp, gq = psi_value_and_gradient(ctx, Pa, Qa)
        gp = gp - gp.mean(axis=1, keepdims=True)
        gq = gq - gq.mean(axis=1, keepdims=True)
        scale = np.maximum(np.abs(gp).max(axis=1), np.abs(gq).max(axis=1))
        flat = scale <= 0.0
        scale[flat] = 1.0
        dp, dq = gp / scale[:, None], gq / scale[:, None]
        s = np.minimum(2.0 * step[act], cfg.initial_step)
        pending = ~flat
        accepted = np.zeros(act.size, dtype=bool)
        newP, newQ, newf = Pa.copy(), Qa.copy(), fa.copy()
        while pending.any():
            idx = np.flatnonzero(pending)
            Pt = project_batch(Pa[idx] + s[idx, None] * dp[idx], rp)
            Qt = project_batch(Qa[idx] + s[idx, None] * dq[idx], rq)
            ft = np.asarray(psi(ctx, Pt, Qt), dtype=float)
            ok = ft > fa[idx]
            good = idx[ok]
            newP[good], newQ[good], newf[good] = Pt[ok], Qt[ok], ft[ok]
            accepted[good] = True
            pending[good] = False
            bad = idx[~ok]
            s[bad] *= cfg.step_decay
            pending[bad] &= s[bad] >= 1e-15
        gain = newf - fa
        stop = ~accepted | (gain <= cfg.tolerance * np.abs(fa))
        P[act], Q[act], f[act], step[act] = newP, newQ, newf, s
        done[act[stop]] = True
        converged[act[stop]] = True
        if trace:
            history.append(f.copy())
    out = (P, Q, f, converged)
    return out + (np.array(history),) if trace else out


# -- public searches --------------------------------------------------------

def _select(P: np.ndarray, Q: np.ndarray, f: np.ndarray) -> int:
    """Index of the largest value; exact ties go to the lexicographically smallest (p, q)."""
    top = np.flatnonzero(f == f.max())
    if top.size == 1:
        return int(top[0])
    keys = np.hstack([P[top], Q[top]])
    order = np.lexsort(keys.T[::-1])
    return int(top[order[0]])


def maximize_pair(
    ctx: KernelContext, rp: RegionSpec, rq: RegionSpec, cfg: SearchConfig | None = None
) -> OptimumWitness:
    """Estimate sup Psi(p, q) over p in the closure of rp and q in that of rq."""
    cfg = cfg or SearchConfig()
    _check_pair(ctx, rp, rq)
    rp, rq = rp.closure(), rq.closure()
    if ctx.degenerate:
        rng = np.random.default_rng(cfg.seed)
        p, q = sample_region(rp, 1, rng)[0], sample_region(rq, 1, rng)[0]
        return OptimumWitness(0.0, _freeze(p), _freeze(q), Method.CANDIDATE, True)
    Pc, Qc = candidate_pairs(ctx, rp, rq)
    fc = np.asarray(psi(ctx, Pc, Qc), dtype=float) if len(Pc) else np.empty(0)

    rng = np.random.default_rng(cfg.seed)
    P0 = sample_region(rp, cfg.restarts, rng)
    Q0 = sample_region(rq, cfg.restarts, rng)
    if len(fc):
        top = np.argsort(-fc, kind="stable")[: cfg.candidate_starts]
        P0 = np.vstack([P0, Pc[top]])
        Q0 = np.vstack([Q0, Qc[top]])
    Pa, Qa, fa, conv = projected_ascent(ctx, rp, rq, P0, Q0, cfg)
    # feasibility to machine precision after projection
    ok = member_mask(Pa, rp, 1e-10) & member_mask(Qa, rq, 1e-10)
    fa = np.where(ok, fa, -np.inf)

    P = np.vstack([Pc, Pa])
    Q = np.vstack([Qc, Qa])
    f = np.concatenate([fc, fa])
    i = _select(P, Q, f)
    from_candidates = i < len(fc)
    p, q = _freeze(P[i]), _freeze(Q[i])
    value = float(psi(ctx, p.probs, q.probs))
    method = Method.CANDIDATE if from_candidates else Method.ASCENT
    converged = True if from_candidates else bool(conv[i - len(fc)])
    return OptimumWitness(value, p, q, method, converged)


def psi_max_global(ctx: KernelContext, cfg: SearchConfig | None = None) -> OptimumWitness:
    """Estimate of the maximum of Psi over all pairs of distributions."""
    whole = RegionSpec.simplex(ctx.b)
    return maximize_pair(ctx, whole, whole, cfg)


GRID_GUARD = 200_000
PAIR_GUARD = 50_000_000


def _best_over_pairs(ctx, A: np.ndarray, B: np.ndarray, chunk_rows: int = 2048):
    best = (-np.inf, None, None)
    if not len(A) or not len(B):
        return best
    for s in range(0, len(A), chunk_rows):
        Ac = A[s : s + chunk_rows]
        V = psi_matrix(ctx, Ac, B)
        i, jj = np.unravel_index(np.argmax(V), V.shape)
        if V[i, jj] > best[0]:
            best = (float(V[i, jj]), Ac[i], B[jj])
    return best


def oracle_scan(
    ctx: KernelContext, rp: RegionSpec, rq: RegionSpec, cfg: SearchConfig | None = None
) -> OptimumWitness:
    """Lower estimate of the supremum from lattice points and uniform samples.

    Each side uses the lattice of its own cell closure (see ``cell_lattice``).
    With ``b <= 5`` and ``D <= 16`` every lattice pair is evaluated, and each
    lattice meets the uniform samples of the other side. Otherwise lattice
    points on each side meet the candidate list and uniform samples of the
    other side. Every value returned is attained at a feasible pair.
    """
    cfg = cfg or SearchConfig()
    _check_pair(ctx, rp, rq)
    rp, rq = rp.closure(), rq.closure()
    b, D = ctx.b, cfg.grid_denominator
    if grid_count(b, D) > GRID_GUARD:
        raise ParameterError(f"lattice with b={b}, D={D} has {grid_count(b, D)} points (> {GRID_GUARD})")
    Gp = cell_lattice(rp, D)
    Gq = cell_lattice(rq, D)
    rng = np.random.default_rng(cfg.seed ^ 0x5EED)
    Sp = sample_region(rp, cfg.oracle_samples, rng)
    Sq = sample_region(rq, cfg.oracle_samples, rng)
    if b <= 5 and D <= 16:
        if len(Gp) * len(Gq) > PAIR_GUARD:
            raise ParameterError("exhaustive lattice scan exceeds the pair guard")
        results = [
            _best_over_pairs(ctx, Gp, Gq),
            _best_over_pairs(ctx, Gp, Sq),
            _best_over_pairs(ctx, Sp, Gq),
        ]
    else:
        Pc, Qc = candidate_pairs(ctx, rp, rq)
        results = [
            _best_over_pairs(ctx, Gp, np.vstack([Qc, Sq])),
            _best_over_pairs(ctx, np.vstack([Pc, Sp]), Gq),
            _best_over_pairs(ctx, Sp, Sq[: max(1, len(Sq) // 4)]),
        ]
    value, p, q = max(results, key=lambda r: r[0])
    if p is None:
        raise ParameterError("oracle found no feasible points")
    p, q = _freeze(p), _freeze(q)
    return OptimumWitness(float(psi(ctx, p.probs, q.probs)), p, q, Method.ORACLE, True)
