"""Closed-form upper bounds on the rate of perfect (b, k)-hash codes.

Every value is in bits. Falling factorials are formed as exact integers
before the single conversion to float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .simplex import ParameterError


@dataclass(frozen=True)
class BoundParams:
    b: int
    k: int
    j: int | None = None
    epsilon: float | None = None

    def __post_init__(self):
        check_bk(self.b, self.k)


@dataclass
class BoundReport:
    method: str
    value: float
    params: BoundParams
    intermediates: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[str, Any]:
        return {
            "method": self.method,
            "value": self.value,
            "b": self.params.b,
            "k": self.params.k,
            "j": self.params.j,
            "epsilon": self.params.epsilon,
            "intermediates": self.intermediates,
            "notes": list(self.notes),
        }


def check_bk(b: int, k: int, k_min: int = 3) -> None:
    if k < k_min:
        raise ParameterError(f"k must be >= {k_min}, got k={k}")
    if b < k:
        raise ParameterError(f"need b >= k, got b={b}, k={k}")


def falling(b: int, m: int) -> int:
    """b (b-1) ... (b-m+1)."""
    return math.perm(b, m)


def fk_bound(b: int, k: int) -> BoundReport:
    check_bk(b, k)
    value = falling(b, k - 1) / b ** (k - 1) * math.log2(b - k + 2)
    return BoundReport("fk", value, BoundParams(b, k))


def km_term(b: int, k: int, j: int) -> float:
    return falling(b, j + 1) / b ** (j + 1) * math.log2((b - j) / (k - j - 1))


def km_bound(b: int, k: int, j_range: tuple[int, int] | None = None) -> BoundReport:
    """Minimum over j of the falling-factorial terms; j defaults to 0..k-2."""
    check_bk(b, k)
    lo, hi = j_range if j_range is not None else (0, k - 2)
    lo, hi = max(lo, 0), min(hi, k - 2)
    if lo > hi:
        raise ParameterError(f"empty admissible j range for (b,k)=({b},{k})")
    terms = {j: km_term(b, k, j) for j in range(lo, hi + 1)}
    j_best = min(terms, key=lambda j: (terms[j], j))
    return BoundReport(
        "km", terms[j_best], BoundParams(b, k, j_best), {"argmin_j": j_best, "terms": terms}
    )


def dvj_bound(b: int, k: int) -> BoundReport:
    check_bk(b, k, k_min=4)
    value = 1.0 / (1.0 / math.log2(b) + b * b / ((b * b - 3 * b + 2) * math.log2((b - 2) / (k - 3))))
    return BoundReport("dvj", value, BoundParams(b, k, 2))


def dvj_side_margin(b: int, k: int) -> float:
    """DVJ value minus log((2b-2)/(2b-3)); must be positive for the bound to apply."""
    return dvj_bound(b, k).value - math.log2((2 * b - 2) / (2 * b - 3))


def _prefix_term(b: int, j: int) -> float:
    return 1.0 / math.log2(b / (j - 1))


def conjecture_term(b: int, k: int, j: int) -> float:
    inv = _prefix_term(b, j) + b ** (j + 1) / (falling(b, j + 1) * math.log2((b - j) / (k - j - 1)))
    return 1.0 / inv


def conjecture_bound(b: int, k: int) -> BoundReport:
    """Conjectured bound; not a theorem."""
    check_bk(b, k, k_min=4)
    terms = {j: conjecture_term(b, k, j) for j in range(2, k - 1)}
    j_best = min(terms, key=lambda j: (terms[j], j))
    return BoundReport(
        "conjecture",
        terms[j_best],
        BoundParams(b, k, j_best),
        {"argmin_j": j_best, "terms": terms},
        ["CONJECTURE: this value is not a proven bound"],
    )


def rate_bound_from_M(b: int, k: int, j: int, M: float, method: str = "rate-from-M") -> BoundReport:
    """Rate bound from a bound M on the symmetrised quadratic form."""
    check_bk(b, k)
    if not 2 <= j <= k - 2:
        raise ParameterError(f"j must lie in [2, k-2] = [2, {k - 2}], got {j}")
    if not M > 0:
        raise ParameterError(f"M must be positive, got {M}")
    value = 1.0 / (2.0 / (M * math.log2((b - j) / (k - j - 1))) + _prefix_term(b, j))
    return BoundReport(method, value, BoundParams(b, k, j), {"M": M})
