"""Published reference values used for comparison output and checks.

All table entries are five-decimal values that were rounded upward.
Columns: ``psimax`` (bound from the global maximum of Psi with j = k-2),
``dvj`` (the generalized DVJ bound), ``arikan`` and ``gr``
(Arikan; Guruswami-Riazanov; never recomputed), ``km`` (Korner-Marton, with
its minimizing j) and ``cluster`` (the clustered quadratic-form bound).
"""

from __future__ import annotations

import math

from .simplex import PartitionKind

RECOMPUTED = ("psimax", "dvj", "km", "cluster")
REFERENCE_ONLY = ("arikan", "gr")

TABLE_I: dict[tuple[int, int], dict] = {
    (5, 4): dict(psimax=0.66126, dvj=0.57303, arikan=0.61142, gr=0.74834, km=(0.73697, 0)),
    (6, 4): dict(psimax=0.87963, dvj=0.77709, arikan=0.83904, gr=1.09604, km=(1.00000, 0)),
    (7, 4): dict(psimax=1.03711, dvj=0.94372, arikan=1.02931, gr=1.40593, km=(1.22239, 0)),
    (5, 5): dict(psimax=0.16964, dvj=0.25050, arikan=0.23560, gr=0.19079, km=(0.19200, 3)),
    (6, 5): dict(psimax=0.34597, dvj=0.45728, arikan=0.44149, gr=0.43207, km=(0.44027, 3)),
    (6, 6): dict(psimax=0.08760, dvj=0.21170, arikan=0.15484, gr=0.09228, km=(0.09260, 4)),
    (7, 6): dict(psimax=0.19897, dvj=0.38873, arikan=0.30554, gr=0.23524, km=(0.23765, 4)),
    (8, 6): dict(psimax=0.31799, dvj=0.53847, arikan=0.44888, gr=0.40330, km=(0.41016, 4)),
    (7, 7): dict(psimax=0.04379, dvj=0.18417, arikan=0.09747, gr=0.04279, km=(0.04284, 5)),
    (8, 7): dict(psimax=0.10865, dvj=0.34034, arikan=0.20340, gr=0.12134, km=(0.12189, 5)),
    (9, 7): dict(psimax=0.19054, dvj=0.47461, arikan=0.31204, gr=0.22547, km=(0.22761, 5)),
    (8, 8): dict(psimax=0.02077, dvj=0.16323, arikan=0.05769, gr=0.01922, km=(0.01923, 6)),
    (9, 8): dict(psimax=0.05686, dvj=0.30348, arikan=0.12874, gr=0.06001, km=(0.06013, 6)),
    (10, 8): dict(psimax=0.10791, dvj=0.42566, arikan=0.20754, gr=0.12048, km=(0.12096, 6)),
    (10, 9): dict(psimax=0.02889, dvj=0.27417, arikan=0.07668, gr=0.02874, km=(0.02876, 7)),
    (11, 10): dict(psimax=0.01407, dvj=0.25018, arikan=0.04289, gr=0.01342, km=(0.01343, 8)),
}

TABLE_II: dict[tuple[int, int], dict] = {
    (5, 5): dict(cluster=0.16894, psimax=0.16964, dvj=0.25050, arikan=0.23560, gr=0.19079),
    (6, 5): dict(cluster=0.34512, psimax=0.34597, dvj=0.45728, arikan=0.44149, gr=0.43207),
    (6, 6): dict(cluster=0.08475, psimax=0.08760, dvj=0.21170, arikan=0.15484, gr=0.09228),
    (7, 7): dict(cluster=0.04090, psimax=0.04379, dvj=0.18417, arikan=0.09747, gr=0.04279),
    (8, 8): dict(cluster=0.01889, psimax=0.02077, dvj=0.16323, arikan=0.05769, gr=0.01922),
    (9, 8): dict(cluster=0.05616, psimax=0.05686, dvj=0.30348, arikan=0.12874, gr=0.06001),
    (10, 9): dict(cluster=0.02773, psimax=0.02889, dvj=0.27417, arikan=0.07668, gr=0.02874),
    (11, 10): dict(cluster=0.01321, psimax=0.01407, dvj=0.25018, arikan=0.04289, gr=0.01342),
}

# partition kind, epsilon and j behind each cluster entry
CLUSTER_SETTINGS: dict[tuple[int, int], tuple[PartitionKind, float, int]] = {
    (5, 5): (PartitionKind.MIN, (4 + math.sqrt(5)) / 44, 3),
    (6, 5): (PartitionKind.MIN, 1 / 10, 3),
    (6, 6): (PartitionKind.MIN, 1 / 20, 4),
    (7, 7): (PartitionKind.MAX, 9 / 100, 5),
    (8, 8): (PartitionKind.MAX, 3 / 25, 6),
    (9, 8): (PartitionKind.MAX, 1 / 10, 6),
    (10, 9): (PartitionKind.MAX, 1 / 15, 7),
    (11, 10): (PartitionKind.MAX, 1 / 11, 8),
}

# printed cluster suprema (M1, M2, M3, M4); M3 of the min-based rows are upper bounds
CLUSTER_MATRICES: dict[tuple[int, int], tuple[float, float, float, float]] = {
    (7, 7): (0.085679, 0.092593, 0.000006, 0.000107),
    (8, 8): (0.038453, 0.042840, 0.000002, 0.000022),
    (9, 8): (0.075870, 0.076905, 0.000001, 0.000015),
    (10, 9): (0.036289, 0.037935, 3.4e-9, 8.5e-8),
    (11, 10): (0.016928, 0.018144, 1.4e-9, 2.7e-8),
    (5, 5): (0.384033, 0.389226, 0.374759, 0.389226),
    (6, 5): (0.555625, 0.558467, 0.535106, 0.558467),
    (6, 6): (0.185185, 0.178857, 0.140664, 0.192000),
}

REDUCED_FORM_MAXIMA: dict[tuple[int, int], float] = {
    (7, 7): 0.0861594,
    (8, 8): 0.0388599,
    (9, 8): 0.0758830,
    (10, 9): 0.0363565,
    (11, 10): 0.0170049,
    (5, 5): 0.3873676,
    (6, 5): 0.5567010,
    (6, 6): 5 / 27,
}

RATE_BOUNDS: dict[tuple[int, int], float] = {
    (7, 7): 0.0408975,
    (8, 8): 0.0188887,
    (9, 8): 0.0561537,
    (10, 9): 0.0277279,
    (11, 10): 0.0132033,
    (5, 5): 0.1689325,
    (6, 5): 0.3451130,
    (6, 6): 5 / 59,
}


def max_based_attaining_points(b: int, eps: float) -> dict[str, tuple[list[float], list[float]]]:
    """Published maximisers (p, q) of the four max-based cluster suprema."""
    u = [1 / b] * b
    e1 = [1.0] + [0.0] * (b - 1)
    spread = [0.0] + [1 / (b - 1)] * (b - 1)
    near = [1 - eps] + [eps / (b - 1)] * (b - 1)
    left = [1 - eps] + [eps / (b - 2)] * (b - 2) + [0.0]
    right = [0.0] + [eps / (b - 2)] * (b - 2) + [1 - eps]
    return {"M1": (u, u), "M2": (e1, spread), "M3": (near, near), "M4": (left, right)}
