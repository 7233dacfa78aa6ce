from fractions import Fraction

import numpy as np
import pytest
from oracles import reduced_form_direct, reduced_form_grid

from bkhash.classic import rate_bound_from_M
from bkhash.cluster import (
    CROSS_FACTOR_NOTE,
    ClusterMatrix,
    cluster_rate_bound,
    compute_cluster_matrix,
    epsilon_sweep,
    maximize_reduced_form,
    psi_max_bound,
    reduced_form_value,
    resolve_parameters,
)
from bkhash.optimize import SearchConfig
from bkhash.reference import CLUSTER_MATRICES, CLUSTER_SETTINGS, REDUCED_FORM_MAXIMA
from bkhash.simplex import ParameterError, PartitionKind

MAX, MIN = PartitionKind.MAX, PartitionKind.MIN
FAST = SearchConfig(restarts=48, max_iterations=600)


def _random_matrices(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        m = rng.uniform(0, 1, 4)
        if rng.random() < 0.3:
            m[2] = m[3] * rng.uniform(0, 1)  # unbalanced diagonal below off-diagonal
        yield tuple(m), int(rng.integers(2, 12))


class TestReducedForm:
    @pytest.mark.parametrize("m,b", list(_random_matrices(60, 7)))
    def test_matches_grid_oracle(self, m, b):
        res = maximize_reduced_form(m, b)
        assert res.M == pytest.approx(reduced_form_grid(m, b), abs=1e-8)

    @pytest.mark.parametrize("m,b", list(_random_matrices(30, 11)))
    def test_value_at_reported_masses(self, m, b):
        res = maximize_reduced_form(m, b)
        assert res.eta.min() >= 0 and res.eta.sum() == pytest.approx(1.0, abs=1e-14)
        assert res.M == pytest.approx(reduced_form_direct(m, res.eta), abs=1e-12)
        assert res.M == pytest.approx(reduced_form_value(m, res.eta), abs=1e-12)

    @pytest.mark.parametrize("m,b", list(_random_matrices(30, 13)))
    def test_bracketed_by_entries(self, m, b):
        M = maximize_reduced_form(m, b).M
        m1, m2, m3, m4 = m
        assert max(m1, m3) - 1e-15 <= M <= max(m) + 1e-15
        if b >= 2:
            assert M >= (m3 + m4) / 2 - 1e-15

    def test_random_masses_never_beat_maximum(self):
        rng = np.random.default_rng(3)
        for m, b in _random_matrices(20, 17):
            M = maximize_reduced_form(m, b).M
            etas = rng.dirichlet(np.ones(b + 1) * 0.4, 300)
            assert max(reduced_form_value(m, e) for e in etas) <= M + 1e-12

    def test_constant_kernel(self):
        for c in (0.0, 0.25, 1.7):
            assert maximize_reduced_form((c, c, c, c), 6).M == pytest.approx(c, abs=1e-15)

    def test_66_is_exact_at_uniform_cluster(self):
        res = maximize_reduced_form(CLUSTER_MATRICES[(6, 6)], 6)
        assert res.eta0 == 1.0 and res.support_pattern == (True, 0)
        assert res.M == pytest.approx(5 / 27, rel=1e-5)
        assert Fraction(1) / (2 / Fraction(5, 27) + 1) == Fraction(5, 59)

    @pytest.mark.parametrize("key", sorted(CLUSTER_SETTINGS))
    def test_cross_factor_one_is_smaller(self, key):
        m, b = CLUSTER_MATRICES[key], key[0]
        assert maximize_reduced_form(m, b, cross_factor=1).M <= maximize_reduced_form(m, b).M + 1e-15

    @pytest.mark.parametrize("key", [(7, 7), (8, 8), (9, 8), (10, 9), (11, 10)])
    def test_max_based_rows_from_printed_matrices(self, key):
        # entries rounded to 1e-6 move the maximum by at most about that much
        M = maximize_reduced_form(CLUSTER_MATRICES[key], key[0]).M
        assert M == pytest.approx(REDUCED_FORM_MAXIMA[key], abs=1.5e-6)

    def test_rejections(self):
        with pytest.raises(ParameterError):
            maximize_reduced_form((0.1, 0.2, 0.3, 0.4))
        with pytest.raises(ParameterError):
            maximize_reduced_form((0.1, -0.2, 0.3, 0.4), 5)


class TestParameters:
    def test_defaults(self):
        eps, j = resolve_parameters(MAX, 7, 7, None, None)
        assert eps == 9 / 100 and j == 5

    @pytest.mark.parametrize("b,k,eps,j", [(7, 7, None, 1), (7, 7, None, 6), (12, 9, None, None), (6, 3, 0.1, None)])
    def test_rejects(self, b, k, eps, j):
        with pytest.raises(ParameterError):
            resolve_parameters(MAX, b, k, eps, j)

    def test_relaxation_only_for_min(self):
        with pytest.raises(ParameterError):
            compute_cluster_matrix(MAX, 7, 5, 0.09, FAST, relax_same_cell=True)


class TestClusterBound:
    def test_66_report(self):
        rep = cluster_rate_bound(6, 6, MIN, cfg=FAST)
        assert rep.value == pytest.approx(5 / 59, abs=1e-12)
        assert rep.intermediates["eta0"] == 1.0
        assert rep.intermediates["active_unbalanced_cells"] == 0
        assert CROSS_FACTOR_NOTE in rep.notes
        assert rep.params.epsilon == 1 / 20 and rep.params.j == 4
        assert len(rep.intermediates["witnesses"]) == 4

    def test_77_matrix_and_rate(self):
        cm = compute_cluster_matrix(MAX, 7, 5, 9 / 100, FAST)
        assert isinstance(cm, ClusterMatrix)
        assert np.allclose(cm.values, CLUSTER_MATRICES[(7, 7)], atol=1e-6)
        rep = cluster_rate_bound(7, 7, MAX, cfg=FAST)
        assert rep.value == pytest.approx(rate_bound_from_M(7, 7, 5, rep.intermediates["M"]).value, rel=1e-15)
        assert rep.intermediates["M_cross_factor_1"] <= rep.intermediates["M"]

    def test_relaxed_same_cell_is_not_smaller(self):
        closed = compute_cluster_matrix(MIN, 6, 4, 1 / 20, FAST)
        relaxed = compute_cluster_matrix(MIN, 6, 4, 1 / 20, FAST, relax_same_cell=True)
        assert relaxed.m3 >= closed.m3 - 1e-12
        assert relaxed.relaxed and relaxed.as_dict()["relaxed_same_cell"]

    def test_not_above_psimax_bound(self):
        for b, k, kind in [(6, 6, MIN), (7, 7, MAX)]:
            assert cluster_rate_bound(b, k, kind, cfg=FAST).value <= psi_max_bound(b, k, cfg=FAST).value + 1e-6


class TestSweep:
    def test_empty_grid(self):
        res = epsilon_sweep(7, 7, MAX, None, [], FAST)
        assert res.reports == [] and res.best is None

    def test_inadmissible_epsilon(self):
        with pytest.raises(ParameterError):
            epsilon_sweep(6, 6, MIN, None, [0.05, 0.2], FAST)

    def test_best_is_minimum(self):
        res = epsilon_sweep(7, 7, MAX, None, [0.07, 0.09, 0.11], FAST)
        assert [r.params.epsilon for r in res.reports] == [0.07, 0.09, 0.11]
        assert res.best.value == min(r.value for r in res.reports)
